#pragma once

#include "paarc/enforcement/request.hpp"

#include <map>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace paarc::enforcement {

class NoBinding : public std::runtime_error {
public:
    explicit NoBinding(const policy::AttrPath& p) : std::runtime_error("no attribute source bound for " + p.str()) {}
};

class AttributeUnavailable : public std::runtime_error {
public:
    AttributeUnavailable(const policy::AttrPath& p, const std::string& key)
        : std::runtime_error("attribute " + p.str() + " unavailable for '" + key + "'") {}
};

/// Anything the PDP can ask for a missing attribute.
class AttributeSource {
public:
    virtual ~AttributeSource() = default;
    /// Throws NoBinding or AttributeUnavailable.
    virtual policy::AttrValue resolve(const policy::AttrPath& path, const ServiceRequest& req) const = 0;
};

/// Service-data repository: named tables of entity -> attribute values.
/// The entity key used for a lookup depends on the path category: the
/// requester for subject, the service id for resource, the action for
/// action, and `*` for environment.
class ServiceDataRepository {
public:
    void put(const std::string& table, const std::string& entity, const policy::AttrPath& path, policy::AttrValue v);
    bool erase(const std::string& table, const std::string& entity, const policy::AttrPath& path);
    std::optional<policy::AttrValue> get(const std::string& table, const std::string& entity,
                                         const policy::AttrPath& path) const;

private:
    using Entity = std::map<policy::AttrPath, policy::AttrValue>;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::map<std::string, Entity>> tables_;
};

std::string entity_key(const policy::AttrPath& path, const ServiceRequest& req);

/// Binds a dotted path prefix (`subject`, `subject.cert`, ...) to a table.
/// Matching is per segment: `subject.cert` covers `subject.cert.status` but
/// not `subject.certainty`.
struct AttributeSourceBinding {
    std::string pattern;
    std::string table;
};

bool prefix_matches(std::string_view pattern, std::string_view dotted_path);

class Pip final : public AttributeSource {
public:
    explicit Pip(const ServiceDataRepository& repo) : repo_(repo) {}

    /// Throws std::invalid_argument when `b` overlaps an existing binding.
    void bind(AttributeSourceBinding b);
    const std::vector<AttributeSourceBinding>& bindings() const noexcept { return bindings_; }

    policy::AttrValue resolve(const policy::AttrPath& path, const ServiceRequest& req) const override;

private:
    const ServiceDataRepository& repo_;
    std::vector<AttributeSourceBinding> bindings_;
};

}  // namespace paarc::enforcement
