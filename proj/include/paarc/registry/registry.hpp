#pragma once

#include "paarc/common/snapshot_cell.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paarc::registry {

enum class ServiceStatus { valid, invalidated };

struct ServiceRecord {
    std::string service_id;
    std::string provider;
    std::map<std::string, std::string> properties;
    std::string process_doc;
    ServiceStatus status = ServiceStatus::valid;

    bool operator==(const ServiceRecord&) const = default;
};

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateServiceId : public RegistryError {
public:
    explicit DuplicateServiceId(const std::string& id) : RegistryError("service '" + id + "' is already published") {}
};

class UnknownServiceId : public RegistryError {
public:
    explicit UnknownServiceId(const std::string& id) : RegistryError("no valid service '" + id + "'") {}
};

using PropertyQuery = std::map<std::string, std::string>;

/// Published services keyed by id. At most one record per id is retained:
/// republishing an invalidated id supersedes the old record.
class ServiceRegistry {
public:
    using Table = std::map<std::string, ServiceRecord>;

    void publish(ServiceRecord rec);

    /// Valid records matching `id` (when given) and every query pair,
    /// ordered by service_id.
    std::vector<ServiceRecord> find(const PropertyQuery& query, const std::optional<std::string>& id = {}) const;

    void invalidate(const std::string& service_id);

    std::shared_ptr<const Table> snapshot() const { return table_.load(); }

private:
    SnapshotCell<Table> table_;
};

}  // namespace paarc::registry
