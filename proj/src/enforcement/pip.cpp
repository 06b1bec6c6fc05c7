#include "paarc/enforcement/pip.hpp"

#include <mutex>

namespace paarc::enforcement {

void ServiceDataRepository::put(const std::string& table, const std::string& entity, const policy::AttrPath& path,
                                policy::AttrValue v) {
    std::unique_lock lock(mutex_);
    tables_[table][entity].insert_or_assign(path, std::move(v));
}

bool ServiceDataRepository::erase(const std::string& table, const std::string& entity, const policy::AttrPath& path) {
    std::unique_lock lock(mutex_);
    auto t = tables_.find(table);
    if (t == tables_.end()) return false;
    auto e = t->second.find(entity);
    return e != t->second.end() && e->second.erase(path) != 0;
}

std::optional<policy::AttrValue> ServiceDataRepository::get(const std::string& table, const std::string& entity,
                                                            const policy::AttrPath& path) const {
    std::shared_lock lock(mutex_);
    auto t = tables_.find(table);
    if (t == tables_.end()) return std::nullopt;
    auto e = t->second.find(entity);
    if (e == t->second.end()) return std::nullopt;
    auto v = e->second.find(path);
    if (v == e->second.end()) return std::nullopt;
    return v->second;
}

std::string entity_key(const policy::AttrPath& path, const ServiceRequest& req) {
    switch (path.category()) {
    case policy::Category::subject: return req.requester;
    case policy::Category::resource: return req.service_id;
    case policy::Category::action: return req.action;
    case policy::Category::environment: return "*";
    }
    return "*";
}

bool prefix_matches(std::string_view pattern, std::string_view dotted_path) {
    if (dotted_path.size() < pattern.size() || dotted_path.substr(0, pattern.size()) != pattern) return false;
    return dotted_path.size() == pattern.size() || dotted_path[pattern.size()] == '.';
}

void Pip::bind(AttributeSourceBinding b) {
    for (const auto& existing : bindings_) {
        if (prefix_matches(existing.pattern, b.pattern) || prefix_matches(b.pattern, existing.pattern))
            throw std::invalid_argument("binding '" + b.pattern + "' overlaps '" + existing.pattern + "'");
    }
    bindings_.push_back(std::move(b));
}

policy::AttrValue Pip::resolve(const policy::AttrPath& path, const ServiceRequest& req) const {
    const std::string dotted = path.str();
    for (const auto& b : bindings_) {
        if (!prefix_matches(b.pattern, dotted)) continue;
        std::string key = entity_key(path, req);
        if (auto v = repo_.get(b.table, key, path)) return *v;
        throw AttributeUnavailable(path, key);
    }
    throw NoBinding(path);
}

}  // namespace paarc::enforcement
