#include "paarc/registry/registry.hpp"

namespace paarc::registry {

void ServiceRegistry::publish(ServiceRecord rec) {
    if (rec.status != ServiceStatus::valid)
        throw RegistryError("cannot publish an invalidated record for '" + rec.service_id + "'");
    table_.update([&](const Table& cur) {
        auto it = cur.find(rec.service_id);
        if (it != cur.end() && it->second.status == ServiceStatus::valid) throw DuplicateServiceId(rec.service_id);
        Table next = cur;
        next.insert_or_assign(rec.service_id, rec);
        return next;
    });
}

std::vector<ServiceRecord> ServiceRegistry::find(const PropertyQuery& query, const std::optional<std::string>& id) const {
    auto table = table_.load();
    std::vector<ServiceRecord> out;
    auto consider = [&](const ServiceRecord& r) {
        if (r.status != ServiceStatus::valid) return;
        for (const auto& [k, v] : query) {
            auto it = r.properties.find(k);
            if (it == r.properties.end() || it->second != v) return;
        }
        out.push_back(r);
    };
    if (id) {
        if (auto it = table->find(*id); it != table->end()) consider(it->second);
    } else {
        for (const auto& [_, r] : *table) consider(r);
    }
    return out;
}

void ServiceRegistry::invalidate(const std::string& service_id) {
    table_.update([&](const Table& cur) {
        auto it = cur.find(service_id);
        if (it == cur.end() || it->second.status != ServiceStatus::valid) throw UnknownServiceId(service_id);
        Table next = cur;
        next[service_id].status = ServiceStatus::invalidated;
        return next;
    });
}

}  // namespace paarc::registry
