#include "paarc/audit/audit_log.hpp"

#include <mutex>
#include <stdexcept>

namespace paarc::audit {

std::string_view to_string(Domain d) {
    switch (d) {
    case Domain::device: return "device";
    case Domain::network: return "network";
    case Domain::application: return "application";
    }
    return "?";
}

std::optional<Domain> domain_from_string(std::string_view s) {
    if (s == "device") return Domain::device;
    if (s == "network") return Domain::network;
    if (s == "application") return Domain::application;
    return std::nullopt;
}

bool AuditFilter::matches(const AuditRecord& r) const {
    if (domain && r.domain != *domain) return false;
    if (actor && r.actor != *actor) return false;
    if (action && r.action != *action) return false;
    if (effect && r.decision_effect != *effect) return false;
    if (tick_from && r.tick < *tick_from) return false;
    if (tick_to && r.tick > *tick_to) return false;
    return true;
}

AuditLog::AuditLog(std::vector<AuditRecord> records) : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (records_[i].seq != i + 1)
            throw std::invalid_argument("audit seq " + std::to_string(records_[i].seq) + " at position " +
                                        std::to_string(i + 1));
    }
}

std::uint64_t AuditLog::append(AuditRecord r) {
    std::unique_lock lock(mutex_);
    r.seq = records_.size() + 1;
    records_.push_back(std::move(r));
    return records_.back().seq;
}

std::vector<AuditRecord> AuditLog::query(const AuditFilter& filter) const {
    std::shared_lock lock(mutex_);
    std::vector<AuditRecord> out;
    for (const auto& r : records_) {
        if (filter.matches(r)) out.push_back(r);
    }
    return out;
}

std::vector<AuditRecord> AuditLog::trace_request(std::string_view request_id) const {
    std::shared_lock lock(mutex_);
    std::vector<AuditRecord> out;
    for (const auto& r : records_) {
        if (r.request_id && *r.request_id == request_id) out.push_back(r);
    }
    return out;
}

std::vector<AuditRecord> AuditLog::records() const {
    std::shared_lock lock(mutex_);
    return records_;
}

std::size_t AuditLog::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

}  // namespace paarc::audit
