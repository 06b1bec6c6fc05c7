#pragma once

#include "paarc/policy/policy.hpp"

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace paarc::audit {

enum class Domain { device, network, application };

std::string_view to_string(Domain d);
std::optional<Domain> domain_from_string(std::string_view s);

struct AuditRecord {
    std::uint64_t seq = 0;
    std::int64_t tick = 0;
    Domain domain = Domain::application;
    std::string actor;
    std::string action;
    std::optional<std::string> request_id;
    std::optional<policy::Effect> decision_effect;
    std::vector<std::string> policy_ids;
    std::string detail;

    bool operator==(const AuditRecord&) const = default;
};

struct AuditFilter {
    std::optional<Domain> domain;
    std::optional<std::string> actor;
    std::optional<std::string> action;
    std::optional<policy::Effect> effect;
    /// Inclusive bounds.
    std::optional<std::int64_t> tick_from;
    std::optional<std::int64_t> tick_to;

    bool matches(const AuditRecord& r) const;
};

/// Append-only reporting log. One writer, concurrent readers.
class AuditLog {
public:
    AuditLog() = default;
    /// Rebuilds a log from exported records; throws std::invalid_argument
    /// when seq numbers are not contiguous from 1.
    explicit AuditLog(std::vector<AuditRecord> records);

    /// Assigns seq = previous + 1 and returns it. Any seq already present on
    /// `r` is ignored.
    std::uint64_t append(AuditRecord r);

    std::vector<AuditRecord> query(const AuditFilter& filter) const;
    std::vector<AuditRecord> trace_request(std::string_view request_id) const;
    std::vector<AuditRecord> records() const;
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::vector<AuditRecord> records_;
};

}  // namespace paarc::audit
