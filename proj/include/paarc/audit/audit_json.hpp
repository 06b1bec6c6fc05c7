#pragma once

#include "paarc/audit/audit_log.hpp"

#include <json.hpp>

namespace paarc::audit {

nlohmann::ordered_json record_to_json(const AuditRecord& r);

/// Throws std::invalid_argument on a malformed record.
AuditRecord record_from_json(const nlohmann::json& j);

/// Reads the `audit` array of a run report into a log.
AuditLog log_from_report(const nlohmann::json& report);

}  // namespace paarc::audit
