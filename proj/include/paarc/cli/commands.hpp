#pragma once

#include "paarc/policy/policy.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace paarc::cli {

enum ExitStatus : int { kOk = 0, kInputError = 1, kIoError = 2, kInternalError = 3 };

int cmd_run(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& policies,
            const std::filesystem::path& out, bool json, std::ostream& os, std::ostream& err);

int cmd_policy_check(const std::filesystem::path& policies, bool json, std::ostream& os, std::ostream& err);

int cmd_eval(const std::filesystem::path& request, const std::filesystem::path& policies, std::ostream& os,
             std::ostream& err);

struct AuditQuery {
    std::optional<std::string> request_id;
    std::optional<std::string> effect;
    std::optional<std::string> domain;
    std::optional<std::string> actor;
    std::optional<std::string> action;
    std::optional<std::int64_t> tick_from;
    std::optional<std::int64_t> tick_to;
};

int cmd_audit(const std::filesystem::path& report, const AuditQuery& q, bool json, std::ostream& os,
              std::ostream& err);

}  // namespace paarc::cli
