#pragma once

#include "paarc/policy/policy.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace paarc::policy {

/// Base for every error raised while reading a `.pol` document.
class PolicyError : public std::runtime_error {
public:
    PolicyError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    /// Message without the location prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

class ParseError : public PolicyError {
    using PolicyError::PolicyError;
};

class DuplicatePolicyId : public PolicyError {
    using PolicyError::PolicyError;
};

class MisplacedOtherwise : public PolicyError {
    using PolicyError::PolicyError;
};

/// Parses a policy set. Policies come back in source order; an omitted
/// `combining` clause means deny-overrides.
std::vector<Policy> parse_policy_set(std::string_view text);

/// Parses a single expression (used by tools and tests).
Expr parse_expr(std::string_view text);

/// Canonical DSL text. parse_policy_set(print_policy_set(ps)) == ps.
std::string print_policy_set(std::span<const Policy> policies);
std::string print_expr(const Expr& e);

}  // namespace paarc::policy
