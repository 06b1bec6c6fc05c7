#pragma once

#include "paarc/policy/expr.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace paarc::policy {

enum class RuleEffect { permit, deny };
enum class Effect { permit, deny, not_applicable, indeterminate };
enum class CombiningAlg { deny_overrides, permit_overrides, first_applicable };

std::string_view to_string(RuleEffect e);
std::string_view to_string(Effect e);
std::string_view to_string(CombiningAlg a);
std::optional<CombiningAlg> combining_from_string(std::string_view s);
std::optional<Effect> effect_from_string(std::string_view s);

struct Rule {
    RuleEffect effect = RuleEffect::permit;
    /// nullopt is `otherwise`.
    std::optional<Expr> condition;
    std::vector<std::string> obligations;

    bool is_otherwise() const noexcept { return !condition.has_value(); }
    bool operator==(const Rule&) const = default;
};

struct Policy {
    std::string id;
    std::optional<Expr> target;
    CombiningAlg combining = CombiningAlg::deny_overrides;
    std::vector<Rule> rules;

    bool operator==(const Policy&) const = default;
};

/// Returns an empty string when `p` satisfies the Policy invariants, or a
/// description of the first violation.
std::string check_invariants(const Policy& p);

struct RuleRef {
    std::string policy_id;
    std::size_t rule_index = 0;
    auto operator<=>(const RuleRef&) const = default;
};

struct Decision {
    Effect effect = Effect::not_applicable;
    std::vector<std::string> obligations;
    std::vector<RuleRef> matched;
    std::vector<AttrPath> missing;
    /// Human-readable notes, e.g. the text of a type mismatch.
    std::vector<std::string> diagnostics;

    static Decision not_applicable() { return {}; }
    static Decision indeterminate(AttrPath p, std::string diagnostic = {});

    bool operator==(const Decision&) const = default;
};

/// True when the Decision invariants hold: missing non-empty iff
/// Indeterminate, obligations only on Permit/Deny.
bool well_formed(const Decision& d);

/// Folds `ds` in order. Obligations and matched entries of every decision
/// carrying the winning effect are concatenated; Indeterminate merges the
/// missing lists keeping first occurrence order.
Decision combine_decisions(std::span<const Decision> ds, CombiningAlg alg);

Decision evaluate_rule(const Policy& p, std::size_t index, const RequestContext& ctx);
Decision evaluate_policy(const Policy& p, const RequestContext& ctx);

}  // namespace paarc::policy
