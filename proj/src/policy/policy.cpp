#include "paarc/policy/policy.hpp"

#include <algorithm>

namespace paarc::policy {

std::string_view to_string(RuleEffect e) {
    return e == RuleEffect::permit ? "permit" : "deny";
}

std::string_view to_string(Effect e) {
    switch (e) {
    case Effect::permit: return "Permit";
    case Effect::deny: return "Deny";
    case Effect::not_applicable: return "NotApplicable";
    case Effect::indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string_view to_string(CombiningAlg a) {
    switch (a) {
    case CombiningAlg::deny_overrides: return "deny-overrides";
    case CombiningAlg::permit_overrides: return "permit-overrides";
    case CombiningAlg::first_applicable: return "first-applicable";
    }
    return "?";
}

std::optional<CombiningAlg> combining_from_string(std::string_view s) {
    if (s == "deny-overrides") return CombiningAlg::deny_overrides;
    if (s == "permit-overrides") return CombiningAlg::permit_overrides;
    if (s == "first-applicable") return CombiningAlg::first_applicable;
    return std::nullopt;
}

std::optional<Effect> effect_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "permit") return Effect::permit;
    if (lower == "deny") return Effect::deny;
    if (lower == "notapplicable" || lower == "not-applicable") return Effect::not_applicable;
    if (lower == "indeterminate") return Effect::indeterminate;
    return std::nullopt;
}

std::string check_invariants(const Policy& p) {
    if (p.id.empty()) return "policy id is empty";
    if (p.rules.empty()) return "policy '" + p.id + "' has no rules";
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        if (p.rules[i].is_otherwise() && i + 1 != p.rules.size())
            return "policy '" + p.id + "': otherwise rule must be last";
    }
    return {};
}

Decision Decision::indeterminate(AttrPath p, std::string diagnostic) {
    Decision d;
    d.effect = Effect::indeterminate;
    d.missing.push_back(std::move(p));
    if (!diagnostic.empty()) d.diagnostics.push_back(std::move(diagnostic));
    return d;
}

bool well_formed(const Decision& d) {
    if (d.missing.empty() == (d.effect == Effect::indeterminate)) return false;
    if (!d.obligations.empty() && d.effect != Effect::permit && d.effect != Effect::deny) return false;
    return true;
}

namespace {

void merge_missing(Decision& into, const Decision& from) {
    for (const auto& p : from.missing) {
        if (std::find(into.missing.begin(), into.missing.end(), p) == into.missing.end())
            into.missing.push_back(p);
    }
    into.diagnostics.insert(into.diagnostics.end(), from.diagnostics.begin(), from.diagnostics.end());
}

Decision gather(std::span<const Decision> ds, Effect winner) {
    Decision out;
    out.effect = winner;
    for (const auto& d : ds) {
        if (d.effect != winner) continue;
        if (winner == Effect::indeterminate) {
            merge_missing(out, d);
        } else {
            out.obligations.insert(out.obligations.end(), d.obligations.begin(), d.obligations.end());
            out.matched.insert(out.matched.end(), d.matched.begin(), d.matched.end());
        }
    }
    return out;
}

bool has(std::span<const Decision> ds, Effect e) {
    return std::any_of(ds.begin(), ds.end(), [e](const Decision& d) { return d.effect == e; });
}

}  // namespace

Decision combine_decisions(std::span<const Decision> ds, CombiningAlg alg) {
    switch (alg) {
    case CombiningAlg::deny_overrides:
    case CombiningAlg::permit_overrides: {
        Effect dominant = alg == CombiningAlg::deny_overrides ? Effect::deny : Effect::permit;
        Effect other = alg == CombiningAlg::deny_overrides ? Effect::permit : Effect::deny;
        for (Effect e : {dominant, Effect::indeterminate, other}) {
            if (has(ds, e)) return gather(ds, e);
        }
        return Decision::not_applicable();
    }
    case CombiningAlg::first_applicable:
        for (const auto& d : ds) {
            if (d.effect != Effect::not_applicable) return d;
        }
        return Decision::not_applicable();
    }
    return Decision::not_applicable();
}

Decision evaluate_rule(const Policy& p, std::size_t index, const RequestContext& ctx) {
    const Rule& r = p.rules.at(index);
    if (r.condition) {
        try {
            Truth t = evaluate(*r.condition, ctx);
            if (t.is_missing()) return Decision::indeterminate(t.missing_path());
            if (t.is_false()) return Decision::not_applicable();
        } catch (const TypeMismatch& e) {
            return Decision::indeterminate(e.path(), p.id + "#" + std::to_string(index) + ": " + e.what());
        }
    }
    Decision d;
    d.effect = r.effect == RuleEffect::permit ? Effect::permit : Effect::deny;
    d.obligations = r.obligations;
    d.matched.push_back({p.id, index});
    return d;
}

Decision evaluate_policy(const Policy& p, const RequestContext& ctx) {
    if (p.target) {
        try {
            Truth t = evaluate(*p.target, ctx);
            if (t.is_missing()) return Decision::indeterminate(t.missing_path());
            if (t.is_false()) return Decision::not_applicable();
        } catch (const TypeMismatch& e) {
            return Decision::indeterminate(e.path(), p.id + " target: " + e.what());
        }
    }
    std::vector<Decision> per_rule;
    per_rule.reserve(p.rules.size());
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        per_rule.push_back(evaluate_rule(p, i, ctx));
        if (p.combining == CombiningAlg::first_applicable && per_rule.back().effect != Effect::not_applicable)
            break;
    }
    return combine_decisions(per_rule, p.combining);
}

}  // namespace paarc::policy
