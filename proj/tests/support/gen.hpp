#pragma once
// Random and exhaustive input generators shared by unit and acceptance tests.

#include "paarc/policy/policy.hpp"
#include "paarc/sim/fleet.hpp"
#include "paarc/sim/route_graph.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace paarc::policy;
using Rng = std::mt19937_64;

inline const AttrPath kRole = AttrPath::parse("subject.role");
inline const AttrPath kEnrolled = AttrPath::parse("subject.enrolled");
inline const AttrPath kTick = AttrPath::parse("environment.tick");
inline const AttrPath kAction = AttrPath::parse("action.name");

inline std::int64_t pick(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Every context over the four attributes, each absent or one of two values: 81 in all.
inline std::vector<RequestContext> all_contexts() {
    const std::vector<std::optional<AttrValue>> roles{std::nullopt, std::string("av"), std::string("cu")};
    const std::vector<std::optional<AttrValue>> enrolled{std::nullopt, true, false};
    const std::vector<std::optional<AttrValue>> ticks{std::nullopt, std::int64_t{10}, std::int64_t{100}};
    const std::vector<std::optional<AttrValue>> actions{std::nullopt, std::string("enroll"), std::string("telemetry")};
    std::vector<RequestContext> out;
    for (const auto& a : roles)
        for (const auto& b : enrolled)
            for (const auto& c : ticks)
                for (const auto& d : actions) {
                    RequestContext ctx;
                    if (a) ctx.set(kRole, *a);
                    if (b) ctx.set(kEnrolled, *b);
                    if (c) ctx.set(kTick, *c);
                    if (d) ctx.set(kAction, *d);
                    out.push_back(std::move(ctx));
                }
    return out;
}

// Fixed condition palette over the four attributes. The last entry compares
// a string attribute with an integer and so raises a type mismatch when bound.
inline std::vector<Expr> condition_palette() {
    auto role_av = Expr::compare(CompareOp::eq, kRole, std::string("av"));
    auto enrolled = Expr::compare(CompareOp::eq, kEnrolled, true);
    auto early = Expr::compare(CompareOp::lt, kTick, std::int64_t{50});
    auto late = Expr::compare(CompareOp::ge, kTick, std::int64_t{50});
    auto telemetry = Expr::compare(CompareOp::eq, kAction, std::string("telemetry"));
    return {
        role_av,
        enrolled,
        early,
        Expr::negate(telemetry),
        Expr::any(role_av, Expr::compare(CompareOp::eq, kEnrolled, false)),
        Expr::all(role_av, late),
        Expr::compare(CompareOp::eq, kRole, std::int64_t{1}),
    };
}

inline std::vector<std::optional<Expr>> target_palette() {
    return {std::nullopt, Expr::present(kRole), Expr::compare(CompareOp::eq, kAction, std::string("enroll"))};
}

inline Rule make_rule(RuleEffect eff, std::optional<Expr> cond, std::size_t tag) {
    Rule r{eff, std::move(cond), {}};
    if (tag % 2 == 0) r.obligations.push_back("ob-" + std::to_string(tag));
    return r;
}

// Every policy with 1..3 rules drawn from the palette, every target and
// every combining algorithm. `otherwise` may only close the rule list.
inline std::vector<Policy> policy_universe(const std::string& id = "p") {
    const auto conds = condition_palette();
    const auto targets = target_palette();
    std::vector<Rule> inner, last;
    for (auto eff : {RuleEffect::permit, RuleEffect::deny}) {
        for (std::size_t c = 0; c < conds.size(); ++c) {
            inner.push_back(make_rule(eff, conds[c], c));
            last.push_back(make_rule(eff, conds[c], c));
        }
        last.push_back(make_rule(eff, std::nullopt, 100));
    }
    std::vector<std::vector<Rule>> lists;
    for (const auto& r : last) lists.push_back({r});
    for (const auto& a : inner)
        for (const auto& r : last) lists.push_back({a, r});
    for (const auto& a : inner)
        for (const auto& b : inner)
            for (const auto& r : last) lists.push_back({a, b, r});
    std::vector<Policy> out;
    for (const auto& t : targets)
        for (auto alg : {CombiningAlg::deny_overrides, CombiningAlg::permit_overrides, CombiningAlg::first_applicable})
            for (const auto& rules : lists) out.push_back(Policy{id, t, alg, rules});
    return out;
}

inline Expr random_leaf(Rng& rng) {
    switch (pick(rng, 0, 6)) {
    case 0: return Expr::compare(pick(rng, 0, 1) ? CompareOp::eq : CompareOp::ne, kRole, std::string(pick(rng, 0, 1) ? "av" : "cu"));
    case 1: return Expr::compare(pick(rng, 0, 1) ? CompareOp::eq : CompareOp::ne, kEnrolled, pick(rng, 0, 1) == 1);
    case 2: return Expr::compare(static_cast<CompareOp>(pick(rng, 0, 5)), kTick, std::int64_t{pick(rng, 0, 120)});
    case 3: return Expr::compare(CompareOp::eq, kAction, std::string(pick(rng, 0, 1) ? "enroll" : "telemetry"));
    case 4: return Expr::present(std::vector<AttrPath>{kRole, kEnrolled, kTick, kAction}[pick(rng, 0, 3)]);
    case 5: return Expr::compare(static_cast<CompareOp>(pick(rng, 0, 5)), AttrPath::parse("environment.at"),
                                 Timestamp{pick(rng, 0, 120)});
    default: return Expr::compare(CompareOp::eq, AttrPath::parse("resource.kind"), std::string("fleet"));
    }
}

inline Expr random_expr(Rng& rng, int depth) {
    if (depth <= 0 || pick(rng, 0, 2) == 0) return random_leaf(rng);
    switch (pick(rng, 0, 2)) {
    case 0: return Expr::all(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 1: return Expr::any(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default: return Expr::negate(random_expr(rng, depth - 1));
    }
}

inline Policy random_policy(Rng& rng, const std::string& id, std::size_t max_rules = 4) {
    Policy p;
    p.id = id;
    if (pick(rng, 0, 2) == 0) p.target = random_expr(rng, 1);
    p.combining = static_cast<CombiningAlg>(pick(rng, 0, 2));
    auto n = static_cast<std::size_t>(pick(rng, 1, static_cast<std::int64_t>(max_rules)));
    for (std::size_t i = 0; i < n; ++i) {
        Rule r;
        r.effect = pick(rng, 0, 1) ? RuleEffect::permit : RuleEffect::deny;
        bool otherwise = i + 1 == n && pick(rng, 0, 3) == 0;
        if (!otherwise) r.condition = random_expr(rng, 3);
        for (auto k = pick(rng, 0, 2); k > 0; --k) r.obligations.push_back("ob-" + std::to_string(pick(rng, 0, 9)));
        p.rules.push_back(std::move(r));
    }
    return p;
}

inline std::vector<Policy> random_policy_set(Rng& rng, std::size_t max_policies = 4) {
    std::vector<Policy> ps;
    auto n = static_cast<std::size_t>(pick(rng, 1, static_cast<std::int64_t>(max_policies)));
    for (std::size_t i = 0; i < n; ++i) ps.push_back(random_policy(rng, "p" + std::to_string(i)));
    return ps;
}

inline RequestContext random_context(Rng& rng) {
    RequestContext ctx;
    if (pick(rng, 0, 3)) ctx.set(kRole, std::string(pick(rng, 0, 1) ? "av" : "cu"));
    if (pick(rng, 0, 3)) ctx.set(kEnrolled, pick(rng, 0, 1) == 1);
    if (pick(rng, 0, 3)) ctx.set(kTick, std::int64_t{pick(rng, 0, 120)});
    if (pick(rng, 0, 3)) ctx.set(kAction, std::string(pick(rng, 0, 1) ? "enroll" : "telemetry"));
    if (pick(rng, 0, 3)) ctx.set(AttrPath::parse("environment.at"), Timestamp{pick(rng, 0, 120)});
    if (pick(rng, 0, 3)) ctx.set(AttrPath::parse("resource.kind"), std::string(pick(rng, 0, 1) ? "fleet" : "booking"));
    return ctx;
}

inline std::string stop_name(std::size_t i) { return "s" + std::to_string(i); }

// Directed graph on n stops with a random edge density, weights 1..max_w.
// Parallel edges are allowed.
inline paarc::sim::RouteGraph random_graph(Rng& rng, std::size_t n, std::int64_t max_w = 100) {
    paarc::sim::RouteGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_stop({stop_name(i), double(i), 0});
    const auto density = pick(rng, 10, 70);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || pick(rng, 0, 99) >= density) continue;
            g.add_edge({stop_name(a), stop_name(b), pick(rng, 1, max_w)});
            if (pick(rng, 0, 9) == 0) g.add_edge({stop_name(a), stop_name(b), pick(rng, 1, max_w)});
        }
    return g;
}

// Fleet of idle or near-finish/running AVs placed on the graph.
inline paarc::sim::Fleet random_fleet(Rng& rng, const paarc::sim::RouteGraph& g, std::size_t count) {
    using namespace paarc::sim;
    Fleet fleet;
    const auto n = static_cast<std::int64_t>(g.stops().size());
    for (std::size_t i = 0; i < count; ++i) {
        AvState av;
        av.av_id = "av-" + std::to_string(10 + i);
        av.at = stop_name(static_cast<std::size_t>(pick(rng, 0, n - 1)));
        av.lifecycle = pick(rng, 0, 5) ? Lifecycle::enrolled : Lifecycle::unenrolled;
        auto roll = pick(rng, 0, 5);
        if (roll == 0) av.route_state = RouteState::running;
        else if (roll == 1) {
            auto out = g.edges_from(av.at);
            if (!out.empty()) {
                const auto& e = out[static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(out.size()) - 1))];
                av.route_state = RouteState::near_finish;
                av.route = {e.to};
                av.elapsed = pick(rng, 0, *g.edge_seconds(e.from, e.to) - 1);
            }
        }
        fleet[av.av_id] = av;
    }
    return fleet;
}

}  // namespace gen
