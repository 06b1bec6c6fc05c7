#include "paarc/enforcement/pdp.hpp"

#include <algorithm>
#include <set>

namespace paarc::enforcement {

using policy::Decision;
using policy::Effect;

Decision evaluate_policy_set(std::span<const policy::Policy> policies, const policy::RequestContext& ctx) {
    std::vector<Decision> per_policy;
    per_policy.reserve(policies.size());
    for (const auto& p : policies) per_policy.push_back(policy::evaluate_policy(p, ctx));
    return policy::combine_decisions(per_policy, policy::CombiningAlg::deny_overrides);
}

PdpResult pdp_decide(const ServiceRequest& req, const PolicyStoreSnapshot& snap, const AttributeSource* pip) {
    PdpResult out;
    out.snapshot_version = snap.version;
    policy::RequestContext ctx = base_context(req);
    Decision first = evaluate_policy_set(snap.policies, ctx);
    out.phase1_effect = first.effect;
    if (first.effect == Effect::deny || first.missing.empty() || pip == nullptr) {
        out.decision = std::move(first);
        return out;
    }
    for (const auto& path : first.missing) {
        // Bound but ill-typed attributes are reported as missing too; the
        // request's own value stands.
        if (ctx.contains(path)) continue;
        ++out.pip_calls;
        try {
            ctx.set(path, pip->resolve(path, req));
        } catch (const NoBinding&) {
        } catch (const AttributeUnavailable&) {
        }
    }
    out.decision = evaluate_policy_set(snap.policies, ctx);
    return out;
}

PdpResult Pdp::decide(const ServiceRequest& req, const PolicyStoreSnapshot& snap) const {
    decisions_.fetch_add(1, std::memory_order_relaxed);
    return pdp_decide(req, snap, pip_);
}

std::vector<PdpResult> decide_batch_serial(const Pdp& pdp, std::span<const ServiceRequest> reqs,
                                           const PolicyStoreSnapshot& snap) {
    std::vector<PdpResult> out;
    out.reserve(reqs.size());
    for (const auto& r : reqs) out.push_back(pdp.decide(r, snap));
    return out;
}

std::vector<PdpResult> decide_batch(const Pdp& pdp, std::span<const ServiceRequest> reqs,
                                    const PolicyStoreSnapshot& snap) {
    std::vector<PdpResult> out(reqs.size());
    const auto n = static_cast<std::ptrdiff_t>(reqs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = pdp.decide(reqs[i], snap);
    return out;
}

std::uint64_t audit_decision(audit::AuditLog& log, std::int64_t tick, const ServiceRequest& req, const PdpResult& r) {
    audit::AuditRecord rec;
    rec.tick = tick;
    rec.domain = audit::Domain::network;
    rec.actor = "pdp";
    rec.action = req.action;
    rec.request_id = req.request_id;
    rec.decision_effect = r.decision.effect;
    std::set<std::string> seen;
    for (const auto& m : r.decision.matched) {
        if (seen.insert(m.policy_id).second) rec.policy_ids.push_back(m.policy_id);
    }
    rec.detail = "decision for " + req.requester + " v" + std::to_string(r.snapshot_version) +
                 " pip_calls=" + std::to_string(r.pip_calls);
    if (!r.decision.missing.empty()) {
        rec.detail += " missing=";
        for (std::size_t i = 0; i < r.decision.missing.size(); ++i)
            rec.detail += (i ? "," : "") + r.decision.missing[i].str();
    }
    return log.append(std::move(rec));
}

}  // namespace paarc::enforcement
