#pragma once

#include "paarc/audit/audit_log.hpp"
#include "paarc/enforcement/pip.hpp"
#include "paarc/enforcement/policy_store.hpp"

#include <atomic>
#include <span>
#include <vector>

namespace paarc::enforcement {

struct PdpResult {
    policy::Decision decision;
    /// Store-level fold over the request attributes alone.
    policy::Effect phase1_effect = policy::Effect::not_applicable;
    /// PIP calls made for this request only.
    std::size_t pip_calls = 0;
    std::uint64_t snapshot_version = 0;
};

/// Store-level fold (deny-overrides) of every policy against `ctx`.
policy::Decision evaluate_policy_set(std::span<const policy::Policy> policies, const policy::RequestContext& ctx);

/// Two-phase decision. Phase one evaluates the request attributes alone; a
/// Deny there is final and the PIP is never consulted. Otherwise every
/// missing path is fetched once from `pip` and the set is re-evaluated a
/// single time. `pip` may be null.
PdpResult pdp_decide(const ServiceRequest& req, const PolicyStoreSnapshot& snap, const AttributeSource* pip);

/// Stateless apart from a decision counter; safe to share across threads.
class Pdp {
public:
    explicit Pdp(const AttributeSource* pip = nullptr) : pip_(pip) {}

    PdpResult decide(const ServiceRequest& req, const PolicyStoreSnapshot& snap) const;
    std::uint64_t decisions_made() const noexcept { return decisions_.load(std::memory_order_relaxed); }

private:
    const AttributeSource* pip_;
    mutable std::atomic<std::uint64_t> decisions_{0};
};

/// Reference implementation: one request after another.
std::vector<PdpResult> decide_batch_serial(const Pdp& pdp, std::span<const ServiceRequest> reqs,
                                           const PolicyStoreSnapshot& snap);

/// OpenMP-parallel over requests; results are positionally identical to
/// decide_batch_serial.
std::vector<PdpResult> decide_batch(const Pdp& pdp, std::span<const ServiceRequest> reqs,
                                    const PolicyStoreSnapshot& snap);

/// Appends the decision-bearing audit record for one PDP result (network
/// domain). Exactly one such record exists per decision.
std::uint64_t audit_decision(audit::AuditLog& log, std::int64_t tick, const ServiceRequest& req, const PdpResult& r);

}  // namespace paarc::enforcement
