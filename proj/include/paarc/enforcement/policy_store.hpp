#pragma once

#include "paarc/common/snapshot_cell.hpp"
#include "paarc/policy/policy.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace paarc::enforcement {

struct PolicyStoreSnapshot {
    std::uint64_t version = 0;
    std::vector<policy::Policy> policies;
};

class UnknownPolicyId : public std::runtime_error {
public:
    explicit UnknownPolicyId(const std::string& id) : std::runtime_error("unknown policy id '" + id + "'") {}
};

class InvalidPolicy : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// PAP-managed policy store. Every mutation publishes a fresh immutable
/// snapshot with version + 1; readers holding an older snapshot keep it.
class PolicyStore {
public:
    using Snapshot = std::shared_ptr<const PolicyStoreSnapshot>;

    Snapshot snapshot() const { return cell_.load(); }
    std::uint64_t version() const { return snapshot()->version; }

    /// Adds `p`, or replaces the policy with the same id in place.
    std::uint64_t put(policy::Policy p);
    std::uint64_t remove(const std::string& id);
    /// Replaces the whole set in one version step.
    std::uint64_t replace_all(std::vector<policy::Policy> policies);

private:
    SnapshotCell<PolicyStoreSnapshot> cell_;
};

}  // namespace paarc::enforcement
