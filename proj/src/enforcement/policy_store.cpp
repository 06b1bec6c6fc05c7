#include "paarc/enforcement/policy_store.hpp"

#include <algorithm>
#include <set>

namespace paarc::enforcement {

namespace {

void validate(const policy::Policy& p) {
    if (auto why = policy::check_invariants(p); !why.empty()) throw InvalidPolicy(why);
}

}  // namespace

std::uint64_t PolicyStore::put(policy::Policy p) {
    validate(p);
    return cell_.update([&](const PolicyStoreSnapshot& cur) {
        PolicyStoreSnapshot next{cur.version + 1, cur.policies};
        auto it = std::find_if(next.policies.begin(), next.policies.end(),
                               [&](const policy::Policy& q) { return q.id == p.id; });
        if (it != next.policies.end()) *it = p;
        else next.policies.push_back(p);
        return next;
    })->version;
}

std::uint64_t PolicyStore::remove(const std::string& id) {
    return cell_.update([&](const PolicyStoreSnapshot& cur) {
        PolicyStoreSnapshot next{cur.version + 1, {}};
        bool found = false;
        for (const auto& q : cur.policies) {
            if (q.id == id) found = true;
            else next.policies.push_back(q);
        }
        if (!found) throw UnknownPolicyId(id);
        return next;
    })->version;
}

std::uint64_t PolicyStore::replace_all(std::vector<policy::Policy> policies) {
    std::set<std::string> ids;
    for (const auto& p : policies) {
        validate(p);
        if (!ids.insert(p.id).second) throw InvalidPolicy("duplicate policy id '" + p.id + "'");
    }
    return cell_.update([&](const PolicyStoreSnapshot& cur) {
        return PolicyStoreSnapshot{cur.version + 1, policies};
    })->version;
}

}  // namespace paarc::enforcement
