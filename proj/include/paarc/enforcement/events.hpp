#pragma once

#include "paarc/enforcement/pdp.hpp"

#include <string>
#include <vector>

namespace paarc::enforcement {

/// Something that happened in the network (a revoked certificate, a lost
/// link, ...) that policies may react to.
struct PolicyEvent {
    std::string kind;
    policy::RequestContext attrs;
};

struct EventContext {
    const Pdp& pdp;
    const PolicyStore& store;
    audit::AuditLog* audit = nullptr;
    std::int64_t tick = 0;
};

/// Builds the synthetic request an event is decided as: action is
/// `event.<kind>`, requester is `subject.id` when the event carries one.
ServiceRequest event_request(const PolicyEvent& ev, std::string request_id);

/// Decides the event against the current snapshot and returns the
/// obligations attached to the decision, in rule order.
std::vector<std::string> trigger_event(const PolicyEvent& ev, const EventContext& ctx, std::string request_id);

}  // namespace paarc::enforcement
