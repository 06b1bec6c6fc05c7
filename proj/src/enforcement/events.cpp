#include "paarc/enforcement/events.hpp"

namespace paarc::enforcement {

ServiceRequest event_request(const PolicyEvent& ev, std::string request_id) {
    ServiceRequest req;
    req.request_id = std::move(request_id);
    req.service_id = "events";
    req.action = "event." + ev.kind;
    req.attrs = ev.attrs;
    req.requester = "system";
    if (const auto* who = ev.attrs.find(policy::AttrPath(policy::Category::subject, "id"))) {
        if (const auto* s = std::get_if<std::string>(who)) req.requester = *s;
    }
    return req;
}

std::vector<std::string> trigger_event(const PolicyEvent& ev, const EventContext& ctx, std::string request_id) {
    ServiceRequest req = event_request(ev, std::move(request_id));
    auto snap = ctx.store.snapshot();
    PdpResult r = ctx.pdp.decide(req, *snap);
    if (ctx.audit) audit_decision(*ctx.audit, ctx.tick, req, r);
    return r.decision.obligations;
}

}  // namespace paarc::enforcement
