#include "paarc/enforcement/pep.hpp"

#include <algorithm>

namespace paarc::enforcement {

std::string_view to_string(Entity e) {
    switch (e) {
    case Entity::requester: return "REQ";
    case Entity::registry: return "REG";
    case Entity::pep: return "PEP";
    case Entity::pdp: return "PDP";
    case Entity::store: return "STORE";
    case Entity::provider: return "PROV";
    case Entity::publisher: return "PUB";
    }
    return "?";
}

std::string_view to_string(MessageKind k) {
    switch (k) {
    case MessageKind::find: return "find";
    case MessageKind::record: return "record";
    case MessageKind::not_found: return "not-found";
    case MessageKind::request: return "request";
    case MessageKind::decide: return "decide";
    case MessageKind::retrieve: return "retrieve";
    case MessageKind::decision: return "decision";
    case MessageKind::invoke: return "invoke";
    case MessageKind::outcome: return "outcome";
    case MessageKind::failure: return "failure";
    case MessageKind::notify: return "notify";
    }
    return "?";
}

std::string_view to_string(Channel c) {
    switch (c) {
    case Channel::notice_board: return "notice-board";
    case Channel::api: return "api";
    case Channel::text_message: return "text-message";
    }
    return "?";
}

std::optional<Channel> channel_from_string(std::string_view s) {
    if (s == "notice-board") return Channel::notice_board;
    if (s == "api") return Channel::api;
    if (s == "text-message") return Channel::text_message;
    return std::nullopt;
}

std::string_view to_string(EnforcementStatus s) {
    switch (s) {
    case EnforcementStatus::completed: return "completed";
    case EnforcementStatus::service_not_found: return "service-not-found";
    case EnforcementStatus::provider_failure: return "provider-failure";
    }
    return "?";
}

void MessageTrace::add(Entity from, Entity to, MessageKind kind) {
    events_.push_back({static_cast<std::uint32_t>(events_.size() + 1), from, to, kind});
}

bool MessageTrace::contains(MessageKind k) const {
    return std::any_of(events_.begin(), events_.end(), [k](const TraceEvent& e) { return e.kind == k; });
}

void Publisher::publish(Notification n) {
    std::lock_guard lock(mutex_);
    delivered_.push_back(std::move(n));
}

std::vector<Notification> Publisher::delivered() const {
    std::lock_guard lock(mutex_);
    return delivered_;
}

EnforcementResult Pep::enforce(const ServiceRequest& req, const ServiceProvider& provider, Publisher& publisher,
                               std::int64_t tick) const {
    EnforcementResult res;
    auto record = [&](audit::Domain domain, std::string actor, std::string action, std::string detail) {
        audit::AuditRecord r;
        r.tick = tick;
        r.domain = domain;
        r.actor = std::move(actor);
        r.action = std::move(action);
        r.request_id = req.request_id;
        r.detail = std::move(detail);
        audit_.append(std::move(r));
    };

    res.trace.add(Entity::requester, Entity::registry, MessageKind::find);
    auto found = registry_.find({}, req.service_id);
    if (found.empty()) {
        res.trace.add(Entity::registry, Entity::requester, MessageKind::not_found);
        res.status = EnforcementStatus::service_not_found;
        res.error = "service '" + req.service_id + "' not found";
        record(audit::Domain::network, "registry", "registry.find", "not-found " + req.service_id);
        return res;
    }
    const registry::ServiceRecord& service = found.front();
    res.trace.add(Entity::registry, Entity::requester, MessageKind::record);
    record(audit::Domain::network, "registry", "registry.find", "found " + service.service_id + " at " + service.provider);

    res.trace.add(Entity::requester, Entity::pep, MessageKind::request);
    const std::string technical = to_technical(req);
    const ServiceRequest canonical = from_technical(technical);

    res.trace.add(Entity::pep, Entity::pdp, MessageKind::decide);
    auto snap = store_.snapshot();
    res.trace.add(Entity::pdp, Entity::store, MessageKind::retrieve);
    PdpResult decided = pdp_.decide(canonical, *snap);
    res.trace.add(Entity::pdp, Entity::pep, MessageKind::decision);
    audit_decision(audit_, tick, canonical, decided);
    res.pip_calls = decided.pip_calls;
    res.snapshot_version = decided.snapshot_version;
    res.decision = decided.decision;

    if (decided.decision.effect == policy::Effect::permit) {
        res.trace.add(Entity::pep, Entity::provider, MessageKind::invoke);
        try {
            res.outcome = provider ? provider(service, technical) : std::string{};
            res.trace.add(Entity::provider, Entity::pep, MessageKind::outcome);
            record(audit::Domain::application, service.provider, req.action, "outcome " + *res.outcome);
        } catch (const std::exception& e) {
            res.trace.add(Entity::provider, Entity::pep, MessageKind::failure);
            res.status = EnforcementStatus::provider_failure;
            res.error = e.what();
            record(audit::Domain::application, service.provider, req.action,
                   std::string("provider-failure ") + e.what());
        }
    }

    Notification note;
    note.recipient = req.requester;
    if (auto it = service.properties.find("channel"); it != service.properties.end()) {
        if (auto ch = channel_from_string(it->second)) note.channel = *ch;
    }
    note.body = req.request_id + " " + req.action + " " + std::string(policy::to_string(decided.decision.effect));
    if (res.status == EnforcementStatus::provider_failure) note.body += " (provider failure)";
    res.trace.add(Entity::pep, Entity::publisher, MessageKind::notify);
    publisher.publish(note);
    record(audit::Domain::application, "publisher", "notify",
           std::string(to_string(note.channel)) + " -> " + note.recipient + ": " + note.body);
    res.notification = std::move(note);
    return res;
}

}  // namespace paarc::enforcement
