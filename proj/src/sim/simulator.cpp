#include "paarc/sim/simulator.hpp"

#include <cstdio>

namespace paarc::sim {

using enforcement::EnforcementResult;
using enforcement::EnforcementStatus;
using policy::AttrPath;
using policy::Category;
using policy::Effect;

namespace {

const AttrPath kEnrolled(Category::subject, "enrolled");
const AttrPath kCertStatus(Category::subject, "cert.status");
const AttrPath kCertSerial(Category::subject, "cert.serial");
const AttrPath kRole(Category::subject, "role");
const AttrPath kEnvTick(Category::environment, "tick");
const AttrPath kSubjectId(Category::subject, "id");

constexpr const char* kCuTable = "cu";
constexpr const char* kEnvTable = "env";

}  // namespace

Simulator::Simulator(Scenario scenario) : scenario_(std::move(scenario)), rng_(scenario_.seed) {
    for (const auto& s : scenario_.services) registry_.publish(s);
    store_.replace_all(scenario_.policies);
    pip_.bind({"subject", kCuTable});
    pip_.bind({"environment", kEnvTable});
    repo_.put(kEnvTable, "*", kEnvTick, policy::Timestamp{0});

    for (const auto& [subject, secret] : scenario_.pki.secrets) ra_.register_secret(subject, secret);
    auto signer = std::make_shared<pki::HmacSigner>(pki::HmacSigner::from_hex_key(scenario_.pki.ca_key_hex));
    ca_ = std::make_unique<pki::CertificateAuthority>(scenario_.pki.ca_id, std::move(signer));
    va_.trust(*ca_);

    for (const auto& a : scenario_.avs) {
        ensure_av(a.id, a.start_stop);
        presented_secrets_[a.id] = a.secret;
    }

    cu_provider_ = [](const registry::ServiceRecord& svc, const std::string& wire) {
        auto req = enforcement::from_technical(wire);
        return "ack " + req.action + " " + req.requester + " by " + svc.provider;
    };
}

std::string Simulator::next_request_id() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "req-%06llu", static_cast<unsigned long long>(next_request_++));
    return buf;
}

AvState& Simulator::ensure_av(const std::string& id, const std::string& stop) {
    auto [it, inserted] = fleet_.try_emplace(id);
    if (inserted) {
        it->second.av_id = id;
        it->second.at = stop;
        sync_subject(it->second);
    }
    return it->second;
}

const AvState* Simulator::find_av(const std::string& id) const {
    auto it = fleet_.find(id);
    return it == fleet_.end() ? nullptr : &it->second;
}

void Simulator::note(const std::string& kind, const std::string& subject, const std::string& outcome,
                     const std::string& detail) {
    log_.push_back({tick_, kind, subject, outcome, detail});
}

void Simulator::audit_record(audit::Domain domain, const std::string& actor, const std::string& action,
                             const std::string& detail, const std::optional<std::string>& request_id) {
    audit::AuditRecord r;
    r.tick = tick_;
    r.domain = domain;
    r.actor = actor;
    r.action = action;
    r.request_id = request_id;
    r.detail = detail;
    audit_.append(std::move(r));
}

void Simulator::set_route_state(AvState& av, RouteState next) {
    if (av.route_state == next) return;
    note("route-state", av.av_id, "info",
         std::string(to_string(av.route_state)) + "->" + std::string(to_string(next)));
    av.route_state = next;
}

void Simulator::sync_subject(const AvState& av) {
    repo_.put(kCuTable, av.av_id, kEnrolled, av.lifecycle == Lifecycle::enrolled);
    if (av.cert) {
        repo_.put(kCuTable, av.av_id, kCertStatus, std::string(pki::to_string(va_.validate(*av.cert, tick_))));
        repo_.put(kCuTable, av.av_id, kCertSerial, static_cast<std::int64_t>(av.cert->serial));
    } else {
        repo_.put(kCuTable, av.av_id, kCertStatus, std::string("none"));
        repo_.erase(kCuTable, av.av_id, kCertSerial);
    }
}

EnforcementResult Simulator::enforce(const std::string& request_id, const std::string& av_id,
                                     const std::string& service, const std::string& action, std::string payload) {
    enforcement::ServiceRequest req;
    req.request_id = request_id;
    req.requester = av_id;
    req.service_id = service;
    req.action = action;
    req.payload = std::move(payload);
    req.attrs.set(kRole, std::string("av"));
    audit_record(audit::Domain::device, av_id, action + ".submit", "request to " + service, req.request_id);
    if (const AvState* av = find_av(av_id)) sync_subject(*av);
    return pep_.enforce(req, cu_provider_, publisher_, tick_);
}

std::string Simulator::rejection_for(const EnforcementResult& r) const {
    switch (r.status) {
    case EnforcementStatus::service_not_found: return "service-not-found";
    case EnforcementStatus::provider_failure: return "provider-failure";
    case EnforcementStatus::completed: break;
    }
    return r.decision && r.decision->effect == Effect::indeterminate ? "indeterminate" : "denied";
}

ActionResult Simulator::enroll_av(const std::string& av_id, const std::optional<std::string>& proof,
                                  const std::optional<std::string>& start_stop) {
    ActionResult res;
    const AvState* existing = find_av(av_id);
    if (!existing && !start_stop) {
        res.reason = "unknown-av";
        return res;
    }
    AvState& av = ensure_av(av_id, existing ? existing->at : *start_stop);
    if (av.lifecycle == Lifecycle::enrolled) {
        res.reason = "already-enrolled";
        return res;
    }

    if (scenario_.mode == Mode::A) {
        av.lifecycle = Lifecycle::enrolled;
        av.route_state = RouteState::idle;
        audit_record(audit::Domain::application, "cu", "av.enroll", "recorded entering AV " + av_id);
        res.accepted = true;
        return res;
    }

    pki::IdentityClaim claim;
    claim.subject = av_id;
    if (proof) claim.proof = *proof;
    else if (auto it = presented_secrets_.find(av_id); it != presented_secrets_.end()) claim.proof = it->second;
    claim.not_before = tick_;
    claim.not_after = tick_ + scenario_.pki.cert_validity;
    char fp[33];
    std::snprintf(fp, sizeof fp, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    claim.key_fingerprint = fp;

    pki::RaVerdict verdict;
    try {
        verdict = ra_.verify(claim);
    } catch (const pki::UnknownSubject&) {
        verdict.claim = claim;
        verdict.reason = "unknown-subject";
    }
    audit_record(audit::Domain::network, "ra", "ra.verify",
                 av_id + (verdict.approved ? " approved" : " rejected: " + verdict.reason));
    if (!verdict.approved) {
        res.reason = "identity-rejected";
        return res;
    }

    pki::Certificate cert = ca_->issue(verdict);
    audit_record(audit::Domain::network, "ca", "ca.issue",
                 "serial " + std::to_string(cert.serial) + " for " + av_id);
    pki::CertStatus status = va_.validate(cert, tick_);
    audit_record(audit::Domain::network, "va", "va.validate",
                 "serial " + std::to_string(cert.serial) + " " + std::string(pki::to_string(status)));

    std::optional<pki::Certificate> previous = av.cert;
    av.cert = cert;
    res.request_id = next_request_id();
    EnforcementResult er = enforce(*res.request_id, av_id, kFleetService, "av.enroll", "serial=" + std::to_string(cert.serial));
    if (er.decision) res.effect = er.decision->effect;
    if (status == pki::CertStatus::valid && er.status == EnforcementStatus::completed && er.decision &&
        er.decision->effect == Effect::permit) {
        av.lifecycle = Lifecycle::enrolled;
        av.route_state = RouteState::idle;
        sync_subject(av);
        res.accepted = true;
        return res;
    }
    ca_->revoke(cert.serial, tick_);
    audit_record(audit::Domain::network, "ca", "ca.revoke", "serial " + std::to_string(cert.serial) + " (enrollment denied)");
    av.cert = previous;
    sync_subject(av);
    res.reason = er.status == EnforcementStatus::completed ? "enrollment-denied" : rejection_for(er);
    return res;
}

void Simulator::complete_withdrawal(AvState& av) {
    av.withdraw_pending = false;
    av.lifecycle = Lifecycle::withdrawn;
    av.has_pending_route = false;
    av.pending_route.clear();
    if (scenario_.mode == Mode::B && av.cert && !ca_->is_revoked(av.cert->serial)) {
        ca_->revoke(av.cert->serial, tick_);
        audit_record(audit::Domain::network, "ca", "ca.revoke", "serial " + std::to_string(av.cert->serial) + " (withdrawal)");
    }
    audit_record(audit::Domain::application, "cu", "av.withdraw", "recorded leaving AV " + av.av_id);
    sync_subject(av);
    note("withdrawn", av.av_id, "info", "lifecycle withdrawn");
}

ActionResult Simulator::withdraw_av(const std::string& av_id) {
    ActionResult res;
    auto it = fleet_.find(av_id);
    if (it == fleet_.end() || it->second.lifecycle != Lifecycle::enrolled) {
        res.reason = "not-enrolled";
        return res;
    }
    AvState& av = it->second;
    if (av.withdraw_pending) {
        res.reason = "withdrawal-pending";
        return res;
    }
    if (scenario_.mode == Mode::B) {
        res.request_id = next_request_id();
        EnforcementResult er = enforce(*res.request_id, av_id, kFleetService, "av.withdraw", "");
        if (er.decision) res.effect = er.decision->effect;
        if (!(er.status == EnforcementStatus::completed && er.decision && er.decision->effect == Effect::permit)) {
            res.reason = er.status == EnforcementStatus::completed ? "withdrawal-denied" : rejection_for(er);
            return res;
        }
    }
    res.accepted = true;
    if (av.route_state == RouteState::idle) {
        complete_withdrawal(av);
    } else {
        av.withdraw_pending = true;
        res.reason = "deferred";
    }
    return res;
}

Telemetry Simulator::telemetry_for(const std::string& av_id) const {
    Telemetry t;
    t.av_id = av_id;
    t.tick = tick_;
    if (const AvState* av = find_av(av_id)) {
        t.location = av->location_label();
        t.route_paths = av->route;
        t.route_state = av->route_state;
        t.stop_list = av->route;
        t.stop_list.insert(t.stop_list.begin(), av->at);
    } else {
        t.location = "unknown";
    }
    return t;
}

ActionResult Simulator::submit_telemetry(const Telemetry& t) {
    ActionResult res;
    auto it = fleet_.find(t.av_id);
    AvState* av = it == fleet_.end() ? nullptr : &it->second;
    if (av && av->last_telemetry && t.tick < av->last_telemetry->tick) {
        res.reason = "stale-telemetry";
        return res;
    }
    const std::string summary = "loc=" + t.location + " state=" + std::string(to_string(t.route_state)) +
                                " bulletins=" + std::to_string(t.service_bulletins.size());
    if (scenario_.mode == Mode::A) {
        audit_record(audit::Domain::device, t.av_id, "telemetry.submit", summary);
        audit_record(audit::Domain::application, "cu", "telemetry.accept", "from " + t.av_id);
    } else {
        if (!av || av->lifecycle != Lifecycle::enrolled) {
            audit_record(audit::Domain::application, "cu", "telemetry.reject", t.av_id + " not-enrolled");
            res.reason = "not-enrolled";
            return res;
        }
        pki::CertStatus status = av->cert ? va_.validate(*av->cert, tick_) : pki::CertStatus::unknown_issuer;
        if (!av->cert || status != pki::CertStatus::valid) {
            res.reason = av->cert ? "cert-" + std::string(pki::to_string(status)) : "cert-missing";
            audit_record(audit::Domain::network, "va", "va.validate", t.av_id + " " + res.reason);
            return res;
        }
        res.request_id = next_request_id();
        EnforcementResult er = enforce(*res.request_id, t.av_id, kTelemetryService, "telemetry.submit", summary);
        if (er.decision) res.effect = er.decision->effect;
        if (!(er.status == EnforcementStatus::completed && er.decision && er.decision->effect == Effect::permit)) {
            res.reason = rejection_for(er);
            return res;
        }
    }
    if (av) av->last_telemetry = t;
    res.accepted = true;
    return res;
}

void Simulator::assign(AvState& av, const BookingRequest& b, std::int64_t eta) {
    const bool queue = av.route_state == RouteState::near_finish;
    std::string start = queue ? (av.route.empty() ? av.at : av.route.back()) : av.nearest_stop();
    std::vector<std::string> path = shortest_path(scenario_.graph, start, b.origin_stop);
    if (b.destination_stop) {
        auto onward = shortest_path(scenario_.graph, b.origin_stop, *b.destination_stop);
        path.insert(path.end(), onward.begin(), onward.end());
    }
    if (queue) {
        av.pending_route = std::move(path);
        av.has_pending_route = true;
    } else {
        av.route = std::move(path);
        set_route_state(av, RouteState::running);
    }
    assignments_.push_back({b.booking_id, av.av_id, eta, b.walk_seconds, tick_});
    audit_record(audit::Domain::application, "cu", "booking.assign",
                 b.booking_id + " -> " + av.av_id + " av_eta=" + std::to_string(eta) +
                     " passenger_eta=" + std::to_string(b.walk_seconds) + (queue ? " (queued)" : ""));
}

ActionResult Simulator::handle_booking(const BookingRequest& b) {
    ActionResult res;
    audit_record(audit::Domain::application, "booking-app", "booking.request",
                 b.booking_id + " at " + b.origin_stop + " walk=" + std::to_string(b.walk_seconds));
    EligibilityCheck gate;
    if (scenario_.mode == Mode::B) {
        gate = [this](const AvState& av) {
            if (!av.cert || va_.validate(*av.cert, tick_) != pki::CertStatus::valid) return false;
            enforcement::ServiceRequest req;
            req.request_id = next_request_id();
            req.requester = av.av_id;
            req.service_id = "booking";
            req.action = "booking.assign";
            req.attrs.set(kRole, std::string("av"));
            sync_subject(av);
            auto snap = store_.snapshot();
            auto decided = pdp_.decide(req, *snap);
            enforcement::audit_decision(audit_, tick_, req, decided);
            return decided.decision.effect == Effect::permit;
        };
    }
    try {
        Election e = elect_vehicle(b, fleet_, scenario_.graph, gate);
        assign(fleet_.at(e.av_id), b, e.av_eta);
        res.accepted = true;
    } catch (const NoEligibleVehicle&) {
        unserved_.push_back(b.booking_id);
        audit_record(audit::Domain::application, "cu", "booking.no-vehicle", b.booking_id);
        res.reason = "no-vehicle";
    }
    return res;
}

ActionResult Simulator::revoke_cert(const std::string& av_id) {
    ActionResult res;
    if (scenario_.mode == Mode::A) {
        res.reason = "no-pki";
        return res;
    }
    auto it = fleet_.find(av_id);
    if (it == fleet_.end() || !it->second.cert) {
        res.reason = "no-certificate";
        return res;
    }
    AvState& av = it->second;
    ca_->revoke(av.cert->serial, tick_);
    audit_record(audit::Domain::network, "ca", "ca.revoke", "serial " + std::to_string(av.cert->serial) + " for " + av_id);
    sync_subject(av);

    enforcement::PolicyEvent ev{"cert-revoked", {}};
    ev.attrs.set(kSubjectId, av_id);
    std::string rid = next_request_id();
    res.request_id = rid;
    auto obligations = enforcement::trigger_event(ev, {pdp_, store_, &audit_, tick_}, rid);
    res.accepted = true;
    for (const auto& o : obligations) {
        note("obligation", av_id, "info", o);
        if (o == "withdraw-av" && av.lifecycle == Lifecycle::enrolled && !av.withdraw_pending) {
            if (av.route_state == RouteState::idle) complete_withdrawal(av);
            else av.withdraw_pending = true;
        }
    }
    return res;
}

void Simulator::move(AvState& av) {
    if (av.route.empty()) return;
    auto seconds = scenario_.graph.edge_seconds(av.at, av.route.front());
    if (!seconds) throw Unreachable(av.at, av.route.front());
    if (++av.elapsed >= *seconds) {
        av.at = av.route.front();
        av.route.erase(av.route.begin());
        av.elapsed = 0;
        note("arrive", av.av_id, "info", av.at);
    }
}

std::vector<LogEntry> Simulator::step() {
    const std::size_t mark = log_.size();
    if (!started_) {
        started_ = true;
        dispatch_due();
    }
    ++tick_;
    repo_.put(kEnvTable, "*", kEnvTick, policy::Timestamp{tick_});
    for (auto& [id, av] : fleet_) {
        if (av.lifecycle != Lifecycle::enrolled) continue;
        if (av.route_state == RouteState::idle) {
            if (av.has_pending_route) {
                av.route = std::move(av.pending_route);
                av.pending_route.clear();
                av.has_pending_route = false;
                set_route_state(av, RouteState::running);
            }
            continue;
        }
        move(av);
        std::int64_t remaining = remaining_route_seconds(av, scenario_.graph);
        if (av.route_state == RouteState::running && remaining <= kNearFinishSeconds) {
            set_route_state(av, RouteState::near_finish);
        } else if (av.route_state == RouteState::near_finish && remaining == 0) {
            set_route_state(av, RouteState::idle);
            if (av.withdraw_pending) complete_withdrawal(av);
        }
    }
    dispatch_due();
    return {log_.begin() + static_cast<std::ptrdiff_t>(mark), log_.end()};
}

void Simulator::dispatch_due() {
    const auto& events = scenario_.events;
    while (next_event_ < events.size() && events[next_event_].tick <= tick_) {
        const ScenarioEvent& ev = events[next_event_++];
        ActionResult r = dispatch(ev);
        std::string kind(to_string(ev.kind));
        (r.accepted ? tallies_.accepted : tallies_.rejected)[kind]++;
        if (ev.attack) (r.accepted ? tallies_.illegitimate_accepted : tallies_.illegitimate_rejected)++;
        std::string subject = ev.kind == EventKind::booking ? ev.booking->booking_id : ev.av;
        std::string detail = r.reason;
        if (r.effect) detail += (detail.empty() ? "" : " ") + std::string("decision=") + std::string(policy::to_string(*r.effect));
        if (ev.attack) detail += (detail.empty() ? "" : " ") + std::string("attack");
        note(kind, subject, r.accepted ? "accepted" : "rejected", detail);
    }
}

ActionResult Simulator::dispatch(const ScenarioEvent& ev) {
    switch (ev.kind) {
    case EventKind::enroll: return enroll_av(ev.av, ev.secret, ev.start_stop);
    case EventKind::withdraw: return withdraw_av(ev.av);
    case EventKind::booking: return handle_booking(*ev.booking);
    case EventKind::revoke_cert: return revoke_cert(ev.av);
    case EventKind::telemetry: {
        Telemetry t = telemetry_for(ev.av);
        t.service_bulletins = ev.bulletins;
        return submit_telemetry(t);
    }
    }
    return {};
}

bool Simulator::finished() const {
    return started_ && next_event_ >= scenario_.events.size() && tick_ >= scenario_.final_tick();
}

void Simulator::run() {
    if (!started_) {
        started_ = true;
        dispatch_due();
    }
    while (tick_ < scenario_.final_tick()) step();
}

}  // namespace paarc::sim
