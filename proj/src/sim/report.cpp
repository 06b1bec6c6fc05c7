#include "paarc/audit/audit_json.hpp"
#include "paarc/sim/simulator.hpp"

namespace paarc::sim {

using ojson = nlohmann::ordered_json;

std::string render_report(const Simulator& sim) {
    ojson j;
    j["mode"] = std::string(to_string(sim.mode()));
    j["seed"] = sim.scenario().seed;
    j["final_tick"] = sim.now();

    ojson events = ojson::array();
    for (const auto& e : sim.log()) {
        events.push_back({{"tick", e.tick}, {"kind", e.kind}, {"subject", e.subject}, {"outcome", e.outcome},
                          {"detail", e.detail}});
    }
    j["event_log"] = std::move(events);

    ojson assignments = ojson::array();
    for (const auto& a : sim.assignments()) {
        assignments.push_back({{"booking_id", a.booking_id}, {"av_id", a.av_id}, {"av_eta", a.av_eta},
                               {"passenger_eta", a.passenger_eta}, {"tick", a.tick}});
    }
    j["assignments"] = std::move(assignments);
    j["unserved_bookings"] = sim.unserved_bookings();

    const Tallies& t = sim.tallies();
    ojson tallies;
    tallies["accepted"] = ojson(t.accepted);
    tallies["rejected"] = ojson(t.rejected);
    tallies["illegitimate_accepted"] = t.illegitimate_accepted;
    tallies["illegitimate_rejected"] = t.illegitimate_rejected;
    j["tallies"] = std::move(tallies);

    ojson fleet = ojson::array();
    for (const auto& [id, av] : sim.fleet()) {
        ojson f;
        f["av_id"] = id;
        f["lifecycle"] = std::string(to_string(av.lifecycle));
        f["route_state"] = std::string(to_string(av.route_state));
        f["location"] = av.location_label();
        if (av.cert) {
            f["cert_serial"] = av.cert->serial;
            f["cert_status"] = std::string(pki::to_string(sim.va().validate(*av.cert, sim.now())));
        } else {
            f["cert_serial"] = nullptr;
            f["cert_status"] = "none";
        }
        fleet.push_back(std::move(f));
    }
    j["fleet"] = std::move(fleet);

    ojson notes = ojson::array();
    for (const auto& n : sim.publisher().delivered()) {
        notes.push_back({{"channel", std::string(enforcement::to_string(n.channel))}, {"recipient", n.recipient},
                         {"body", n.body}});
    }
    j["notifications"] = std::move(notes);
    j["decisions"] = sim.decisions_made();

    auto records = sim.audit().records();
    j["audit_record_count"] = records.size();
    ojson audit = ojson::array();
    for (const auto& r : records) audit.push_back(audit::record_to_json(r));
    j["audit"] = std::move(audit);
    return j.dump(2) + "\n";
}

}  // namespace paarc::sim
