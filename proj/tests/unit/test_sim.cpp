#include "oracles/audit_oracle.hpp"
#include "oracles/graph_oracle.hpp"
#include "paarc/sim/simulator.hpp"
#include "support/scenarios.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace paarc;
using namespace paarc::sim;

namespace {

BookingRequest booking(std::string id, std::string origin, std::optional<std::string> dest = {}, std::int64_t walk = 30) {
    BookingRequest b;
    b.booking_id = std::move(id);
    b.passenger_id = "p";
    b.origin_stop = std::move(origin);
    b.walk_seconds = walk;
    b.destination_stop = std::move(dest);
    return b;
}

AvState idle_av(const std::string& id, const std::string& at) {
    AvState av;
    av.av_id = id;
    av.at = at;
    av.lifecycle = Lifecycle::enrolled;
    return av;
}

bool route_step_ok(RouteState a, RouteState b) {
    if (a == b) return true;
    return (a == RouteState::idle && b == RouteState::running) ||
           (a == RouteState::running && b == RouteState::near_finish) ||
           (a == RouteState::near_finish && b == RouteState::idle);
}

bool lifecycle_step_ok(Lifecycle a, Lifecycle b) {
    if (a == b) return true;
    return (a == Lifecycle::unenrolled && b == Lifecycle::enrolled) ||
           (a == Lifecycle::enrolled && b == Lifecycle::withdrawn) ||
           (a == Lifecycle::withdrawn && b == Lifecycle::enrolled);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / ("paarc-sim-" + name);
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST_CASE("eta examples") {
    RouteGraph g;
    for (auto id : {"S1", "S2", "S3"}) g.add_stop({id, 0, 0});
    g.add_edge({"S1", "S2", 30});
    g.add_edge({"S2", "S3", 45});
    CHECK(compute_eta(g, "S1", "S3") == 75);
    CHECK(oracle::simple_path_eta(g, "S1", "S3") == 75);
    CHECK(compute_eta(g, "S1", "S1") == 0);
    CHECK_THROWS_AS(compute_eta(g, "S3", "S1"), Unreachable);
    CHECK_THROWS_AS(compute_eta(g, "S1", "S9"), UnknownStop);
    CHECK_THROWS_AS(g.add_edge({"S1", "S2", 0}), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge({"S1", "S9", 5}), UnknownStop);
    CHECK_THROWS_AS(g.add_stop({"S1", 0, 0}), std::invalid_argument);
    CHECK(shortest_path(g, "S1", "S3") == std::vector<std::string>{"S2", "S3"});
    CHECK(shortest_path(g, "S1", "S1").empty());
}

TEST_CASE("eta and paths agree with simple-path enumeration") {
    gen::Rng rng(44);
    for (int i = 0; i < 300; ++i) {
        auto g = gen::random_graph(rng, static_cast<std::size_t>(gen::pick(rng, 1, 7)));
        for (const auto& [a, sa] : g.stops())
            for (const auto& [b, sb] : g.stops()) {
                auto want = oracle::simple_path_eta(g, a, b);
                if (!want) {
                    REQUIRE_THROWS_AS(compute_eta(g, a, b), Unreachable);
                    continue;
                }
                REQUIRE(compute_eta(g, a, b) == *want);
                auto path = shortest_path(g, a, b);
                std::int64_t cost = 0;
                std::string at = a;
                for (const auto& s : path) {
                    cost += *g.edge_seconds(at, s);
                    at = s;
                }
                REQUIRE(at == b);
                REQUIRE(cost == *want);
                REQUIRE(path == shortest_path(g, a, b));
            }
    }
}

TEST_CASE("election examples") {
    auto g = gen::line_graph({"a", "b", "c"}, {80, 40});
    Fleet fleet;
    fleet["av-1"] = idle_av("av-1", "a");   // 120 s to c
    fleet["av-2"] = idle_av("av-2", "b");   // 40 s to c
    auto e = elect_vehicle(booking("x", "c"), fleet, g);
    CHECK(e.av_id == "av-2");
    CHECK(e.av_eta == 40);

    Fleet tie;
    tie["av-02"] = idle_av("av-02", "a");
    tie["av-01"] = idle_av("av-01", "c");
    CHECK(elect_vehicle(booking("x", "b"), tie, g).av_id == "av-01");

    CHECK_THROWS_AS(elect_vehicle(booking("x", "a"), Fleet{}, g), NoEligibleVehicle);
    fleet["av-2"].route_state = RouteState::running;
    CHECK(elect_vehicle(booking("x", "c"), fleet, g).av_id == "av-1");
    CHECK_THROWS_AS(elect_vehicle(booking("x", "c"), fleet, g, [](const AvState&) { return false; }), NoEligibleVehicle);
}

TEST_CASE("election matches the exhaustive oracle and is scale invariant") {
    gen::Rng rng(45);
    int elected = 0;
    for (int i = 0; i < 400; ++i) {
        auto g = gen::random_graph(rng, static_cast<std::size_t>(gen::pick(rng, 2, 7)));
        auto fleet = gen::random_fleet(rng, g, static_cast<std::size_t>(gen::pick(rng, 0, 5)));
        auto b = booking("b", gen::stop_name(static_cast<std::size_t>(gen::pick(rng, 0, std::int64_t(g.stops().size()) - 1))));
        auto want = oracle::elect(b, fleet, g);
        if (!want) {
            REQUIRE_THROWS_AS(elect_vehicle(b, fleet, g), NoEligibleVehicle);
            continue;
        }
        ++elected;
        auto got = elect_vehicle(b, fleet, g);
        REQUIRE(got.av_id == want->first);
        REQUIRE(got.av_eta == want->second);
        for (std::int64_t k : {2, 5, 10}) {
            auto scaled = elect_vehicle(b, fleet, g.scaled(k));
            REQUIRE(scaled.av_id == got.av_id);
            REQUIRE(scaled.av_eta == got.av_eta * k);
        }
    }
    CHECK(elected > 100);
}

TEST_CASE("near-finish threshold and route end") {
    Scenario s = gen::base_scenario(Mode::A);
    s.graph = gen::line_graph({"a", "b"}, {100});
    gen::add_av(s, "av-1", "a");
    Simulator sim(std::move(s));
    REQUIRE(sim.enroll_av("av-1").accepted);
    auto r = sim.handle_booking(booking("bk", "a", "b"));
    REQUIRE(r.accepted);
    REQUIRE(sim.assignments().size() == 1);
    CHECK(sim.assignments()[0].av_eta == 0);
    CHECK(sim.find_av("av-1")->route_state == RouteState::running);
    for (int i = 0; i < 39; ++i) sim.step();
    CHECK(remaining_route_seconds(*sim.find_av("av-1"), sim.graph()) == 61);
    CHECK(sim.find_av("av-1")->route_state == RouteState::running);
    sim.step();
    CHECK(remaining_route_seconds(*sim.find_av("av-1"), sim.graph()) == 60);
    CHECK(sim.find_av("av-1")->route_state == RouteState::near_finish);
    for (int i = 0; i < 60; ++i) sim.step();
    CHECK(sim.find_av("av-1")->route_state == RouteState::idle);
    CHECK(sim.find_av("av-1")->at == "b");
    CHECK(sim.find_av("av-1")->location_label() == "b");
}

TEST_CASE("mode A trusts everything and touches no PKI or policy") {
    Scenario s = gen::base_scenario(Mode::A);
    s.graph = gen::line_graph({"a", "b"}, {30});
    gen::add_av(s, "av-1", "a");
    Simulator sim(std::move(s));
    CHECK(sim.enroll_av("av-1").accepted);
    CHECK(sim.enroll_av("intruder", std::string("nonsense"), std::string("b")).accepted);
    auto t = sim.telemetry_for("forged");
    CHECK(sim.submit_telemetry(t).accepted);
    CHECK(sim.withdraw_av("av-1").accepted);
    CHECK(sim.find_av("av-1")->lifecycle == Lifecycle::withdrawn);
    CHECK(sim.revoke_cert("intruder").reason == "no-pki");
    CHECK(sim.decisions_made() == 0);
    CHECK(sim.ca().issued_count() == 0);
    for (const auto& r : sim.audit().records()) {
        CHECK_FALSE(r.decision_effect);
        CHECK(r.actor != "ra");
        CHECK(r.actor != "ca");
        CHECK(r.actor != "va");
    }
}

TEST_CASE("mode B enrollment, telemetry and withdrawal") {
    Scenario s = gen::base_scenario(Mode::B);
    s.graph = gen::line_graph({"a", "b"}, {30});
    s.pki.cert_validity = 50;
    gen::add_av(s, "av-1", "a");
    gen::add_av(s, "av-2", "b");
    Simulator sim(std::move(s));

    auto bad = sim.enroll_av("av-2", std::string("wrong"));
    CHECK_FALSE(bad.accepted);
    CHECK(bad.reason == "identity-rejected");
    CHECK(sim.find_av("av-2")->lifecycle == Lifecycle::unenrolled);
    CHECK(sim.enroll_av("ghost", std::string("x"), std::string("a")).reason == "identity-rejected");

    auto ok = sim.enroll_av("av-1");
    CHECK(ok.accepted);
    CHECK(ok.effect == policy::Effect::permit);
    const AvState* av = sim.find_av("av-1");
    REQUIRE(av->cert);
    CHECK(sim.va().validate(*av->cert, sim.now()) == pki::CertStatus::valid);
    CHECK(sim.enroll_av("av-1").reason == "already-enrolled");

    CHECK(sim.submit_telemetry(sim.telemetry_for("av-1")).accepted);
    CHECK(sim.submit_telemetry(sim.telemetry_for("forged")).reason == "not-enrolled");
    CHECK(sim.submit_telemetry(sim.telemetry_for("av-2")).reason == "not-enrolled");

    for (int i = 0; i < 51; ++i) sim.step();
    CHECK(sim.submit_telemetry(sim.telemetry_for("av-1")).reason == "cert-expired");
    // An expired certificate also fails the booking gate.
    CHECK(sim.handle_booking(booking("bk", "a")).reason == "no-vehicle");

    auto w = sim.withdraw_av("av-1");
    CHECK(w.accepted);
    CHECK(sim.find_av("av-1")->lifecycle == Lifecycle::withdrawn);
    CHECK(sim.ca().is_revoked(sim.find_av("av-1")->cert->serial));
    CHECK(oracle::check_all_traces(sim.audit()) == "");
    CHECK(oracle::decision_records(sim.audit()) == sim.decisions_made());
}

TEST_CASE("a deny policy on av.withdraw keeps the AV enrolled") {
    Scenario s = gen::base_scenario(Mode::B);
    s.graph = gen::line_graph({"a", "b"}, {30});
    s.policies.push_back(policy::parse_policy_set(R"(policy "freeze" { rule deny when action.name == "av.withdraw" })")[0]);
    gen::add_av(s, "av-1", "a");
    Simulator sim(std::move(s));
    REQUIRE(sim.enroll_av("av-1").accepted);
    auto w = sim.withdraw_av("av-1");
    CHECK_FALSE(w.accepted);
    CHECK(w.reason == "withdrawal-denied");
    CHECK(w.effect == policy::Effect::deny);
    CHECK(sim.find_av("av-1")->lifecycle == Lifecycle::enrolled);
}

TEST_CASE("a running AV withdraws when its itinerary ends") {
    Scenario s = gen::base_scenario(Mode::A);
    s.graph = gen::line_graph({"a", "b", "c"}, {20, 25});
    gen::add_av(s, "av-1", "a");
    Simulator sim(std::move(s));
    sim.enroll_av("av-1");
    REQUIRE(sim.handle_booking(booking("bk", "b", "c")).accepted);
    auto w = sim.withdraw_av("av-1");
    CHECK(w.accepted);
    CHECK(w.reason == "deferred");
    int ticks = 0;
    while (sim.find_av("av-1")->lifecycle == Lifecycle::enrolled && ticks < 200) {
        sim.step();
        ++ticks;
    }
    // 45 s of driving, then one step for near-finish -> idle.
    CHECK(ticks == 45);
    CHECK(sim.find_av("av-1")->at == "c");
    CHECK(sim.find_av("av-1")->route_state == RouteState::idle);
}

TEST_CASE("bookings elect the closest eligible AV") {
    Scenario s = gen::base_scenario(Mode::B);
    s.graph = gen::line_graph({"a", "b", "c", "d"}, {50, 20, 70});
    gen::add_av(s, "av-1", "a");
    gen::add_av(s, "av-2", "c");
    gen::add_av(s, "av-3", "d");
    Simulator sim(std::move(s));
    CHECK(sim.handle_booking(booking("none", "a")).reason == "no-vehicle");
    for (auto id : {"av-1", "av-2", "av-3"}) REQUIRE(sim.enroll_av(id).accepted);

    auto r = sim.handle_booking(booking("bk-1", "b", std::nullopt, 90));
    CHECK(r.accepted);
    REQUIRE(sim.assignments().size() == 1);
    CHECK(sim.assignments()[0].av_id == "av-2");
    CHECK(sim.assignments()[0].av_eta == 20);
    CHECK(sim.assignments()[0].passenger_eta == 90);

    // The sole idle AV loses its certificate: no eligible vehicle left nearby.
    sim.revoke_cert("av-1");
    sim.revoke_cert("av-3");
    CHECK(sim.handle_booking(booking("bk-2", "a")).reason == "no-vehicle");
    CHECK(sim.unserved_bookings() == std::vector<std::string>{"none", "bk-2"});
}

TEST_CASE("a scripted revocation withdraws an idle AV at that tick") {
    Scenario s = gen::base_scenario(Mode::B);
    s.graph = gen::line_graph({"a", "b"}, {30});
    gen::add_av(s, "av-1", "a");
    s.events.push_back({0, EventKind::enroll, "av-1", false, {}, {}, {}, {}});
    s.events.push_back({12, EventKind::revoke_cert, "av-1", false, {}, {}, {}, {}});
    s.end_tick = 20;
    Simulator sim(std::move(s));
    std::int64_t withdrawn_at = -1;
    sim.step();
    while (!sim.finished()) {
        sim.step();
        if (withdrawn_at < 0 && sim.find_av("av-1")->lifecycle == Lifecycle::withdrawn) withdrawn_at = sim.now();
    }
    CHECK(withdrawn_at == 12);
    bool obligation = false;
    for (const auto& e : sim.log()) obligation |= e.kind == "obligation" && e.detail == "withdraw-av";
    CHECK(obligation);
}

TEST_CASE("random scenarios keep the state machines and the mode-B gate") {
    gen::Rng rng(77);
    for (int run = 0; run < 60; ++run) {
        Mode mode = run % 2 ? Mode::B : Mode::A;
        Simulator sim(gen::random_scenario(rng, mode));
        std::map<std::string, std::pair<Lifecycle, RouteState>> prev;
        auto check = [&] {
            for (const auto& [id, av] : sim.fleet()) {
                auto it = prev.find(id);
                if (it != prev.end()) {
                    REQUIRE(lifecycle_step_ok(it->second.first, av.lifecycle));
                    if (av.lifecycle == Lifecycle::enrolled && it->second.first == Lifecycle::enrolled)
                        REQUIRE(route_step_ok(it->second.second, av.route_state));
                }
                prev[id] = {av.lifecycle, av.route_state};
                if (mode == Mode::B && av.lifecycle == Lifecycle::enrolled) {
                    REQUIRE(av.cert);
                    bool validated = false, permitted = false;
                    for (const auto& r : sim.audit().records()) {
                        validated |= r.actor == "va" && r.detail == "serial " + std::to_string(av.cert->serial) + " valid";
                        if (r.action == "av.enroll" && r.decision_effect == policy::Effect::permit && r.request_id) {
                            for (const auto& t : sim.audit().trace_request(*r.request_id))
                                permitted |= t.domain == audit::Domain::device && t.actor == id;
                        }
                    }
                    REQUIRE(validated);
                    REQUIRE(permitted);
                }
            }
        };
        while (!sim.finished()) {
            sim.step();
            check();
        }
        if (mode == Mode::B) CHECK(sim.tallies().illegitimate_accepted == 0);
        REQUIRE(oracle::decision_records(sim.audit()) == sim.decisions_made());
        REQUIRE(oracle::check_all_traces(sim.audit()) == "");
    }
}

TEST_CASE("equal scenarios give byte-identical reports") {
    gen::Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) {
        Simulator x(gen::random_scenario(a, Mode::B));
        Simulator y(gen::random_scenario(b, Mode::B));
        x.run();
        y.run();
        REQUIRE(render_report(x) == render_report(y));
    }
}

TEST_CASE("bundled scenarios load and contrast the two modes") {
    auto a = load_scenario(gen::data_path("attack_a.json"));
    auto b = load_scenario(gen::data_path("attack_b.json"));
    CHECK(a.mode == Mode::A);
    CHECK(b.mode == Mode::B);
    Simulator sa(std::move(a)), sb(std::move(b));
    sa.run();
    sb.run();
    CHECK(sa.tallies().illegitimate_accepted >= 2);
    CHECK(sb.tallies().illegitimate_accepted == 0);
    for (Simulator* s : {&sa, &sb}) {
        REQUIRE(s->assignments().size() == 1);
        CHECK(s->assignments()[0].av_id == "av-01");
    }
    auto demo = load_scenario(gen::data_path("demo_scenario.json"));
    CHECK(demo.mode == Mode::B);
    CHECK(demo.final_tick() == 600);
}

TEST_CASE("scenario errors") {
    const std::string pol = R"(policy "p" { rule permit otherwise })";
    const std::string good = R"({"mode":"A","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[]},"avs":[],"events":[]})";
    CHECK_NOTHROW(parse_scenario(good, pol));
    const char* bad[] = {
        "{",
        R"({"mode":"C","graph":{"stops":[],"edges":[]},"avs":[],"events":[]})",
        R"({"mode":"A","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[{"from":"a","to":"z","s":3}]},"avs":[],"events":[]})",
        R"({"mode":"A","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[]},"avs":[{"id":"v","start_stop":"q"}],"events":[]})",
        R"({"mode":"A","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[]},"avs":[],"events":[{"tick":5,"kind":"telemetry","av":"v"},{"tick":4,"kind":"telemetry","av":"v"}]})",
        R"({"mode":"A","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[]},"avs":[],"events":[{"tick":1,"kind":"fly","av":"v"}]})",
        R"({"mode":"B","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[]},"avs":[],"events":[]})",
        R"({"mode":"A","graph":{"stops":[{"id":"a","x":0,"y":0}],"edges":[]},"avs":[],"events":[{"tick":1,"kind":"booking","booking_id":"b","origin":"nowhere"}]})",
    };
    for (const char* j : bad) {
        CAPTURE(j);
        CHECK_THROWS_AS(parse_scenario(j, pol), ScenarioError);
    }
    CHECK_THROWS_AS(parse_scenario(good, "policy {"), policy::ParseError);

    auto dir = std::filesystem::temp_directory_path();
    auto polf = temp_file("broken.pol", "policy \"p\" {\n  rule permit when\n}\n");
    std::string scen = std::string(good);
    scen.insert(1, "\"policies\":\"" + polf.filename().string() + "\",");
    auto sf = temp_file("s.json", scen);
    try {
        load_scenario(sf);
        FAIL("loaded");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("broken.pol:3:1:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_scenario(dir / "paarc-no-such-file.json"), IoError);
    CHECK_THROWS_AS(load_scenario(sf, dir / "paarc-no-such.pol"), IoError);
}
