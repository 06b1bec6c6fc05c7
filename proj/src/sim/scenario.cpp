#include "paarc/sim/scenario.hpp"

#include "paarc/policy/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace paarc::sim {

using nlohmann::json;

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::enroll: return "enroll";
    case EventKind::withdraw: return "withdraw";
    case EventKind::booking: return "booking";
    case EventKind::telemetry: return "telemetry";
    case EventKind::revoke_cert: return "revoke-cert";
    }
    return "?";
}

std::int64_t Scenario::final_tick() const {
    std::int64_t t = events.empty() ? 0 : events.back().tick;
    return end_tick ? std::max(t, *end_tick) : t;
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ScenarioError("scenario: " + where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) bad(where, std::string("missing field '") + key + "'");
    return *it;
}

std::string str(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) bad(where + "." + key, "expected a string");
    return v.get<std::string>();
}

std::int64_t integer(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_integer()) bad(where + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::optional<std::string> opt_str(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    return str(obj, key, where);
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) bad(where + "." + key, "expected a number");
    return v.get<double>();
}

std::optional<EventKind> kind_from_string(std::string_view s) {
    for (auto k : {EventKind::enroll, EventKind::withdraw, EventKind::booking, EventKind::telemetry,
                   EventKind::revoke_cert}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

RouteGraph parse_graph(const json& j) {
    RouteGraph g;
    const json& stops = field(j, "stops", "graph");
    if (!stops.is_array()) bad("graph.stops", "expected an array");
    for (std::size_t i = 0; i < stops.size(); ++i) {
        std::string where = "graph.stops[" + std::to_string(i) + "]";
        try {
            g.add_stop({str(stops[i], "id", where), number(stops[i], "x", where), number(stops[i], "y", where)});
        } catch (const std::invalid_argument& e) {
            bad(where, e.what());
        }
    }
    const json& edges = field(j, "edges", "graph");
    if (!edges.is_array()) bad("graph.edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string where = "graph.edges[" + std::to_string(i) + "]";
        try {
            g.add_edge({str(edges[i], "from", where), str(edges[i], "to", where), integer(edges[i], "s", where)});
        } catch (const std::invalid_argument& e) {
            bad(where, e.what());
        } catch (const UnknownStop& e) {
            bad(where, e.what());
        }
    }
    return g;
}

registry::ServiceRecord parse_service(const json& j, const std::string& where) {
    registry::ServiceRecord r;
    r.service_id = str(j, "id", where);
    r.provider = str(j, "provider", where);
    if (j.contains("properties")) {
        const json& props = j["properties"];
        if (!props.is_object()) bad(where + ".properties", "expected an object");
        for (const auto& [k, v] : props.items()) {
            if (!v.is_string()) bad(where + ".properties." + k, "expected a string");
            r.properties[k] = v.get<std::string>();
        }
    }
    r.process_doc = opt_str(j, "process_doc", where).value_or("");
    return r;
}

ScenarioEvent parse_event(const json& j, const std::string& where, const RouteGraph& g) {
    ScenarioEvent ev;
    ev.tick = integer(j, "tick", where);
    if (ev.tick < 0) bad(where + ".tick", "must be non-negative");
    std::string kind = str(j, "kind", where);
    auto k = kind_from_string(kind);
    if (!k) bad(where + ".kind", "unknown event kind '" + kind + "'");
    ev.kind = *k;
    if (j.contains("attack")) {
        if (!j["attack"].is_boolean()) bad(where + ".attack", "expected a boolean");
        ev.attack = j["attack"].get<bool>();
    }
    if (ev.kind == EventKind::booking) {
        BookingRequest b;
        b.booking_id = str(j, "booking_id", where);
        b.passenger_id = opt_str(j, "passenger", where).value_or("");
        b.origin_stop = str(j, "origin", where);
        if (!g.has_stop(b.origin_stop)) bad(where + ".origin", "unknown stop '" + b.origin_stop + "'");
        b.walk_seconds = j.contains("walk_seconds") ? integer(j, "walk_seconds", where) : 0;
        if (b.walk_seconds < 0) bad(where + ".walk_seconds", "must be non-negative");
        b.destination_stop = opt_str(j, "dest", where);
        if (b.destination_stop && !g.has_stop(*b.destination_stop))
            bad(where + ".dest", "unknown stop '" + *b.destination_stop + "'");
        b.tick = ev.tick;
        ev.booking = std::move(b);
        return ev;
    }
    ev.av = str(j, "av", where);
    ev.start_stop = opt_str(j, "start_stop", where);
    if (ev.start_stop && !g.has_stop(*ev.start_stop))
        bad(where + ".start_stop", "unknown stop '" + *ev.start_stop + "'");
    ev.secret = opt_str(j, "secret", where);
    if (j.contains("bulletins")) {
        for (const auto& b : j["bulletins"]) {
            if (!b.is_string()) bad(where + ".bulletins", "expected strings");
            ev.bulletins.push_back(b.get<std::string>());
        }
    }
    return ev;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, std::string_view policy_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario: malformed JSON: ") + e.what());
    }
    Scenario s;
    std::string mode = str(j, "mode", "scenario");
    if (mode == "A") s.mode = Mode::A;
    else if (mode == "B") s.mode = Mode::B;
    else bad("mode", "expected \"A\" or \"B\"");
    s.seed = j.contains("seed") ? static_cast<std::uint64_t>(integer(j, "seed", "scenario")) : 0;
    s.graph = parse_graph(field(j, "graph", "scenario"));

    std::set<std::string> av_ids;
    const json& avs = field(j, "avs", "scenario");
    if (!avs.is_array()) bad("avs", "expected an array");
    for (std::size_t i = 0; i < avs.size(); ++i) {
        std::string where = "avs[" + std::to_string(i) + "]";
        AvSpec a{str(avs[i], "id", where), str(avs[i], "start_stop", where), opt_str(avs[i], "secret", where).value_or("")};
        if (!s.graph.has_stop(a.start_stop)) bad(where + ".start_stop", "unknown stop '" + a.start_stop + "'");
        if (!av_ids.insert(a.id).second) bad(where + ".id", "duplicate AV id '" + a.id + "'");
        s.avs.push_back(std::move(a));
    }

    if (j.contains("services")) {
        if (!j["services"].is_array()) bad("services", "expected an array");
        for (std::size_t i = 0; i < j["services"].size(); ++i)
            s.services.push_back(parse_service(j["services"][i], "services[" + std::to_string(i) + "]"));
    }

    if (j.contains("pki")) {
        const json& p = j["pki"];
        s.pki.ca_key_hex = str(p, "ca_key", "pki");
        s.pki.ca_id = opt_str(p, "ca_id", "pki").value_or(s.pki.ca_id);
        if (p.contains("secrets")) {
            if (!p["secrets"].is_object()) bad("pki.secrets", "expected an object");
            for (const auto& [k, v] : p["secrets"].items()) {
                if (!v.is_string()) bad("pki.secrets." + k, "expected a string");
                s.pki.secrets[k] = v.get<std::string>();
            }
        }
        if (p.contains("cert_validity")) s.pki.cert_validity = integer(p, "cert_validity", "pki");
        if (s.pki.cert_validity < 1) bad("pki.cert_validity", "must be positive");
        try {
            pki::from_hex(s.pki.ca_key_hex);
        } catch (const std::invalid_argument& e) {
            bad("pki.ca_key", e.what());
        }
    } else if (s.mode == Mode::B) {
        bad("pki", "mode B needs a pki section");
    }

    const json& events = field(j, "events", "scenario");
    if (!events.is_array()) bad("events", "expected an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
        std::string where = "events[" + std::to_string(i) + "]";
        ScenarioEvent ev = parse_event(events[i], where, s.graph);
        if (!s.events.empty() && ev.tick < s.events.back().tick) bad(where + ".tick", "event ticks must be non-decreasing");
        if (ev.kind == EventKind::enroll && !av_ids.count(ev.av) && !ev.start_stop)
            bad(where, "enroll of unlisted AV '" + ev.av + "' needs start_stop");
        s.events.push_back(std::move(ev));
    }
    if (j.contains("end_tick")) s.end_tick = integer(j, "end_tick", "scenario");

    s.policies = policy::parse_policy_set(policy_text);
    return s;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading " + p.string());
    return ss.str();
}

Scenario load_scenario(const std::filesystem::path& scenario,
                       const std::optional<std::filesystem::path>& policies_override) {
    std::string text = read_file(scenario);
    std::filesystem::path pol_path;
    if (policies_override) {
        pol_path = *policies_override;
    } else {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ScenarioError(std::string("scenario: malformed JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("policies") || !j["policies"].is_string())
            throw ScenarioError("scenario: no policy file given (field 'policies' or --policies)");
        pol_path = scenario.parent_path() / j["policies"].get<std::string>();
    }
    std::string pol_text = read_file(pol_path);
    try {
        return parse_scenario(text, pol_text);
    } catch (const policy::PolicyError& e) {
        throw ScenarioError(pol_path.string() + ":" + e.what());
    }
}

}  // namespace paarc::sim
