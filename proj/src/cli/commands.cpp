#include "paarc/cli/commands.hpp"

#include "paarc/audit/audit_json.hpp"
#include "paarc/enforcement/pdp.hpp"
#include "paarc/policy/parser.hpp"
#include "paarc/sim/simulator.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

namespace paarc::cli {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

void write_file(const std::filesystem::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw sim::IoError("cannot write " + p.string());
    out << data;
    out.flush();
    if (!out) throw sim::IoError("error while writing " + p.string());
}

std::vector<policy::Policy> load_policies(const std::filesystem::path& p) {
    std::string text = sim::read_file(p);
    try {
        auto ps = policy::parse_policy_set(text);
        for (const auto& pol : ps) {
            if (auto why = policy::check_invariants(pol); !why.empty())
                throw sim::ScenarioError(p.string() + ": " + why);
        }
        return ps;
    } catch (const policy::PolicyError& e) {
        throw sim::ScenarioError(p.string() + ":" + e.what());
    }
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const sim::IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const sim::ScenarioError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const policy::PolicyError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

std::string matched_str(const policy::RuleRef& r) { return r.policy_id + "#" + std::to_string(r.rule_index); }

}  // namespace

int cmd_run(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& policies,
            const std::filesystem::path& out, bool as_json, std::ostream& os, std::ostream& err) {
    return guarded(err, [&] {
        sim::Simulator s(sim::load_scenario(scenario, policies));
        s.run();
        write_file(out, sim::render_report(s));

        const auto& t = s.tallies();
        std::set<std::string> kinds;
        for (const auto& [k, n] : t.accepted) kinds.insert(k);
        for (const auto& [k, n] : t.rejected) kinds.insert(k);
        auto count = [](const std::map<std::string, std::uint64_t>& m, const std::string& k) -> std::uint64_t {
            auto it = m.find(k);
            return it == m.end() ? 0 : it->second;
        };
        if (as_json) {
            ojson j;
            j["mode"] = std::string(sim::to_string(s.mode()));
            j["final_tick"] = s.now();
            ojson per = ojson::object();
            for (const auto& k : kinds) per[k] = {{"accepted", count(t.accepted, k)}, {"rejected", count(t.rejected, k)}};
            j["events"] = std::move(per);
            j["illegitimate_accepted"] = t.illegitimate_accepted;
            j["illegitimate_rejected"] = t.illegitimate_rejected;
            j["assignments"] = s.assignments().size();
            j["decisions"] = s.decisions_made();
            j["report"] = out.string();
            os << j.dump() << "\n";
        } else {
            os << "mode " << sim::to_string(s.mode()) << ", final tick " << s.now() << "\n";
            os << std::left << std::setw(14) << "event" << std::right << std::setw(10) << "accepted" << std::setw(10)
               << "rejected" << "\n";
            for (const auto& k : kinds) {
                os << std::left << std::setw(14) << k << std::right << std::setw(10) << count(t.accepted, k)
                   << std::setw(10) << count(t.rejected, k) << "\n";
            }
            os << "illegitimate actions: " << t.illegitimate_accepted << " accepted, " << t.illegitimate_rejected
               << " rejected\n";
            os << "assignments: " << s.assignments().size() << ", decisions: " << s.decisions_made() << "\n";
            os << "report written to " << out.string() << "\n";
        }
        return int(kOk);
    });
}

int cmd_policy_check(const std::filesystem::path& policies, bool as_json, std::ostream& os, std::ostream& err) {
    return guarded(err, [&] {
        auto ps = load_policies(policies);
        if (as_json) os << ojson{{"policies", ps.size()}, {"ok", true}}.dump() << "\n";
        else os << ps.size() << " policies OK\n";
        return int(kOk);
    });
}

int cmd_eval(const std::filesystem::path& request, const std::filesystem::path& policies, std::ostream& os,
             std::ostream& err) {
    return guarded(err, [&] {
        json j;
        try {
            j = json::parse(sim::read_file(request));
        } catch (const json::parse_error& e) {
            throw sim::ScenarioError(request.string() + ": malformed JSON: " + e.what());
        }
        if (!j.is_object()) throw sim::ScenarioError(request.string() + ": expected an object");
        enforcement::ServiceRequest req;
        auto text = [&](const char* key) -> std::string {
            if (!j.contains(key)) return "";
            if (!j[key].is_string()) throw sim::ScenarioError(request.string() + ": '" + key + "' must be a string");
            return j[key].get<std::string>();
        };
        req.request_id = text("request_id");
        req.requester = text("requester");
        req.service_id = text("service_id");
        req.action = text("action");
        if (j.contains("attrs")) {
            if (!j["attrs"].is_object()) throw sim::ScenarioError(request.string() + ": 'attrs' must be an object");
            for (const auto& [k, v] : j["attrs"].items()) {
                policy::AttrPath path = policy::AttrPath::parse(k);
                if (v.is_boolean()) req.attrs.set(path, v.get<bool>());
                else if (v.is_number_integer()) req.attrs.set(path, v.get<std::int64_t>());
                else if (v.is_string()) req.attrs.set(path, v.get<std::string>());
                else throw sim::ScenarioError(request.string() + ": attribute '" + k + "' must be string, integer or boolean");
            }
        }
        enforcement::PolicyStoreSnapshot snap{0, load_policies(policies)};
        enforcement::ServiceDataRepository empty;
        enforcement::Pip pip(empty);
        auto r = enforcement::pdp_decide(req, snap, &pip);

        ojson out;
        out["effect"] = std::string(policy::to_string(r.decision.effect));
        ojson matched = ojson::array();
        for (const auto& m : r.decision.matched) matched.push_back(matched_str(m));
        out["matched"] = std::move(matched);
        ojson missing = ojson::array();
        for (const auto& m : r.decision.missing) missing.push_back(m.str());
        out["missing"] = std::move(missing);
        out["obligations"] = r.decision.obligations;
        os << out.dump() << "\n";
        return int(kOk);
    });
}

int cmd_audit(const std::filesystem::path& report, const AuditQuery& q, bool as_json, std::ostream& os,
              std::ostream& err) {
    return guarded(err, [&] {
        json j;
        try {
            j = json::parse(sim::read_file(report));
        } catch (const json::parse_error& e) {
            throw sim::ScenarioError(report.string() + ": malformed JSON: " + e.what());
        }
        audit::AuditLog log = audit::log_from_report(j);

        audit::AuditFilter f;
        if (q.domain) {
            f.domain = audit::domain_from_string(*q.domain);
            if (!f.domain) throw std::invalid_argument("unknown domain '" + *q.domain + "'");
        }
        if (q.effect) {
            f.effect = policy::effect_from_string(*q.effect);
            if (!f.effect) throw std::invalid_argument("unknown effect '" + *q.effect + "'");
        }
        f.actor = q.actor;
        f.action = q.action;
        f.tick_from = q.tick_from;
        f.tick_to = q.tick_to;

        std::vector<audit::AuditRecord> hits;
        if (q.request_id) {
            for (auto& r : log.trace_request(*q.request_id))
                if (f.matches(r)) hits.push_back(std::move(r));
        } else {
            hits = log.query(f);
        }

        if (as_json) {
            ojson arr = ojson::array();
            for (const auto& r : hits) arr.push_back(audit::record_to_json(r));
            os << arr.dump() << "\n";
            return int(kOk);
        }
        for (const auto& r : hits) {
            os << std::right << std::setw(6) << r.seq << std::setw(7) << r.tick << "  " << std::left << std::setw(12)
               << audit::to_string(r.domain) << std::setw(14) << r.actor << std::setw(22) << r.action
               << std::setw(12) << r.request_id.value_or("-") << std::setw(15)
               << (r.decision_effect ? std::string(policy::to_string(*r.decision_effect)) : "-") << r.detail << "\n";
        }
        return int(kOk);
    });
}

}  // namespace paarc::cli
