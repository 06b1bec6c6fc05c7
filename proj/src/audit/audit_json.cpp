#include "paarc/audit/audit_json.hpp"

#include <stdexcept>

namespace paarc::audit {

nlohmann::ordered_json record_to_json(const AuditRecord& r) {
    nlohmann::ordered_json j;
    j["seq"] = r.seq;
    j["tick"] = r.tick;
    j["domain"] = std::string(to_string(r.domain));
    j["actor"] = r.actor;
    j["action"] = r.action;
    j["request_id"] = r.request_id ? nlohmann::ordered_json(*r.request_id) : nlohmann::ordered_json(nullptr);
    j["decision_effect"] = r.decision_effect ? nlohmann::ordered_json(std::string(policy::to_string(*r.decision_effect)))
                                             : nlohmann::ordered_json(nullptr);
    j["policy_ids"] = r.policy_ids;
    j["detail"] = r.detail;
    return j;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("audit record: " + what); }

const nlohmann::json& need(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing field '") + key + "'");
    return *it;
}

}  // namespace

AuditRecord record_from_json(const nlohmann::json& j) {
    if (!j.is_object()) bad("expected an object");
    AuditRecord r;
    try {
        r.seq = need(j, "seq").get<std::uint64_t>();
        r.tick = need(j, "tick").get<std::int64_t>();
        auto d = domain_from_string(need(j, "domain").get<std::string>());
        if (!d) bad("unknown domain");
        r.domain = *d;
        r.actor = need(j, "actor").get<std::string>();
        r.action = need(j, "action").get<std::string>();
        if (j.contains("request_id") && !j["request_id"].is_null()) r.request_id = j["request_id"].get<std::string>();
        if (j.contains("decision_effect") && !j["decision_effect"].is_null()) {
            auto e = policy::effect_from_string(j["decision_effect"].get<std::string>());
            if (!e) bad("unknown decision_effect");
            r.decision_effect = *e;
        }
        if (j.contains("policy_ids")) r.policy_ids = j["policy_ids"].get<std::vector<std::string>>();
        if (j.contains("detail")) r.detail = j["detail"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
    return r;
}

AuditLog log_from_report(const nlohmann::json& report) {
    if (!report.is_object() || !report.contains("audit") || !report["audit"].is_array())
        throw std::invalid_argument("report has no 'audit' array");
    std::vector<AuditRecord> records;
    for (const auto& j : report["audit"]) records.push_back(record_from_json(j));
    return AuditLog(std::move(records));
}

}  // namespace paarc::audit
