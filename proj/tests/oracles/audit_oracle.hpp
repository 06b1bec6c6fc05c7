#pragma once
// Completeness rules for per-request audit traces.

#include "paarc/audit/audit_log.hpp"

#include <set>
#include <string>

namespace oracle {

// A request trace is complete when it is one of:
//   decision                                          (decision-only request)
//   [submit] find(not-found)
//   [submit] find(found) decision [outcome] notify    (outcome iff Permit)
// where `submit` is the device-domain record of the originating AV.
inline std::string check_request_trace(const std::vector<paarc::audit::AuditRecord>& recs) {
    using paarc::audit::Domain;
    if (recs.empty()) return "empty trace";
    for (std::size_t i = 1; i < recs.size(); ++i)
        if (recs[i].seq <= recs[i - 1].seq) return "not in seq order";
    std::size_t i = 0;
    if (recs.size() == 1 && recs[0].decision_effect) return {};
    if (recs[i].domain == Domain::device) ++i;
    if (i >= recs.size() || recs[i].action != "registry.find") return "missing registry lookup";
    if (recs[i].detail.rfind("not-found", 0) == 0) return i + 1 == recs.size() ? "" : "records after not-found";
    ++i;
    if (i >= recs.size() || !recs[i].decision_effect) return "missing decision";
    const bool permit = *recs[i].decision_effect == paarc::policy::Effect::permit;
    ++i;
    if (permit) {
        if (i >= recs.size() || recs[i].domain != Domain::application || recs[i].actor == "publisher")
            return "missing provider outcome";
        ++i;
    }
    if (i >= recs.size() || recs[i].action != "notify") return "missing notification";
    ++i;
    if (i != recs.size()) return "extra records";
    return {};
}

inline std::size_t decision_records(const paarc::audit::AuditLog& log) {
    std::size_t n = 0;
    for (const auto& r : log.records()) n += r.decision_effect.has_value();
    return n;
}

// Empty when every request id traces completely.
inline std::string check_all_traces(const paarc::audit::AuditLog& log) {
    std::set<std::string> ids;
    for (const auto& r : log.records())
        if (r.request_id) ids.insert(*r.request_id);
    for (const auto& id : ids) {
        auto why = check_request_trace(log.trace_request(id));
        if (!why.empty()) return id + ": " + why;
    }
    return {};
}

}  // namespace oracle
