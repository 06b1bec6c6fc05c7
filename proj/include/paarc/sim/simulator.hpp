#pragma once

#include "paarc/audit/audit_log.hpp"
#include "paarc/enforcement/events.hpp"
#include "paarc/enforcement/pep.hpp"
#include "paarc/pki/pki.hpp"
#include "paarc/sim/scenario.hpp"

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace paarc::sim {

/// Outcome of one fleet/CU operation. `reason` is empty on a plain accept;
/// rejections carry a short code ("not-enrolled", "cert-expired", ...).
struct ActionResult {
    bool accepted = false;
    std::string reason;
    std::optional<std::string> request_id;
    std::optional<policy::Effect> effect;
};

struct Assignment {
    std::string booking_id;
    std::string av_id;
    std::int64_t av_eta = 0;
    std::int64_t passenger_eta = 0;
    std::int64_t tick = 0;
};

struct LogEntry {
    std::int64_t tick = 0;
    std::string kind;
    std::string subject;
    std::string outcome;  // accepted | rejected | info
    std::string detail;
};

struct Tallies {
    std::map<std::string, std::uint64_t> accepted;
    std::map<std::string, std::uint64_t> rejected;
    std::uint64_t illegitimate_accepted = 0;
    std::uint64_t illegitimate_rejected = 0;
};

/// Service ids the control unit exposes through the registry.
inline constexpr const char* kFleetService = "fleet";
inline constexpr const char* kTelemetryService = "telemetry";

/// Deterministic, single-threaded discrete-event model of the campus
/// shuttle service. In mode A the control unit trusts every message; in
/// mode B enrollment goes through RA/CA, and every fleet action is
/// validated by the VA and decided by the policy engine.
class Simulator {
public:
    explicit Simulator(Scenario scenario);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    Mode mode() const noexcept { return scenario_.mode; }
    std::int64_t now() const noexcept { return tick_; }
    const Scenario& scenario() const noexcept { return scenario_; }

    /// `proof` overrides the secret listed for the AV. Unknown AVs need a
    /// start stop.
    ActionResult enroll_av(const std::string& av_id, const std::optional<std::string>& proof = {},
                           const std::optional<std::string>& start_stop = {});
    ActionResult withdraw_av(const std::string& av_id);
    ActionResult submit_telemetry(const Telemetry& t);
    ActionResult handle_booking(const BookingRequest& b);
    /// Revokes the AV's certificate and fires the `cert-revoked` policy
    /// event; a `withdraw-av` obligation withdraws the AV.
    ActionResult revoke_cert(const std::string& av_id);

    /// Telemetry as the AV would report it now (also used for forged ids).
    Telemetry telemetry_for(const std::string& av_id) const;

    /// Advances one second, moves the fleet, then dispatches the events
    /// scripted for the new tick. Returns the log entries emitted.
    std::vector<LogEntry> step();
    /// Dispatches tick-0 events, then steps to the scenario's final tick.
    void run();
    bool finished() const;

    const Fleet& fleet() const noexcept { return fleet_; }
    const AvState* find_av(const std::string& id) const;
    const RouteGraph& graph() const noexcept { return scenario_.graph; }

    const audit::AuditLog& audit() const noexcept { return audit_; }
    enforcement::PolicyStore& policy_store() noexcept { return store_; }
    registry::ServiceRegistry& service_registry() noexcept { return registry_; }
    pki::CertificateAuthority& ca() noexcept { return *ca_; }
    const pki::ValidationAuthority& va() const noexcept { return va_; }
    const enforcement::Publisher& publisher() const noexcept { return publisher_; }
    std::uint64_t decisions_made() const noexcept { return pdp_.decisions_made(); }

    const std::vector<Assignment>& assignments() const noexcept { return assignments_; }
    const std::vector<std::string>& unserved_bookings() const noexcept { return unserved_; }
    const Tallies& tallies() const noexcept { return tallies_; }
    const std::vector<LogEntry>& log() const noexcept { return log_; }

private:
    std::string next_request_id();
    AvState& ensure_av(const std::string& id, const std::string& stop);
    void note(const std::string& kind, const std::string& subject, const std::string& outcome, const std::string& detail);
    void audit_record(audit::Domain domain, const std::string& actor, const std::string& action,
                      const std::string& detail, const std::optional<std::string>& request_id = {});
    void set_route_state(AvState& av, RouteState next);
    void sync_subject(const AvState& av);
    void complete_withdrawal(AvState& av);
    void assign(AvState& av, const BookingRequest& b, std::int64_t eta);
    void move(AvState& av);
    ActionResult dispatch(const ScenarioEvent& ev);
    void dispatch_due();
    enforcement::EnforcementResult enforce(const std::string& request_id, const std::string& av_id,
                                           const std::string& service, const std::string& action, std::string payload);
    std::string rejection_for(const enforcement::EnforcementResult& r) const;

    Scenario scenario_;
    Fleet fleet_;
    std::map<std::string, std::string> presented_secrets_;

    registry::ServiceRegistry registry_;
    enforcement::PolicyStore store_;
    enforcement::ServiceDataRepository repo_;
    enforcement::Pip pip_{repo_};
    enforcement::Pdp pdp_{&pip_};
    audit::AuditLog audit_;
    enforcement::Publisher publisher_;
    enforcement::Pep pep_{registry_, store_, pdp_, audit_};
    enforcement::ServiceProvider cu_provider_;

    pki::RegistrationAuthority ra_;
    std::unique_ptr<pki::CertificateAuthority> ca_;
    pki::ValidationAuthority va_;
    std::mt19937_64 rng_;

    std::int64_t tick_ = 0;
    std::uint64_t next_request_ = 1;
    std::size_t next_event_ = 0;
    bool started_ = false;

    std::vector<Assignment> assignments_;
    std::vector<std::string> unserved_;
    Tallies tallies_;
    std::vector<LogEntry> log_;
};

/// Report JSON: mode, seed, final tick, event log, assignments, tallies,
/// fleet summary, notifications, decision count and the audit log.
/// Key order and formatting are fixed so equal runs give equal bytes.
std::string render_report(const Simulator& sim);

}  // namespace paarc::sim
