#pragma once

#include "paarc/policy/policy.hpp"
#include "paarc/registry/registry.hpp"
#include "paarc/sim/fleet.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paarc::sim {

/// Schema or content problem in a scenario or its policy file.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AvSpec {
    std::string id;
    std::string start_stop;
    /// Proof the AV presents to the RA when enrolling.
    std::string secret;
};

enum class EventKind { enroll, withdraw, booking, telemetry, revoke_cert };

std::string_view to_string(EventKind k);

struct ScenarioEvent {
    std::int64_t tick = 0;
    EventKind kind = EventKind::enroll;
    std::string av;
    /// Ground-truth label: the action is an attack and must not succeed.
    bool attack = false;
    /// enroll: start stop for AVs not listed in `avs`, or a proof override.
    std::optional<std::string> start_stop;
    std::optional<std::string> secret;
    /// booking only.
    std::optional<BookingRequest> booking;
    /// telemetry only.
    std::vector<std::string> bulletins;
};

struct PkiConfig {
    std::string ca_id = "campus-ca";
    std::string ca_key_hex;
    std::map<std::string, std::string> secrets;
    std::int64_t cert_validity = 3600;
};

struct Scenario {
    Mode mode = Mode::A;
    std::uint64_t seed = 0;
    RouteGraph graph;
    std::vector<AvSpec> avs;
    std::vector<registry::ServiceRecord> services;
    std::vector<policy::Policy> policies;
    PkiConfig pki;
    std::vector<ScenarioEvent> events;
    /// Run at least until this tick even after the last scripted event.
    std::optional<std::int64_t> end_tick;

    std::int64_t final_tick() const;
};

/// Parses scenario JSON. `policy_text` is the content of the policy file
/// (the scenario's `policies` entry names it; the caller reads it).
/// Throws ScenarioError, or policy::PolicyError for the policy text.
Scenario parse_scenario(std::string_view json_text, std::string_view policy_text);

/// Reads the scenario and its policy file (`policies_override` replaces the
/// scenario's own `policies` path, which is relative to the scenario).
/// Throws IoError or ScenarioError.
Scenario load_scenario(const std::filesystem::path& scenario,
                       const std::optional<std::filesystem::path>& policies_override = {});

std::string read_file(const std::filesystem::path& p);

}  // namespace paarc::sim
