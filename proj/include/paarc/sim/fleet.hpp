#pragma once

#include "paarc/pki/pki.hpp"
#include "paarc/sim/route_graph.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace paarc::sim {

enum class Mode { A, B };
enum class Lifecycle { unenrolled, enrolled, withdrawn };
enum class RouteState { idle, running, near_finish };

std::string_view to_string(Mode m);
std::string_view to_string(Lifecycle l);
std::string_view to_string(RouteState r);

/// Remaining route time at or below which a running AV is near-finish.
inline constexpr std::int64_t kNearFinishSeconds = 60;

struct Telemetry {
    std::string av_id;
    std::string location;
    std::vector<std::string> route_paths;
    std::vector<std::string> service_bulletins;
    std::vector<std::string> stop_list;
    RouteState route_state = RouteState::idle;
    std::int64_t tick = 0;
};

struct AvState {
    std::string av_id;
    Lifecycle lifecycle = Lifecycle::unenrolled;
    RouteState route_state = RouteState::idle;
    /// Last stop reached. While `elapsed > 0` the AV is on the edge
    /// `at -> route.front()`.
    std::string at;
    std::int64_t elapsed = 0;
    /// Stops still to visit, next first.
    std::vector<std::string> route;
    /// Itinerary queued behind the current one (assigned while near-finish).
    std::vector<std::string> pending_route;
    bool has_pending_route = false;
    bool withdraw_pending = false;
    std::optional<pki::Certificate> cert;
    std::optional<Telemetry> last_telemetry;

    bool on_edge() const noexcept { return elapsed > 0; }
    /// Current stop when stationary, edge head when moving.
    const std::string& nearest_stop() const;
    std::string location_label() const;
};

/// Seconds left on the current route: rest of the current edge plus every
/// following edge.
std::int64_t remaining_route_seconds(const AvState& av, const RouteGraph& g);

struct BookingRequest {
    std::string booking_id;
    std::string passenger_id;
    std::string origin_stop;
    std::int64_t walk_seconds = 0;
    std::optional<std::string> destination_stop;
    std::int64_t tick = 0;
};

class NoEligibleVehicle : public std::runtime_error {
public:
    explicit NoEligibleVehicle(const std::string& booking)
        : std::runtime_error("no eligible vehicle for booking '" + booking + "'") {}
};

using Fleet = std::map<std::string, AvState>;

struct Election {
    std::string av_id;
    std::int64_t av_eta = 0;
};

/// Extra gate applied (lazily, in ETA order) on top of the state filter.
using EligibilityCheck = std::function<bool(const AvState&)>;

/// Picks the enrolled idle/near-finish AV with the smallest ETA from its
/// nearest stop to the booking origin; ties go to the smaller av_id. AVs
/// already committed elsewhere (pending withdrawal or queued itinerary) or
/// unable to reach the origin are skipped. Throws NoEligibleVehicle.
Election elect_vehicle(const BookingRequest& b, const Fleet& fleet, const RouteGraph& g,
                       const EligibilityCheck& extra = {});

}  // namespace paarc::sim
