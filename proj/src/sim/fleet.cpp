#include "paarc/sim/fleet.hpp"

#include <algorithm>
#include <tuple>

namespace paarc::sim {

std::string_view to_string(Mode m) {
    return m == Mode::A ? "A" : "B";
}

std::string_view to_string(Lifecycle l) {
    switch (l) {
    case Lifecycle::unenrolled: return "unenrolled";
    case Lifecycle::enrolled: return "enrolled";
    case Lifecycle::withdrawn: return "withdrawn";
    }
    return "?";
}

std::string_view to_string(RouteState r) {
    switch (r) {
    case RouteState::idle: return "idle";
    case RouteState::running: return "running";
    case RouteState::near_finish: return "near-finish";
    }
    return "?";
}

const std::string& AvState::nearest_stop() const {
    return on_edge() ? route.front() : at;
}

std::string AvState::location_label() const {
    if (!on_edge()) return at;
    return at + "->" + route.front() + "@" + std::to_string(elapsed);
}

std::int64_t remaining_route_seconds(const AvState& av, const RouteGraph& g) {
    std::int64_t total = 0;
    std::string from = av.at;
    for (std::size_t i = 0; i < av.route.size(); ++i) {
        auto s = g.edge_seconds(from, av.route[i]);
        if (!s) throw Unreachable(from, av.route[i]);
        total += *s;
        from = av.route[i];
    }
    return total - av.elapsed;
}

Election elect_vehicle(const BookingRequest& b, const Fleet& fleet, const RouteGraph& g, const EligibilityCheck& extra) {
    if (!g.has_stop(b.origin_stop)) throw UnknownStop(b.origin_stop);
    std::vector<std::tuple<std::int64_t, std::string, const AvState*>> ranked;
    for (const auto& [id, av] : fleet) {
        if (av.lifecycle != Lifecycle::enrolled || av.withdraw_pending || av.has_pending_route) continue;
        if (av.route_state == RouteState::running) continue;
        try {
            ranked.emplace_back(compute_eta(g, av.nearest_stop(), b.origin_stop), id, &av);
        } catch (const Unreachable&) {
        }
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& l, const auto& r) { return std::tie(std::get<0>(l), std::get<1>(l)) < std::tie(std::get<0>(r), std::get<1>(r)); });
    for (const auto& [eta, id, av] : ranked) {
        if (!extra || extra(*av)) return {id, eta};
    }
    throw NoEligibleVehicle(b.booking_id);
}

}  // namespace paarc::sim
