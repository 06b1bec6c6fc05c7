#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paarc::sim {

class UnknownStop : public std::runtime_error {
public:
    explicit UnknownStop(const std::string& id) : std::runtime_error("unknown stop '" + id + "'") {}
};

class Unreachable : public std::runtime_error {
public:
    Unreachable(const std::string& from, const std::string& to)
        : std::runtime_error("no route from '" + from + "' to '" + to + "'") {}
};

struct Stop {
    std::string id;
    double x = 0;
    double y = 0;
};

struct Edge {
    std::string from;
    std::string to;
    std::int64_t seconds = 1;
};

/// Campus stops with directed, positively weighted travel times.
class RouteGraph {
public:
    /// Throws std::invalid_argument on a duplicate id.
    void add_stop(Stop s);
    /// Throws UnknownStop, or std::invalid_argument when seconds < 1.
    void add_edge(Edge e);

    bool has_stop(const std::string& id) const { return stops_.count(id) != 0; }
    const std::map<std::string, Stop>& stops() const noexcept { return stops_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    /// Outgoing edges of `id` in insertion order.
    std::vector<Edge> edges_from(const std::string& id) const;
    /// Cheapest direct edge, if any.
    std::optional<std::int64_t> edge_seconds(const std::string& from, const std::string& to) const;

    /// Copy with every travel time multiplied by k (k >= 1).
    RouteGraph scaled(std::int64_t k) const;

private:
    std::map<std::string, Stop> stops_;
    std::vector<Edge> edges_;
    std::map<std::string, std::vector<std::size_t>> out_;
};

/// Minimum travel time (Dijkstra). Throws UnknownStop or Unreachable.
std::int64_t compute_eta(const RouteGraph& g, const std::string& from, const std::string& to);

/// Stops visited after `from` along a minimum-time path, ending with `to`
/// (empty when from == to). Ties resolve toward the lexicographically
/// smaller predecessor, so the result is deterministic.
std::vector<std::string> shortest_path(const RouteGraph& g, const std::string& from, const std::string& to);

}  // namespace paarc::sim
