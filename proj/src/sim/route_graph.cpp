#include "paarc/sim/route_graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace paarc::sim {

void RouteGraph::add_stop(Stop s) {
    if (stops_.count(s.id)) throw std::invalid_argument("duplicate stop '" + s.id + "'");
    std::string id = s.id;
    stops_.emplace(std::move(id), std::move(s));
}

void RouteGraph::add_edge(Edge e) {
    if (!has_stop(e.from)) throw UnknownStop(e.from);
    if (!has_stop(e.to)) throw UnknownStop(e.to);
    if (e.seconds < 1)
        throw std::invalid_argument("edge " + e.from + "->" + e.to + " needs travel time >= 1 s");
    out_[e.from].push_back(edges_.size());
    edges_.push_back(std::move(e));
}

std::vector<Edge> RouteGraph::edges_from(const std::string& id) const {
    std::vector<Edge> out;
    if (auto it = out_.find(id); it != out_.end()) {
        for (auto i : it->second) out.push_back(edges_[i]);
    }
    return out;
}

std::optional<std::int64_t> RouteGraph::edge_seconds(const std::string& from, const std::string& to) const {
    std::optional<std::int64_t> best;
    if (auto it = out_.find(from); it != out_.end()) {
        for (auto i : it->second) {
            if (edges_[i].to == to && (!best || edges_[i].seconds < *best)) best = edges_[i].seconds;
        }
    }
    return best;
}

RouteGraph RouteGraph::scaled(std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("scale factor must be >= 1");
    RouteGraph g;
    for (const auto& [_, s] : stops_) g.add_stop(s);
    for (auto e : edges_) {
        e.seconds *= k;
        g.add_edge(std::move(e));
    }
    return g;
}

namespace {

struct Search {
    std::map<std::string, std::int64_t> dist;
    std::map<std::string, std::string> prev;
};

Search dijkstra(const RouteGraph& g, const std::string& from) {
    if (!g.has_stop(from)) throw UnknownStop(from);
    Search s;
    using Item = std::pair<std::int64_t, std::string>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    s.dist[from] = 0;
    pq.emplace(0, from);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != s.dist[u]) continue;
        for (const auto& e : g.edges_from(u)) {
            std::int64_t nd = d + e.seconds;
            auto it = s.dist.find(e.to);
            bool better = it == s.dist.end() || nd < it->second;
            bool tie_smaller = it != s.dist.end() && nd == it->second && e.to != from && u < s.prev[e.to];
            if (better) {
                s.dist[e.to] = nd;
                s.prev[e.to] = u;
                pq.emplace(nd, e.to);
            } else if (tie_smaller) {
                s.prev[e.to] = u;
            }
        }
    }
    return s;
}

}  // namespace

std::int64_t compute_eta(const RouteGraph& g, const std::string& from, const std::string& to) {
    if (!g.has_stop(to)) throw UnknownStop(to);
    Search s = dijkstra(g, from);
    auto it = s.dist.find(to);
    if (it == s.dist.end()) throw Unreachable(from, to);
    return it->second;
}

std::vector<std::string> shortest_path(const RouteGraph& g, const std::string& from, const std::string& to) {
    if (!g.has_stop(to)) throw UnknownStop(to);
    Search s = dijkstra(g, from);
    if (!s.dist.count(to)) throw Unreachable(from, to);
    std::vector<std::string> path;
    for (std::string cur = to; cur != from; cur = s.prev.at(cur)) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace paarc::sim
