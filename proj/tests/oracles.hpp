#pragma once

// Independent reference implementations used only by tests. None of these
// call into the code they check, apart from the shared seeding and sampling
// primitives in random.hpp that "same seed" comparisons require.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oppnet/random.hpp"
#include "oppnet/trace.hpp"

namespace oracle {

using oppnet::Interval;
using oppnet::NodeId;

/// Contacts as a set of (interval, lo, hi).
using ContactSet = std::set<std::tuple<Interval, NodeId, NodeId>>;

inline ContactSet contact_set(const oppnet::ContactTrace& trace) {
    ContactSet s;
    for (const auto& e : trace.events()) s.emplace(e.interval, std::min(e.a, e.b), std::max(e.a, e.b));
    return s;
}

/// Distinct intervals in [t - delta + 1, t] with a contact between i and j.
inline std::uint32_t window_count(const ContactSet& contacts, Interval t, std::uint32_t delta,
                                  NodeId i, NodeId j) {
    const NodeId lo = std::min(i, j);
    const NodeId hi = std::max(i, j);
    std::uint32_t n = 0;
    const std::int64_t first = static_cast<std::int64_t>(t) - delta + 1;
    for (std::int64_t s = std::max<std::int64_t>(0, first); s <= t; ++s)
        if (contacts.count({static_cast<Interval>(s), lo, hi})) ++n;
    return n;
}

/// Line-by-line CSV reader: returns (interval, min id, max id) triples with
/// in-interval duplicates removed. External ids, no remapping.
inline std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> naive_parse(
    const std::string& text) {
    std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        const auto x = std::stoull(b);
        const auto y = std::stoull(c);
        out.emplace(std::stoull(a), std::min(x, y), std::max(x, y));
    }
    return out;
}

/// Straight-line rendition of the link-management algorithm: brute-force
/// window counts, std::map tables, linear-scan degree sampling.
struct NaiveParams {
    std::uint32_t delta, c_min;
    double omega, lambda_mag;
    std::uint32_t d_min, d_max;
};

struct NaiveNode {
    bool active = false;
    std::uint32_t desired = 0;
    std::map<NodeId, Interval> table;
    oppnet::Engine rng;
};

inline std::uint32_t naive_desired(const NaiveParams& p, oppnet::Engine& rng) {
    double z = 0.0;
    std::vector<double> cum;
    for (std::uint32_t k = p.d_min; k <= p.d_max; ++k) {
        z += std::pow(static_cast<double>(k), -p.lambda_mag);
        cum.push_back(z);
    }
    const double u = oppnet::uniform01(rng);
    for (std::uint32_t k = p.d_min; k <= p.d_max; ++k)
        if (u < cum[k - p.d_min] / z) return k;
    return p.d_max;
}

/// Final directed edges (src, dst, established_at).
inline std::vector<std::tuple<NodeId, NodeId, Interval>> naive_run(const oppnet::ContactTrace& trace,
                                                                   const NaiveParams& p,
                                                                   std::uint64_t seed) {
    const auto contacts = contact_set(trace);
    const NodeId n = trace.node_count();
    std::vector<NaiveNode> nodes(n);

    for (Interval t = 0; t < trace.num_intervals(); ++t) {
        for (const auto& [s, a, b] : contacts) {
            if (s != t) continue;
            for (const NodeId v : {a, b}) {
                if (nodes[v].active) continue;
                nodes[v].active = true;
                nodes[v].rng = oppnet::Engine(oppnet::derive_seed(seed, v));
                nodes[v].desired = naive_desired(p, nodes[v].rng);
            }
        }
        auto count = [&](NodeId i, NodeId j) { return window_count(contacts, t, p.delta, i, j); };

        for (NodeId i = 0; i < n; ++i) {
            auto& node = nodes[i];
            if (!node.active) continue;
            for (auto it = node.table.begin(); it != node.table.end();)
                it = count(i, it->first) == 0 ? node.table.erase(it) : std::next(it);

            std::vector<std::pair<std::uint32_t, NodeId>> cands;
            for (NodeId j = 0; j < n; ++j) {
                if (j == i || node.table.count(j)) continue;
                const auto c = count(i, j);
                if (c >= p.c_min) cands.emplace_back(c, j);
            }
            std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
                return x.first != y.first ? x.first > y.first : x.second < y.second;
            });
            for (const auto& [c, j] : cands) {
                if (node.table.size() < node.desired) {
                    node.table[j] = t;
                    continue;
                }
                if (!(oppnet::uniform01(node.rng) < p.omega)) continue;
                std::uint32_t lowest = ~0u;
                for (const auto& [peer, since] : node.table) lowest = std::min(lowest, count(i, peer));
                std::vector<NodeId> ties;
                for (const auto& [peer, since] : node.table)
                    if (count(i, peer) == lowest) ties.push_back(peer);
                node.table.erase(ties[oppnet::uniform_index(node.rng, ties.size())]);
                node.table[j] = t;
            }
        }
    }

    std::vector<std::tuple<NodeId, NodeId, Interval>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (const auto& [j, since] : nodes[i].table) edges.emplace_back(i, j, since);
    return edges;
}

/// Union-find component sizes over `active` nodes, descending.
inline std::vector<std::size_t> union_find_components(
    std::uint32_t n, const std::vector<bool>& active,
    const std::vector<std::pair<NodeId, NodeId>>& edges) {
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : edges) parent[find(a)] = find(b);
    std::map<NodeId, std::size_t> sizes;
    for (NodeId v = 0; v < n; ++v)
        if (active[v]) ++sizes[find(v)];
    std::vector<std::size_t> out;
    for (const auto& [root, s] : sizes) out.push_back(s);
    std::sort(out.rbegin(), out.rend());
    return out;
}

/// All-pairs BFS over the undirected projection, restricted to the node
/// set `members`. Returns (max distance, mean finite distance).
inline std::pair<std::uint32_t, double> all_pairs_bfs(
    std::uint32_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
    const std::vector<NodeId>& members) {
    std::vector<std::set<NodeId>> adj(n);
    for (const auto& [a, b] : edges) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::uint32_t diameter = 0;
    double sum = 0.0;
    std::uint64_t pairs = 0;
    for (const NodeId s : members) {
        std::vector<int> dist(n, -1);
        std::queue<NodeId> q;
        q.push(s);
        dist[s] = 0;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (const auto v : adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
        }
        for (NodeId v = 0; v < n; ++v)
            if (v != s && dist[v] > 0) {
                diameter = std::max<std::uint32_t>(diameter, dist[v]);
                sum += dist[v];
                ++pairs;
            }
    }
    return {diameter, pairs ? sum / pairs : 0.0};
}

/// Random normalized trace over dense ids.
inline oppnet::ContactTrace random_trace(std::uint64_t seed, std::uint32_t max_nodes,
                                         Interval max_intervals, std::uint32_t max_events) {
    oppnet::Engine rng(seed);
    const auto n = 2 + static_cast<std::uint32_t>(oppnet::uniform_index(rng, max_nodes - 1));
    const auto t = 1 + static_cast<Interval>(oppnet::uniform_index(rng, max_intervals));
    std::vector<oppnet::ContactEvent> events;
    for (Interval s = 0; s < t; ++s) {
        const auto k = oppnet::uniform_index(rng, max_events + 1);
        for (std::uint64_t e = 0; e < k; ++e) {
            const auto a = static_cast<NodeId>(oppnet::uniform_index(rng, n));
            auto b = static_cast<NodeId>(oppnet::uniform_index(rng, n - 1));
            if (b >= a) ++b;
            events.push_back({s, a, b});
        }
    }
    return oppnet::ContactTrace(n, t, std::move(events));
}

} // namespace oracle
