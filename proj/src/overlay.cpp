#include "oppnet/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oppnet {

void OverlayConfig::validate() const {
    if (delta < 1) throw ConfigError("delta must be >= 1");
    if (c_min < 1) throw ConfigError("cmin must be >= 1");
    if (!(omega >= 0.0 && omega <= 1.0)) throw ConfigError("omega out of [0,1]");
    if (!(lambda_mag > 0.0) || !std::isfinite(lambda_mag))
        throw ConfigError("lambda must be a positive finite magnitude");
    if (d_min < 1) throw ConfigError("dmin must be >= 1");
    if (d_min > d_max) throw ConfigError("dmin must not exceed dmax");
}

std::vector<std::string> OverlayConfig::warnings() const {
    std::vector<std::string> out;
    if (lambda_mag < 2.0 || lambda_mag > 3.0)
        out.push_back("lambda " + std::to_string(lambda_mag) +
                      " outside the usual scale-free range [2, 3]");
    if (c_min > delta)
        out.push_back("cmin exceeds delta: no link can ever be established");
    return out;
}

DegreeDistribution::DegreeDistribution(std::uint32_t d_min, std::uint32_t d_max,
                                       double lambda_mag)
    : d_min_(d_min), d_max_(d_max) {
    OverlayConfig probe;
    probe.d_min = d_min;
    probe.d_max = d_max;
    probe.lambda_mag = lambda_mag;
    probe.validate();

    const std::size_t n = static_cast<std::size_t>(d_max) - d_min + 1;
    std::vector<double> weight(n);
    for (std::size_t k = 0; k < n; ++k)
        weight[k] = std::pow(static_cast<double>(d_min + k), -lambda_mag);

    std::vector<double> partial(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += weight[k];
        partial[k] = sum;
    }
    normalizer_ = sum;

    pmf_.resize(n);
    cdf_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        pmf_[k] = weight[k] / normalizer_;
        cdf_[k] = partial[k] / normalizer_;
    }
    cdf_.back() = 1.0;
}

double DegreeDistribution::pmf(std::int64_t d) const {
    if (d < d_min_ || d > d_max_) return 0.0;
    return pmf_[static_cast<std::size_t>(d - d_min_)];
}

std::uint32_t DegreeDistribution::sample(Engine& engine) const {
    const double u = uniform01(engine);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return d_min_ + static_cast<std::uint32_t>(it - cdf_.begin());
}

bool NodeState::has_neighbor(NodeId j) const {
    const auto it = std::lower_bound(neighbors.begin(), neighbors.end(), j,
                                     [](const NeighborEntry& e, NodeId p) { return e.peer < p; });
    return it != neighbors.end() && it->peer == j;
}

void activate_node(NodeState& state, NodeId i, Interval t, const DegreeDistribution& dist,
                   std::uint64_t global_seed) {
    if (state.active) throw std::logic_error("node " + std::to_string(i) + " activated twice");
    state.active = true;
    state.activated_at = t;
    state.rng = node_engine(global_seed, i);
    state.desired_degree = dist.sample(state.rng);
    state.neighbors.clear();
}

std::vector<NodeId> expire_links(NodeState& state, const ContactWindow& window, NodeId i) {
    std::vector<NodeId> removed;
    std::erase_if(state.neighbors, [&](const NeighborEntry& e) {
        if (window.contact_count(i, e.peer) > 0) return false;
        removed.push_back(e.peer);
        return true;
    });
    return removed;
}

namespace {

/// Returns the insertion index.
std::size_t insert_neighbor(NodeState& state, NodeId j, Interval t) {
    const auto it = std::lower_bound(state.neighbors.begin(), state.neighbors.end(), j,
                                     [](const NeighborEntry& e, NodeId p) { return e.peer < p; });
    const auto at = static_cast<std::size_t>(it - state.neighbors.begin());
    state.neighbors.insert(it, NeighborEntry{j, t});
    return at;
}

} // namespace

ChangeLog process_candidates(NodeState& state, const ContactWindow& window, NodeId i,
                             Interval t, const OverlayConfig& config) {
    ChangeLog log;

    struct Candidate {
        NodeId peer;
        std::uint32_t count;
    };
    std::vector<Candidate> candidates;
    for (const auto& c : window.peers(i))
        if (c.count >= config.c_min && !state.has_neighbor(c.peer))
            candidates.push_back({c.peer, c.count});
    // peers() is ascending by id, so a stable sort on count keeps id order on ties.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.count > y.count; });

    // Window counts of the current neighbors, aligned with state.neighbors;
    // counts are fixed for the rest of this step.
    std::vector<std::uint32_t> neighbor_counts;
    bool counts_ready = false;
    std::vector<std::size_t> weakest;
    for (const auto& cand : candidates) {
        if (state.neighbors.size() < state.desired_degree) {
            insert_neighbor(state, cand.peer, t);
            log.adds.push_back(cand.peer);
            continue;
        }
        if (!(uniform01(state.rng) < config.omega)) continue;

        if (!counts_ready) {
            neighbor_counts.clear();
            for (const auto& n : state.neighbors)
                neighbor_counts.push_back(window.contact_count(i, n.peer));
            counts_ready = true;
        }
        const auto min_count = *std::min_element(neighbor_counts.begin(), neighbor_counts.end());
        weakest.clear();
        for (std::size_t k = 0; k < neighbor_counts.size(); ++k)
            if (neighbor_counts[k] == min_count) weakest.push_back(k);
        const auto pick = weakest[uniform_index(state.rng, weakest.size())];
        const NodeId evicted = state.neighbors[pick].peer;
        state.neighbors.erase(state.neighbors.begin() + static_cast<std::ptrdiff_t>(pick));
        neighbor_counts.erase(neighbor_counts.begin() + static_cast<std::ptrdiff_t>(pick));
        const auto at = insert_neighbor(state, cand.peer, t);
        neighbor_counts.insert(neighbor_counts.begin() + static_cast<std::ptrdiff_t>(at), cand.count);
        log.replacements.push_back({evicted, cand.peer});
    }
    return log;
}

std::vector<std::uint32_t> OverlaySnapshot::out_degrees() const {
    std::vector<std::uint32_t> deg(node_count, 0);
    for (const auto& e : edges) ++deg[e.src];
    return deg;
}

std::vector<std::uint32_t> OverlaySnapshot::in_degrees() const {
    std::vector<std::uint32_t> deg(node_count, 0);
    for (const auto& e : edges) ++deg[e.dst];
    return deg;
}

std::size_t OverlaySnapshot::active_count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

OverlayEngine::OverlayEngine(const OverlayConfig& config, std::uint32_t node_count,
                             std::uint64_t seed)
    : config_(config), dist_(config), seed_(seed),
      window_(WindowParams{config.delta}, node_count), nodes_(node_count),
      last_changes_(node_count) {
    config_.validate();
}

IntervalSummary OverlayEngine::step(std::span<const ContactEvent> interval_events) {
    const Interval t = window_.next_interval();
    window_.advance(interval_events);

    IntervalSummary summary;
    summary.interval = t;

    bool newcomers = false;
    for (const auto& e : interval_events) {
        for (const NodeId n : {e.a, e.b}) {
            if (nodes_[n].active) continue;
            activate_node(nodes_[n], n, t, dist_, seed_);
            activation_order_.push_back(n);
            active_ids_.push_back(n);
            ++summary.activated;
            newcomers = true;
        }
    }
    if (newcomers) std::sort(active_ids_.begin(), active_ids_.end());

    for (const NodeId i : active_ids_) {
        auto& state = nodes_[i];
        auto& changes = last_changes_[i];
        changes.adds.clear();
        changes.replacements.clear();

        summary.expiries += expire_links(state, window_, i).size();
        if (window_.peers(i).empty()) continue;
        changes = process_candidates(state, window_, i, t, config_);
        summary.adds += changes.adds.size() + changes.replacements.size();
        summary.replacements += changes.replacements.size();
        if (state.neighbors.size() > state.desired_degree)
            throw std::logic_error("degree cap violated at node " + std::to_string(i));
    }

    edge_count_ += summary.adds;
    edge_count_ -= summary.expiries + summary.replacements;
    summary.edges = edge_count_;
    summary.mean_degree = active_ids_.empty()
                              ? 0.0
                              : static_cast<double>(edge_count_) /
                                    static_cast<double>(active_ids_.size());
    return summary;
}

OverlaySnapshot OverlayEngine::snapshot() const {
    OverlaySnapshot snap;
    snap.interval = window_.current_interval();
    snap.node_count = static_cast<std::uint32_t>(nodes_.size());
    snap.active.resize(nodes_.size());
    snap.desired_degree.resize(nodes_.size());
    snap.edges.reserve(edge_count_);
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        const auto& s = nodes_[i];
        snap.active[i] = s.active;
        snap.desired_degree[i] = s.active ? s.desired_degree : 0;
        for (const auto& e : s.neighbors) snap.edges.push_back({i, e.peer, e.established_at});
    }
    return snap;
}

} // namespace oppnet
