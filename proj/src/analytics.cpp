#include "oppnet/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace oppnet {

DegreeHistogram::DegreeHistogram(std::span<const std::uint32_t> degrees) {
    for (const auto d : degrees) ++counts_[d];
    total_ = degrees.size();
}

std::uint64_t DegreeHistogram::count(std::uint32_t d) const {
    const auto it = counts_.find(d);
    return it == counts_.end() ? 0 : it->second;
}

double DegreeHistogram::pmf(std::uint32_t d) const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(count(d)) / static_cast<double>(total_);
}

double DegreeHistogram::ccdf(std::uint32_t d) const {
    if (total_ == 0) return 0.0;
    std::uint64_t at_least = 0;
    for (auto it = counts_.lower_bound(d); it != counts_.end(); ++it) at_least += it->second;
    return static_cast<double>(at_least) / static_cast<double>(total_);
}

double DegreeHistogram::mean() const {
    if (total_ == 0) return 0.0;
    double sum = 0.0;
    for (const auto& [d, c] : counts_) sum += static_cast<double>(d) * static_cast<double>(c);
    return sum / static_cast<double>(total_);
}

std::vector<std::pair<std::uint32_t, double>> DegreeHistogram::pmf_points() const {
    std::vector<std::pair<std::uint32_t, double>> out;
    out.reserve(counts_.size());
    for (const auto& [d, c] : counts_)
        out.emplace_back(d, static_cast<double>(c) / static_cast<double>(total_));
    return out;
}

std::vector<std::uint32_t> active_degrees(const OverlaySnapshot& snapshot, DegreeKind which) {
    const auto all = which == DegreeKind::Out ? snapshot.out_degrees() : snapshot.in_degrees();
    std::vector<std::uint32_t> out;
    out.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        if (snapshot.active[i]) out.push_back(all[i]);
    return out;
}

DegreeHistogram degree_histogram(const OverlaySnapshot& snapshot, DegreeKind which) {
    const auto degrees = active_degrees(snapshot, which);
    return DegreeHistogram(degrees);
}

std::string to_string(FitMethod m) {
    return m == FitMethod::LogLogLeastSquares ? "loglog_lsq" : "discrete_mle";
}

FitResult loglog_lsq_fit(std::span<const std::pair<std::uint32_t, double>> pmf_points,
                         std::uint32_t lo, std::uint32_t hi) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::uint32_t seen_lo = 0;
    std::uint32_t seen_hi = 0;
    for (const auto& [d, p] : pmf_points) {
        if (d == 0 || d < lo || d > hi || !(p > 0.0)) continue;
        if (xs.empty()) seen_lo = d;
        seen_hi = d;
        xs.push_back(std::log10(static_cast<double>(d)));
        ys.push_back(std::log10(p));
    }
    if (xs.size() < 3) throw AnalysisError("insufficient support");

    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mx;
        const double dy = ys[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    FitResult r;
    r.method = FitMethod::LogLogLeastSquares;
    r.exponent = sxy / sxx;
    r.intercept = my - r.exponent * mx;
    // A flat line has zero residual; treat it as a perfect fit.
    r.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    r.range_lo = seen_lo;
    r.range_hi = seen_hi;
    r.points = xs.size();
    return r;
}

FitResult loglog_lsq_fit(const DegreeHistogram& hist, std::uint32_t lo, std::uint32_t hi) {
    const auto points = hist.pmf_points();
    return loglog_lsq_fit(points, lo, hi);
}

FitResult mle_powerlaw_fit(std::span<const std::uint32_t> samples, std::uint32_t x_min) {
    if (x_min < 1) throw AnalysisError("x_min must be >= 1");
    std::vector<std::uint32_t> tail;
    for (const auto x : samples)
        if (x >= x_min) tail.push_back(x);
    if (tail.empty()) throw AnalysisError("all samples below x_min");
    if (tail.size() < 10) throw AnalysisError("insufficient samples at or above x_min");
    std::sort(tail.begin(), tail.end());
    if (tail.front() == tail.back()) throw AnalysisError("degenerate sample");

    const double shift = static_cast<double>(x_min) - 0.5;
    double log_sum = 0.0;
    for (const auto x : tail) log_sum += std::log(static_cast<double>(x) / shift);
    const double n = static_cast<double>(tail.size());
    const double alpha = 1.0 + n / log_sum;

    // Compare P(X >= x) at every distinct observed x.
    double ks = 0.0;
    for (std::size_t k = 0; k < tail.size();) {
        const auto x = tail[k];
        const double empirical = (n - static_cast<double>(k)) / n;
        const double fitted = std::pow((static_cast<double>(x) - 0.5) / shift, 1.0 - alpha);
        ks = std::max(ks, std::abs(empirical - fitted));
        while (k < tail.size() && tail[k] == x) ++k;
    }

    FitResult r;
    r.method = FitMethod::DiscreteMle;
    r.exponent = alpha;
    r.ks_distance = ks;
    r.range_lo = x_min;
    r.range_hi = tail.back();
    r.points = tail.size();
    return r;
}

namespace {

/// Undirected adjacency over all snapshot nodes; edges deduplicated.
std::vector<std::vector<NodeId>> undirected_adjacency(const OverlaySnapshot& snapshot) {
    std::vector<std::vector<NodeId>> adj(snapshot.node_count);
    for (const auto& e : snapshot.edges) {
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

/// Component label per node (-1 for inactive) and the member lists.
std::vector<std::vector<NodeId>> components(const OverlaySnapshot& snapshot,
                                            const std::vector<std::vector<NodeId>>& adj) {
    std::vector<std::vector<NodeId>> out;
    std::vector<bool> seen(snapshot.node_count, false);
    for (NodeId s = 0; s < snapshot.node_count; ++s) {
        if (!snapshot.active[s] || seen[s]) continue;
        std::vector<NodeId> members{s};
        seen[s] = true;
        for (std::size_t head = 0; head < members.size(); ++head)
            for (const NodeId v : adj[members[head]])
                if (!seen[v]) {
                    seen[v] = true;
                    members.push_back(v);
                }
        out.push_back(std::move(members));
    }
    return out;
}

} // namespace

std::vector<std::size_t> weakly_connected_components(const OverlaySnapshot& snapshot) {
    const auto adj = undirected_adjacency(snapshot);
    std::vector<std::size_t> sizes;
    for (const auto& c : components(snapshot, adj)) sizes.push_back(c.size());
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

DiameterEstimate estimate_diameter(const OverlaySnapshot& snapshot, std::size_t sample_size,
                                   std::uint64_t seed) {
    if (sample_size < 1) throw AnalysisError("sample_size must be >= 1");
    const auto adj = undirected_adjacency(snapshot);
    auto comps = components(snapshot, adj);
    if (comps.empty()) throw AnalysisError("no active nodes");

    // Largest component; ties go to the one found first (lowest member id).
    std::size_t best = 0;
    for (std::size_t c = 1; c < comps.size(); ++c)
        if (comps[c].size() > comps[best].size()) best = c;
    auto members = std::move(comps[best]);
    std::sort(members.begin(), members.end());

    Engine engine(derive_seed(seed, 0x64696121ULL));
    for (std::size_t k = members.size(); k > 1; --k)
        std::swap(members[k - 1], members[uniform_index(engine, k)]);

    DiameterEstimate est;
    est.component_size = members.size();
    est.sources = std::min(sample_size, members.size());

    std::vector<std::int64_t> dist(snapshot.node_count, -1);
    std::vector<NodeId> frontier;
    double dist_sum = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t s = 0; s < est.sources; ++s) {
        const NodeId src = members[s];
        std::fill(dist.begin(), dist.end(), -1);
        frontier.assign(1, src);
        dist[src] = 0;
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            const NodeId u = frontier[head];
            for (const NodeId v : adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    frontier.push_back(v);
                }
        }
        for (std::size_t k = 1; k < frontier.size(); ++k) {
            const auto d = dist[frontier[k]];
            dist_sum += static_cast<double>(d);
            ++pairs;
            est.diameter_lower_bound =
                std::max(est.diameter_lower_bound, static_cast<std::uint32_t>(d));
        }
    }
    est.mean_shortest_path = pairs == 0 ? 0.0 : dist_sum / static_cast<double>(pairs);
    return est;
}

} // namespace oppnet
