#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "oppnet/analytics.hpp"

using namespace oppnet;

namespace {

OverlaySnapshot make_snapshot(std::uint32_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    OverlaySnapshot s;
    s.node_count = n;
    s.active.assign(n, true);
    s.desired_degree.assign(n, 1);
    for (const auto& [a, b] : edges) s.edges.push_back({a, b, 0});
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

OverlaySnapshot random_snapshot(std::uint64_t seed, std::uint32_t n, std::size_t m) {
    Engine rng(seed);
    std::set<std::pair<NodeId, NodeId>> edges;
    for (std::size_t k = 0; k < m; ++k) {
        const auto a = static_cast<NodeId>(uniform_index(rng, n));
        const auto b = static_cast<NodeId>(uniform_index(rng, n));
        if (a != b) edges.emplace(a, b);
    }
    auto s = make_snapshot(n, {edges.begin(), edges.end()});
    // a few inactive, isolated nodes
    for (NodeId v = 0; v < n; ++v) {
        bool touched = false;
        for (const auto& e : s.edges) touched |= e.src == v || e.dst == v;
        if (!touched && v % 2 == 0) s.active[v] = false;
    }
    return s;
}

std::vector<std::pair<NodeId, NodeId>> pairs_of(const OverlaySnapshot& s) {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& e : s.edges) out.emplace_back(e.src, e.dst);
    return out;
}

std::vector<std::pair<std::uint32_t, double>> exact_power_law(std::uint32_t lo, std::uint32_t hi,
                                                              double lambda) {
    double z = 0.0;
    for (std::uint32_t d = lo; d <= hi; ++d) z += std::pow(d, -lambda);
    std::vector<std::pair<std::uint32_t, double>> pmf;
    for (std::uint32_t d = lo; d <= hi; ++d) pmf.emplace_back(d, std::pow(d, -lambda) / z);
    return pmf;
}

} // namespace

TEST_CASE("star graph histogram") {
    const std::uint32_t k = 6;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId leaf = 1; leaf <= k; ++leaf) edges.emplace_back(0, leaf);
    const auto hist = degree_histogram(make_snapshot(k + 1, edges));
    CHECK(hist.counts() == std::map<std::uint32_t, std::uint64_t>{{0, k}, {k, 1}});
    CHECK(hist.total() == k + 1);
    CHECK(hist.pmf(0) == doctest::Approx(6.0 / 7.0));
    CHECK(hist.ccdf(1) == doctest::Approx(1.0 / 7.0));
    CHECK(hist.ccdf(0) == doctest::Approx(1.0));

    const auto in = degree_histogram(make_snapshot(k + 1, edges), DegreeKind::In);
    CHECK(in.counts() == std::map<std::uint32_t, std::uint64_t>{{0, 1}, {1, k}});
}

TEST_CASE("histogram of random snapshots equals a per-node tally") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = random_snapshot(seed, 30, 40);
        const auto hist = degree_histogram(s);
        std::vector<std::uint32_t> table_size(s.node_count, 0);
        for (const auto& e : s.edges) ++table_size[e.src];
        std::map<std::uint32_t, std::uint64_t> tally;
        for (NodeId v = 0; v < s.node_count; ++v)
            if (s.active[v]) ++tally[table_size[v]];
        CHECK(hist.counts() == tally);
        CHECK(hist.total() == s.active_count());
        double sum = 0.0;
        for (const auto& [d, p] : hist.pmf_points()) sum += p;
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    CHECK(degree_histogram(OverlaySnapshot{}).empty());
}

TEST_CASE("LSQ recovers an exact power law") {
    const auto pmf = exact_power_law(5, 100, 2.5);
    const auto fit = loglog_lsq_fit(pmf, 5, 100);
    CHECK(std::abs(fit.exponent + 2.5) < 1e-9);
    CHECK(std::abs(*fit.r_squared - 1.0) < 1e-9);
    CHECK(fit.points == 96);
    CHECK(fit.range_lo == 5);
    CHECK(fit.range_hi == 100);
    // the intercept is log10 of 1/Z
    double z = 0.0;
    for (int d = 5; d <= 100; ++d) z += std::pow(d, -2.5);
    CHECK(*fit.intercept == doctest::Approx(-std::log10(z)).epsilon(1e-9));
}

TEST_CASE("LSQ of a uniform pmf is flat") {
    std::vector<std::pair<std::uint32_t, double>> pmf;
    for (std::uint32_t d = 5; d <= 100; ++d) pmf.emplace_back(d, 1.0 / 96.0);
    const auto fit = loglog_lsq_fit(pmf, 5, 100);
    CHECK(std::abs(fit.exponent) < 1e-12);
}

TEST_CASE("LSQ of a perturbed law matches closed-form least squares") {
    Engine rng(4);
    auto pmf = exact_power_law(5, 100, 2.5);
    for (auto& [d, p] : pmf) p *= std::exp(0.3 * (uniform01(rng) - 0.5));
    const auto fit = loglog_lsq_fit(pmf, 10, 80);

    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [d, p] : pmf) {
        if (d < 10 || d > 80) continue;
        const double x = std::log(d), y = std::log(p);  // natural logs: same slope
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(fit.exponent == doctest::Approx(slope).epsilon(1e-9));
    CHECK(fit.points == 71);
    CHECK(*fit.r_squared < 1.0);
    CHECK(*fit.r_squared > 0.9);
}

TEST_CASE("LSQ needs three nonzero bins and skips degree 0") {
    const std::vector<std::pair<std::uint32_t, double>> pmf{{0, 0.5}, {5, 0.3}, {6, 0.0}, {7, 0.2}};
    CHECK_THROWS_WITH_AS(loglog_lsq_fit(pmf, 0, 100), "insufficient support", AnalysisError);
}

TEST_CASE("MLE error paths") {
    const std::vector<std::uint32_t> flat(50, 5);
    CHECK_THROWS_WITH_AS(mle_powerlaw_fit(flat, 5), "degenerate sample", AnalysisError);
    const std::vector<std::uint32_t> low{1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3};
    CHECK_THROWS_AS(mle_powerlaw_fit(low, 5), AnalysisError);
    const std::vector<std::uint32_t> few{5, 6, 7};
    CHECK_THROWS_AS(mle_powerlaw_fit(few, 5), AnalysisError);
}

TEST_CASE("MLE on sampler draws lands near the true exponent") {
    const DegreeDistribution dist(5, 100, 2.5);
    Engine e(31415);
    std::vector<std::uint32_t> samples(100'000);
    for (auto& s : samples) s = dist.sample(e);
    const auto fit = mle_powerlaw_fit(samples, 5);
    MESSAGE("alpha " << fit.exponent << " ks " << *fit.ks_distance);
    CHECK(fit.exponent >= 2.3);
    CHECK(fit.exponent <= 2.7);
    CHECK(*fit.ks_distance < 0.05);
    CHECK(fit.points == samples.size());

    SUBCASE("order and duplication do not matter") {
        auto shuffled = samples;
        for (std::size_t k = shuffled.size(); k > 1; --k)
            std::swap(shuffled[k - 1], shuffled[uniform_index(e, k)]);
        CHECK(mle_powerlaw_fit(shuffled, 5).exponent == fit.exponent);

        std::vector<std::uint32_t> doubled;
        for (const auto s : samples) {
            doubled.push_back(s);
            doubled.push_back(s);
        }
        CHECK(mle_powerlaw_fit(doubled, 5).exponent == doctest::Approx(fit.exponent).epsilon(1e-12));
    }
}

TEST_CASE("weakly connected components") {
    CHECK(weakly_connected_components(make_snapshot(5, {})) == std::vector<std::size_t>(5, 1));
    CHECK(weakly_connected_components(make_snapshot(4, {{0, 1}, {1, 2}, {2, 3}})) ==
          std::vector<std::size_t>{4});
    CHECK(weakly_connected_components(make_snapshot(4, {{3, 2}, {1, 2}, {1, 0}})) ==
          std::vector<std::size_t>{4});

    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto s = random_snapshot(seed, 40, 25);
        const auto sizes = weakly_connected_components(s);
        CHECK(sizes == oracle::union_find_components(s.node_count, s.active, pairs_of(s)));
        CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == s.active_count());

        // relabel v -> n - 1 - v
        OverlaySnapshot r = s;
        std::reverse(r.active.begin(), r.active.end());
        for (auto& e : r.edges) e = {s.node_count - 1 - e.src, s.node_count - 1 - e.dst, 0};
        std::sort(r.edges.begin(), r.edges.end());
        CHECK(weakly_connected_components(r) == sizes);
    }
}

TEST_CASE("diameter of simple graphs") {
    const auto path = make_snapshot(5, {{0, 1}, {2, 1}, {2, 3}, {3, 4}});
    const auto est = estimate_diameter(path, 5, 1);
    CHECK(est.diameter_lower_bound == 4);
    CHECK(est.sources == 5);
    CHECK(est.mean_shortest_path == doctest::Approx(2.0));

    std::vector<std::pair<NodeId, NodeId>> complete;
    for (NodeId a = 0; a < 6; ++a)
        for (NodeId b = a + 1; b < 6; ++b) complete.emplace_back(a, b);
    CHECK(estimate_diameter(make_snapshot(6, complete), 6, 1).diameter_lower_bound == 1);

    CHECK_THROWS_AS(estimate_diameter(path, 0, 1), AnalysisError);
    CHECK_THROWS_AS(estimate_diameter(OverlaySnapshot{}, 3, 1), AnalysisError);
}

TEST_CASE("full-sample diameter equals all-pairs BFS on the largest component") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto s = random_snapshot(seed + 100, 35, 30);
        const auto est = estimate_diameter(s, s.node_count, seed);

        // largest component, lowest member id on ties
        const auto pairs = pairs_of(s);
        std::vector<NodeId> parent(s.node_count);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<NodeId(NodeId)> find = [&](NodeId x) {
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        for (const auto& [a, b] : pairs) parent[find(a)] = find(b);
        std::map<NodeId, std::vector<NodeId>> groups;
        for (NodeId v = 0; v < s.node_count; ++v)
            if (s.active[v]) groups[find(v)].push_back(v);
        const std::vector<NodeId>* best = nullptr;
        for (const auto& [root, members] : groups)
            if (!best || members.size() > best->size() ||
                (members.size() == best->size() && members.front() < best->front()))
                best = &members;

        const auto [diameter, mean] = oracle::all_pairs_bfs(s.node_count, pairs, *best);
        CHECK(est.component_size == best->size());
        CHECK(est.diameter_lower_bound == diameter);
        CHECK(est.mean_shortest_path == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("diameter estimate grows with the sample") {
    const auto s = random_snapshot(7, 300, 380);
    std::uint32_t previous = 0;
    for (std::size_t k = 1; k <= 300; k += 7) {
        const auto est = estimate_diameter(s, k, 42);
        CHECK(est.diameter_lower_bound >= previous);
        previous = est.diameter_lower_bound;
    }
}
