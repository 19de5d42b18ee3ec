#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oppnet/overlay.hpp"

namespace oppnet {

enum class DegreeKind { Out, In };

/// Degree -> node count over the active nodes of a snapshot.
class DegreeHistogram {
public:
    DegreeHistogram() = default;
    explicit DegreeHistogram(std::span<const std::uint32_t> degrees);

    const std::map<std::uint32_t, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t total() const noexcept { return total_; }
    bool empty() const noexcept { return total_ == 0; }

    std::uint64_t count(std::uint32_t d) const;
    double pmf(std::uint32_t d) const;
    /// P(D >= d).
    double ccdf(std::uint32_t d) const;
    double mean() const;

    /// (degree, pmf) for every observed degree, ascending.
    std::vector<std::pair<std::uint32_t, double>> pmf_points() const;

private:
    std::map<std::uint32_t, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Degrees of active nodes only; inactive nodes are not part of the network.
std::vector<std::uint32_t> active_degrees(const OverlaySnapshot& snapshot,
                                          DegreeKind which = DegreeKind::Out);
DegreeHistogram degree_histogram(const OverlaySnapshot& snapshot,
                                 DegreeKind which = DegreeKind::Out);

enum class FitMethod { LogLogLeastSquares, DiscreteMle };

struct FitResult {
    FitMethod method = FitMethod::LogLogLeastSquares;
    /// LSQ: the log-log slope (negative for a decaying law). MLE: alpha-hat,
    /// the positive exponent magnitude.
    double exponent = 0.0;
    std::optional<double> intercept;
    std::optional<double> r_squared;
    std::optional<double> ks_distance;
    std::uint32_t range_lo = 0;
    std::uint32_t range_hi = 0;
    std::size_t points = 0;  ///< bins (LSQ) or samples (MLE) used
};

std::string to_string(FitMethod m);

/// Ordinary least squares of log10 pmf on log10 d over nonzero bins with
/// d in [lo, hi] (degree 0 never enters). Needs >= 3 points.
FitResult loglog_lsq_fit(std::span<const std::pair<std::uint32_t, double>> pmf_points,
                         std::uint32_t lo, std::uint32_t hi);
FitResult loglog_lsq_fit(const DegreeHistogram& hist, std::uint32_t lo, std::uint32_t hi);

/// Continuous-approximation discrete power-law MLE:
///   alpha = 1 + n / sum ln(x_i / (x_min - 0.5))  over x_i >= x_min,
/// with the KS distance between the empirical and fitted ccdf over the
/// observed values. Needs >= 10 samples at or above x_min, not all equal.
FitResult mle_powerlaw_fit(std::span<const std::uint32_t> samples, std::uint32_t x_min);

/// Weakly connected component sizes over active nodes, descending.
std::vector<std::size_t> weakly_connected_components(const OverlaySnapshot& snapshot);

struct DiameterEstimate {
    std::uint32_t diameter_lower_bound = 0;
    double mean_shortest_path = 0.0;
    std::size_t sources = 0;
    std::size_t component_size = 0;
};

/// BFS from `sample_size` nodes of the largest weakly connected component on
/// the undirected projection. Sources are a seeded shuffle prefix, so a
/// larger sample always contains a smaller one.
DiameterEstimate estimate_diameter(const OverlaySnapshot& snapshot, std::size_t sample_size,
                                   std::uint64_t seed);

} // namespace oppnet
