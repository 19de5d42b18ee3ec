#pragma once

// Flat `key = value` run configuration. Recognized keys:
//
//   delta, cmin, dmin, dmax, diameter_samples   positive integers
//   omega                                       real in [0, 1]
//   lambda                                      positive real (exponent magnitude)
//   seed                                        nonnegative integer
//   fit_range                                   lo:hi
//   trace                                       path to a trace CSV
//
// `#` starts a comment line. Unknown keys are errors. Missing keys keep the
// library defaults (delta 5, lambda 2.5, dmin 5, dmax 100, cmin 1, omega 0.25).

#include <istream>
#include <string>
#include <utility>

#include "oppnet/simulator.hpp"

namespace oppnet {

RunConfig parse_config(std::istream& input, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Parses "lo:hi" with lo <= hi.
std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text);

/// Parses "nodes:intervals:events_per_interval:activity_shape".
SyntheticParams parse_synthetic_arg(const std::string& text);

} // namespace oppnet
