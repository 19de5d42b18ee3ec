#include "oppnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

namespace oppnet {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view text, const std::string& key) {
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        if constexpr (std::is_integral_v<T>)
            throw ConfigError(key + ": expected a nonnegative integer, got '" + std::string(text) + "'");
        else
            throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint32_t parse_positive(std::string_view text, const std::string& key) {
    const auto v = parse_number<std::uint32_t>(text, key);
    if (v < 1) throw ConfigError(key + " must be >= 1");
    return v;
}

} // namespace

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("range must be lo:hi, got '" + text + "'");
    const auto lo = parse_number<std::uint32_t>(std::string_view(text).substr(0, colon), "range lo");
    const auto hi = parse_number<std::uint32_t>(std::string_view(text).substr(colon + 1), "range hi");
    if (lo > hi) throw ConfigError("range lo exceeds hi in '" + text + "'");
    return {lo, hi};
}

SyntheticParams parse_synthetic_arg(const std::string& text) {
    std::vector<std::string_view> parts;
    std::string_view rest(text);
    while (true) {
        const auto colon = rest.find(':');
        parts.push_back(rest.substr(0, colon));
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    if (parts.size() != 4)
        throw ConfigError("--synthetic must be nodes:intervals:events:shape, got '" + text + "'");
    SyntheticParams p;
    p.num_nodes = parse_number<std::uint32_t>(parts[0], "synthetic nodes");
    p.num_intervals = parse_number<std::uint32_t>(parts[1], "synthetic intervals");
    p.events_per_interval = parse_number<std::uint32_t>(parts[2], "synthetic events");
    p.activity_shape = parse_number<double>(parts[3], "synthetic shape");
    p.validate();
    return p;
}

RunConfig parse_config(std::istream& input, RunConfig cfg) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(body.substr(0, eq)));
        const auto value = trim(body.substr(eq + 1));

        if (key == "delta") {
            cfg.overlay.delta = parse_positive(value, key);
        } else if (key == "cmin") {
            cfg.overlay.c_min = parse_positive(value, key);
        } else if (key == "dmin") {
            cfg.overlay.d_min = parse_positive(value, key);
        } else if (key == "dmax") {
            cfg.overlay.d_max = parse_positive(value, key);
        } else if (key == "omega") {
            const auto w = parse_number<double>(value, key);
            if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("omega out of [0,1]");
            cfg.overlay.omega = w;
        } else if (key == "lambda") {
            const auto l = parse_number<double>(value, key);
            if (!(l > 0.0) || !std::isfinite(l))
                throw ConfigError("lambda must be a positive finite magnitude");
            cfg.overlay.lambda_mag = l;
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(value, key);
        } else if (key == "fit_range") {
            cfg.fit_range = parse_range(std::string(value));
        } else if (key == "diameter_samples") {
            cfg.diameter_samples = parse_number<std::size_t>(value, key);
        } else if (key == "trace") {
            if (value.empty()) throw ConfigError("trace: empty path");
            cfg.source = std::string(value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

} // namespace oppnet
