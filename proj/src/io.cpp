#include "oppnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace oppnet {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::string histogram_csv(const DegreeHistogram& hist) {
    std::ostringstream out;
    out << "degree,count,pmf,ccdf\n";
    // Running tail sum keeps the ccdf column O(n).
    std::uint64_t remaining = hist.total();
    for (const auto& [d, c] : hist.counts()) {
        const double total = static_cast<double>(hist.total());
        out << d << ',' << c << ',' << format_double(static_cast<double>(c) / total) << ','
            << format_double(static_cast<double>(remaining) / total) << '\n';
        remaining -= c;
    }
    return out.str();
}

std::string edges_csv(const OverlaySnapshot& snapshot, std::span<const std::uint64_t> ids) {
    std::ostringstream out;
    out << "src,dst,established_at\n";
    for (const auto& e : snapshot.edges)
        out << ids[e.src] << ',' << ids[e.dst] << ',' << e.established_at << '\n';
    return out.str();
}

std::string nodes_csv(const OverlaySnapshot& snapshot, std::span<const std::uint64_t> ids) {
    const auto out_deg = snapshot.out_degrees();
    const auto in_deg = snapshot.in_degrees();
    std::ostringstream out;
    out << "node,desired_degree,out_degree,in_degree\n";
    for (NodeId i = 0; i < snapshot.node_count; ++i)
        if (snapshot.active[i])
            out << ids[i] << ',' << snapshot.desired_degree[i] << ',' << out_deg[i] << ','
                << in_deg[i] << '\n';
    return out.str();
}

std::string node_map_csv(std::span<const std::uint64_t> ids) {
    std::ostringstream out;
    out << "dense,external\n";
    for (std::size_t i = 0; i < ids.size(); ++i) out << i << ',' << ids[i] << '\n';
    return out.str();
}

std::string series_csv(std::span<const IntervalSummary> series) {
    std::ostringstream out;
    out << "interval,activated,adds,expiries,replacements,edges,mean_degree\n";
    for (const auto& s : series)
        out << s.interval << ',' << s.activated << ',' << s.adds << ',' << s.expiries << ','
            << s.replacements << ',' << s.edges << ',' << format_double(s.mean_degree) << '\n';
    return out.str();
}

nlohmann::ordered_json fit_to_json(const FitOutcome& outcome, FitMethod method,
                                   std::pair<std::uint32_t, std::uint32_t> requested) {
    nlohmann::ordered_json j;
    j["method"] = to_string(method);
    j["requested_range"] = {requested.first, requested.second};
    if (!outcome.fit) {
        j["error"] = outcome.error;
        return j;
    }
    const auto& f = *outcome.fit;
    auto optional_number = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["exponent"] = f.exponent;
    j["intercept"] = optional_number(f.intercept);
    j["r_squared"] = optional_number(f.r_squared);
    j["ks_distance"] = optional_number(f.ks_distance);
    j["range"] = {f.range_lo, f.range_hi};
    j["points"] = f.points;
    return j;
}

std::string fit_json(const SnapshotReport& report, std::pair<std::uint32_t, std::uint32_t> fit_range,
                     std::uint32_t x_min) {
    nlohmann::ordered_json j;
    j["degree_kind"] = "out";
    j["nodes"] = report.out_hist.total();
    j["fits"] = {fit_to_json(report.lsq, FitMethod::LogLogLeastSquares, fit_range),
                 fit_to_json(report.mle, FitMethod::DiscreteMle, {x_min, x_min})};
    return j.dump(2) + "\n";
}

nlohmann::ordered_json graph_metrics_json(const SnapshotReport& report) {
    nlohmann::ordered_json j;
    j["active_nodes"] = report.out_hist.total();
    j["mean_out_degree"] = report.out_hist.mean();
    j["fraction_below_dmin"] = report.fraction_below_dmin;
    j["fraction_at_desired"] = report.fraction_at_desired;
    j["components"] = {{"count", report.component_sizes.size()},
                       {"largest", report.component_sizes.empty() ? 0 : report.component_sizes[0]}};
    if (report.diameter) {
        j["diameter"] = {{"lower_bound", report.diameter->diameter_lower_bound},
                         {"mean_shortest_path", report.diameter->mean_shortest_path},
                         {"sources", report.diameter->sources},
                         {"component_size", report.diameter->component_size}};
    } else {
        j["diameter"] = nullptr;
    }
    return j;
}

std::string snapshot_summary_json(const OverlaySnapshot& snapshot,
                                  std::span<const std::uint64_t> ids) {
    nlohmann::ordered_json j;
    j["interval"] = snapshot.interval ? nlohmann::ordered_json(*snapshot.interval) : nlohmann::ordered_json();
    j["node_count"] = snapshot.active_count();
    j["edge_count"] = snapshot.edges.size();
    auto& desired = j["desired_degrees"] = nlohmann::ordered_json::array();
    for (NodeId i = 0; i < snapshot.node_count; ++i)
        if (snapshot.active[i]) desired.push_back({ids[i], snapshot.desired_degree[i]});
    return j.dump(2) + "\n";
}

namespace {

std::vector<std::vector<std::uint64_t>> read_csv_rows(const std::filesystem::path& path,
                                                      std::size_t columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<std::vector<std::uint64_t>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const bool header = first && !std::isdigit(static_cast<unsigned char>(line.front()));
        first = false;
        if (header) continue;
        std::vector<std::uint64_t> row;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            const auto field = rest.substr(0, comma);
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{} || ptr != field.data() + field.size())
                throw DataError(path.string() + ": line " + std::to_string(line_no) +
                                ": malformed field '" + std::string(field) + "'");
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (row.size() != columns)
            throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(columns) + " fields");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

SavedSnapshot read_saved_snapshot(const std::filesystem::path& edges,
                                  const std::optional<std::filesystem::path>& nodes) {
    const auto edge_rows = read_csv_rows(edges, 3);
    std::vector<std::vector<std::uint64_t>> node_rows;
    if (nodes) node_rows = read_csv_rows(*nodes, 4);

    std::vector<std::uint64_t> ids;
    for (const auto& r : edge_rows) {
        ids.push_back(r[0]);
        ids.push_back(r[1]);
    }
    for (const auto& r : node_rows) ids.push_back(r[0]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    auto dense = [&](std::uint64_t id) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    SavedSnapshot saved;
    auto& s = saved.snapshot;
    s.node_count = static_cast<std::uint32_t>(ids.size());
    s.active.assign(ids.size(), nodes ? false : true);
    s.desired_degree.assign(ids.size(), 0);
    for (const auto& r : node_rows) {
        const auto i = dense(r[0]);
        s.active[i] = true;
        s.desired_degree[i] = static_cast<std::uint32_t>(r[1]);
    }
    Interval latest = 0;
    for (const auto& r : edge_rows) {
        if (r[0] == r[1]) throw DataError(edges.string() + ": self loop");
        const Edge e{dense(r[0]), dense(r[1]), static_cast<Interval>(r[2])};
        if (!s.active[e.src] || !s.active[e.dst])
            throw DataError(edges.string() + ": edge endpoint missing from node table");
        s.edges.push_back(e);
        latest = std::max(latest, e.established_at);
    }
    std::sort(s.edges.begin(), s.edges.end());
    if (std::adjacent_find(s.edges.begin(), s.edges.end(), [](const Edge& a, const Edge& b) {
            return a.src == b.src && a.dst == b.dst;
        }) != s.edges.end())
        throw DataError(edges.string() + ": duplicate edge");
    if (!s.edges.empty()) s.interval = latest;
    saved.ids = std::move(ids);
    return saved;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    write_file_atomic(path, [&](std::ostream& out) { out << content; });
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        writer(out);
        out.flush();
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw DataError("cannot rename '" + tmp.string() + "': " + ec.message());
}

} // namespace oppnet
