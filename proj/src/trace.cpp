#include "oppnet/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "oppnet/random.hpp"

namespace oppnet {

void normalize_events(std::vector<ContactEvent>& events) {
    for (auto& e : events)
        if (e.a > e.b) std::swap(e.a, e.b);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
}

ContactTrace::ContactTrace(std::uint32_t node_count, Interval num_intervals,
                           std::vector<ContactEvent> events,
                           std::vector<std::uint64_t> external_ids)
    : node_count_(node_count), num_intervals_(num_intervals), events_(std::move(events)),
      external_ids_(std::move(external_ids)) {
    for (const auto& e : events_) {
        if (e.a == e.b)
            throw DataError("self contact for node " + std::to_string(e.a));
        if (e.a >= node_count_ || e.b >= node_count_)
            throw DataError("contact references node outside [0, " +
                            std::to_string(node_count_) + ")");
        if (e.interval >= num_intervals_)
            throw DataError("contact at interval " + std::to_string(e.interval) +
                            " beyond trace length " + std::to_string(num_intervals_));
    }
    normalize_events(events_);

    if (external_ids_.empty()) {
        external_ids_.resize(node_count_);
        for (std::uint32_t n = 0; n < node_count_; ++n) external_ids_[n] = n;
    } else if (external_ids_.size() != node_count_) {
        throw DataError("external id table size does not match node count");
    } else if (!std::is_sorted(external_ids_.begin(), external_ids_.end()) ||
               std::adjacent_find(external_ids_.begin(), external_ids_.end()) !=
                   external_ids_.end()) {
        throw DataError("external ids must be strictly increasing");
    }

    offsets_.assign(static_cast<std::size_t>(num_intervals_) + 1, 0);
    for (const auto& e : events_) ++offsets_[e.interval + 1];
    for (std::size_t t = 1; t < offsets_.size(); ++t) offsets_[t] += offsets_[t - 1];
}

std::span<const ContactEvent> ContactTrace::events_at(Interval t) const {
    if (t >= num_intervals_)
        throw std::out_of_range("interval " + std::to_string(t) + " outside trace");
    return std::span<const ContactEvent>(events_).subspan(offsets_[t],
                                                          offsets_[t + 1] - offsets_[t]);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct RawEvent {
    std::uint64_t interval;
    std::uint64_t a;
    std::uint64_t b;
};

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_field(std::string_view field, std::size_t line_no, const char* name) {
    field = trim(field);
    if (field.empty()) fail_line(line_no, std::string("missing ") + name);
    if (field.front() == '-') fail_line(line_no, std::string("negative ") + name);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        fail_line(line_no, std::string("malformed ") + name + " '" + std::string(field) + "'");
    return value;
}

} // namespace

ContactTrace parse_trace(std::istream& input, TraceFormat format) {
    if (format != TraceFormat::Csv) throw DataError("unsupported trace format");

    std::vector<RawEvent> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;

        const auto c1 = body.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
        if (c2 == std::string_view::npos || body.find(',', c2 + 1) != std::string_view::npos)
            fail_line(line_no, "expected 3 comma-separated fields");

        RawEvent ev{parse_field(body.substr(0, c1), line_no, "interval"),
                    parse_field(body.substr(c1 + 1, c2 - c1 - 1), line_no, "node_a"),
                    parse_field(body.substr(c2 + 1), line_no, "node_b")};
        if (ev.a == ev.b) fail_line(line_no, "self contact for node " + std::to_string(ev.a));
        if (ev.interval >= std::numeric_limits<Interval>::max())
            fail_line(line_no, "interval out of range");
        raw.push_back(ev);
    }
    if (raw.empty()) throw DataError("no events");

    std::vector<std::uint64_t> ids;
    ids.reserve(raw.size() * 2);
    for (const auto& r : raw) {
        ids.push_back(r.a);
        ids.push_back(r.b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > std::numeric_limits<NodeId>::max()) throw DataError("too many nodes");

    std::unordered_map<std::uint64_t, NodeId> dense;
    dense.reserve(ids.size());
    for (std::size_t n = 0; n < ids.size(); ++n) dense.emplace(ids[n], static_cast<NodeId>(n));

    std::vector<ContactEvent> events;
    events.reserve(raw.size());
    std::uint64_t max_interval = 0;
    for (const auto& r : raw) {
        events.push_back({static_cast<Interval>(r.interval), dense.at(r.a), dense.at(r.b)});
        max_interval = std::max(max_interval, r.interval);
    }
    const auto node_count = static_cast<std::uint32_t>(ids.size());
    return ContactTrace(node_count, static_cast<Interval>(max_interval + 1), std::move(events),
                        std::move(ids));
}

ContactTrace parse_trace_file(const std::string& path, TraceFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open trace file '" + path + "'");
    try {
        return parse_trace(in, format);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_trace(std::ostream& out, const ContactTrace& trace) {
    out << "# interval,node_a,node_b\n";
    for (const auto& e : trace.events())
        out << e.interval << ',' << trace.external_id(e.a) << ',' << trace.external_id(e.b)
            << '\n';
}

void SyntheticParams::validate() const {
    if (num_nodes < 2) throw ConfigError("synthetic trace needs at least 2 nodes");
    if (num_intervals == 0) throw ConfigError("synthetic trace needs at least 1 interval");
    if (events_per_interval == 0) throw ConfigError("events_per_interval must be positive");
    if (!(activity_shape > 0.0) || !std::isfinite(activity_shape))
        throw ConfigError("activity_shape must be positive");
}

ContactTrace generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
    params.validate();
    Engine engine(derive_seed(seed, 0x7472616365ULL));

    // Pareto(shape, 1) by inversion; 1 - u lies in (0, 1].
    std::vector<double> cumulative(params.num_nodes);
    std::vector<double> weight(params.num_nodes);
    double total = 0.0;
    for (std::uint32_t n = 0; n < params.num_nodes; ++n) {
        weight[n] = std::pow(1.0 - uniform01(engine), -1.0 / params.activity_shape);
        total += weight[n];
        cumulative[n] = total;
    }

    // Locate the node whose cumulative slot contains r, for r in [0, total).
    auto locate = [&](double r) {
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        return static_cast<NodeId>(
            std::min<std::ptrdiff_t>(it - cumulative.begin(), params.num_nodes - 1));
    };

    std::vector<ContactEvent> events;
    events.reserve(static_cast<std::size_t>(params.num_intervals) * params.events_per_interval);
    for (Interval t = 0; t < params.num_intervals; ++t) {
        for (std::uint32_t k = 0; k < params.events_per_interval; ++k) {
            const NodeId i = locate(uniform01(engine) * total);
            // Draw j from the weights with i's slot cut out.
            const double before_i = i == 0 ? 0.0 : cumulative[i - 1];
            double r = uniform01(engine) * (total - weight[i]);
            if (r >= before_i) r += weight[i];
            NodeId j = locate(r);
            if (j == i) j = i + 1 < params.num_nodes ? i + 1 : i - 1; // rounding at a slot edge
            events.push_back({t, i, j});
        }
    }
    return ContactTrace(params.num_nodes, params.num_intervals, std::move(events));
}

TraceStats trace_stats(const ContactTrace& trace) {
    TraceStats s;
    s.node_count = trace.node_count();
    s.interval_count = trace.num_intervals();
    s.event_count = trace.event_count();

    std::vector<std::size_t> per_node(trace.node_count(), 0);
    for (const auto& e : trace.events()) {
        ++per_node[e.a];
        ++per_node[e.b];
    }
    for (NodeId n = 0; n < trace.node_count(); ++n)
        if (per_node[n] > 0) s.contacts_per_node.emplace(trace.external_id(n), per_node[n]);

    if (trace.num_intervals() > 0) {
        s.events_per_interval_min = std::numeric_limits<std::size_t>::max();
        for (Interval t = 0; t < trace.num_intervals(); ++t) {
            const auto n = trace.events_at(t).size();
            s.events_per_interval_min = std::min(s.events_per_interval_min, n);
            s.events_per_interval_max = std::max(s.events_per_interval_max, n);
        }
        s.events_per_interval_mean =
            static_cast<double>(s.event_count) / static_cast<double>(trace.num_intervals());
    }
    return s;
}

std::string trace_stats_json(const TraceStats& stats) {
    nlohmann::ordered_json j;
    j["node_count"] = stats.node_count;
    j["interval_count"] = stats.interval_count;
    j["event_count"] = stats.event_count;
    j["events_per_interval"] = {{"min", stats.events_per_interval_min},
                                {"mean", stats.events_per_interval_mean},
                                {"max", stats.events_per_interval_max}};
    auto& per_node = j["contacts_per_node"] = nlohmann::ordered_json::object();
    for (const auto& [id, count] : stats.contacts_per_node) per_node[std::to_string(id)] = count;
    return j.dump(2) + "\n";
}

} // namespace oppnet
