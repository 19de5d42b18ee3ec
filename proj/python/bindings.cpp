#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oppnet/analytics.hpp"
#include "oppnet/io.hpp"
#include "oppnet/simulator.hpp"
#include "oppnet/trace.hpp"
#include "oppnet/window.hpp"

namespace py = pybind11;
using namespace oppnet;

namespace {

ContactTrace parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_trace(in);
}

std::string trace_to_text(const ContactTrace& trace) {
    std::ostringstream out;
    write_trace(out, trace);
    return out.str();
}

std::vector<std::tuple<Interval, NodeId, NodeId>> event_tuples(const ContactTrace& trace) {
    std::vector<std::tuple<Interval, NodeId, NodeId>> out;
    out.reserve(trace.event_count());
    for (const auto& e : trace.events()) out.emplace_back(e.interval, e.a, e.b);
    return out;
}

std::vector<std::tuple<NodeId, NodeId, Interval>> edge_tuples(const OverlaySnapshot& s) {
    std::vector<std::tuple<NodeId, NodeId, Interval>> out;
    out.reserve(s.edges.size());
    for (const auto& e : s.edges) out.emplace_back(e.src, e.dst, e.established_at);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Opportunistic overlay simulator: traces, link management and degree analytics";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_ValueError);

    py::class_<ContactTrace>(m, "ContactTrace")
        .def_property_readonly("node_count", &ContactTrace::node_count)
        .def_property_readonly("num_intervals", &ContactTrace::num_intervals)
        .def_property_readonly("event_count", &ContactTrace::event_count)
        .def("events", &event_tuples, "List of (interval, a, b) over dense ids")
        .def_property_readonly("external_ids", [](const ContactTrace& t) {
            return std::vector<std::uint64_t>(t.external_ids().begin(), t.external_ids().end());
        })
        .def("to_csv", &trace_to_text)
        .def("__eq__", [](const ContactTrace& a, const ContactTrace& b) { return a == b; })
        .def("__repr__", [](const ContactTrace& t) {
            return "<ContactTrace nodes=" + std::to_string(t.node_count()) +
                   " intervals=" + std::to_string(t.num_intervals()) +
                   " events=" + std::to_string(t.event_count()) + ">";
        });

    m.def("parse_trace", &parse_text, py::arg("text"), "Parse interval,node_a,node_b CSV text");
    m.def("parse_trace_file", [](const std::string& p) { return parse_trace_file(p); },
          py::arg("path"));

    py::class_<SyntheticParams>(m, "SyntheticParams")
        .def(py::init([](std::uint32_t nodes, Interval intervals, std::uint32_t events,
                         double shape) { return SyntheticParams{nodes, intervals, events, shape}; }),
             py::arg("num_nodes"), py::arg("num_intervals"), py::arg("events_per_interval"),
             py::arg("activity_shape") = 1.5)
        .def_readwrite("num_nodes", &SyntheticParams::num_nodes)
        .def_readwrite("num_intervals", &SyntheticParams::num_intervals)
        .def_readwrite("events_per_interval", &SyntheticParams::events_per_interval)
        .def_readwrite("activity_shape", &SyntheticParams::activity_shape);

    m.def("generate_synthetic", &generate_synthetic, py::arg("params"), py::arg("seed"));
    m.def("trace_stats_json", [](const ContactTrace& t) { return trace_stats_json(trace_stats(t)); },
          py::arg("trace"));

    py::class_<OverlayConfig>(m, "OverlayConfig")
        .def(py::init([](std::uint32_t delta, std::uint32_t c_min, double omega, double lambda_mag,
                         std::uint32_t d_min, std::uint32_t d_max) {
                 OverlayConfig c{delta, c_min, omega, lambda_mag, d_min, d_max};
                 c.validate();
                 return c;
             }),
             py::arg("delta") = 5, py::arg("c_min") = 1, py::arg("omega") = 0.25,
             py::arg("lambda_mag") = 2.5, py::arg("d_min") = 5, py::arg("d_max") = 100)
        .def_readwrite("delta", &OverlayConfig::delta)
        .def_readwrite("c_min", &OverlayConfig::c_min)
        .def_readwrite("omega", &OverlayConfig::omega)
        .def_readwrite("lambda_mag", &OverlayConfig::lambda_mag)
        .def_readwrite("d_min", &OverlayConfig::d_min)
        .def_readwrite("d_max", &OverlayConfig::d_max)
        .def("validate", &OverlayConfig::validate)
        .def("warnings", &OverlayConfig::warnings);

    py::class_<DegreeDistribution>(m, "DegreeDistribution")
        .def(py::init<std::uint32_t, std::uint32_t, double>(), py::arg("d_min"),
             py::arg("d_max"), py::arg("lambda_mag"))
        .def("pmf", &DegreeDistribution::pmf, py::arg("d"))
        .def_property_readonly("normalizer", &DegreeDistribution::normalizer)
        .def("sample",
             [](const DegreeDistribution& d, std::size_t n, std::uint64_t seed) {
                 Engine engine(derive_seed(seed, 0));
                 std::vector<std::uint32_t> out(n);
                 for (auto& x : out) x = d.sample(engine);
                 return out;
             },
             py::arg("n"), py::arg("seed"));

    py::class_<ContactWindow>(m, "ContactWindow")
        .def(py::init([](std::uint32_t delta, std::uint32_t nodes) {
                 return ContactWindow(WindowParams{delta}, nodes);
             }),
             py::arg("delta"), py::arg("node_count"))
        .def("advance",
             [](ContactWindow& w, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
                 std::vector<ContactEvent> events;
                 for (const auto& [a, b] : pairs) events.push_back({w.next_interval(), a, b});
                 w.advance(events);
             },
             py::arg("pairs"), "Advance one interval with the given (a, b) contacts")
        .def("contact_count", &ContactWindow::contact_count)
        .def("active_peers", &ContactWindow::active_peers, py::arg("node"), py::arg("c_min"))
        .def_property_readonly("current_interval", &ContactWindow::current_interval);

    py::class_<OverlaySnapshot>(m, "OverlaySnapshot")
        .def_readonly("interval", &OverlaySnapshot::interval)
        .def_readonly("node_count", &OverlaySnapshot::node_count)
        .def_readonly("active", &OverlaySnapshot::active)
        .def_readonly("desired_degree", &OverlaySnapshot::desired_degree)
        .def("edges", &edge_tuples, "List of (src, dst, established_at)")
        .def("out_degrees", &OverlaySnapshot::out_degrees)
        .def("in_degrees", &OverlaySnapshot::in_degrees);

    py::class_<IntervalSummary>(m, "IntervalSummary")
        .def_readonly("interval", &IntervalSummary::interval)
        .def_readonly("activated", &IntervalSummary::activated)
        .def_readonly("adds", &IntervalSummary::adds)
        .def_readonly("expiries", &IntervalSummary::expiries)
        .def_readonly("replacements", &IntervalSummary::replacements)
        .def_readonly("edges", &IntervalSummary::edges)
        .def_readonly("mean_degree", &IntervalSummary::mean_degree);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("final_snapshot", &RunResult::final_snapshot)
        .def_readonly("snapshots", &RunResult::snapshots)
        .def_readonly("series", &RunResult::series)
        .def_readonly("activation_order", &RunResult::activation_order)
        .def_readonly("wall_seconds", &RunResult::wall_seconds)
        .def("to_json", &run_result_json);

    m.def("run",
          [](const ContactTrace& trace, const OverlayConfig& config, std::uint64_t seed,
             std::vector<Interval> snapshots) {
              RunConfig rc;
              rc.overlay = config;
              rc.seed = seed;
              rc.snapshot_intervals = std::move(snapshots);
              py::gil_scoped_release release;
              return run(trace, rc);
          },
          py::arg("trace"), py::arg("config"), py::arg("seed") = 0,
          py::arg("snapshot_intervals") = std::vector<Interval>{});

    py::enum_<FitMethod>(m, "FitMethod")
        .value("LOGLOG_LSQ", FitMethod::LogLogLeastSquares)
        .value("DISCRETE_MLE", FitMethod::DiscreteMle);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("method", &FitResult::method)
        .def_readonly("exponent", &FitResult::exponent)
        .def_readonly("intercept", &FitResult::intercept)
        .def_readonly("r_squared", &FitResult::r_squared)
        .def_readonly("ks_distance", &FitResult::ks_distance)
        .def_readonly("range_lo", &FitResult::range_lo)
        .def_readonly("range_hi", &FitResult::range_hi)
        .def_readonly("points", &FitResult::points);

    m.def("degree_histogram",
          [](const OverlaySnapshot& s, bool in_degree) {
              return degree_histogram(s, in_degree ? DegreeKind::In : DegreeKind::Out).counts();
          },
          py::arg("snapshot"), py::arg("in_degree") = false, "Degree -> node count over active nodes");
    m.def("histogram_csv",
          [](const OverlaySnapshot& s) { return histogram_csv(degree_histogram(s)); },
          py::arg("snapshot"));
    m.def("loglog_lsq_fit",
          [](const std::vector<std::pair<std::uint32_t, double>>& pmf, std::uint32_t lo,
             std::uint32_t hi) { return loglog_lsq_fit(pmf, lo, hi); },
          py::arg("pmf_points"), py::arg("lo"), py::arg("hi"));
    m.def("mle_powerlaw_fit",
          [](const std::vector<std::uint32_t>& samples, std::uint32_t x_min) {
              return mle_powerlaw_fit(samples, x_min);
          },
          py::arg("samples"), py::arg("x_min"));
    m.def("weakly_connected_components", &weakly_connected_components, py::arg("snapshot"));

    py::class_<DiameterEstimate>(m, "DiameterEstimate")
        .def_readonly("diameter_lower_bound", &DiameterEstimate::diameter_lower_bound)
        .def_readonly("mean_shortest_path", &DiameterEstimate::mean_shortest_path)
        .def_readonly("sources", &DiameterEstimate::sources)
        .def_readonly("component_size", &DiameterEstimate::component_size);
    m.def("estimate_diameter", &estimate_diameter, py::arg("snapshot"), py::arg("sample_size"),
          py::arg("seed") = 0);

    m.attr("__version__") = OPPNET_VERSION;
}
