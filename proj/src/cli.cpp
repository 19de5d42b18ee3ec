#include "oppnet/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oppnet/config.hpp"
#include "oppnet/io.hpp"
#include "oppnet/simulator.hpp"

namespace fs = std::filesystem;

namespace oppnet::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OPPNET_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("OPPNET_SEED must be a nonnegative integer");
    }
    return 0;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw DataError("cannot create output directory '" + dir.string() + "'");
}

/// Options shared by simulate and sweep.
struct RunOptions {
    std::string trace;
    std::string synthetic;
    std::string config;
    std::uint64_t seed = 0;
    std::string fit_range;
    std::size_t diameter_samples = 32;
    std::string out;

    CLI::Option* trace_opt = nullptr;
    CLI::Option* synthetic_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* fit_opt = nullptr;
    CLI::Option* diameter_opt = nullptr;

    void attach(CLI::App* sub) {
        trace_opt = sub->add_option("--trace", trace, "Contact trace CSV (interval,node_a,node_b)");
        synthetic_opt = sub->add_option("--synthetic", synthetic,
                                        "Synthetic trace NODES:INTERVALS:EVENTS:SHAPE");
        trace_opt->excludes(synthetic_opt);
        sub->add_option("--config", config, "key = value configuration file");
        seed_opt = sub->add_option("--seed", seed, "Run seed (default: $OPPNET_SEED or 0)");
        fit_opt = sub->add_option("--fit-range", fit_range, "Log-log fit range LO:HI (default dmin:dmax)");
        diameter_opt = sub->add_option("--diameter-samples", diameter_samples,
                                       "BFS sources for the diameter estimate (0 disables)");
        sub->add_option("--out", out, "Output directory")->required();
    }

    /// Defaults < $OPPNET_SEED < config file < flags.
    RunConfig base_config() const {
        RunConfig cfg;
        cfg.seed = default_seed();
        if (!config.empty()) cfg = load_config(config, cfg);
        if (seed_opt->count()) cfg.seed = seed;
        if (fit_opt->count()) cfg.fit_range = parse_range(fit_range);
        if (diameter_opt->count()) cfg.diameter_samples = diameter_samples;
        if (trace_opt->count()) cfg.source = trace;
        if (synthetic_opt->count()) cfg.source = parse_synthetic_arg(synthetic);
        return cfg;
    }
};

struct SimulateOptions {
    RunOptions common;
    std::uint32_t delta = 0, d_min = 0, d_max = 0, c_min = 0;
    double lambda = 0.0, omega = 0.0;
    std::vector<Interval> snapshots;
    CLI::Option *delta_opt, *dmin_opt, *dmax_opt, *cmin_opt, *lambda_opt, *omega_opt;
};

struct SweepOptions {
    RunOptions common;
    std::vector<std::uint32_t> delta, d_min, d_max, c_min;
    std::vector<double> lambda, omega;
    unsigned jobs = 1;
};

struct AnalyzeOptions {
    std::string edges, nodes, manifest, fit_range, out;
    std::uint32_t x_min = 0;
    std::size_t diameter_samples = 32;
    std::uint64_t seed = 0;
    CLI::Option *nodes_opt, *manifest_opt, *fit_opt, *xmin_opt, *diameter_opt, *seed_opt;
};

struct SynthOptions {
    SyntheticParams params{1000, 100, 1000, 1.5};
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    std::string out;
};

struct StatsOptions {
    std::string trace, out;
};

std::string trace_summary_line(const ContactTrace& t) {
    return std::to_string(t.node_count()) + " nodes, " + std::to_string(t.num_intervals()) +
           " intervals, " + std::to_string(t.event_count()) + " events";
}

nlohmann::ordered_json trace_json(const ContactTrace& t) {
    return {{"nodes", t.node_count()}, {"intervals", t.num_intervals()}, {"events", t.event_count()}};
}

void write_snapshot_artifacts(const fs::path& dir, const OverlaySnapshot& snap,
                              const SnapshotReport& report, const ContactTrace& trace) {
    write_file_atomic(dir / "edges.csv", edges_csv(snap, trace.external_ids()));
    write_file_atomic(dir / "nodes.csv", nodes_csv(snap, trace.external_ids()));
    write_file_atomic(dir / "histogram.csv", histogram_csv(report.out_hist));
    write_file_atomic(dir / "histogram_in.csv", histogram_csv(report.in_hist));
    write_file_atomic(dir / "snapshot.json", snapshot_summary_json(snap, trace.external_ids()));
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
    const auto seed = o.seed_opt->count() ? o.seed : default_seed();
    const auto trace = generate_synthetic(o.params, seed);
    write_file_atomic(o.out, [&](std::ostream& body) {
        body << "# synthetic nodes=" << o.params.num_nodes << " intervals=" << o.params.num_intervals
             << " events_per_interval=" << o.params.events_per_interval
             << " activity_shape=" << format_double(o.params.activity_shape) << " seed=" << seed
             << '\n';
        write_trace(body, trace);
    });
    out << "wrote " << o.out << ": " << trace_summary_line(trace) << '\n';
    return Ok;
}

int cmd_stats(const StatsOptions& o, std::ostream& out) {
    const auto trace = parse_trace_file(o.trace);
    const auto json = trace_stats_json(trace_stats(trace));
    if (o.out.empty())
        out << json;
    else
        write_file_atomic(o.out, json);
    return Ok;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    RunConfig cfg = o.common.base_config();
    if (o.delta_opt->count()) cfg.overlay.delta = o.delta;
    if (o.cmin_opt->count()) cfg.overlay.c_min = o.c_min;
    if (o.dmin_opt->count()) cfg.overlay.d_min = o.d_min;
    if (o.dmax_opt->count()) cfg.overlay.d_max = o.d_max;
    if (o.lambda_opt->count()) cfg.overlay.lambda_mag = o.lambda;
    if (o.omega_opt->count()) cfg.overlay.omega = o.omega;
    cfg.snapshot_intervals = o.snapshots;
    cfg.overlay.validate();
    if (!cfg.source) throw ConfigError("one of --trace or --synthetic is required");
    for (const auto& w : cfg.overlay.warnings()) err << "warning: " << w << '\n';

    const auto trace = load_trace(*cfg.source, cfg.seed);
    const auto result = run(trace, cfg);
    const auto [lo, hi] = cfg.effective_fit_range();
    const auto report = analyze_snapshot(result.final_snapshot, lo, hi, cfg.overlay.d_min,
                                         cfg.diameter_samples, cfg.seed);

    const fs::path dir(o.common.out);
    ensure_dir(dir);
    write_snapshot_artifacts(dir, result.final_snapshot, report, trace);
    write_file_atomic(dir / "fit.json", fit_json(report, {lo, hi}, cfg.overlay.d_min));
    write_file_atomic(dir / "series.csv", series_csv(result.series));
    write_file_atomic(dir / "node_map.csv", node_map_csv(trace.external_ids()));

    nlohmann::ordered_json manifest;
    manifest["tool"] = "oppnet";
    manifest["version"] = kVersion;
    manifest["command"] = "simulate";
    manifest["config"] = to_json(cfg);
    manifest["trace"] = trace_json(trace);
    manifest["final"] = graph_metrics_json(report);
    manifest["final"]["interval"] = result.final_snapshot.interval
                                        ? nlohmann::ordered_json(*result.final_snapshot.interval)
                                        : nlohmann::ordered_json();
    manifest["final"]["edges"] = result.final_snapshot.edges.size();
    manifest["warnings"] = cfg.overlay.warnings();
    std::vector<std::string> artifacts{"edges.csv",  "nodes.csv",     "histogram.csv",
                                       "histogram_in.csv", "snapshot.json", "fit.json",
                                       "series.csv", "node_map.csv",  "timing.json"};
    for (const auto& snap : result.snapshots) {
        const auto name = "t" + std::to_string(*snap.interval);
        const auto sub = dir / "snapshots" / name;
        ensure_dir(sub);
        const auto r = analyze_snapshot(snap, lo, hi, cfg.overlay.d_min, 0, cfg.seed);
        write_snapshot_artifacts(sub, snap, r, trace);
        write_file_atomic(sub / "fit.json", fit_json(r, {lo, hi}, cfg.overlay.d_min));
        artifacts.push_back("snapshots/" + name);
    }
    manifest["artifacts"] = artifacts;
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    write_file_atomic(dir / "timing.json",
                      nlohmann::ordered_json{{"wall_seconds", result.wall_seconds}}.dump(2) + "\n");

    out << "trace: " << trace_summary_line(trace) << '\n';
    out << "final: " << result.final_snapshot.edges.size() << " links over "
        << report.out_hist.total() << " active nodes, mean degree "
        << format_double(report.out_hist.mean()) << '\n';
    if (report.lsq.fit)
        out << "loglog slope " << format_double(report.lsq.fit->exponent) << " r2 "
            << format_double(*report.lsq.fit->r_squared) << '\n';
    if (report.mle.fit) out << "mle alpha " << format_double(report.mle.fit->exponent) << '\n';
    out << "wrote " << dir.string() << '\n';
    return Ok;
}

std::string point_name(const OverlayConfig& c) {
    return "delta" + std::to_string(c.delta) + "_dmin" + std::to_string(c.d_min) + "_dmax" +
           std::to_string(c.d_max) + "_lambda" + format_double(c.lambda_mag) + "_omega" +
           format_double(c.omega) + "_cmin" + std::to_string(c.c_min);
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    RunConfig base = o.common.base_config();
    if (!base.source) throw ConfigError("one of --trace or --synthetic is required");
    SweepGrid grid{o.delta, o.d_min, o.d_max, o.lambda, o.omega, o.c_min};

    const auto trace = load_trace(*base.source, base.seed);
    const auto sweep = run_sweep(trace, base, grid, o.jobs);
    for (const auto& w : sweep.warnings) err << "warning: " << w << '\n';

    const fs::path dir(o.common.out);
    ensure_dir(dir);
    std::ostringstream table;
    table << "delta,dmin,dmax,lambda,omega,cmin,active_nodes,edges,mean_degree,"
             "fraction_at_desired,fraction_below_dmin,lsq_slope,lsq_r2,mle_alpha,mle_ks,"
             "edge_hash\n";
    nlohmann::ordered_json manifest;
    manifest["tool"] = "oppnet";
    manifest["version"] = kVersion;
    manifest["command"] = "sweep";
    manifest["base_config"] = to_json(base);
    manifest["trace"] = trace_json(trace);
    manifest["warnings"] = sweep.warnings;
    auto& points = manifest["points"] = nlohmann::ordered_json::array();
    nlohmann::ordered_json timing = nlohmann::ordered_json::array();

    for (const auto& p : sweep.points) {
        const auto& c = p.overlay;
        const auto& rep = p.digest.report;
        const auto name = point_name(c);
        const auto opt = [](const std::optional<FitResult>& f, auto field) {
            return f ? format_double(field(*f)) : std::string();
        };
        table << c.delta << ',' << c.d_min << ',' << c.d_max << ',' << format_double(c.lambda_mag)
              << ',' << format_double(c.omega) << ',' << c.c_min << ',' << p.digest.active_nodes
              << ',' << p.digest.edge_count << ',' << format_double(p.digest.mean_degree) << ','
              << format_double(rep.fraction_at_desired) << ','
              << format_double(rep.fraction_below_dmin) << ','
              << opt(rep.lsq.fit, [](const FitResult& f) { return f.exponent; }) << ','
              << opt(rep.lsq.fit, [](const FitResult& f) { return *f.r_squared; }) << ','
              << opt(rep.mle.fit, [](const FitResult& f) { return f.exponent; }) << ','
              << opt(rep.mle.fit, [](const FitResult& f) { return *f.ks_distance; }) << ','
              << p.digest.edge_hash << '\n';

        const auto sub = dir / "points" / name;
        ensure_dir(sub);
        RunConfig point_cfg = base;
        point_cfg.overlay = c;
        if (!o.d_min.empty() || !o.d_max.empty()) point_cfg.fit_range.reset();
        const auto range = point_cfg.effective_fit_range();
        write_file_atomic(sub / "histogram.csv", histogram_csv(rep.out_hist));
        write_file_atomic(sub / "fit.json", fit_json(rep, range, c.d_min));

        auto entry = to_json(c);
        entry["name"] = name;
        entry["metrics"] = graph_metrics_json(rep);
        entry["edge_hash"] = p.digest.edge_hash;
        points.push_back(entry);
        timing.push_back({{"name", name}, {"wall_seconds", p.digest.wall_seconds}});
    }
    write_file_atomic(dir / "sweep.csv", table.str());
    write_file_atomic(dir / "sweep.json", manifest.dump(2) + "\n");
    write_file_atomic(dir / "timing.json", timing.dump(2) + "\n");
    out << "swept " << sweep.points.size() << " points over " << trace_summary_line(trace)
        << "; wrote " << dir.string() << '\n';
    return Ok;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
    const fs::path edges(o.edges);
    std::optional<fs::path> nodes;
    if (o.nodes_opt->count())
        nodes = o.nodes;
    else if (fs::exists(edges.parent_path() / "nodes.csv"))
        nodes = edges.parent_path() / "nodes.csv";

    RunConfig cfg;
    const fs::path manifest_path =
        o.manifest_opt->count() ? fs::path(o.manifest) : edges.parent_path() / "manifest.json";
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        nlohmann::json m;
        try {
            m = nlohmann::json::parse(in);
            const auto& c = m.at("config");
            cfg.overlay.d_min = c.at("dmin").get<std::uint32_t>();
            cfg.overlay.d_max = c.at("dmax").get<std::uint32_t>();
            cfg.fit_range = std::make_pair(c.at("fit_range").at(0).get<std::uint32_t>(),
                                           c.at("fit_range").at(1).get<std::uint32_t>());
            cfg.diameter_samples = c.at("diameter_samples").get<std::size_t>();
            cfg.seed = c.at("seed").get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(manifest_path.string() + ": " + e.what());
        }
    } else if (o.manifest_opt->count()) {
        throw DataError("cannot open manifest '" + manifest_path.string() + "'");
    }
    if (o.fit_opt->count()) cfg.fit_range = parse_range(o.fit_range);
    const std::uint32_t x_min = o.xmin_opt->count() ? o.x_min : cfg.overlay.d_min;
    if (x_min < 1) throw ConfigError("xmin must be >= 1");
    if (o.diameter_opt->count()) cfg.diameter_samples = o.diameter_samples;
    if (o.seed_opt->count()) cfg.seed = o.seed;

    const auto saved = read_saved_snapshot(edges, nodes);
    const auto range = cfg.effective_fit_range();
    const auto report =
        analyze_snapshot(saved.snapshot, range.first, range.second, x_min, cfg.diameter_samples, cfg.seed);
    const auto fit = fit_json(report, range, x_min);
    if (o.out.empty()) {
        out << fit;
        return Ok;
    }
    const fs::path dir(o.out);
    ensure_dir(dir);
    write_file_atomic(dir / "fit.json", fit);
    write_file_atomic(dir / "histogram.csv", histogram_csv(report.out_hist));
    write_file_atomic(dir / "histogram_in.csv", histogram_csv(report.in_hist));
    write_file_atomic(dir / "analysis.json", graph_metrics_json(report).dump(2) + "\n");
    out << "wrote " << dir.string() << '\n';
    return Ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trace-driven opportunistic overlay simulator"};
    app.name(args.empty() ? "oppnet" : fs::path(args[0]).filename().string());
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SynthOptions synth_o;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic heterogeneous-activity trace");
    synth->add_option("--nodes", synth_o.params.num_nodes, "Number of nodes")->capture_default_str();
    synth->add_option("--intervals", synth_o.params.num_intervals, "Number of trace intervals")
        ->capture_default_str();
    synth->add_option("--events", synth_o.params.events_per_interval, "Contact draws per interval")
        ->capture_default_str();
    synth->add_option("--activity-shape", synth_o.params.activity_shape,
                      "Pareto shape of node activity weights")
        ->capture_default_str();
    synth_o.seed_opt = synth->add_option("--seed", synth_o.seed, "Seed (default: $OPPNET_SEED or 0)");
    synth->add_option("--out", synth_o.out, "Output trace CSV")->required();

    StatsOptions stats_o;
    auto* stats = app.add_subcommand("stats", "Summarize a contact trace as JSON");
    stats->add_option("--trace", stats_o.trace, "Contact trace CSV")->required();
    stats->add_option("--out", stats_o.out, "Write JSON here instead of stdout");

    SimulateOptions sim_o;
    auto* simulate = app.add_subcommand("simulate", "Run the link-management algorithm over a trace");
    sim_o.common.attach(simulate);
    sim_o.delta_opt = simulate->add_option("--delta", sim_o.delta, "Window length in intervals (5)");
    sim_o.lambda_opt = simulate->add_option("--lambda", sim_o.lambda, "Power-law exponent magnitude (2.5)");
    sim_o.dmin_opt = simulate->add_option("--dmin", sim_o.d_min, "Minimum desired degree (5)");
    sim_o.dmax_opt = simulate->add_option("--dmax", sim_o.d_max, "Maximum desired degree (100)");
    sim_o.cmin_opt = simulate->add_option("--cmin", sim_o.c_min, "Contact threshold (1)");
    sim_o.omega_opt = simulate->add_option("--omega", sim_o.omega, "Replacement probability (0.25)");
    simulate->add_option("--snapshots", sim_o.snapshots, "Extra snapshot intervals, comma separated")
        ->delimiter(',');

    SweepOptions sweep_o;
    auto* sweep = app.add_subcommand("sweep", "Run a Cartesian parameter grid");
    sweep_o.common.attach(sweep);
    sweep->add_option("--delta", sweep_o.delta, "Window lengths")->delimiter(',');
    sweep->add_option("--lambda", sweep_o.lambda, "Exponent magnitudes")->delimiter(',');
    sweep->add_option("--dmin", sweep_o.d_min, "Minimum desired degrees")->delimiter(',');
    sweep->add_option("--dmax", sweep_o.d_max, "Maximum desired degrees")->delimiter(',');
    sweep->add_option("--cmin", sweep_o.c_min, "Contact thresholds")->delimiter(',');
    sweep->add_option("--omega", sweep_o.omega, "Replacement probabilities")->delimiter(',');
    sweep->add_option("--jobs", sweep_o.jobs, "Concurrent sweep points")->capture_default_str();

    AnalyzeOptions an_o;
    auto* analyze = app.add_subcommand("analyze", "Re-analyze a saved edge list");
    analyze->add_option("--edges", an_o.edges, "edges.csv from a run")->required();
    an_o.nodes_opt = analyze->add_option("--nodes", an_o.nodes, "nodes.csv (default: next to edges)");
    an_o.manifest_opt =
        analyze->add_option("--manifest", an_o.manifest, "manifest.json (default: next to edges)");
    an_o.fit_opt = analyze->add_option("--fit-range", an_o.fit_range, "Log-log fit range LO:HI");
    an_o.xmin_opt = analyze->add_option("--xmin", an_o.x_min, "MLE lower cutoff (default dmin)");
    an_o.diameter_opt = analyze->add_option("--diameter-samples", an_o.diameter_samples,
                                            "BFS sources for the diameter estimate");
    an_o.seed_opt = analyze->add_option("--seed", an_o.seed, "Seed for BFS source sampling");
    analyze->add_option("--out", an_o.out, "Output directory (default: fit JSON to stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << active->help();
        return UsageError;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_o, out);
        if (stats->parsed()) return cmd_stats(stats_o, out);
        if (simulate->parsed()) {
            if (!sim_o.common.trace_opt->count() && !sim_o.common.synthetic_opt->count() &&
                sim_o.common.config.empty()) {
                err << "error: one of --trace or --synthetic is required\n\n" << simulate->help();
                return UsageError;
            }
            return cmd_simulate(sim_o, out, err);
        }
        if (sweep->parsed()) {
            if (!sweep_o.common.trace_opt->count() && !sweep_o.common.synthetic_opt->count() &&
                sweep_o.common.config.empty()) {
                err << "error: one of --trace or --synthetic is required\n\n" << sweep->help();
                return UsageError;
            }
            return cmd_sweep(sweep_o, out, err);
        }
        if (analyze->parsed()) return cmd_analyze(an_o, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return UsageError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return DataFailure;
    } catch (const AnalysisError& e) {
        err << "error: " << e.what() << '\n';
        return DataFailure;
    }
    return UsageError;
}

} // namespace oppnet::cli
