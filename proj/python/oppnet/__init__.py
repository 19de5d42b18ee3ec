"""Opportunistic overlay simulator.

Thin re-export of the compiled ``_core`` module. See the project README for
the CLI, which shares the same engine.
"""

from ._core import (  # noqa: F401
    AnalysisError,
    ConfigError,
    ContactTrace,
    ContactWindow,
    DataError,
    DegreeDistribution,
    DiameterEstimate,
    FitMethod,
    FitResult,
    IntervalSummary,
    OverlayConfig,
    OverlaySnapshot,
    RunResult,
    SyntheticParams,
    __version__,
    degree_histogram,
    estimate_diameter,
    generate_synthetic,
    histogram_csv,
    loglog_lsq_fit,
    mle_powerlaw_fit,
    parse_trace,
    parse_trace_file,
    run,
    trace_stats_json,
    weakly_connected_components,
)
