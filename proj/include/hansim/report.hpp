#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hansim/engine.hpp"
#include "hansim/metrics.hpp"
#include "hansim/workload.hpp"

namespace hansim::report {

struct CmdOptions {
    std::optional<std::uint64_t> seed;          ///< overrides the scenario seed
    std::optional<workload::RunMode> mode;      ///< overrides the scenario mode
    std::string out_dir = "out";
    Seconds skip_s = 0;                         ///< warm-up excluded from metrics
    bool literal_p3 = false;                    ///< pseudocode-faithful scheduler
};

struct ModeResult {
    std::string mode;  ///< "coordinated" | "baseline"
    metrics::Summary summary;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    Seconds skip_s = 0;
    std::vector<ModeResult> modes;
    /// (baseline - coordinated) / baseline; absent unless both modes ran and
    /// the baseline figure is positive.
    std::optional<double> peak_reduction_pct;
    std::optional<double> std_reduction_pct;
    std::vector<std::string> csv_paths;
};

/// Renders the human-readable summary (same bytes as summary.txt).
std::string render_summary(const RunReport& report);

/// Simulates a scenario per its mode (or the override), writes
/// load_<stream>.csv, load_total.csv, delays.csv and summary.txt under
/// out_dir, and returns the report.
RunReport cmd_run(const workload::Scenario& scenario, const CmdOptions& options);
RunReport cmd_run_file(const std::string& scenario_path, const CmdOptions& options);

/// cmd_run with the mode forced to both, so reductions are always reported.
RunReport cmd_compare_file(const std::string& scenario_path, const CmdOptions& options);

enum class SweepParam { MinDcd, DutyRatio, DeliveryP, Contenders };

struct SweepRow {
    double value = 0.0;
    std::string mode;
    double peak_kw = 0.0;
    double mean_kw = 0.0;
    double std_kw = 0.0;
    std::optional<double> avg_delay_s;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::string csv_path;
};

/// One simulation per value and mode, points run in a parallel worker pool;
/// rows land in deterministic (value, mode) order and sweep.csv is written
/// under out_dir.
SweepReport cmd_sweep(const workload::Scenario& scenario, const CmdOptions& options,
                      SweepParam param, const std::vector<double>& values);
SweepReport cmd_sweep_file(const std::string& scenario_path, const CmdOptions& options,
                           SweepParam param, const std::vector<double>& values);

/// The sweep's scenario transform, exposed for tests: returns `scenario`
/// with the parameter applied.
workload::Scenario apply_sweep_value(const workload::Scenario& scenario, SweepParam param,
                                     double value);

}  // namespace hansim::report
