#ifndef KRFLOW_RUNNER_HPP
#define KRFLOW_RUNNER_HPP

#include "krflow/estimates.hpp"
#include "krflow/metricspace.hpp"
#include "krflow/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace krflow::runner {

struct RunOptions {
    bool with_gh = false;
    bool write_profiles = true;
    bool write_plots = true;
    int gh_resolution = 15;
    int monitor_count = 64;
    int threads = 0;
    std::uint64_t seed = 0;
};

struct GhRow {
    double t = 0.0;
    double epsilon = 0.0;
    double max_fiber_diam = 0.0;
    double distortion = 0.0;
    double sqrt_c = 0.0;
    double C2 = 0.0;
    double cauchy_sup = 0.0;
};

struct RunReport {
    bool ok = true;
    std::vector<std::string> failures;
    flow::RunResult run;
    estimates::MonitorSeries monitors;
    std::optional<estimates::DecayFit> fit;
    std::vector<GhRow> gh;
    std::vector<metricspace::FiniteMetricSpace> spaces; // only when with_gh
    std::filesystem::path out_dir;

    void require(bool cond, const std::string& invariant);
};

/// Executes the scenario end to end: the flow run, the monitor sweep with its
/// decay fit, optionally the sampled-geometry schedule, and every CSV/SVG
/// artifact under out_dir. Identical scenario + seed produce byte-identical
/// CSVs.
RunReport run_scenario(const scenario::Scenario& s, const std::filesystem::path& out_dir,
                       const RunOptions& options);

/// Writes the log fiber-diameter versus log(T-t) plot with the fitted slope
/// and the reference slopes 1/3 and 1/2.
void emit_plots(const std::filesystem::path& out_dir, const estimates::MonitorSeries& monitors,
                const std::optional<estimates::DecayFit>& fit, double T);

/// Runs several scenarios concurrently, each into out_root/<name>.
std::vector<RunReport> sweep(const std::vector<scenario::Scenario>& scenarios,
                             const std::filesystem::path& out_root, const RunOptions& options);

} // namespace krflow::runner

#endif
