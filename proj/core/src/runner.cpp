#include "krflow/runner.hpp"
#include "krflow/csvio.hpp"
#include "krflow/errors.hpp"
#include "krflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

namespace krflow::runner {

void RunReport::require(bool cond, const std::string& invariant) {
    if (!cond) {
        ok = false;
        failures.push_back(invariant);
    }
}

namespace {

std::string profile_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "profile_%03zu.csv", index);
    return buf;
}

} // namespace

RunReport run_scenario(const scenario::Scenario& s, const std::filesystem::path& out_dir,
                       const RunOptions& options) {
    std::filesystem::create_directories(out_dir);
    RunReport report;
    report.out_dir = out_dir;

    const geometry::BundleGeometry geom(s.k);
    flow::FlowProblem problem = scenario::make_problem(s);

    // Record at the dense monitor schedule plus the requested stops.
    std::vector<double> stops;
    for (double f : s.t_stops) stops.push_back(f * s.T);
    std::vector<double> record = scenario::monitor_times(s, options.monitor_count);
    record.insert(record.end(), stops.begin(), stops.end());

    flow::RunConfig config;
    config.record_times = std::move(record);
    config.t_end = s.t_end();
    config.cfl = s.cfl;
    report.run = problem.run(config);
    report.require(report.run.status == flow::RunStatus::Completed,
                   "flow run reached t_end without hitting the step floor");

    // Profile CSV per requested stop + run_summary rows.
    std::vector<std::vector<double>> summary_rows;
    std::size_t profile_index = 0;
    for (const auto& snap : report.run.snapshots) {
        const bool is_stop =
            std::any_of(stops.begin(), stops.end(),
                        [&](double t) { return std::abs(t - snap.t) <= 1e-12 * s.T; });
        if (!is_stop) continue;
        if (options.write_profiles) {
            calabi::write_profile_csv(out_dir / profile_name(profile_index), snap.profile);
        }
        ++profile_index;
        summary_rows.push_back({snap.t, calabi::fiber_area(snap.profile),
                                calabi::section_area(snap.profile, geom),
                                calabi::total_volume(snap.profile, geom), snap.min_v,
                                snap.max_phi, snap.dt_last});
    }
    csvio::write(out_dir / "run_summary.csv",
                 {"t", "fiber_area", "section_area", "volume", "min_v", "max_phi", "dt_last"},
                 summary_rows);

    // Monitor sweep across all recorded snapshots.
    auto sing = estimates::SingularComparison::with_defaults(
        geom, s.cB, estimates::default_split_bundle(s.k));
    report.monitors = estimates::sweep_monitors(report.run.snapshots, geom, s.cB, sing);
    for (std::size_t i = 0; i < report.monitors.t.size(); ++i) {
        report.require(report.monitors.schwarz_inf[i] > 0.0,
                       "schwarz_inf positive at every recorded time");
        report.require(std::isfinite(report.monitors.trace_sup[i]),
                       "trace_sup finite at every recorded time");
    }

    std::vector<std::vector<double>> monitor_rows;
    for (std::size_t i = 0; i < report.monitors.t.size(); ++i) {
        monitor_rows.push_back({report.monitors.t[i], report.monitors.schwarz_inf[i],
                                report.monitors.trace_sup[i], report.monitors.fiber_diam[i],
                                report.monitors.h_sup[i], report.monitors.phi_max[i]});
    }
    csvio::write(out_dir / "monitors.csv",
                 {"t", "schwarz_inf", "trace_sup", "fiber_diam", "H_sup", "phi_max"},
                 monitor_rows);

    try {
        report.fit = estimates::decay_exponent(report.monitors.t, report.monitors.fiber_diam,
                                               s.T, 0.9 * s.T, s.t_end());
    } catch (const InsufficientSamples&) {
        report.fit.reset();
    }
    if (report.fit) {
        csvio::write(out_dir / "fit.csv", {"exponent", "residual", "window_lo", "window_hi"},
                     {{report.fit->exponent, report.fit->residual, report.fit->window_lo,
                       report.fit->window_hi}});
    }

    if (options.write_plots) {
        emit_plots(out_dir, report.monitors, report.fit, s.T);
    }

    if (options.with_gh) {
        metricspace::SpaceOptions sopt;
        sopt.resolution = options.gh_resolution;
        sopt.threads = options.threads;
        for (const auto& snap : report.run.snapshots) {
            const bool is_stop =
                std::any_of(stops.begin(), stops.end(),
                            [&](double t) { return std::abs(t - snap.t) <= 1e-12 * s.T; });
            if (!is_stop || snap.t == 0.0) continue;
            report.spaces.push_back(metricspace::build_space(snap, geom, sopt));
        }
        if (report.spaces.size() >= 3) {
            const auto limit = metricspace::limit_distance(report.spaces);
            const auto d_base_fs = metricspace::base_fs_matrix(report.spaces.back(), s.cB);
            for (std::size_t i = 0; i < report.spaces.size(); ++i) {
                const auto& space = report.spaces[i];
                report.require(space.triangle_defect() <= 1e-9,
                               "distance matrix triangle audit at 1e-9 slack");
                const auto corr = metricspace::canonical_correspondence(space);
                const auto gh = metricspace::gh_epsilon(space, limit.dB_inf, corr);
                const auto sandwich =
                    metricspace::sandwich_check(metricspace::lifted_base_matrix(space), d_base_fs);
                GhRow row;
                row.t = space.time;
                row.epsilon = gh.epsilon;
                double mfd = 0.0;
                for (int b = 0; b < space.n_base_samples; ++b) {
                    mfd = std::max(mfd, metricspace::fiber_diameter_graph(space, b));
                }
                row.max_fiber_diam = mfd;
                row.distortion = gh.distortion_x;
                row.sqrt_c = sandwich.sqrt_c;
                row.C2 = sandwich.C2;
                row.cauchy_sup = i == 0 ? 0.0 : limit.cauchy_sup[i - 1];
                report.gh.push_back(row);
            }
            std::vector<std::vector<double>> gh_rows;
            for (const auto& row : report.gh) {
                gh_rows.push_back({row.t, row.epsilon, row.max_fiber_diam, row.distortion,
                                   row.sqrt_c, row.C2, row.cauchy_sup});
            }
            csvio::write(out_dir / "gh.csv",
                         {"t", "epsilon", "max_fiber_diam", "distortion", "sqrt_c", "C2",
                          "cauchy_sup"},
                         gh_rows);
        } else {
            report.require(false, "gh schedule needs >= 3 stops past t = 0");
        }
    }

    return report;
}

void emit_plots(const std::filesystem::path& out_dir, const estimates::MonitorSeries& monitors,
                const std::optional<estimates::DecayFit>& fit, double T) {
    std::vector<svg::Series> series;
    svg::Series data;
    data.points = true;
    data.color = "#1f77b4";
    data.label = "measured";
    for (std::size_t i = 0; i < monitors.t.size(); ++i) {
        const double rem = T - monitors.t[i];
        if (!(rem > 0.0) || !(monitors.fiber_diam[i] > 0.0)) continue;
        data.x.push_back(std::log(rem));
        data.y.push_back(std::log(monitors.fiber_diam[i]));
    }
    if (data.x.empty()) return;
    series.push_back(data);

    const double x0 = *std::min_element(data.x.begin(), data.x.end());
    const double x1 = *std::max_element(data.x.begin(), data.x.end());
    const double yref = data.y.back();
    const double xref = data.x.back();
    auto ref_line = [&](double slope, const std::string& color, const std::string& label) {
        svg::Series line;
        line.color = color;
        line.label = label;
        line.x = {x0, x1};
        line.y = {yref + slope * (x0 - xref), yref + slope * (x1 - xref)};
        return line;
    };
    if (fit) {
        series.push_back(ref_line(fit->exponent, "#d62728", "fit"));
    }
    series.push_back(ref_line(1.0 / 3.0, "#2ca02c", "slope 1/3"));
    series.push_back(ref_line(0.5, "#9467bd", "slope 1/2"));
    write_plot(out_dir / "diam_fit.svg", series, "log(T - t)", "log fiber diameter",
               "Fiber diameter decay");
}

std::vector<RunReport> sweep(const std::vector<scenario::Scenario>& scenarios,
                             const std::filesystem::path& out_root, const RunOptions& options) {
    std::vector<std::future<RunReport>> futures;
    futures.reserve(scenarios.size());
    for (const auto& s : scenarios) {
        futures.push_back(std::async(std::launch::async, [&options, &out_root, s]() {
            return run_scenario(s, out_root / s.name, options);
        }));
    }
    std::vector<RunReport> reports;
    reports.reserve(futures.size());
    for (auto& f : futures) reports.push_back(f.get());
    return reports;
}

} // namespace krflow::runner
