// Command-line driver: scenario runs, monitor sweeps, sampled
// Gromov-Hausdorff schedules, the projective-pullback property battery, the
// verification suite, and parallel scenario sweeps.

#include "krflow/csvio.hpp"
#include "krflow/errors.hpp"
#include "krflow/fsgeom.hpp"
#include "krflow/runner.hpp"
#include "krflow/scenario.hpp"
#include "krflow/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string preset;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_source) {
    auto* sc = cmd->add_option("--scenario", args.scenario_path, "scenario file (key=value)");
    auto* pr = cmd->add_option("--preset", args.preset,
                               "preset name: product, hirzebruch1, hirzebruch2");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master seed for randomized components");
    if (need_source) {
        sc->excludes(pr);
        pr->excludes(sc);
    }
}

krflow::scenario::Scenario load_scenario(const CommonArgs& args) {
    if (!args.preset.empty()) return krflow::scenario::preset(args.preset);
    if (!args.scenario_path.empty()) {
        return krflow::scenario::parse_scenario(args.scenario_path);
    }
    throw krflow::ValidationError("provide --scenario <path> or --preset <name>");
}

int report_outcome(const krflow::runner::RunReport& report) {
    if (report.ok) {
        std::cout << "ok: artifacts in " << report.out_dir.string() << "\n";
        return 0;
    }
    for (const auto& f : report.failures) {
        std::cerr << "failed invariant: " << f << "\n";
    }
    return 1;
}

int cmd_fslemma(const CommonArgs& args) {
    std::filesystem::create_directories(args.out_dir);
    const std::uint64_t master = args.seed ? args.seed : 20240513ULL;
    std::vector<std::vector<double>> rows;
    double global_min = std::numeric_limits<double>::infinity();
    for (int r = 2; r <= 5; ++r) {
        for (int i = 0; i < 50; ++i) {
            const std::uint64_t seed =
                krflow::fsgeom::derive_seed(master, static_cast<std::uint64_t>(r * 1000 + i));
            krflow::fsgeom::LinearMap a(krflow::fsgeom::random_invertible(r, seed));
            const auto check = krflow::fsgeom::verify_lemma(a, 1000, seed);
            rows.push_back({static_cast<double>(r), static_cast<double>(seed),
                            static_cast<double>(check.samples), check.min_ratio, check.bound});
            global_min = std::min(global_min, check.min_ratio);
        }
    }
    krflow::csvio::write(std::filesystem::path(args.out_dir) / "fslemma.csv",
                         {"r", "seed", "samples", "min_ratio", "bound"}, rows);
    std::cout << "min ratio over all maps: " << krflow::csvio::format_shortest(global_min)
              << (global_min >= 1.0 - 1e-9 ? " (>= 1 - 1e-9)" : " (BELOW the predicted bound)")
              << "\n";
    return global_min >= 1.0 - 1e-9 ? 0 : 1;
}

int cmd_verify(const std::string& criterion, int threads) {
    krflow::verify::Context ctx(threads);
    std::vector<krflow::verify::CriterionResult> results;
    if (criterion == "all") {
        results = krflow::verify::run_all(ctx);
    } else {
        results.push_back(krflow::verify::run_criterion(ctx, std::stoi(criterion)));
    }
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.detail
                  << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fiber-collapse flow simulator and verification suite"};
    app.require_subcommand(1);

    CommonArgs run_args, monitor_args, gh_args, fslemma_args;
    std::vector<std::string> sweep_paths;
    std::string sweep_out = "out";
    std::string criterion = "all";
    int verify_threads = 0;

    auto* run_cmd = app.add_subcommand("run", "flow run: profiles, run_summary, monitors, plots");
    add_common(run_cmd, run_args, true);

    auto* monitor_cmd =
        app.add_subcommand("monitor", "flow run + monitor sweep and decay fit only");
    add_common(monitor_cmd, monitor_args, true);

    auto* gh_cmd = app.add_subcommand("gh", "flow run + sampled Gromov-Hausdorff schedule");
    add_common(gh_cmd, gh_args, true);
    int gh_resolution = 15;
    gh_cmd->add_option("--resolution", gh_resolution, "grid resolution per factor (>= 8)");

    auto* fslemma_cmd =
        app.add_subcommand("fslemma", "randomized projective pullback certification");
    add_common(fslemma_cmd, fslemma_args, false);

    auto* verify_cmd = app.add_subcommand("verify", "acceptance criteria (1..10 or 'all')");
    verify_cmd->add_option("criterion", criterion, "criterion id or 'all'");
    verify_cmd->add_option("--threads", verify_threads, "worker threads for graph stages");

    auto* sweep_cmd = app.add_subcommand("sweep", "run several scenarios concurrently");
    sweep_cmd->add_option("--scenario", sweep_paths, "scenario files")->required();
    sweep_cmd->add_option("--out", sweep_out, "output root directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            krflow::runner::RunOptions opts;
            opts.seed = run_args.seed;
            return report_outcome(
                krflow::runner::run_scenario(load_scenario(run_args), run_args.out_dir, opts));
        }
        if (monitor_cmd->parsed()) {
            krflow::runner::RunOptions opts;
            opts.seed = monitor_args.seed;
            opts.write_profiles = false;
            return report_outcome(krflow::runner::run_scenario(load_scenario(monitor_args),
                                                               monitor_args.out_dir, opts));
        }
        if (gh_cmd->parsed()) {
            krflow::runner::RunOptions opts;
            opts.seed = gh_args.seed;
            opts.with_gh = true;
            opts.gh_resolution = gh_resolution;
            return report_outcome(
                krflow::runner::run_scenario(load_scenario(gh_args), gh_args.out_dir, opts));
        }
        if (fslemma_cmd->parsed()) return cmd_fslemma(fslemma_args);
        if (verify_cmd->parsed()) return cmd_verify(criterion, verify_threads);
        if (sweep_cmd->parsed()) {
            std::vector<krflow::scenario::Scenario> scenarios;
            for (const auto& p : sweep_paths) {
                scenarios.push_back(krflow::scenario::parse_scenario(p));
            }
            krflow::runner::RunOptions opts;
            const auto reports = krflow::runner::sweep(scenarios, sweep_out, opts);
            int rc = 0;
            for (const auto& r : reports) rc |= report_outcome(r);
            return rc;
        }
    } catch (const krflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
