#ifndef KRFLOW_SCENARIO_HPP
#define KRFLOW_SCENARIO_HPP

#include "krflow/flow.hpp"
#include "krflow/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace krflow::scenario {

/// A validated run configuration. File keys: k, f0, c0, s0_split, grid_n,
/// t_stops, delta, cfl. Times in t_stops and delta are fractions of the
/// singular time T.
struct Scenario {
    std::string name = "scenario";
    int k = 0;
    double f0 = 0.0;
    double c0 = 0.0;
    double s0_split = 0.0; // initial slope gauge: a0 = s0_split * f0
    int grid_n = 1024;
    std::vector<double> t_stops = {0.5, 0.8, 0.95, 0.99};
    double delta = 1e-3;
    double cfl = 0.45;

    // Derived at validation.
    double T = 0.0;
    double cB = 0.0;
    double a0 = 0.0;
    double b0 = 0.0;
    double s0 = 0.0;

    double t_end() const { return T * (1.0 - delta); }
};

/// Parses an INI-style key=value file. Unknown keys, duplicate keys and
/// malformed values raise ParseError with a line number; violated
/// preconditions raise ValidationError naming the failing one.
Scenario parse_scenario(const std::filesystem::path& path);

/// Recomputes derived quantities and enforces every module precondition.
void validate(Scenario& s);

/// Shipped presets: product (k=0, f0=2, c0=6), hirzebruch1 (k=1, f0=2, c0=6),
/// hirzebruch2 (k=2, f0=1, c0=3).
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

flow::FlowProblem make_problem(const Scenario& s);

/// Monitor schedule: `count` times with 1 - t/T log-spaced from 1 down to
/// delta, so the collapse window is densely sampled.
std::vector<double> monitor_times(const Scenario& s, int count = 64);

} // namespace krflow::scenario

#endif
