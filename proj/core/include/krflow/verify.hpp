#ifndef KRFLOW_VERIFY_HPP
#define KRFLOW_VERIFY_HPP

#include "krflow/estimates.hpp"
#include "krflow/metricspace.hpp"
#include "krflow/scenario.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace krflow::verify {

struct CriterionResult {
    int id = 0;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Shared artifacts for the verification suite; preset runs and sampled
/// spaces are built once and reused across criteria.
class Context {
public:
    explicit Context(int threads = 0);

    struct PresetData {
        scenario::Scenario s;
        flow::RunResult run;
        estimates::MonitorSeries monitors;
        double run_seconds = 0.0;
    };

    const PresetData& preset_run(const std::string& name);

    struct SpaceSet {
        std::vector<metricspace::FiniteMetricSpace> spaces;
        std::vector<double> build_seconds;
    };

    const SpaceSet& preset_spaces(const std::string& name, int resolution = 15);

    int threads() const { return threads_; }

private:
    int threads_ = 0;
    std::map<std::string, std::unique_ptr<PresetData>> runs_;
    std::map<std::string, std::unique_ptr<SpaceSet>> spaces_;
};

constexpr int kCriterionCount = 10;

/// Executes one acceptance criterion (1..10) at its pinned tolerances.
CriterionResult run_criterion(Context& ctx, int id);

std::vector<CriterionResult> run_all(Context& ctx);

} // namespace krflow::verify

#endif
