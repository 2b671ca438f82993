#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tlao/config.hpp"

namespace tlao {

struct ScenarioOutput {
    std::map<std::string, double> metrics;
    std::function<void(std::ostream&)> write_csv;
    std::string summary;  ///< one human-readable line
};

/// Metric names a scenario reports (valid scan metrics).
std::vector<std::string> scenario_metrics(Scenario s);

/// Runs the configured scenario. Snapshots go to `snapshot_dir` when
/// output.snapshots is set and the directory is given.
ScenarioOutput run_scenario(const RunConfig& cfg, const std::filesystem::path& snapshot_dir = {});

/// run_scenario(...).metrics.at(metric), with a ConfigError for unknown metrics.
double run_metric(const RunConfig& cfg, const std::string& metric);

}  // namespace tlao
