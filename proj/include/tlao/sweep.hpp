#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlao/config.hpp"

namespace tlao {

enum class CellStatus { Ok, ConfigError, NumericalError, BasisUnresolved, Error };

std::string_view to_string(CellStatus s);

struct CellResult {
    double value = 0.0;
    CellStatus status = CellStatus::Error;
    std::string message;
};

struct ScanResult {
    ScanSpec spec;
    std::string scenario;
    std::vector<double> axis1;
    std::vector<double> axis2;       ///< empty for a 1D scan
    std::vector<CellResult> cells;   ///< row-major: axis1 outer, axis2 inner
    std::string config_hash;
    std::string code_version;

    std::size_t failures() const;
    const CellResult& at(std::size_t i, std::size_t j = 0) const {
        return cells[i * (axis2.empty() ? 1 : axis2.size()) + j];
    }
};

/// Evaluates one cell from its fully patched configuration document.
using CellEvaluator = std::function<double(const nlohmann::json& document)>;

/// Default evaluator: resolve_config + run_metric(metric).
CellEvaluator metric_evaluator(const std::string& metric);

/// Runs every cell of `spec` over `base_document` on up to `workers` threads
/// (cells are claimed from a shared counter). Failed cells keep their status and
/// message; results are ordered by cell index whatever the completion order.
/// Throws ConfigError for unresolvable axis paths and NumericalIntegrityError when
/// every cell failed.
ScanResult run_scan(const nlohmann::json& base_document, const ScanSpec& spec, std::size_t workers,
                    const CellEvaluator& evaluate);

/// `#`-prefixed metadata lines, then `axis1,axis2,metric,status` rows (axis2 empty in 1D).
void write_scan_csv(std::ostream& os, const ScanResult& result);

/// Worker count: explicit value if positive, else the environment variable, else
/// the hardware concurrency (at least 1).
std::size_t resolve_workers(long long requested, const char* env_name = "TLAO_WORKERS");

/// Version string embedded in outputs.
std::string code_version();

}  // namespace tlao
