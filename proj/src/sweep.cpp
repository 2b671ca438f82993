#include "tlao/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <thread>

#include "tlao/errors.hpp"
#include "tlao/scenarios.hpp"

#ifndef TLAO_VERSION
#define TLAO_VERSION "0.0.0"
#endif

namespace tlao {

std::string_view to_string(CellStatus s) {
    switch (s) {
        case CellStatus::Ok: return "ok";
        case CellStatus::ConfigError: return "config_error";
        case CellStatus::NumericalError: return "numerical_error";
        case CellStatus::BasisUnresolved: return "basis_unresolved";
        case CellStatus::Error: return "error";
    }
    return "error";
}

std::size_t ScanResult::failures() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.status != CellStatus::Ok;
    return n;
}

std::string code_version() { return TLAO_VERSION; }

CellEvaluator metric_evaluator(const std::string& metric) {
    return [metric](const nlohmann::json& document) {
        const RunConfig cfg = resolve_config(document);
        return run_metric(cfg, metric);
    };
}

ScanResult run_scan(const nlohmann::json& base_document, const ScanSpec& spec, std::size_t workers,
                    const CellEvaluator& evaluate) {
    ScanResult result;
    result.spec = spec;
    result.scenario = base_document.value("scenario", "");
    result.axis1 = spec.axis1.values();
    if (spec.axis2) result.axis2 = spec.axis2->values();
    const std::size_t n2 = spec.axis2 ? spec.axis2->count : 1;
    const std::size_t total = spec.axis1.count * n2;

    // The scan block itself is not part of what a cell runs.
    nlohmann::json base = base_document;
    if (base.contains("scan")) base["scan"] = nullptr;
    result.config_hash = config_hash(base_document);
    result.code_version = code_version();

    std::vector<nlohmann::json> documents(total);
    for (std::size_t i = 0; i < spec.axis1.count; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            nlohmann::json doc = with_value(base, spec.axis1.path, result.axis1[i]);
            if (spec.axis2) doc = with_value(doc, spec.axis2->path, result.axis2[j]);
            documents[i * n2 + j] = std::move(doc);
        }
    }

    result.cells.assign(total, CellResult{});
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
            CellResult cell;
            try {
                cell.value = evaluate(documents[k]);
                cell.status = CellStatus::Ok;
            } catch (const ConfigError& e) {
                cell.status = CellStatus::ConfigError;
                cell.message = e.what();
            } catch (const NumericalIntegrityError& e) {
                cell.status = CellStatus::NumericalError;
                cell.message = e.what();
            } catch (const BasisUnresolved& e) {
                cell.status = CellStatus::BasisUnresolved;
                cell.message = e.what();
            } catch (const std::exception& e) {
                cell.status = CellStatus::Error;
                cell.message = e.what();
            }
            result.cells[k] = std::move(cell);
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(workers, total));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (total > 0 && result.failures() == total)
        throw NumericalIntegrityError("all " + std::to_string(total) + " scan cells failed; first: " + result.cells.front().message);
    return result;
}

void write_scan_csv(std::ostream& os, const ScanResult& r) {
    const auto axis_line = [&](const char* name, const ScanAxis& a) {
        os << "# " << name << ": " << a.path << " min=" << a.min << " max=" << a.max << " count=" << a.count << '\n';
    };
    os << std::setprecision(12);
    os << "# scenario: " << r.scenario << '\n';
    axis_line("axis1", r.spec.axis1);
    if (r.spec.axis2) axis_line("axis2", *r.spec.axis2);
    os << "# metric: " << r.spec.metric << '\n';
    os << "# config_hash: " << r.config_hash << '\n';
    os << "# code_version: " << r.code_version << '\n';
    os << "axis1,axis2,metric,status\n";
    const std::size_t n2 = r.axis2.empty() ? 1 : r.axis2.size();
    for (std::size_t i = 0; i < r.axis1.size(); ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const auto& c = r.cells[i * n2 + j];
            os << r.axis1[i] << ',';
            if (!r.axis2.empty()) os << r.axis2[j];
            os << ',';
            if (c.status == CellStatus::Ok) os << c.value;
            os << ',' << to_string(c.status) << '\n';
        }
    }
}

std::size_t resolve_workers(long long requested, const char* env_name) {
    if (requested > 0) return static_cast<std::size_t>(requested);
    if (const char* env = std::getenv(env_name)) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw ConfigError(std::string(env_name) + " must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace tlao
