// Command-line front end: validates configurations, runs scenarios and scans.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tlao/config.hpp"
#include "tlao/errors.hpp"
#include "tlao/scenarios.hpp"
#include "tlao/sweep.hpp"

#ifndef TLAO_PRESET_DIR
#define TLAO_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kPartialScan = 4 };

struct Options {
    std::string config;
    std::string preset;
    std::string out = ".";
    long long workers = 0;
    std::optional<double> dt;
    std::optional<long long> grid;
};

fs::path preset_dir() {
    if (const char* env = std::getenv("TLAO_PRESET_DIR")) return env;
    return TLAO_PRESET_DIR;
}

json load_document(const Options& o) {
    if (!o.config.empty() && !o.preset.empty()) throw tlao::ConfigError("--config and --preset are mutually exclusive");
    json doc = json::object();
    if (!o.config.empty()) doc = tlao::read_json_file(o.config);
    else if (!o.preset.empty()) doc = tlao::read_json_file(tlao::preset_path(o.preset, preset_dir()));
    if (!doc.is_object()) throw tlao::ConfigError("configuration must be a JSON object");
    if (o.dt || o.grid) {
        if (!doc.contains("numerics")) doc["numerics"] = json::object();
        if (!doc["numerics"].is_object()) throw tlao::ConfigError("'numerics': expected an object");
        if (o.dt) doc["numerics"]["dt"] = *o.dt;
        if (o.grid) doc["numerics"]["n"] = *o.grid;
    }
    return doc;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    writer(os);
}

int cmd_validate(const Options& o) {
    if (o.config.empty() && o.preset.empty()) {
        int failures = 0;
        for (const auto& name : tlao::list_presets(preset_dir())) {
            try {
                tlao::resolve_config(tlao::read_json_file(tlao::preset_path(name, preset_dir())));
                std::cout << name << ": ok\n";
            } catch (const tlao::ConfigError& e) {
                std::cerr << name << ": " << e.what() << '\n';
                ++failures;
            }
        }
        return failures ? kConfig : kOk;
    }
    const auto cfg = tlao::resolve_config(load_document(o));
    std::cout << cfg.document.dump(2) << '\n';
    return kOk;
}

int cmd_run(tlao::Scenario scenario, const Options& o) {
    json doc = load_document(o);
    doc["scenario"] = std::string(tlao::to_string(scenario));
    const auto cfg = tlao::resolve_config(doc);
    const fs::path out = o.out;
    const auto result = tlao::run_scenario(cfg, out / "snapshots");
    const fs::path csv = out / cfg.output.csv;
    write_file(csv, result.write_csv);
    std::cout << tlao::to_string(scenario) << ": " << result.summary << '\n' << "wrote " << csv.string() << '\n';
    return kOk;
}

int cmd_scan(const Options& o) {
    const json doc = load_document(o);
    const auto cfg = tlao::resolve_config(doc);
    if (!cfg.scan) throw tlao::ConfigError("configuration has no 'scan' block");
    const auto metrics = tlao::scenario_metrics(cfg.scenario);
    if (std::find(metrics.begin(), metrics.end(), cfg.scan->metric) == metrics.end())
        throw tlao::ConfigError("scenario '" + std::string(tlao::to_string(cfg.scenario)) + "' has no metric '" +
                                cfg.scan->metric + "'");
    const std::size_t workers = tlao::resolve_workers(o.workers);
    const auto result = tlao::run_scan(cfg.document, *cfg.scan, workers, tlao::metric_evaluator(cfg.scan->metric));
    const bool named = doc.contains("output") && doc["output"].contains("csv") && doc["output"]["csv"].is_string();
    const fs::path csv = fs::path(o.out) / (named ? cfg.output.csv : std::string("scan.csv"));
    write_file(csv, [&](std::ostream& os) { tlao::write_scan_csv(os, result); });
    std::cout << "scan: " << result.cells.size() << " cells, " << result.failures() << " failed, " << workers
              << " workers\nwrote " << csv.string() << '\n';
    for (std::size_t k = 0; k < result.cells.size(); ++k)
        if (result.cells[k].status != tlao::CellStatus::Ok)
            std::cerr << "cell " << k << ": " << tlao::to_string(result.cells[k].status) << ": " << result.cells[k].message << '\n';
    return result.failures() ? kPartialScan : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-trap and three-waveguide atom transport simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON configuration file");
        sub->add_option("--preset", o.preset, "shipped preset name (e.g. fig1)");
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--workers", o.workers, "scan workers (default: TLAO_WORKERS or all cores)");
        sub->add_option("--dt", o.dt, "override numerics.dt");
        sub->add_option("--grid", o.grid, "override numerics.n (transverse/1D grid points)");
    };

    struct Entry {
        const char* name;
        const char* help;
        std::optional<tlao::Scenario> scenario;
    };
    const Entry entries[] = {
        {"eig", "stationary spectrum and coupling schedule", tlao::Scenario::Eig},
        {"stirap", "three-trap transport (1D TDSE)", tlao::Scenario::Stirap},
        {"cpt", "three-trap splitting with symmetric separation", tlao::Scenario::Cpt},
        {"rabi", "two-trap Rabi-type transfer", tlao::Scenario::Rabi},
        {"two-atom", "two interacting bosons, hole transport", tlao::Scenario::TwoAtom},
        {"waveguide", "full 2D waveguide propagation", tlao::Scenario::Waveguide},
        {"channels", "coupled-channel waveguide model", tlao::Scenario::Channels},
        {"scan", "parameter scan from the configuration's scan block", std::nullopt},
        {"validate", "check a configuration (or every preset) and print it resolved", std::nullopt},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub);
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        for (const auto& [sub, entry] : subs) {
            if (!sub->parsed()) continue;
            if (entry->scenario) return cmd_run(*entry->scenario, o);
            if (std::string(entry->name) == "scan") return cmd_scan(o);
            return cmd_validate(o);
        }
    } catch (const tlao::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const tlao::NumericalIntegrityError& e) {
        std::cerr << "numerical integrity error: " << e.what() << '\n';
        return kNumerical;
    } catch (const tlao::BasisUnresolved& e) {
        std::cerr << "localised basis unresolved: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
