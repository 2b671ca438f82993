#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tlao/potentials.hpp"
#include "tlao/tdse.hpp"
#include "tlao/two_particle.hpp"
#include "tlao/waveguide.hpp"

namespace tlao {

enum class Scenario { Eig, Stirap, Cpt, Rabi, TwoAtom, Waveguide, Channels };

std::string_view to_string(Scenario s);
/// Throws ConfigError for unknown names.
Scenario parse_scenario(std::string_view name);

struct ScanAxis {
    std::string path;  ///< dotted path into the configuration document
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;

    double value(std::size_t i) const;
    std::vector<double> values() const;
};

struct ScanSpec {
    ScanAxis axis1;
    std::optional<ScanAxis> axis2;
    std::string metric;

    std::size_t cell_count() const { return axis1.count * (axis2 ? axis2->count : 1); }
};

struct EigOptions {
    double time = 0.0;          ///< trajectory time at which the spectrum is taken
    std::size_t count = 3;
    std::size_t samples = 301;  ///< coupling-schedule samples over the trajectory
    Discretization discretization = Discretization::FiniteDifference;
};

struct RabiOptions {
    /// Replace trajectory t_i by the calibrated hold (searched around the given t_i).
    bool calibrate_hold = false;
};

struct OutputOptions {
    std::string csv;              ///< file name inside the output directory
    bool snapshots = false;       ///< write binary snapshots at numerics.snapshot_interval
};

/// Fully resolved configuration. `document` is the merged JSON (defaults overlaid by
/// the user's values) the typed fields were built from.
struct RunConfig {
    nlohmann::json document;
    Scenario scenario = Scenario::Stirap;
    TrapParams trap;
    TrajectorySpec trajectory;
    PerturbationSpec perturbation;
    InteractionSpec interaction;
    std::optional<double> target_u;   ///< set when g1d is calibrated rather than given
    WaveguideGeometry geometry;
    WavePacketSpec packet;
    Numerics1D numerics_1d;
    Numerics2P numerics_2p;
    Numerics2D numerics_2d;
    EigOptions eig;
    RabiOptions rabi;
    std::optional<ScanSpec> scan;
    OutputOptions output;
};

/// The configuration document with every key present; null marks "use the default
/// for this scenario" (numerics) or "inherit the shared value" (per-pair overrides).
nlohmann::json default_document();

/// Overlays `user` on the defaults and builds the typed configuration. Unknown keys,
/// wrong value types and out-of-range values throw ConfigError.
RunConfig resolve_config(const nlohmann::json& user);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Looks up `<name>.json` in `preset_dir`.
std::filesystem::path preset_path(std::string_view name, const std::filesystem::path& preset_dir);
std::vector<std::string> list_presets(const std::filesystem::path& preset_dir);

/// Returns a copy of `document` with the value at the dotted `path` replaced. The path
/// must name an existing numeric (or nullable) entry of the default document.
nlohmann::json with_value(const nlohmann::json& document, std::string_view path, double value);

/// FNV-1a (64 bit) of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& document);

}  // namespace tlao
