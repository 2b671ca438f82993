#include "tlao/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tlao/errors.hpp"

namespace tlao {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 7> kScenarioNames{{
    {Scenario::Eig, "eig"},
    {Scenario::Stirap, "stirap"},
    {Scenario::Cpt, "cpt"},
    {Scenario::Rabi, "rabi"},
    {Scenario::TwoAtom, "two-atom"},
    {Scenario::Waveguide, "waveguide"},
    {Scenario::Channels, "channels"},
}};

json pair_overrides() {
    return {{"d_max", nullptr}, {"d_min", nullptr}, {"t_r", nullptr}, {"t_i", nullptr}, {"t_sep", nullptr}};
}

std::string join(std::string_view prefix, std::string_view key) {
    return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

std::string type_name(const json& v) {
    if (v.is_null()) return "null";
    if (v.is_boolean()) return "boolean";
    if (v.is_number()) return "number";
    if (v.is_string()) return "string";
    if (v.is_object()) return "object";
    return "array";
}

void check_scan_axis(const json& axis, const std::string& where) {
    if (!axis.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : axis.items()) {
        if (key == "path") {
            if (!value.is_string()) throw ConfigError(where + ".path: expected a string");
        } else if (key == "min" || key == "max") {
            if (!value.is_number()) throw ConfigError(where + "." + key + ": expected a number");
        } else if (key == "count") {
            if (!value.is_number_integer() || value.get<long long>() < 1)
                throw ConfigError(where + ".count: expected a positive integer");
        } else {
            throw ConfigError("unknown key '" + where + "." + key + "'");
        }
    }
    for (const char* key : {"path", "min", "max", "count"})
        if (!axis.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
}

void check_scan(const json& scan) {
    if (scan.is_null()) return;
    if (!scan.is_object()) throw ConfigError("scan: expected an object or null");
    for (const auto& [key, value] : scan.items()) {
        if (key == "axis1") {
            check_scan_axis(value, "scan.axis1");
        } else if (key == "axis2") {
            if (!value.is_null()) check_scan_axis(value, "scan.axis2");
        } else if (key == "metric") {
            if (!value.is_string()) throw ConfigError("scan.metric: expected a string");
        } else {
            throw ConfigError("unknown key 'scan." + key + "'");
        }
    }
    if (!scan.contains("axis1") || !scan.contains("metric")) throw ConfigError("scan: 'axis1' and 'metric' are required");
}

/// Copies `user` over `base`, rejecting keys `base` does not have and type changes.
/// A null in `base` accepts null or a number (or a string for the few string slots).
void overlay(json& base, const json& user, const std::string& prefix) {
    if (!user.is_object()) throw ConfigError((prefix.empty() ? std::string("configuration") : prefix) + ": expected an object");
    for (const auto& [key, value] : user.items()) {
        const std::string path = join(prefix, key);
        if (!base.contains(key)) throw ConfigError("unknown key '" + path + "'");
        json& slot = base[key];
        if (path == "scan") {
            check_scan(value);
            slot = value;
            continue;
        }
        if (slot.is_object()) {
            overlay(slot, value, path);
            continue;
        }
        const bool ok = slot.is_null()    ? (value.is_null() || value.is_number() || (path == "output.csv" && value.is_string()))
                        : slot.is_number() ? value.is_number()
                                           : type_name(slot) == type_name(value);
        if (!ok) throw ConfigError("'" + path + "': expected " + (slot.is_null() ? std::string("number or null") : type_name(slot)) +
                                   ", got " + type_name(value));
        slot = value;
    }
}

double num(const json& v) { return v.get<double>(); }

std::optional<double> opt(const json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

template <typename T>
void set_if(T& target, const json& v) {
    if (!v.is_null()) target = static_cast<T>(v.get<double>());
}

std::size_t count_of(const json& v, const char* what) {
    const double d = v.get<double>();
    if (!(d >= 1.0) || std::floor(d) != d) throw ConfigError(std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(d);
}

RampShape parse_ramp(const std::string& s, const char* where) {
    if (s == "linear") return RampShape::Linear;
    if (s == "cosine") return RampShape::Cosine;
    throw ConfigError(std::string(where) + ": expected 'linear' or 'cosine', got '" + s + "'");
}

PulseOrder parse_order(const std::string& s, const char* where) {
    if (s == "counterintuitive") return PulseOrder::Counterintuitive;
    if (s == "intuitive") return PulseOrder::Intuitive;
    throw ConfigError(std::string(where) + ": expected 'counterintuitive' or 'intuitive', got '" + s + "'");
}

SeparationMode parse_separation(const std::string& s, const char* where) {
    if (s == "sequential") return SeparationMode::Sequential;
    if (s == "symmetric") return SeparationMode::Symmetric;
    throw ConfigError(std::string(where) + ": expected 'sequential' or 'symmetric', got '" + s + "'");
}

Site parse_site(const std::string& s) {
    if (s == "left") return Site::Left;
    if (s == "middle") return Site::Middle;
    if (s == "right") return Site::Right;
    throw ConfigError("packet.entry: expected 'left', 'middle' or 'right', got '" + s + "'");
}

PairSchedule pair_from(const json& shared, const json& over) {
    PairSchedule p;
    p.d_max = num(shared["d_max"]);
    p.d_min = num(shared["d_min"]);
    p.t_r = num(shared["t_r"]);
    p.t_i = num(shared["t_i"]);
    p.t_sep = opt(shared["t_sep"]);
    set_if(p.d_max, over["d_max"]);
    set_if(p.d_min, over["d_min"]);
    set_if(p.t_r, over["t_r"]);
    set_if(p.t_i, over["t_i"]);
    if (!over["t_sep"].is_null()) p.t_sep = over["t_sep"].get<double>();
    return p;
}

std::string default_csv_name(Scenario s) {
    switch (s) {
        case Scenario::Eig: return "couplings.csv";
        case Scenario::Stirap: return "populations.csv";
        case Scenario::Cpt: return "populations.csv";
        case Scenario::Rabi: return "populations.csv";
        case Scenario::TwoAtom: return "holes.csv";
        case Scenario::Waveguide: return "exits.csv";
        case Scenario::Channels: return "exits.csv";
    }
    return "output.csv";
}

ScanAxis axis_from(const json& a) {
    ScanAxis axis;
    axis.path = a["path"].get<std::string>();
    axis.min = num(a["min"]);
    axis.max = num(a["max"]);
    axis.count = static_cast<std::size_t>(a["count"].get<long long>());
    if (axis.count == 1 && axis.min != axis.max) throw ConfigError("scan axis '" + axis.path + "': a single-point axis needs min == max");
    return axis;
}

}  // namespace

std::string_view to_string(Scenario s) {
    for (const auto& [id, name] : kScenarioNames)
        if (id == s) return name;
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    for (const auto& [id, n] : kScenarioNames)
        if (n == name) return id;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

double ScanAxis::value(std::size_t i) const {
    if (count <= 1) return min;
    return min + (max - min) * double(i) / double(count - 1);
}

std::vector<double> ScanAxis::values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = value(i);
    return out;
}

json default_document() {
    return {
        {"scenario", "stirap"},
        {"trap", {{"depth", 100.0}}},
        {"trajectory",
         {{"d_max", 9.0},
          {"d_min", 1.5},
          {"t_r", 300.0},
          {"t_i", 0.0},
          {"t_sep", nullptr},
          {"t_delay", 120.0},
          {"order", "counterintuitive"},
          {"ramp", "cosine"},
          {"separation", "sequential"},
          {"time_scale", 1.0},
          {"lm", pair_overrides()},
          {"mr", pair_overrides()}}},
        {"perturbation", {{"gamma", 0.0}, {"a_shake", 0.0}, {"omega_shake", 0.01}}},
        {"interaction", {{"g1d", nullptr}, {"target_u", 0.5}, {"width", 0.5}}},
        {"geometry",
         {{"d_max", 6.0},
          {"d_min", 1.5},
          {"l_r", 65.0},
          {"l_i", 0.0},
          {"l_sep", nullptr},
          {"delay", 20.0},
          {"order", "counterintuitive"},
          {"ramp", "cosine"},
          {"separation", "symmetric"},
          {"y_start", 0.0}}},
        {"packet", {{"k_mean", 3.5}, {"k_spread", 1.0}, {"omega_r", 1.0 / 6.0}, {"entry", "left"}, {"y0", -15.0}}},
        {"numerics",
         {{"x_min", nullptr},
          {"x_max", nullptr},
          {"n", nullptr},
          {"dt", nullptr},
          {"sample_interval", nullptr},
          {"norm_tolerance", nullptr},
          {"snapshot_interval", nullptr},
          {"snapshot_until", nullptr},
          {"symmetry_tolerance", nullptr},
          {"y_min", nullptr},
          {"y_max", nullptr},
          {"y_n", nullptr},
          {"absorber_width", nullptr},
          {"absorber_strength", nullptr},
          {"exit_gap", nullptr},
          {"entry_gap", nullptr},
          {"clear_tolerance", nullptr},
          {"t_max", nullptr}}},
        {"eig", {{"time", 0.0}, {"count", 3}, {"samples", 301}, {"discretization", "finite_difference"}}},
        {"rabi", {{"calibrate_hold", false}}},
        {"scan", nullptr},
        {"output", {{"csv", nullptr}, {"snapshots", false}}},
    };
}

RunConfig resolve_config(const json& user) {
    json doc = default_document();
    overlay(doc, user, "");

    RunConfig cfg;
    cfg.scenario = parse_scenario(doc["scenario"].get<std::string>());
    cfg.trap.depth = num(doc["trap"]["depth"]);
    cfg.trap.validate();

    const json& tj = doc["trajectory"];
    TrajectorySpec traj;
    traj.lm = pair_from(tj, tj["lm"]);
    traj.mr = pair_from(tj, tj["mr"]);
    traj.t_delay = num(tj["t_delay"]);
    traj.order = parse_order(tj["order"].get<std::string>(), "trajectory.order");
    traj.ramp = parse_ramp(tj["ramp"].get<std::string>(), "trajectory.ramp");
    traj.separation = parse_separation(tj["separation"].get<std::string>(), "trajectory.separation");
    const double scale = num(tj["time_scale"]);
    if (!(scale > 0.0)) throw ConfigError("trajectory.time_scale must be positive");
    traj.validate();
    cfg.trajectory = scale == 1.0 ? traj : traj.dilated(scale);

    const json& pj = doc["perturbation"];
    cfg.perturbation = {num(pj["gamma"]), num(pj["a_shake"]), num(pj["omega_shake"])};
    cfg.perturbation.validate();

    const json& gj = doc["geometry"];
    PairSchedule guide;
    guide.d_max = num(gj["d_max"]);
    guide.d_min = num(gj["d_min"]);
    guide.t_r = num(gj["l_r"]);
    guide.t_i = num(gj["l_i"]);
    guide.t_sep = opt(gj["l_sep"]);
    cfg.geometry.profile.lm = guide;
    cfg.geometry.profile.mr = guide;
    cfg.geometry.profile.t_delay = num(gj["delay"]);
    cfg.geometry.profile.order = parse_order(gj["order"].get<std::string>(), "geometry.order");
    cfg.geometry.profile.ramp = parse_ramp(gj["ramp"].get<std::string>(), "geometry.ramp");
    cfg.geometry.profile.separation = parse_separation(gj["separation"].get<std::string>(), "geometry.separation");
    cfg.geometry.y_start = num(gj["y_start"]);
    cfg.geometry.validate();

    const json& kj = doc["packet"];
    cfg.packet.k_mean = num(kj["k_mean"]);
    cfg.packet.k_spread = num(kj["k_spread"]);
    cfg.packet.omega_r = num(kj["omega_r"]);
    cfg.packet.entry = parse_site(kj["entry"].get<std::string>());
    cfg.packet.y0 = num(kj["y0"]);
    cfg.packet.validate();

    const json& nj = doc["numerics"];
    auto apply_grid = [&](Grid1D& g) {
        set_if(g.x_min, nj["x_min"]);
        set_if(g.x_max, nj["x_max"]);
        if (!nj["n"].is_null()) g.n = count_of(nj["n"], "numerics.n");
    };
    Numerics1D& n1 = cfg.numerics_1d;
    apply_grid(n1.grid);
    set_if(n1.dt, nj["dt"]);
    set_if(n1.sample_interval, nj["sample_interval"]);
    set_if(n1.norm_tolerance, nj["norm_tolerance"]);
    set_if(n1.snapshot_interval, nj["snapshot_interval"]);

    Numerics2P& n2 = cfg.numerics_2p;
    apply_grid(n2.grid);
    set_if(n2.dt, nj["dt"]);
    set_if(n2.sample_interval, nj["sample_interval"]);
    set_if(n2.norm_tolerance, nj["norm_tolerance"]);
    set_if(n2.symmetry_tolerance, nj["symmetry_tolerance"]);
    set_if(n2.snapshot_interval, nj["snapshot_interval"]);

    Numerics2D& nw = cfg.numerics_2d;
    apply_grid(nw.x);
    set_if(nw.y.x_min, nj["y_min"]);
    set_if(nw.y.x_max, nj["y_max"]);
    if (!nj["y_n"].is_null()) nw.y.n = count_of(nj["y_n"], "numerics.y_n");
    set_if(nw.dt, nj["dt"]);
    set_if(nw.sample_interval, nj["sample_interval"]);
    set_if(nw.norm_tolerance, nj["norm_tolerance"]);
    set_if(nw.snapshot_interval, nj["snapshot_interval"]);
    set_if(nw.snapshot_until, nj["snapshot_until"]);
    set_if(nw.absorber_width, nj["absorber_width"]);
    set_if(nw.absorber_strength, nj["absorber_strength"]);
    set_if(nw.exit_gap, nj["exit_gap"]);
    set_if(nw.entry_gap, nj["entry_gap"]);
    set_if(nw.clear_tolerance, nj["clear_tolerance"]);
    set_if(nw.t_max, nj["t_max"]);

    switch (cfg.scenario) {
        case Scenario::Eig:
        case Scenario::Stirap:
        case Scenario::Cpt:
        case Scenario::Rabi: n1.validate(); break;
        case Scenario::TwoAtom: n2.validate(); break;
        case Scenario::Waveguide:
        case Scenario::Channels: nw.validate(); break;
    }

    const json& ij = doc["interaction"];
    cfg.interaction.width = num(ij["width"]);
    if (ij["g1d"].is_null()) {
        cfg.target_u = num(ij["target_u"]);
    } else {
        cfg.interaction.g1d = num(ij["g1d"]);
    }
    if (cfg.scenario == Scenario::TwoAtom) cfg.interaction.validate(n2.grid);

    const json& ej = doc["eig"];
    cfg.eig.time = num(ej["time"]);
    cfg.eig.count = count_of(ej["count"], "eig.count");
    cfg.eig.samples = count_of(ej["samples"], "eig.samples");
    if (cfg.eig.samples < 2) throw ConfigError("eig.samples must be at least 2");
    const auto disc = ej["discretization"].get<std::string>();
    if (disc == "finite_difference") cfg.eig.discretization = Discretization::FiniteDifference;
    else if (disc == "fourier_grid") cfg.eig.discretization = Discretization::FourierGrid;
    else throw ConfigError("eig.discretization: expected 'finite_difference' or 'fourier_grid'");

    cfg.rabi.calibrate_hold = doc["rabi"]["calibrate_hold"].get<bool>();

    const json& oj = doc["output"];
    cfg.output.csv = oj["csv"].is_null() ? default_csv_name(cfg.scenario) : oj["csv"].get<std::string>();
    cfg.output.snapshots = oj["snapshots"].get<bool>();

    if (!doc["scan"].is_null()) {
        const json& sj = doc["scan"];
        ScanSpec scan;
        scan.axis1 = axis_from(sj["axis1"]);
        if (sj.contains("axis2") && !sj["axis2"].is_null()) scan.axis2 = axis_from(sj["axis2"]);
        scan.metric = sj["metric"].get<std::string>();
        // Paths must resolve against the document.
        (void)with_value(doc, scan.axis1.path, scan.axis1.min);
        if (scan.axis2) (void)with_value(doc, scan.axis2->path, scan.axis2->min);
        cfg.scan = scan;
    }
    cfg.document = std::move(doc);
    return cfg;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/false);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::filesystem::path preset_path(std::string_view name, const std::filesystem::path& preset_dir) {
    const auto p = preset_dir / (std::string(name) + ".json");
    if (!std::filesystem::exists(p)) throw ConfigError("unknown preset '" + std::string(name) + "' (looked in " + preset_dir.string() + ")");
    return p;
}

std::vector<std::string> list_presets(const std::filesystem::path& preset_dir) {
    std::vector<std::string> names;
    if (!std::filesystem::is_directory(preset_dir)) return names;
    for (const auto& entry : std::filesystem::directory_iterator(preset_dir))
        if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

json with_value(const json& document, std::string_view path, double value) {
    const json defaults = default_document();
    json out = document;
    json* node = &out;
    const json* ref = &defaults;
    std::string walked;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        walked = join(walked, key);
        if (!ref->is_object() || !ref->contains(key) || !node->is_object())
            throw ConfigError("scan path '" + std::string(path) + "' does not name a configuration entry ('" + walked + "')");
        node = &(*node)[key];
        ref = &(*ref)[key];
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    if (!(ref->is_number() || ref->is_null()) || walked == "output.csv")
        throw ConfigError("scan path '" + std::string(path) + "' does not name a numeric entry");
    *node = value;
    return out;
}

std::string config_hash(const json& document) {
    const std::string text = document.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tlao
