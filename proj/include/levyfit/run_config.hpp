#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfit/distance.hpp"
#include "levyfit/drift.hpp"
#include "levyfit/errors.hpp"
#include "levyfit/estimator.hpp"
#include "levyfit/fpsolver.hpp"
#include "levyfit/grid.hpp"
#include "levyfit/io.hpp"
#include "levyfit/kde.hpp"

namespace levyfit {

/// Structured run configuration shared by every CLI command. One JSON file is
/// the canonical reproducibility artifact; command-line flags may override a
/// few fields and the resolved ("effective") config is written next to the
/// outputs. All validation happens here, before any computation.
struct RunConfig {
    // model
    std::string drift_kind = "cubic";  // cubic | linear | polynomial
    std::vector<double> poly_base;     // polynomial only
    std::vector<double> poly_scaled;
    double theta = 1.0;
    double alpha = 1.7;
    double epsilon = 0.3;

    // simulation
    std::size_t n = 1'000'000;
    double sim_dt = 5e-4;
    std::size_t thin = 20;
    std::uint64_t seed = 8'643'901'151ULL;
    double x0 = 0.0;

    // domain
    double a = -3.0;
    double b = 3.0;
    std::size_t nodes = 121;

    // solver
    double t_final = 50.0;
    double solver_dt = 0.0;  // 0 = auto
    std::string initial_kind = "gaussian";  // gaussian | delta
    double initial_center = 0.0;
    double initial_precision = 40.0;
    std::size_t initial_node = 0;
    std::string drift_scheme = "central";      // central | upwind
    std::string quadrature = "corrected";      // corrected | plain
    std::string conv = "auto";                 // auto | direct | fft

    // kde
    double kde_bandwidth = 0.0;  // 0 = auto rule 1.8 s n^(-1/5)
    std::string kde_mode = "auto";  // auto | direct | binned

    // estimation: per-coordinate fixed value or [lo, hi, step]
    struct CoordConfig {
        bool fixed = true;
        double value = 0.0;
        double lo = 0.0, hi = 0.0, step = 0.0;
    };
    CoordConfig est_theta{true, 1.0, 0, 0, 0};
    CoordConfig est_alpha{false, 0.0, 1.035, 1.945, 0.035};
    CoordConfig est_epsilon{true, 0.3, 0, 0, 0};
    std::string objective = "hellinger";
    bool normalize_model = true;
    std::vector<double> sublevel_thresholds;
    double sublevel_factor = 0.0;  // >0: extra threshold at factor * argmin value
    unsigned workers = 1;

    // output
    std::string out_dir = "out";

    Grid1D grid() const { return Grid1D(a, b, nodes); }

    DriftModel drift() const {
        if (drift_kind == "cubic") return DriftModel::cubic(theta);
        if (drift_kind == "linear") return DriftModel::linear(theta);
        return DriftModel::polynomial(poly_base, poly_scaled, theta);
    }

    SolverConfig solver_config() const {
        SolverConfig sc(grid());
        sc.t_final = t_final;
        sc.dt = solver_dt;
        if (initial_kind == "gaussian")
            sc.initial = InitialCondition::gaussian(initial_center, initial_precision);
        else
            sc.initial = InitialCondition::delta_at(initial_node);
        sc.drift_scheme = drift_scheme == "central" ? DriftScheme::central : DriftScheme::upwind_flux;
        sc.quadrature = quadrature == "plain" ? JumpQuadrature::punched_trapezoid
                                              : JumpQuadrature::endpoint_corrected;
        sc.conv = conv == "direct" ? ConvMethod::direct
                                   : (conv == "fft" ? ConvMethod::fft : ConvMethod::automatic);
        return sc;
    }

    ParamSpace param_space() const {
        const auto spec = [](const CoordConfig& c) {
            return c.fixed ? CoordSpec::fixed(c.value) : CoordSpec::range(c.lo, c.hi, c.step);
        };
        ParamSpace s;
        s.theta = spec(est_theta);
        s.alpha = spec(est_alpha);
        s.epsilon = spec(est_epsilon);
        return s;
    }

    ObjectiveKind objective_kind() const {
        if (objective == "hellinger") return ObjectiveKind::hellinger;
        if (objective == "l2") return ObjectiveKind::relative_l2;
        return ObjectiveKind::absolute_sup;
    }

    KdeMode kde_mode_kind() const {
        if (kde_mode == "direct") return KdeMode::direct;
        if (kde_mode == "binned") return KdeMode::binned;
        return KdeMode::automatic;
    }
};

namespace detail {

[[noreturn]] inline void bad_field(const std::string& path, const std::string& why) {
    throw config_error(path + ": " + why);
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& section, const std::string& key, T fallback) {
    if (!j.contains(section)) return fallback;
    const auto& s = j.at(section);
    if (!s.is_object()) bad_field(section, "must be an object");
    if (!s.contains(key)) return fallback;
    try {
        return s.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        bad_field(section + "." + key, "has the wrong type");
    }
}

inline RunConfig::CoordConfig parse_coord(const nlohmann::json& j, const std::string& path,
                                          RunConfig::CoordConfig fallback) {
    if (j.is_null()) return fallback;
    RunConfig::CoordConfig c;
    if (j.is_object() && j.contains("fixed")) {
        c.fixed = true;
        c.value = j.at("fixed").get<double>();
        return c;
    }
    if (j.is_object() && j.contains("range")) {
        const auto& r = j.at("range");
        if (!r.is_array() || r.size() != 3) bad_field(path + ".range", "must be [lo, hi, step]");
        c.fixed = false;
        c.lo = r[0].get<double>();
        c.hi = r[1].get<double>();
        c.step = r[2].get<double>();
        return c;
    }
    bad_field(path, "must contain either \"fixed\" or \"range\"");
}

}  // namespace detail

/// Field-by-field validation with the offending config path in the message.
inline void validate(const RunConfig& c) {
    using detail::bad_field;
    if (c.drift_kind != "cubic" && c.drift_kind != "linear" && c.drift_kind != "polynomial")
        bad_field("model.drift", "must be cubic, linear or polynomial");
    if (c.drift_kind == "polynomial" && c.poly_base.empty() && c.poly_scaled.empty())
        bad_field("model.coefficients", "polynomial drift needs coefficients");
    if (!(c.alpha > 0.0) || !(c.alpha < 2.0)) bad_field("model.alpha", "must lie in (0, 2)");
    if (!(c.epsilon >= 0.0)) bad_field("model.epsilon", "must be nonnegative");
    if (c.n < 2) bad_field("simulation.n", "need at least 2 observations");
    if (!(c.sim_dt > 0.0)) bad_field("simulation.dt", "must be positive");
    if (c.thin == 0) bad_field("simulation.thin", "must be at least 1");
    if (!(c.a < c.b)) bad_field("domain", "require a < b");
    if (c.nodes < 5) bad_field("domain.nodes", "need at least 5 nodes (3 interior)");
    if (!(c.t_final >= 0.0)) bad_field("solver.t_final", "must be nonnegative");
    if (c.solver_dt < 0.0) bad_field("solver.dt", "must be positive or 0 (auto)");
    if (c.initial_kind != "gaussian" && c.initial_kind != "delta")
        bad_field("solver.initial.kind", "must be gaussian or delta");
    if (c.initial_kind == "gaussian" && !(c.initial_precision > 0.0))
        bad_field("solver.initial.precision", "must be positive");
    if (c.drift_scheme != "central" && c.drift_scheme != "upwind")
        bad_field("solver.drift_scheme", "must be central or upwind");
    if (c.quadrature != "corrected" && c.quadrature != "plain")
        bad_field("solver.quadrature", "must be corrected or plain");
    if (c.conv != "auto" && c.conv != "direct" && c.conv != "fft")
        bad_field("solver.conv", "must be auto, direct or fft");
    if (c.kde_bandwidth < 0.0) bad_field("kde.bandwidth", "must be positive or 0 (auto)");
    if (c.kde_mode != "auto" && c.kde_mode != "direct" && c.kde_mode != "binned")
        bad_field("kde.mode", "must be auto, direct or binned");
    if (c.objective != "hellinger" && c.objective != "l2" && c.objective != "absolute")
        bad_field("estimation.objective", "must be hellinger, l2 or absolute");
    for (double t : c.sublevel_thresholds)
        if (!(t > 0.0)) bad_field("estimation.sublevel_thresholds", "entries must be positive");
    if (c.sublevel_factor < 0.0) bad_field("estimation.sublevel_factor", "must be nonnegative");

    const auto check_coord = [](const RunConfig::CoordConfig& cc, const std::string& path, double lo_ok,
                                double hi_ok, bool open_lo, bool open_hi) {
        const auto inside = [&](double v) {
            if (open_lo ? !(v > lo_ok) : !(v >= lo_ok)) return false;
            if (open_hi ? !(v < hi_ok) : !(v <= hi_ok)) return false;
            return true;
        };
        if (cc.fixed) {
            if (!inside(cc.value)) detail::bad_field(path, "fixed value outside the admissible range");
            return;
        }
        if (!(cc.step > 0.0) || !(cc.hi > cc.lo)) detail::bad_field(path + ".range", "require lo < hi, step > 0");
        if (!inside(cc.lo) || !inside(cc.hi)) detail::bad_field(path + ".range", "outside the admissible range");
        if (cc.lo + cc.step > cc.hi + 1e-12) detail::bad_field(path + ".range", "grids need at least 2 nodes");
    };
    const double inf = std::numeric_limits<double>::infinity();
    check_coord(c.est_theta, "estimation.theta", -inf, inf, true, true);
    check_coord(c.est_alpha, "estimation.alpha", 0.0, 2.0, true, true);
    check_coord(c.est_epsilon, "estimation.epsilon", 0.0, 1.0, true, false);
    if (c.est_theta.fixed && c.est_alpha.fixed && c.est_epsilon.fixed)
        bad_field("estimation", "at least one coordinate must be a range");
}

inline RunConfig parse_config(const nlohmann::json& j) {
    using detail::get_or;
    RunConfig c;
    c.drift_kind = get_or<std::string>(j, "model", "drift", c.drift_kind);
    c.poly_base = get_or<std::vector<double>>(j, "model", "coefficients", c.poly_base);
    c.poly_scaled = get_or<std::vector<double>>(j, "model", "theta_coefficients", c.poly_scaled);
    c.theta = get_or<double>(j, "model", "theta", c.theta);
    c.alpha = get_or<double>(j, "model", "alpha", c.alpha);
    c.epsilon = get_or<double>(j, "model", "epsilon", c.epsilon);

    c.n = get_or<std::size_t>(j, "simulation", "n", c.n);
    c.sim_dt = get_or<double>(j, "simulation", "dt", c.sim_dt);
    c.thin = get_or<std::size_t>(j, "simulation", "thin", c.thin);
    c.seed = get_or<std::uint64_t>(j, "simulation", "seed", c.seed);
    c.x0 = get_or<double>(j, "simulation", "x0", c.x0);

    c.a = get_or<double>(j, "domain", "a", c.a);
    c.b = get_or<double>(j, "domain", "b", c.b);
    c.nodes = get_or<std::size_t>(j, "domain", "nodes", c.nodes);

    c.t_final = get_or<double>(j, "solver", "t_final", c.t_final);
    c.solver_dt = get_or<double>(j, "solver", "dt", c.solver_dt);
    c.drift_scheme = get_or<std::string>(j, "solver", "drift_scheme", c.drift_scheme);
    c.quadrature = get_or<std::string>(j, "solver", "quadrature", c.quadrature);
    c.conv = get_or<std::string>(j, "solver", "conv", c.conv);
    if (j.contains("solver") && j.at("solver").contains("initial")) {
        const auto& ic = j.at("solver").at("initial");
        c.initial_kind = ic.value("kind", c.initial_kind);
        c.initial_center = ic.value("center", c.initial_center);
        c.initial_precision = ic.value("precision", c.initial_precision);
        c.initial_node = ic.value("node", c.initial_node);
    }

    c.kde_bandwidth = get_or<double>(j, "kde", "bandwidth", c.kde_bandwidth);
    c.kde_mode = get_or<std::string>(j, "kde", "mode", c.kde_mode);

    if (j.contains("estimation")) {
        const auto& e = j.at("estimation");
        if (e.contains("theta")) c.est_theta = detail::parse_coord(e.at("theta"), "estimation.theta", c.est_theta);
        if (e.contains("alpha")) c.est_alpha = detail::parse_coord(e.at("alpha"), "estimation.alpha", c.est_alpha);
        if (e.contains("epsilon"))
            c.est_epsilon = detail::parse_coord(e.at("epsilon"), "estimation.epsilon", c.est_epsilon);
        c.objective = e.value("objective", c.objective);
        c.normalize_model = e.value("normalize_model", c.normalize_model);
        if (e.contains("sublevel_thresholds"))
            c.sublevel_thresholds = e.at("sublevel_thresholds").get<std::vector<double>>();
        c.sublevel_factor = e.value("sublevel_factor", c.sublevel_factor);
        c.workers = e.value("workers", c.workers);
    }

    c.out_dir = get_or<std::string>(j, "output", "dir", c.out_dir);
    validate(c);
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j);
}

/// All defaults resolved; reloading this file reproduces the run exactly.
inline ordered_json effective_config(const RunConfig& c) {
    ordered_json model{{"drift", c.drift_kind}, {"theta", c.theta}, {"alpha", c.alpha}, {"epsilon", c.epsilon}};
    if (c.drift_kind == "polynomial") {
        model["coefficients"] = c.poly_base;
        model["theta_coefficients"] = c.poly_scaled;
    }
    const auto coord = [](const RunConfig::CoordConfig& cc) {
        return cc.fixed ? ordered_json{{"fixed", cc.value}}
                        : ordered_json{{"range", {cc.lo, cc.hi, cc.step}}};
    };
    return ordered_json{
        {"model", model},
        {"simulation", ordered_json{{"n", c.n}, {"dt", c.sim_dt}, {"thin", c.thin}, {"seed", c.seed}, {"x0", c.x0}}},
        {"domain", ordered_json{{"a", c.a}, {"b", c.b}, {"nodes", c.nodes}}},
        {"solver", ordered_json{{"t_final", c.t_final},
                                {"dt", c.solver_dt},
                                {"initial", ordered_json{{"kind", c.initial_kind},
                                                         {"center", c.initial_center},
                                                         {"precision", c.initial_precision},
                                                         {"node", c.initial_node}}},
                                {"drift_scheme", c.drift_scheme},
                                {"quadrature", c.quadrature},
                                {"conv", c.conv}}},
        {"kde", ordered_json{{"bandwidth", c.kde_bandwidth}, {"mode", c.kde_mode}}},
        {"estimation", ordered_json{{"theta", coord(c.est_theta)},
                                    {"alpha", coord(c.est_alpha)},
                                    {"epsilon", coord(c.est_epsilon)},
                                    {"objective", c.objective},
                                    {"normalize_model", c.normalize_model},
                                    {"sublevel_thresholds", c.sublevel_thresholds},
                                    {"sublevel_factor", c.sublevel_factor},
                                    {"workers", c.workers}}},
        {"output", ordered_json{{"dir", c.out_dir}}},
    };
}

}  // namespace levyfit
