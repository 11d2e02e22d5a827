// levyfit command line: simulate | density | solve | estimate | compare
//
// Every command reads one JSON config (--config), applies flag overrides,
// validates before computing, and writes its artifacts plus the resolved
// effective config and a metadata file into the output directory.
// Exit codes: 0 success, 2 validation error, 3 numeric failure, 4 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levyfit/io.hpp"
#include "levyfit/kde.hpp"
#include "levyfit/levyfit.hpp"
#include "levyfit/run_config.hpp"

namespace fs = std::filesystem;
using namespace levyfit;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;   // empty = config value
    unsigned workers = 0;  // 0 = config value
    std::optional<std::uint64_t> seed;
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig cfg = load_config(flags.config_path);
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.workers > 0) cfg.workers = flags.workers;
    if (flags.seed) cfg.seed = *flags.seed;
    validate(cfg);
    return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir.string() + ": " + ec.message());
    write_json(effective_config(cfg), dir / "effective_config.json");
    return dir;
}

void write_metadata(const fs::path& dir, const char* command, const RunConfig& cfg, double seconds,
                    ordered_json extra) {
    ordered_json meta{{"tool", "levyfit"},
                      {"version", version_string},
                      {"command", command},
                      {"seed", cfg.seed},
                      {"workers", cfg.workers},
                      {"wall_seconds", seconds}};
    for (auto& [k, v] : extra.items()) meta[k] = v;
    write_json(meta, dir / "metadata.json");
}

int cmd_simulate(const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(cfg);
    Timer timer;

    const Trajectory traj = simulate_thinned(cfg.drift(), AlphaIndex(cfg.alpha), cfg.epsilon, cfg.x0,
                                             cfg.sim_dt, cfg.n, cfg.seed, cfg.thin);
    save_trajectory(traj, dir / "trajectory.bin");

    const TrajectorySummary s = summarize(traj);
    std::size_t below = 0, above = 0;
    for (double v : traj.values) {
        if (v < cfg.a) ++below;
        if (v > cfg.b) ++above;
    }
    {
        std::ofstream out(dir / "trajectory_summary.csv", std::ios::trunc);
        if (!out) throw io_error("write failed: trajectory_summary.csv");
        out << "n,s,min,max,below_a,above_b\n";
        char line[160];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%zu,%zu\n", s.n, s.stddev, s.min, s.max,
                      below, above);
        out << line;
    }
    write_metadata(dir, "simulate", cfg, timer.seconds(),
                   ordered_json{{"n", s.n},
                                {"observation_dt", traj.dt},
                                {"stddev", s.stddev},
                                {"min", s.min},
                                {"max", s.max},
                                {"exceed_below_a", below},
                                {"exceed_above_b", above}});
    std::printf("simulate: %zu observations (dt=%g), s=%.6g, range [%.4g, %.4g] -> %s\n", s.n, traj.dt,
                s.stddev, s.min, s.max, (dir / "trajectory.bin").c_str());
    return 0;
}

int cmd_density(const CommonFlags& flags, const std::string& traj_path) {
    const RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(cfg);
    Timer timer;

    const Trajectory traj = load_trajectory(traj_path);
    const TrajectorySummary s = summarize(traj);
    const bool automatic = cfg.kde_bandwidth <= 0.0;
    const double h = automatic ? bandwidth(traj) : cfg.kde_bandwidth;
    const Grid1D grid = cfg.grid();
    const Density pd = estimate_density(traj, grid, h, cfg.kde_mode_kind(), cfg.workers);
    write_density_csv(pd, dir / "density.csv");

    const bool binned = cfg.kde_mode_kind() == KdeMode::binned ||
                        (cfg.kde_mode_kind() == KdeMode::automatic && traj.values.size() > 1'000'000);
    write_metadata(dir, "density", cfg, timer.seconds(),
                   ordered_json{{"n", s.n},
                                {"stddev", s.stddev},
                                {"bandwidth", h},
                                {"bandwidth_rule", automatic ? "1.8*s*n^(-1/5)" : "override"},
                                {"mode", binned ? "binned" : "direct"},
                                {"exterior_fraction", exterior_fraction(traj, grid)},
                                {"grid_mass", trapezoid_mass(pd)}});
    std::printf("density: n=%zu s=%.6g h=%.6g (%s) mass on grid=%.6f -> %s\n", s.n, s.stddev, h,
                automatic ? "auto" : "override", trapezoid_mass(pd), (dir / "density.csv").c_str());
    return 0;
}

int cmd_solve(const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(cfg);
    Timer timer;

    const SolveResult res =
        solve(ParamPoint{cfg.theta, cfg.alpha, cfg.epsilon}, cfg.drift(), cfg.solver_config());
    write_density_csv(res.density, dir / "solution.csv");
    write_json(to_json(res.diagnostics), dir / "solver_trace.json");
    write_metadata(dir, "solve", cfg, timer.seconds(),
                   ordered_json{{"steps", res.diagnostics.steps},
                                {"dt", res.diagnostics.dt},
                                {"final_mass", res.diagnostics.final_mass},
                                {"min_value", res.diagnostics.min_value},
                                {"max_mass_increase", res.diagnostics.max_mass_increase},
                                {"tail_sup_change", res.diagnostics.tail_sup_change}});
    std::printf("solve: lambda=(theta=%g, alpha=%g, eps=%g) steps=%zu dt=%.3e mass=%.6f -> %s\n",
                cfg.theta, cfg.alpha, cfg.epsilon, res.diagnostics.steps, res.diagnostics.dt,
                res.diagnostics.final_mass, (dir / "solution.csv").c_str());
    return 0;
}

Density load_matching_density(const RunConfig& cfg, const std::string& path) {
    const Density pd = read_density_csv(path);
    const Grid1D expect = cfg.grid();
    if (pd.grid.size() != expect.size() || std::abs(pd.grid.a() - expect.a()) > 1e-12 ||
        std::abs(pd.grid.b() - expect.b()) > 1e-12)
        throw config_error("density grid (" + std::to_string(pd.grid.size()) +
                           " nodes) does not match the configured domain");
    return Density(expect, pd.values);
}

void print_region(const SublevelRegion& region, const SweepResult& r) {
    std::printf("  sublevel G <= %.6g: %zu points", region.threshold, region.indices.size());
    const auto axes = r.space.axes();
    for (std::size_t a = 0; a < region.box.size(); ++a)
        std::printf("  %s in [%.6g, %.6g]", axes[a].name.c_str(), region.box[a].first,
                    region.box[a].second);
    std::printf("\n");
}

int cmd_estimate(const CommonFlags& flags, const std::string& density_path) {
    const RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(cfg);
    Timer timer;

    const Density pd = load_matching_density(cfg, density_path);
    SweepOptions opts;
    opts.workers = cfg.workers;
    opts.normalize_model = cfg.normalize_model;
    const SweepResult r =
        sweep(cfg.param_space(), cfg.drift(), cfg.objective_kind(), pd, cfg.solver_config(), opts);

    ordered_json sweep_json = to_json(r);
    ordered_json regions = ordered_json::array();
    std::vector<double> thresholds = cfg.sublevel_thresholds;
    if (cfg.sublevel_factor > 0.0) thresholds.push_back(cfg.sublevel_factor * r.argmin_value);
    for (double t : thresholds)
        if (t >= r.argmin_value) regions.push_back(to_json(sublevel_region(r, t), r));
    sweep_json["sublevel"] = regions;
    write_json(sweep_json, dir / "sweep.json");
    write_sweep_csv(r, dir / "sweep.csv");

    std::printf("estimate (%s): argmin G=%.6g at theta=%.6g alpha=%.6g epsilon=%.6g (%zu/%zu points ok)\n",
                objective_name(r.objective), r.argmin_value, r.argmin_point.theta, r.argmin_point.alpha,
                r.argmin_point.epsilon, r.values.size() - r.failures.size(), r.values.size());
    for (double t : thresholds)
        if (t >= r.argmin_value) print_region(sublevel_region(r, t), r);
    for (const auto& f : r.failures)
        std::printf("  point %zu failed: %s\n", f.index, f.message.c_str());

    write_metadata(dir, "estimate", cfg, timer.seconds(),
                   ordered_json{{"points", r.values.size()},
                                {"failures", r.failures.size()},
                                {"argmin_value", r.argmin_value},
                                {"argmin", to_json(r.argmin_point)},
                                {"normalized_model", r.normalized_model}});
    return 0;
}

int cmd_compare(const CommonFlags& flags, const std::string& density_path) {
    const RunConfig cfg = resolve_config(flags);
    const fs::path dir = prepare_out_dir(cfg);
    Timer timer;

    const Density pd = load_matching_density(cfg, density_path);
    SweepOptions opts;
    opts.workers = cfg.workers;
    opts.normalize_model = cfg.normalize_model;
    const ObjectiveComparison cmp =
        compare_objectives(cfg.param_space(), cfg.drift(), pd, cfg.solver_config(), opts);

    {
        std::ofstream out(dir / "comparison.csv", std::ios::trunc);
        if (!out) throw io_error("write failed: comparison.csv");
        out << "objective,selection,theta,alpha,epsilon,G,argmin_theta,argmin_alpha,argmin_epsilon,argmin_G\n";
        for (const auto& row : cmp.rows) {
            char line[320];
            std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          objective_name(row.objective),
                          row.objective == ObjectiveKind::absolute_sup ? "argmax" : "argmin",
                          row.estimate.theta, row.estimate.alpha, row.estimate.epsilon,
                          row.objective_value, row.argmin_point.theta, row.argmin_point.alpha,
                          row.argmin_point.epsilon, row.argmin_value);
            out << line;
        }
    }
    for (std::size_t k = 0; k < 3; ++k)
        write_json(to_json(cmp.sweeps[k]),
                   dir / ("sweep_" + std::string(objective_name(cmp.sweeps[k].objective)) + ".json"));

    std::printf("compare: objective     selection  theta      alpha      epsilon    G\n");
    for (const auto& row : cmp.rows)
        std::printf("         %-13s %-9s %-10.6g %-10.6g %-10.6g %.6g\n", objective_name(row.objective),
                    row.objective == ObjectiveKind::absolute_sup ? "argmax" : "argmin",
                    row.estimate.theta, row.estimate.alpha, row.estimate.epsilon, row.objective_value);

    write_metadata(dir, "compare", cfg, timer.seconds(),
                   ordered_json{{"points", cmp.sweeps[0].values.size()},
                                {"failures", cmp.sweeps[0].failures.size()}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameter estimation for alpha-stable SDEs by Hellinger-distance matching"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string traj_path, density_path;
    std::uint64_t seed_flag = 0;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "JSON run configuration")->required();
        cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
        cmd->add_option("--workers", flags.workers, "worker threads (overrides config)");
        auto* opt = cmd->add_option("--seed", seed_flag, "simulation seed (overrides config)");
        cmd->callback([&flags, opt, &seed_flag] {
            if (opt->count() > 0) flags.seed = seed_flag;
        });
    };

    auto* c_sim = app.add_subcommand("simulate", "integrate the SDE and write observations");
    add_common(c_sim);
    auto* c_den = app.add_subcommand("density", "kernel density estimate from a trajectory file");
    add_common(c_den);
    c_den->add_option("trajectory", traj_path, "trajectory .bin file")->required();
    auto* c_sol = app.add_subcommand("solve", "single Fokker-Planck solve at the model parameters");
    add_common(c_sol);
    auto* c_est = app.add_subcommand("estimate", "sweep the parameter space against a density CSV");
    add_common(c_est);
    c_est->add_option("density", density_path, "empirical density .csv file")->required();
    auto* c_cmp = app.add_subcommand("compare", "run all three objectives over the same sweep");
    add_common(c_cmp);
    c_cmp->add_option("density", density_path, "empirical density .csv file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_sim->parsed()) return cmd_simulate(flags);
        if (c_den->parsed()) return cmd_density(flags, traj_path);
        if (c_sol->parsed()) return cmd_solve(flags);
        if (c_est->parsed()) return cmd_estimate(flags, density_path);
        if (c_cmp->parsed()) return cmd_compare(flags, density_path);
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const format_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const grid_mismatch_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
