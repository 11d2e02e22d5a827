#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "levyfit/drift.hpp"
#include "levyfit/errors.hpp"
#include "levyfit/fft.hpp"
#include "levyfit/grid.hpp"
#include "levyfit/params.hpp"
#include "levyfit/stable.hpp"

namespace levyfit {

struct InitialCondition {
    enum class Kind { gaussian, delta_at };
    Kind kind = Kind::gaussian;
    double center = 0.0;
    double precision = 40.0;  // p(x,0) = sqrt(precision/pi) exp(-precision (x-center)^2)
    std::size_t node = 0;

    static InitialCondition gaussian(double center, double precision) {
        if (!(precision > 0.0)) throw config_error("initial: precision must be positive");
        InitialCondition ic;
        ic.kind = Kind::gaussian;
        ic.center = center;
        ic.precision = precision;
        return ic;
    }
    static InitialCondition delta_at(std::size_t node) {
        InitialCondition ic;
        ic.kind = Kind::delta_at;
        ic.node = node;
        return ic;
    }
};

enum class DriftScheme {
    central,      // central differences for d/dx (f p)
    upwind_flux,  // first-order upwinded flux form
};

enum class JumpQuadrature {
    punched_trapezoid,  // trapezoid over offsets |y| >= h, second-difference weight for the |y| < h cell
    endpoint_corrected,  // punched trapezoid plus the Euler-Maclaurin endpoint terms at |y| = h
};

enum class ConvMethod { direct, fft, automatic };

struct SolverConfig {
    Grid1D grid;
    double t_final = 0.0;
    double dt = 0.0;  // 0 = auto: min(0.5 h^2, computed stability bound)
    InitialCondition initial = InitialCondition::gaussian(0.0, 40.0);
    DriftScheme drift_scheme = DriftScheme::central;
    JumpQuadrature quadrature = JumpQuadrature::endpoint_corrected;
    ConvMethod conv = ConvMethod::automatic;
    bool killing_enabled = true;  // test hook: disables the boundary killing term
    std::size_t mass_record_stride = 0;  // 0 = about 100 samples over the run

    explicit SolverConfig(Grid1D g) : grid(g) {}
};

/// Discrete generator of the domain-truncated nonlocal Fokker-Planck
/// equation: central/upwind divergence of f*p, boundary killing
/// -(eps^a C_a / a)[(x-a)^-a + (b-x)^-a] p, and the symmetric-pair
/// regularized jump integral. The p(x+y) part of the quadrature is a
/// symmetric Toeplitz kernel over node offsets; offsets whose trapezoid
/// endpoint weights differ land on boundary nodes where p = 0, so the fast
/// convolution path and the honest per-node quadrature coincide on
/// absorbing states.
class FpOperator {
public:
    Grid1D grid;
    double alpha = 0.0;
    double epsilon = 0.0;
    double eps_alpha_c = 0.0;  // eps^alpha * C_alpha
    DriftScheme drift_scheme = DriftScheme::central;
    JumpQuadrature quadrature = JumpQuadrature::punched_trapezoid;
    bool killing_enabled = true;

    std::vector<double> drift_node;  // f(x_j)
    std::vector<double> drift_face;  // f(x_j + h/2), upwind path
    std::vector<double> kill;        // killing coefficient per node, >= 0
    std::vector<double> base;        // trapezoid line weight eps_alpha_c * h * (k h)^(-1-a), k = 1..m-2
    std::vector<double> merged;      // Toeplitz off-diagonal kernel (base + cell corrections folded in)
    std::vector<double> nonlocal_diag;  // honest per-node diagonal of the jump quadrature (negative)
    double corr_weight = 0.0;  // hole cell: eps_alpha_c h^-a / (2-a) on the second difference
    double em1 = 0.0, em2 = 0.0;  // Euler-Maclaurin endpoint weights on the psi_1/psi_2 stencils

    explicit FpOperator(Grid1D g) : grid(g) {}

    std::size_t size() const noexcept { return grid.size(); }

    /// Honest per-node jump quadrature (works for any p, including test
    /// states that are nonzero at the boundary nodes).
    double nonlocal_term(std::span<const double> p, std::size_t j) const {
        const std::size_t m = grid.size();
        const std::size_t left = j;            // offsets 1..left reach node 0
        const std::size_t right = m - 1 - j;   // offsets 1..right reach node m-1
        double acc = 0.0;
        if (left >= 2)
            for (std::size_t k = 1; k <= left; ++k) {
                const double w = (k == 1 || k == left) ? 0.5 : 1.0;
                acc += w * base[k - 1] * (p[j - k] - p[j]);
            }
        if (right >= 2)
            for (std::size_t k = 1; k <= right; ++k) {
                const double w = (k == 1 || k == right) ? 0.5 : 1.0;
                acc += w * base[k - 1] * (p[j + k] - p[j]);
            }
        const auto at = [&](std::size_t idx, std::ptrdiff_t off) -> double {
            const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(idx) + off;
            return (i < 0 || i >= static_cast<std::ptrdiff_t>(m)) ? 0.0 : p[static_cast<std::size_t>(i)];
        };
        const double psi1 = at(j, +1) + at(j, -1) - 2.0 * p[j];
        acc += corr_weight * psi1;
        if (quadrature == JumpQuadrature::endpoint_corrected) {
            const double psi2 = at(j, +2) + at(j, -2) - 2.0 * p[j];
            acc += em1 * psi1 + em2 * psi2;
        }
        return acc;
    }

    double drift_term(std::span<const double> p, std::size_t j) const {
        const double h = grid.spacing();
        if (drift_scheme == DriftScheme::central)
            return -(drift_node[j + 1] * p[j + 1] - drift_node[j - 1] * p[j - 1]) / (2.0 * h);
        const auto flux = [&](std::size_t face) {  // face between node `face` and `face+1`
            const double f = drift_face[face];
            return f >= 0.0 ? f * p[face] : f * p[face + 1];
        };
        return -(flux(j) - flux(j - 1)) / h;
    }

    /// Full generator applied to an absorbing state (boundary rows forced to
    /// zero). `conv` receives the off-diagonal jump part, precomputed by the
    /// caller via apply_offdiag.
    void combine(std::span<const double> p, std::span<const double> conv, std::span<double> out) const {
        const std::size_t m = grid.size();
        out[0] = 0.0;
        out[m - 1] = 0.0;
        for (std::size_t j = 1; j + 1 < m; ++j) {
            double v = drift_term(p, j) + conv[j] + nonlocal_diag[j] * p[j];
            if (killing_enabled) v -= kill[j] * p[j];
            out[j] = v;
        }
    }

    /// Off-diagonal jump part, direct O(m^2) summation. `padded` must hold
    /// m-1 zeros, then the m values of p, then m-1 zeros, so the inner loop
    /// needs no range checks.
    void apply_offdiag_padded(std::span<const double> padded, std::span<double> out) const {
        const std::size_t m = grid.size();
        const double* c = padded.data() + (m - 1);  // c[j] = p[j], c valid for j in [-(m-1), 2m-2]
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            const double* lo = c + j;
            for (std::size_t k = 1; k <= m - 2; ++k) s += merged[k - 1] * (lo[-static_cast<std::ptrdiff_t>(k)] + lo[k]);
            out[j] = s;
        }
    }

    void apply_offdiag_direct(std::span<const double> p, std::span<double> out) const {
        const std::size_t m = grid.size();
        std::vector<double> padded(3 * m - 2, 0.0);
        std::copy(p.begin(), p.end(), padded.begin() + (m - 1));
        apply_offdiag_padded(padded, out);
    }

    /// Largest explicit-Euler step the operator admits: the paper's 0.5 h^2
    /// rule capped by a diagonal bound and by a von Neumann bound for the
    /// central advection term (the h^2 rule alone is not stable for all
    /// (alpha, epsilon, theta)).
    double stable_dt() const {
        const double h = grid.spacing();
        double dt = 0.5 * h * h;
        double max_diag = 0.0;
        for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
            const double d = -nonlocal_diag[j] + (killing_enabled ? kill[j] : 0.0);
            max_diag = std::max(max_diag, d);
        }
        if (max_diag > 0.0) dt = std::min(dt, 0.9 / max_diag);

        const double b1 = merged[0];
        for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
            const double f = drift_node[j];
            if (f == 0.0) continue;
            if (drift_scheme == DriftScheme::central) {
                const double kap = killing_enabled ? kill[j] : 0.0;
                dt = std::min(dt, 0.9 * (b1 + kap) * h * h / (f * f));
            } else {
                dt = std::min(dt, 0.9 * h / std::abs(f));
            }
        }
        return dt;
    }
};

/// Builds the discrete operator for lambda on the configured grid.
inline FpOperator assemble(const ParamPoint& lambda, const DriftModel& drift, const SolverConfig& config) {
    validate_param_point(lambda);
    const std::size_t m = config.grid.size();
    if (m < 5) throw config_error("solver grid needs at least 3 interior nodes");

    const double a = config.grid.a();
    const double b = config.grid.b();
    const double h = config.grid.spacing();
    const double al = lambda.alpha;
    const DriftModel f = drift.with_theta(lambda.theta);

    FpOperator op(config.grid);
    op.alpha = al;
    op.epsilon = lambda.epsilon;
    op.eps_alpha_c = std::pow(lambda.epsilon, al) * c_alpha(AlphaIndex(al));
    op.drift_scheme = config.drift_scheme;
    op.quadrature = config.quadrature;
    op.killing_enabled = config.killing_enabled;

    op.drift_node.resize(m);
    for (std::size_t j = 0; j < m; ++j) op.drift_node[j] = f(config.grid.node(j));
    op.drift_face.resize(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) op.drift_face[j] = f(config.grid.node(j) + 0.5 * h);

    op.kill.assign(m, 0.0);
    const double kc = op.eps_alpha_c / al;
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double x = config.grid.node(j);
        op.kill[j] = kc * (std::pow(x - a, -al) + std::pow(b - x, -al));
    }

    op.base.resize(m - 2);
    for (std::size_t k = 1; k <= m - 2; ++k)
        op.base[k - 1] = op.eps_alpha_c * h * std::pow(static_cast<double>(k) * h, -1.0 - al);

    const double h_pow = std::pow(h, -al);
    op.corr_weight = op.eps_alpha_c * h_pow / (2.0 - al);
    if (config.quadrature == JumpQuadrature::endpoint_corrected) {
        op.em1 = -op.eps_alpha_c * (1.0 + al) * h_pow / 12.0;
        op.em2 = op.eps_alpha_c * h_pow / 24.0;
    }

    op.merged = op.base;
    op.merged[0] = 0.5 * op.base[0] + op.corr_weight;
    if (config.quadrature == JumpQuadrature::endpoint_corrected) {
        op.merged[0] += op.em1;
        if (op.merged.size() > 1) op.merged[1] += op.em2;
    }

    // Honest diagonal: trapezoid mass over the node's own offset range (the
    // half-weights at the range ends matter here, unlike in the Toeplitz
    // kernel where those offsets land on zero boundary values).
    op.nonlocal_diag.assign(m, 0.0);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        double s = 0.0;
        const std::size_t left = j;
        const std::size_t right = m - 1 - j;
        if (left >= 2)
            for (std::size_t k = 1; k <= left; ++k) s += ((k == 1 || k == left) ? 0.5 : 1.0) * op.base[k - 1];
        if (right >= 2)
            for (std::size_t k = 1; k <= right; ++k) s += ((k == 1 || k == right) ? 0.5 : 1.0) * op.base[k - 1];
        s += 2.0 * op.corr_weight;
        if (config.quadrature == JumpQuadrature::endpoint_corrected) s += 2.0 * (op.em1 + op.em2);
        op.nonlocal_diag[j] = -s;
    }
    return op;
}

/// Grid realization of the configured initial profile. The analytic Gaussian
/// must carry unit trapezoid mass to 1e-6 on the grid or the configuration
/// is rejected; boundary nodes are zeroed (absorbing).
inline Density initial_density(const SolverConfig& config) {
    const Grid1D& g = config.grid;
    Density d = Density::zeros(g);
    if (config.initial.kind == InitialCondition::Kind::delta_at) {
        const std::size_t j = config.initial.node;
        if (j == 0 || j + 1 >= g.size()) throw config_error("initial: delta node must be interior");
        d.values[j] = 1.0 / g.spacing();
        return d;
    }
    const double p = config.initial.precision;
    const double c = config.initial.center;
    const double amp = std::sqrt(p / 3.14159265358979323846);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double dx = g.node(j) - c;
        d.values[j] = amp * std::exp(-p * dx * dx);
    }
    d.values.front() = 0.0;
    d.values.back() = 0.0;
    const double mass = trapezoid_mass(d);
    if (std::abs(mass - 1.0) > 1e-6)
        throw config_error("initial: profile mass deviates from 1 beyond 1e-6 on this grid");
    return d;
}

namespace detail {

struct Workspace {
    std::vector<double> conv;
    std::vector<double> rate;
    std::vector<double> padded;
    std::optional<SymmetricToeplitz> toeplitz;
    bool use_fft = false;

    Workspace(const FpOperator& op, ConvMethod method) {
        const std::size_t m = op.size();
        conv.resize(m);
        rate.resize(m);
        use_fft = method == ConvMethod::fft || (method == ConvMethod::automatic && m >= 192);
        if (use_fft)
            toeplitz.emplace(std::span<const double>(op.merged), m);
        else
            padded.assign(3 * m - 2, 0.0);
    }

    void offdiag(const FpOperator& op, std::span<const double> p) {
        if (use_fft) {
            toeplitz->apply(p, conv);
        } else {
            std::copy(p.begin(), p.end(), padded.begin() + (p.size() - 1));
            op.apply_offdiag_padded(padded, conv);
        }
    }
};

inline void step_into(const FpOperator& op, Workspace& ws, std::vector<double>& p, double dt) {
    ws.offdiag(op, p);
    op.combine(p, ws.conv, ws.rate);
    const std::size_t m = p.size();
    for (std::size_t j = 1; j + 1 < m; ++j) p[j] += dt * ws.rate[j];
    p[0] = 0.0;
    p[m - 1] = 0.0;
}

}  // namespace detail

/// One explicit Euler step p + dt*A(p), boundary nodes held at zero. Throws
/// if any value's magnitude exceeds 1e6 (instability guard).
inline Density step(const FpOperator& op, const Density& p, double dt) {
    if (p.grid != op.grid) throw grid_mismatch_error("step: density grid does not match operator");
    if (!(dt > 0.0)) throw config_error("step: dt must be positive");
    Density out = p;
    detail::Workspace ws(op, ConvMethod::automatic);
    detail::step_into(op, ws, out.values, dt);
    for (double v : out.values)
        if (!(std::abs(v) <= 1e6)) throw numeric_error("solver instability", 1);
    return out;
}

struct SolveDiagnostics {
    std::size_t steps = 0;
    double dt = 0.0;
    double initial_mass = 0.0;
    double final_mass = 0.0;
    double max_mass_increase = 0.0;  // largest single-step rise in total mass
    double min_value = 0.0;          // most negative density value seen
    double tail_sup_change = 0.0;    // sup-norm change over the last 1% of steps
    std::size_t mass_stride = 0;
    std::vector<double> mass_history;
};

struct SolveResult {
    Density density;
    SolveDiagnostics diagnostics;
};

/// Repeated explicit stepping from the configured initial profile to
/// t_final. Reports mass and positivity diagnostics; stationarity at t_final
/// is the caller's judgement (see tail_sup_change).
inline SolveResult solve(const ParamPoint& lambda, const DriftModel& drift, const SolverConfig& config) {
    if (!(config.t_final >= 0.0)) throw config_error("solver: t_final must be nonnegative");
    const FpOperator op = assemble(lambda, drift, config);

    SolveResult res{initial_density(config), {}};
    SolveDiagnostics& diag = res.diagnostics;
    diag.initial_mass = trapezoid_mass(res.density);
    diag.final_mass = diag.initial_mass;
    diag.min_value = *std::min_element(res.density.values.begin(), res.density.values.end());

    if (config.t_final == 0.0) {
        diag.mass_history.push_back(diag.initial_mass);
        diag.mass_stride = 1;
        return res;
    }

    double dt_target = config.dt > 0.0 ? config.dt : std::min(0.5 * config.grid.spacing() * config.grid.spacing(), op.stable_dt());
    const auto n_steps = static_cast<std::size_t>(std::ceil(config.t_final / dt_target - 1e-12));
    const double dt = config.t_final / static_cast<double>(n_steps);
    diag.dt = dt;
    diag.steps = n_steps;
    diag.mass_stride = config.mass_record_stride > 0 ? config.mass_record_stride
                                                     : std::max<std::size_t>(1, n_steps / 100);

    detail::Workspace ws(op, config.conv);
    std::vector<double>& p = res.density.values;
    const std::size_t tail_begin = n_steps - std::max<std::size_t>(1, n_steps / 100);
    std::vector<double> tail_snapshot;

    double prev_mass = diag.initial_mass;
    diag.mass_history.push_back(prev_mass);
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (k == tail_begin) tail_snapshot = p;
        detail::step_into(op, ws, p, dt);

        double mn = p[1], mx = std::abs(p[1]);
        for (std::size_t j = 1; j + 1 < p.size(); ++j) {
            mn = std::min(mn, p[j]);
            mx = std::max(mx, std::abs(p[j]));
        }
        if (!(mx <= 1e6)) throw numeric_error("solver instability", k + 1);
        diag.min_value = std::min(diag.min_value, mn);

        const double mass = trapezoid(config.grid, p);
        diag.max_mass_increase = std::max(diag.max_mass_increase, mass - prev_mass);
        prev_mass = mass;
        if ((k + 1) % diag.mass_stride == 0 || k + 1 == n_steps) diag.mass_history.push_back(mass);
    }
    diag.final_mass = prev_mass;

    double tail_change = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) tail_change = std::max(tail_change, std::abs(p[j] - tail_snapshot[j]));
    diag.tail_sup_change = tail_change;
    return res;
}

}  // namespace levyfit
