#pragma once

// Wigner-Moyal dynamics: harmonic phase-space rotation, time-indexed
// profiles and their polar inversion, the Moyal right-hand side with
// nonlocal potential and smoothed boundary potentials, and a classical
// RK4 stepper for free and quadratic potentials.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grid.hpp"
#include "interp.hpp"
#include "starcalc.hpp"
#include "states.hpp"
#include "wigner.hpp"

namespace wigdev {

// F(x, p, t) = F0(x cos t - p sin t, x sin t + p cos t) for m = omega = 1.
inline RealField harmonic_flow(const RealField& F0, double t) {
    const double c = std::cos(t), s = std::sin(t);
    const auto& xg = F0.grid().x();
    const auto& pg = F0.grid().p();
    RealField out(F0.grid());
    for (std::size_t i = 0; i < F0.nx(); ++i)
        for (std::size_t k = 0; k < F0.np(); ++k) {
            const double x = xg[i], p = pg[k];
            out(i, k) = interp::at(F0, x * c - p * s, x * s + p * c);
        }
    return out;
}

// Profiles g(p, t_m) at a fixed anchor for a list of times.
struct TimeProfile {
    Grid1D p_grid;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // values[m][k] = g(p_k, t_m)
    double anchor{};

    void validate() const {
        if (values.size() != times.size()) throw DimensionError("TimeProfile: one profile per time required");
        for (const auto& v : values)
            if (v.size() != p_grid.size()) throw DimensionError("TimeProfile: sample count does not match grid");
    }
};

// g(p, t) = F(anchor, p, t) = F0(anchor cos t - p sin t, anchor sin t + p cos t).
inline TimeProfile profile_from_initial(const RealField& F0, double anchor, const std::vector<double>& times) {
    TimeProfile g{F0.grid().p(), times, {}, anchor};
    const auto& pg = F0.grid().p();
    for (double t : times) {
        const double c = std::cos(t), s = std::sin(t);
        std::vector<double> row(pg.size());
        for (std::size_t k = 0; k < pg.size(); ++k) {
            const double p = pg[k];
            row[k] = interp::at(F0, anchor * c - p * s, anchor * s + p * c);
        }
        g.values.push_back(std::move(row));
    }
    return g;
}

// Uniform times t_m = 2 pi m / M over one period.
inline std::vector<double> period_times(std::size_t M) {
    if (M < 8) throw DomainError("period_times: need at least 8 times");
    std::vector<double> t(M);
    for (std::size_t m = 0; m < M; ++m) t[m] = 2 * pi * static_cast<double>(m) / static_cast<double>(M);
    return t;
}

// F0(x, p') = g0(r, theta) with r = sqrt(x^2 + p'^2), theta = atan2(-x, p')
// taken in [0, 2 pi); Lagrange in p, periodic Lagrange in t.
inline RealField initial_from_profile(const TimeProfile& g0, const PhaseGrid& pg) {
    g0.validate();
    if (std::abs(g0.anchor) > 1e-12) throw DomainError("initial_from_profile: the polar inversion needs anchor 0");
    const std::size_t M = g0.times.size();
    if (M < 8) throw ReconstructionIncompleteError("initial_from_profile: fewer than 8 times");
    const double dt = 2 * pi / static_cast<double>(M);
    for (std::size_t m = 0; m < M; ++m)
        if (std::abs(g0.times[m] - static_cast<double>(m) * dt) > 1e-9)
            throw ReconstructionIncompleteError(
                "initial_from_profile: times must cover [0, 2 pi) uniformly from t = 0");

    const std::size_t np = g0.p_grid.size();
    // column-major copy in t for periodic interpolation
    std::vector<std::vector<double>> by_p(np, std::vector<double>(M));
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t k = 0; k < np; ++k) by_p[k][m] = g0.values[m][k];

    RealField out(pg);
    const auto& xg = pg.x();
    const auto& pax = pg.p();
    for (std::size_t i = 0; i < pg.nx(); ++i)
        for (std::size_t k = 0; k < pg.np(); ++k) {
            const double x = xg[i], p = pax[k];
            const double r = std::hypot(x, p);
            double th = std::atan2(-x, p);
            if (th < 0) th += 2 * pi;
            const double fp = g0.p_grid.position(r);
            if (fp > static_cast<double>(np - 1)) continue;
            const double ft = th / dt;
            const long base = interp::stencil_base(fp);
            const auto w = interp::lagrange_weights(fp, base);
            double acc = 0.0;
            const bool on_node = std::abs(fp - std::round(fp)) < 1e-12;
            if (on_node) {
                acc = interp::at_index_periodic(std::span<const double>(by_p[static_cast<std::size_t>(std::lround(fp))]), ft);
            } else {
                for (int j = 0; j < interp::kTaps; ++j) {
                    const long idx = base + j;
                    if (idx < 0 || idx >= static_cast<long>(np)) continue;
                    acc += w[j] * interp::at_index_periodic(std::span<const double>(by_p[static_cast<std::size_t>(idx)]), ft);
                }
            }
            out(i, k) = acc;
        }
    return out;
}

struct RedundancyReport {
    double conflict_0{};                 // sup |g0 - profile_from_initial(F0, 0)|
    std::optional<double> conflict_L;    // same at the second anchor
    double tolerance{1e-3};
    bool consistent{};
};

// Checks that F0, g0 (and optionally gL) describe one harmonic evolution.
inline RedundancyReport check_redundancy(const RealField& F0, const TimeProfile& g0,
                                         const std::optional<TimeProfile>& gL = std::nullopt,
                                         double tolerance = 1e-3) {
    auto conflict = [&](const TimeProfile& g) {
        g.validate();
        if (!g.p_grid.same_as(F0.grid().p()))
            throw DimensionError("check_redundancy: profile momentum grid differs from the field");
        const auto ref = profile_from_initial(F0, g.anchor, g.times);
        double worst = 0.0;
        for (std::size_t m = 0; m < g.times.size(); ++m)
            for (std::size_t k = 0; k < g.p_grid.size(); ++k)
                worst = std::max(worst, std::abs(ref.values[m][k] - g.values[m][k]));
        return worst;
    };
    RedundancyReport r;
    r.tolerance = tolerance;
    r.conflict_0 = conflict(g0);
    if (gL) r.conflict_L = conflict(*gL);
    r.consistent = r.conflict_0 <= tolerance && (!r.conflict_L || *r.conflict_L <= tolerance);
    return r;
}

struct WignerProbe {
    double integral{};
    double normalization_defect{};
    double sup_abs{};
    double bound{};
    double min_coherent_overlap{};  // min over the bank of int int F W_coh, must be >= 0
    std::size_t bank_size{};
    bool normalized{};
    bool within_bound{};
    bool positive_on_bank{};
    bool passes{};
};

// Necessary Wigner-function checks: normalization, uniform bound and
// nonnegative overlaps with a bank of coherent-state Wigner functions.
inline WignerProbe wigner_property_probe(const RealField& F, double tolerance = 1e-3, double reach = 3.0,
                                         int per_axis = 7) {
    const double hbar = F.grid().hbar();
    WignerProbe r;
    r.integral = F.integral();
    r.normalization_defect = std::abs(r.integral - 1.0);
    r.sup_abs = F.sup_norm();
    r.bound = 1.0 / (pi * hbar);
    r.normalized = r.normalization_defect <= tolerance;
    r.within_bound = r.sup_abs <= r.bound * (1 + tolerance);
    r.min_coherent_overlap = std::numeric_limits<double>::infinity();
    const double sh = std::sqrt(hbar);
    for (int a = 0; a < per_axis; ++a)
        for (int b = 0; b < per_axis; ++b) {
            const double x0 = reach * sh * (2.0 * a / (per_axis - 1) - 1);
            const double p0 = reach * sh * (2.0 * b / (per_axis - 1) - 1);
            const double ov = moyal_overlap(F, coherent_wigner(x0, p0, F.grid()));
            r.min_coherent_overlap = std::min(r.min_coherent_overlap, ov);
            ++r.bank_size;
        }
    r.positive_on_bank = r.min_coherent_overlap >= -tolerance;
    r.passes = r.normalized && r.within_bound && r.positive_on_bank;
    return r;
}

struct MoyalOptions {
    double mass = 1.0;
    double edge_tolerance = 1e-8;  // relative size of F allowed on the outer rows and columns
    bool check_edges = true;
};

// max |F| on the outermost rows and columns relative to sup |F|.
inline double edge_magnitude(const RealField& F) {
    const double sup = F.sup_norm();
    if (sup == 0.0) return 0.0;
    double e = 0.0;
    const std::size_t nx = F.nx(), np = F.np();
    for (std::size_t k = 0; k < np; ++k) e = std::max({e, std::abs(F(0, k)), std::abs(F(nx - 1, k))});
    for (std::size_t i = 0; i < nx; ++i) e = std::max({e, std::abs(F(i, 0)), std::abs(F(i, np - 1))});
    return e / sup;
}

// dF/dt = -(p/m) dF/dx + potential and boundary-potential terms, the latter
// applied to the correlation K(x, y) = rho(x + y, x - y) of F.
inline RealField moyal_rhs(const RealField& F, const Potential& V,
                           const std::vector<BoundaryPotentialSpec>& specs = {}, const MoyalOptions& opt = {}) {
    const auto& pg = F.grid();
    const std::size_t n = pg.nx();
    if (pg.np() != n || !pg.same_as(PhaseGrid::wigner_dual(pg.x())))
        throw DimensionError("moyal_rhs: field must live on a Wigner-dual phase grid");
    if (opt.check_edges) {
        const double e = edge_magnitude(F);
        if (e > opt.edge_tolerance)
            throw ResolutionError("moyal_rhs: field is not negligible at the grid edge (relative size " +
                                  num(e) + ")");
    }
    const double hbar = pg.hbar(), dx = pg.x().dx();
    const auto D = detail::potential_differences(V, pg);

    std::vector<cplx> K(F.values().begin(), F.values().end());
    detail::rows_to_correlation(K, n, dx, hbar);

    std::vector<cplx> dK(n * n, cplx{});
    const cplx mi(0, -1 / hbar);
    for (std::size_t q = 0; q < n * n; ++q) dK[q] = mi * D[q] * K[q];

    const long ln = static_cast<long>(n);
    auto K_at = [&](long i, long j) -> cplx {
        if (i < 0 || i >= ln || j <= -ln / 2 || j >= ln / 2) return cplx{};
        return K[static_cast<std::size_t>(i * ln + (j + ln) % ln)];
    };
    for (const auto& spec : specs) {
        spec.validate();
        const double half = spec.shift() / 2;  // +-eps
        const double qf = half / dx;
        const long q = std::lround(qf);
        if (std::abs(qf - static_cast<double>(q)) > 1e-7)
            throw ResolutionError("moyal_rhs: boundary epsilon must be a multiple of the grid spacing");
        if (spec.epsilon < 2 * dx * (1 - 1e-12))
            throw ResolutionError("moyal_rhs: boundary epsilon is below twice the grid spacing");
        const double c = spec.coefficient(), w = spec.wall(), eps = spec.epsilon;
        const double reach = 8 * eps;
        for (long i = 0; i < ln; ++i) {
            const double x = pg.x()[static_cast<std::size_t>(i)];
            for (long j = -ln / 2 + 1; j < ln / 2; ++j) {
                const double y = static_cast<double>(j) * dx;
                const double u1 = x + y - w, u2 = x - y - w;
                if (std::abs(u1) > reach && std::abs(u2) > reach) continue;
                const cplx term = delta_eps_prime(u1, eps) * K_at(i + q, j + q) -
                                  delta_eps_prime(u2, eps) * K_at(i + q, j - q);
                dK[static_cast<std::size_t>(i * ln + (j + ln) % ln)] += mi * c * term;
            }
        }
    }
    detail::rows_to_momentum(dK, n, dx, hbar);

    const auto d1 = derivative_x(F, 1);
    RealField out(pg);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            out(i, k) = -pg.p()[k] / opt.mass * d1(i, k).real() + dK[i * n + k].real();
    return out;
}

struct StationarityReport {
    double sup_rhs{};    // sup |moyal_rhs| over the bulk strip
    double sup_F{};
    double relative{};   // sup_rhs / sup_F
    double edge{};       // edge_magnitude(F)
    double p_band{};
};

// Stationarity residual of F under moyal_rhs, measured for a + margin <= x
// <= b - margin and |p| <= p_band. Smoothed walls leave an O(p eps) defect,
// so the band keeps the measurement on resolved momenta.
inline StationarityReport stationarity_residual(const RealField& F, const Potential& V,
                                                const std::vector<BoundaryPotentialSpec>& specs,
                                                Interval bulk, double margin, double p_band,
                                                MoyalOptions opt = {}) {
    StationarityReport r;
    r.p_band = p_band;
    r.edge = edge_magnitude(F);
    opt.check_edges = false;
    const auto rhs = moyal_rhs(F, V, specs, opt);
    r.sup_F = F.sup_norm();
    const auto& xg = F.grid().x();
    for (std::size_t i = 0; i < F.nx(); ++i) {
        if (xg[i] < bulk.lo + margin || xg[i] > bulk.hi - margin) continue;
        for (std::size_t k = 0; k < F.np(); ++k)
            if (std::abs(F.grid().p()[k]) <= p_band) r.sup_rhs = std::max(r.sup_rhs, std::abs(rhs(i, k)));
    }
    r.relative = r.sup_F > 0 ? r.sup_rhs / r.sup_F : 0.0;
    return r;
}

namespace detail {

// Largest deviation of V from its least-squares quadratic, relative to max |V|.
inline double quadratic_fit_defect(const Potential& V) {
    const std::size_t n = V.values.size();
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = V.grid[i];
        A.row(static_cast<Eigen::Index>(i)) << 1.0, x, x * x;
        b(static_cast<Eigen::Index>(i)) = V.values[i];
        mx = std::max(mx, std::abs(V.values[i]));
    }
    if (mx == 0.0) return 0.0;
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return (A * c - b).cwiseAbs().maxCoeff() / mx;
}

}  // namespace detail

// Classical RK4 integration of dF/dt = moyal_rhs(F) for V zero or quadratic,
// where the Moyal bracket reduces to the Liouville bracket. `steps` is a
// minimum; stability may require more.
inline RealField rk4_evolve(const RealField& F0, const Potential& V, double t, int steps, MoyalOptions opt = {}) {
    if (steps < 1) throw DomainError("rk4_evolve: steps must be >= 1");
    if (detail::quadratic_fit_defect(V) > 1e-10)
        throw DomainError("rk4_evolve: only zero or quadratic potentials are supported");
    opt.check_edges = false;
    // sub-step so h times the spectral radius stays inside the RK4 stability region
    const auto& pg = F0.grid();
    const auto D = detail::potential_differences(V, pg);
    double dmax = 0.0;
    for (double d : D) dmax = std::max(dmax, std::abs(d));
    const double p_max = std::max(std::abs(pg.p().x_min()), std::abs(pg.p().last()));
    const double radius = p_max / opt.mass * pi / pg.x().dx() + dmax / pg.hbar();
    steps = std::max(steps, static_cast<int>(std::ceil(std::abs(t) * radius / 2.0)));
    const double h = t / steps;
    RealField F = F0;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = moyal_rhs(F, V, {}, opt);
        RealField tmp = F;
        tmp += (h / 2) * k1;
        const auto k2 = moyal_rhs(tmp, V, {}, opt);
        tmp = F;
        tmp += (h / 2) * k2;
        const auto k3 = moyal_rhs(tmp, V, {}, opt);
        tmp = F;
        tmp += h * k3;
        const auto k4 = moyal_rhs(tmp, V, {}, opt);
        F += (h / 6) * k1;
        F += (h / 3) * k2;
        F += (h / 3) * k3;
        F += (h / 6) * k4;
    }
    return F;
}

}  // namespace wigdev
