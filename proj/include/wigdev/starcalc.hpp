#pragma once

// Star-product calculus for the kinetic symbol, the nonlocal potential
// kernel, one-sided boundary terms and smoothed boundary potentials.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "interp.hpp"
#include "wigner.hpp"

namespace wigdev {

// p^2/2m * F, which terminates after the second order in hbar.
template <class T>
ComplexField kinetic_star(const PhaseSpaceField<T>& F, double mass = 1.0) {
    const double hbar = F.grid().hbar();
    const auto d1 = derivative_x(F, 1);
    const auto d2 = derivative_x(F, 2);
    ComplexField out(F.grid());
    const auto& pg = F.grid().p();
    for (std::size_t i = 0; i < F.nx(); ++i)
        for (std::size_t k = 0; k < F.np(); ++k) {
            const double p = pg[k];
            out(i, k) = p * p / (2 * mass) * cplx(F(i, k)) - cplx(0, hbar * p / (2 * mass)) * d1(i, k) -
                        hbar * hbar / (8 * mass) * d2(i, k);
        }
    return out;
}

namespace detail {

// Value and first derivative at fractional index f from an 8-point stencil
// kept inside [lo, hi]; zero outside that range.
inline std::pair<cplx, cplx> clamped_value_and_slope(std::span<const cplx> v, double f, long lo,
                                                     long hi, double dx) {
    if (f < lo - 1e-12 || f > hi + 1e-12) return {cplx{}, cplx{}};
    constexpr std::size_t M = interp::kTaps;
    long base = interp::stencil_base(f);
    base = std::clamp(base, lo, std::max(lo, hi - static_cast<long>(M) + 1));
    std::array<double, M> offs{};
    for (std::size_t j = 0; j < M; ++j) offs[j] = static_cast<double>(j);
    const auto c = interp::fd_weights<M>(f - static_cast<double>(base), offs, 1);
    cplx val{}, der{};
    for (std::size_t j = 0; j < M; ++j) {
        const cplx s = v[static_cast<std::size_t>(base) + j];
        val += c[0][j] * s;
        der += c[1][j] * s;
    }
    return {val, der / dx};
}

}  // namespace detail

// psi'(a+) from the 4-point forward stencil.
inline cplx right_derivative(const WaveFunction& psi, double a) {
    const auto& g = psi.grid();
    const std::size_t i = g.node_of(a, "boundary");
    if (i + 3 >= g.size()) throw DomainError("right_derivative: stencil leaves the grid");
    return (-11.0 * psi[i] + 18.0 * psi[i + 1] - 9.0 * psi[i + 2] + 2.0 * psi[i + 3]) / (6.0 * g.dx());
}

// Dirichlet boundary term -(hbar / 2 pi m) e^{-2ip(a-x)/hbar} psi*(2x-a) psi'(a+)
// on a < x < x0, zero elsewhere.
inline ComplexField boundary_term_B1(const WaveFunction& psi, double a, double x0,
                                     const PhaseGrid& pg) {
    const auto& g = psi.grid();
    if (!pg.x().same_as(g)) throw DimensionError("boundary_term_B1: grids differ");
    if (a < g.x_min() || a > g.last()) throw DomainError("boundary_term_B1: a outside the grid");
    const std::size_t ia = g.node_of(a, "boundary");
    const double hbar = g.hbar(), m = psi.mass();
    const cplx dpsi = right_derivative(psi, a);
    ComplexField out(pg);
    for (std::size_t i = ia + 1; i < g.size() && g[i] < x0; ++i) {
        const std::size_t mirror = 2 * i - ia;
        const cplx amp = mirror < g.size() ? std::conj(psi[mirror]) * dpsi : cplx{};
        if (amp == cplx{}) continue;
        for (std::size_t k = 0; k < pg.np(); ++k) {
            const double p = pg.p()[k];
            out(i, k) = -hbar / (2 * pi * m) * std::exp(cplx(0, -2 * p * (a - g[i]) / hbar)) * amp;
        }
    }
    return out;
}

// Lambda_eps(x, p) in closed form, using psi and psi' sampled just inside the
// confining interval [a, b] by one-sided interpolation; a < x < x0.
inline ComplexField lambda_epsilon(const WaveFunction& psi, double a, double b, double eps,
                                   double x0, const PhaseGrid& pg) {
    const auto& g = psi.grid();
    if (!pg.x().same_as(g)) throw DimensionError("lambda_epsilon: grids differ");
    if (!(eps > 0)) throw DomainError("lambda_epsilon: eps must be positive");
    const long lo = static_cast<long>(std::ceil(g.position(a) - 1e-9));
    const long hi = static_cast<long>(std::floor(g.position(b) + 1e-9));
    const double hbar = g.hbar(), dx = g.dx();
    const auto [pa, dpa] = detail::clamped_value_and_slope(psi.values(), g.position(a + eps), lo, hi, dx);
    ComplexField out(pg);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g[i];
        if (x <= a || x >= x0) continue;
        const auto [pm, dpm] =
            detail::clamped_value_and_slope(psi.values(), g.position(2 * x - a + eps), lo, hi, dx);
        for (std::size_t k = 0; k < pg.np(); ++k) {
            const double p = pg.p()[k];
            const cplx braces = -cplx(0, 2 * p / hbar) * std::conj(pm) * pa - std::conj(dpm) * pa +
                                std::conj(pm) * dpa;
            out(i, k) = cplx(0, 2 / hbar) * std::exp(cplx(0, -2 * p * (a - x) / hbar)) * braces;
        }
    }
    return out;
}

// Half-line state H(x - a) phi(x), with phi faded smoothly to zero between
// b and fade_end so the result is smooth on (a, infinity).
inline WaveFunction continued_half_line_state(const std::function<cplx(double)>& phi, double a,
                                              double b, double fade_end, const Grid1D& grid,
                                              double mass = 1.0) {
    if (!(fade_end > b) || fade_end > grid.last())
        throw DomainError("continued_half_line_state: need b < fade_end <= grid end");
    auto bump = [](double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; };
    auto fade = [&](double x) {
        if (x <= b) return 1.0;
        if (x >= fade_end) return 0.0;
        const double t = (fade_end - x) / (fade_end - b);
        return bump(t) / (bump(t) + bump(1 - t));
    };
    return WaveFunction::sample(grid, [&](double x) { return x < a ? cplx{} : phi(x) * fade(x); }, mass);
}

struct ResidualReport {
    double residual{};      // sup |p^2/2m * F1 - E F1 - B1| on the resolved half-strip
    double sup_F1{};
    double p_band{};
    std::size_t samples{};
};

// Residual of the boundary-corrected stargenvalue equation on a < x <= x0,
// |p| <= p_band. F1 must be the left piece of the Wigner function of psi.
inline ResidualReport stargenvalue_residual(const RealField& F1, double E, const WaveFunction& psi,
                                            double a, double x0, double p_band) {
    ResidualReport r;
    r.p_band = p_band;
    r.sup_F1 = F1.sup_norm();
    if (r.sup_F1 == 0.0) return r;
    const auto star = kinetic_star(F1, psi.mass());
    const auto B1 = boundary_term_B1(psi, a, x0 + F1.grid().x().dx(), F1.grid());
    const auto& xg = F1.grid().x();
    const auto& pg = F1.grid().p();
    for (std::size_t i = 0; i < F1.nx(); ++i) {
        if (xg[i] <= a + 1e-12 || xg[i] > x0 + 1e-12) continue;
        for (std::size_t k = 0; k < F1.np(); ++k) {
            if (std::abs(pg[k]) > p_band) continue;
            r.residual = std::max(r.residual, std::abs(star(i, k) - E * F1(i, k) - B1(i, k)));
            ++r.samples;
        }
    }
    return r;
}

// Potential sampled on a window wide enough for the nonlocal kernel.
struct Potential {
    Grid1D grid;
    std::vector<double> values;

    // Samples f on the doubled window required by phase grid pg.
    template <class F>
    static Potential sample(F&& f, const PhaseGrid& pg) {
        const auto& xg = pg.x();
        const std::size_t n = 2 * xg.size();
        const double lo = xg.x_min() - static_cast<double>(xg.size() / 2) * xg.dx();
        Grid1D g(lo, lo + static_cast<double>(n) * xg.dx(), n, xg.hbar());
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(g[i]);
        return {g, std::move(v)};
    }

    static Potential zero(const PhaseGrid& pg) {
        return sample([](double) { return 0.0; }, pg);
    }

    // Value at x, which must be a node of the window.
    [[nodiscard]] double at(double x) const { return values[grid.node_of(x, "potential sample")]; }
};

namespace detail {

// D_i(j) = V(x_i + y_j) - V(x_i - y_j) for y_j = j dx, stored at (j mod n).
inline std::vector<double> potential_differences(const Potential& V, const PhaseGrid& pg) {
    const auto& xg = pg.x();
    const long n = static_cast<long>(xg.size());
    const double dx = xg.dx();
    if (std::abs(V.grid.dx() - dx) > 1e-12 * dx)
        throw DimensionError("potential: sample spacing differs from the phase grid");
    const double need_lo = xg.x_min() - static_cast<double>(n / 2) * dx;
    const double need_hi = xg.last() + static_cast<double>(n / 2) * dx;
    if (V.grid.x_min() > need_lo + 1e-9 * dx || V.grid.last() < need_hi - 1e-9 * dx)
        throw NonlocalityError("potential window [" + num(V.grid.x_min()) + ", " +
                                   num(V.grid.last()) + "] must cover [" +
                                   num(need_lo) + ", " + num(need_hi) + "]",
                               need_lo, need_hi);
    const double off = V.grid.position(xg.x_min());
    const long i0 = static_cast<long>(std::lround(off));
    if (std::abs(off - static_cast<double>(i0)) > 1e-7)
        throw DimensionError("potential: samples are not aligned with the phase grid");
    std::vector<double> D(static_cast<std::size_t>(n * n), 0.0);
    for (long i = 0; i < n; ++i)
        for (long j = -n / 2 + 1; j < n / 2; ++j)
            D[static_cast<std::size_t>(i * n + (j + n) % n)] =
                V.values[static_cast<std::size_t>(i0 + i + j)] - V.values[static_cast<std::size_t>(i0 + i - j)];
    return D;
}

}  // namespace detail

// Kernel V(x, p') = int sin(x' p'/hbar) [V(x + x'/2) - V(x - x'/2)] dx'
// sampled on the phase grid's momentum axis.
inline RealField potential_kernel(const Potential& V, const PhaseGrid& pg) {
    const std::size_t n = pg.nx();
    const auto D = detail::potential_differences(V, pg);
    std::vector<cplx> block(D.begin(), D.end());
    // sum_j sin(2 pi j m / n) D_j = -Im sum_j D_j e^{-2 pi i j m / n}
    fft::transform_rows(block, n, n, fft::Direction::forward);
    const double dx = pg.x().dx();
    RealField out(pg);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            out(i, k) = -2 * dx * block[i * n + (k + n / 2) % n].imag();
    return out;
}

enum class Side { left, right };

struct BoundaryPotentialSpec {
    double a;
    double b;
    double epsilon;
    double strength;  // hbar^2 / 2m
    Side side;

    void validate() const {
        if (!(epsilon > 0)) throw DomainError("BoundaryPotentialSpec: epsilon must be positive");
        if (!(a < b)) throw DomainError("BoundaryPotentialSpec: need a < b");
    }
    [[nodiscard]] double wall() const { return side == Side::left ? a : b; }
    // Coefficient of delta'_eps(x - wall) in the Hamiltonian.
    [[nodiscard]] double coefficient() const { return side == Side::left ? -strength : strength; }
    // Evaluation shift of the multiplicand: psi(x + shift).
    [[nodiscard]] double shift() const { return side == Side::left ? 2 * epsilon : -2 * epsilon; }
};

inline double delta_eps(double x, double eps) {
    return std::exp(-(x / eps) * (x / eps)) / (std::sqrt(pi) * eps);
}
inline double delta_eps_prime(double x, double eps) { return -2 * x / (eps * eps) * delta_eps(x, eps); }

struct SmoothedBoundary {
    BoundaryPotentialSpec spec;
    std::vector<double> delta;        // delta_eps(x - wall)
    std::vector<double> delta_prime;  // delta'_eps(x - wall)
    double shift;                     // multiplicand evaluated at x + shift
};

inline SmoothedBoundary smoothed_boundary_symbol(const BoundaryPotentialSpec& spec, const Grid1D& grid) {
    spec.validate();
    if (spec.epsilon < 2 * grid.dx() * (1 - 1e-12))
        throw ResolutionError("smoothed_boundary_symbol: epsilon " + num(spec.epsilon) +
                              " is below twice the grid spacing " + num(grid.dx()));
    SmoothedBoundary s{spec, std::vector<double>(grid.size()), std::vector<double>(grid.size()), spec.shift()};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid[i] - spec.wall();
        s.delta[i] = delta_eps(u, spec.epsilon);
        s.delta_prime[i] = delta_eps_prime(u, spec.epsilon);
    }
    return s;
}

}  // namespace wigdev
