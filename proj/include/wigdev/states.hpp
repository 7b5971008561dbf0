#pragma once

// Closed-form reference states and their Wigner functions.

#include <cmath>
#include <string>
#include <vector>

#include "grid.hpp"

namespace wigdev {

// sin(u)/u with a series near the origin.
inline double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

struct BoxState {
    WaveFunction state;
    double energy;
};

// n-th Dirichlet eigenstate of a box [a, a + L].
inline BoxState box_eigenstate(int n, double L, const Grid1D& grid, double a = 0.0,
                               double mass = 1.0) {
    if (n < 1) throw DomainError("box_eigenstate: n must be >= 1");
    if (!(L > 0)) throw DomainError("box_eigenstate: L must be positive");
    if (a < grid.x_min() || a + L > grid.last())
        throw DomainError("box_eigenstate: box does not fit on the grid");
    const double k = n * pi / L;
    const double amp = std::sqrt(2.0 / L);
    auto psi = WaveFunction::sample(
        grid,
        [&](double x) { return (x > a && x < a + L) ? amp * std::sin(k * (x - a)) : 0.0; },
        mass);
    const double hbar = grid.hbar();
    return {std::move(psi), n * n * pi * pi * hbar * hbar / (2 * mass * L * L)};
}

// Analytic Wigner function of box_eigenstate at a single point.
inline double box_wigner_value(int n, double L, double x, double p, double hbar, double a = 0.0) {
    const double u = x - a;
    if (u <= 0 || u >= L) return 0.0;
    const double s = L / 2 - std::abs(u - L / 2);
    const double k = n * pi / L, q = p / hbar;
    const double pref = 1.0 / (pi * hbar * L);
    return pref * s * (sinc(2 * (k - q) * s) + sinc(2 * (k + q) * s)) -
           2 * pref * s * std::cos(2 * k * u) * sinc(2 * q * s);
}

// The resonant-momentum limit p = n pi hbar / L written out explicitly.
inline double box_wigner_resonant(int n, double L, double x, double hbar, double a = 0.0) {
    const double u = x - a;
    if (u <= 0 || u >= L) return 0.0;
    const double s = L / 2 - std::abs(u - L / 2);
    return s / (pi * hbar * L) + std::sin(4 * n * pi * s / L) / (4 * pi * pi * n * hbar) +
           std::cos(2 * n * pi * u / L) * std::sin(2 * n * pi * (std::abs(u - L / 2) - L / 2) / L) /
               (n * pi * pi * hbar);
}

inline RealField box_wigner_analytic(int n, double L, const PhaseGrid& pg, double a = 0.0) {
    if (n < 1) throw DomainError("box_wigner_analytic: n must be >= 1");
    const double hbar = pg.hbar();
    const double p_res = n * pi * hbar / L;
    const double window = 1e-6 * hbar / L;
    return RealField::sample(pg, [&](double x, double p) {
        if (std::abs(std::abs(p) - p_res) < window) return box_wigner_resonant(n, L, x, hbar, a);
        return box_wigner_value(n, L, x, p, hbar, a);
    });
}

// Harmonic oscillator (m = omega = 1) eigenstate via the three-term recurrence.
inline WaveFunction hermite_state(int n, const Grid1D& grid, double mass = 1.0) {
    if (n < 0) throw DomainError("hermite_state: n must be >= 0");
    const double hbar = grid.hbar();
    const double sh = std::sqrt(hbar);
    const double reach = std::sqrt(hbar * (2 * n + 1)) + 6 * sh;
    if (grid.x_min() > -reach || grid.last() < reach)
        throw ResolutionError("hermite_state: grid does not contain the support of state " +
                              std::to_string(n));
    const double p_nyquist = pi * hbar / (2 * grid.dx());
    if (p_nyquist < reach)
        throw ResolutionError("hermite_state: grid spacing too coarse for state " +
                              std::to_string(n));
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double xi = x / sh;
        double prev = 0.0;
        double cur = std::pow(pi * hbar, -0.25) * std::exp(-x * x / (2 * hbar));
        for (int m = 0; m < n; ++m) {
            const double next = std::sqrt(2.0 / (m + 1)) * xi * cur - std::sqrt(double(m) / (m + 1)) * prev;
            prev = cur;
            cur = next;
        }
        v[i] = cur;
    }
    return WaveFunction(grid, std::move(v), mass);
}

// Minimum-uncertainty packet centred at (x0, p0).
inline WaveFunction coherent_state(double x0, double p0, const Grid1D& grid, double mass = 1.0) {
    const double hbar = grid.hbar();
    return WaveFunction::sample(
        grid,
        [&](double x) {
            return std::pow(pi * hbar, -0.25) *
                   std::exp(cplx(-(x - x0) * (x - x0) / (2 * hbar), p0 * x / hbar));
        },
        mass);
}

inline double coherent_wigner_value(double x0, double p0, double x, double p, double hbar) {
    return std::exp(-((x - x0) * (x - x0) + (p - p0) * (p - p0)) / hbar) / (pi * hbar);
}

inline RealField coherent_wigner(double x0, double p0, const PhaseGrid& pg) {
    const double hbar = pg.hbar();
    return RealField::sample(pg, [&](double x, double p) { return coherent_wigner_value(x0, p0, x, p, hbar); });
}

inline RealField harmonic_wigner(int n, const PhaseGrid& pg) {
    if (n < 0 || n > 1) throw DomainError("harmonic_wigner: only n = 0, 1 have closed forms here");
    const double hbar = pg.hbar();
    return RealField::sample(pg, [&](double x, double p) {
        const double r2 = (x * x + p * p) / hbar;
        const double g = std::exp(-r2) / (pi * hbar);
        return n == 0 ? g : (2 * r2 - 1) * g;
    });
}

}  // namespace wigdev
