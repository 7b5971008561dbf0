#pragma once

// Strip projection, bulk-field assembly and the positivity witness showing
// that a projected global Wigner function is not itself a Wigner function.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "grid.hpp"
#include "wigner.hpp"

namespace wigdev {

template <class T>
PhaseSpaceField<T> project_strip(const PhaseSpaceField<T>& F, Interval strip) {
    PhaseSpaceField<T> out = F;
    const auto& xg = F.grid().x();
    for (std::size_t i = 0; i < F.nx(); ++i)
        if (!strip.contains(xg[i]))
            for (auto& v : out.row(i)) v = T{};
    return out;
}

namespace detail {

inline bool vanishes_outside(const WaveFunction& f, Interval iv) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!iv.contains(f.grid()[i]) && f[i] != cplx{}) return false;
    return true;
}

inline bool vanishes_inside(const WaveFunction& f, Interval iv) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = f.grid()[i];
        if (x > iv.lo && x < iv.hi && f[i] != cplx{}) return false;
    }
    return true;
}

}  // namespace detail

// F_Bulk = W(phi) + P_I [W(phi, chi) + W(chi, phi)] for phi supported in I
// and chi supported in its complement.
inline RealField assemble_bulk(const WaveFunction& phi, const WaveFunction& chi, Interval I,
                               const PhaseGrid& pg) {
    if (!phi.grid().same_as(chi.grid())) throw DimensionError("assemble_bulk: grids differ");
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (phi[i] != cplx{} && chi[i] != cplx{})
            throw DomainError("assemble_bulk: supports of phi and chi overlap");
    if (!detail::vanishes_outside(phi, I)) throw DomainError("assemble_bulk: phi leaves the interval");
    if (!detail::vanishes_inside(chi, I)) throw DomainError("assemble_bulk: chi enters the interval");
    RealField out = wigner_transform(phi, pg);
    const auto cross = project_strip(cross_wigner(chi, phi, pg), I);
    for (std::size_t j = 0; j < out.values().size(); ++j) out.values()[j] += 2 * cross.values()[j].real();
    return out;
}

// Grid on [-L/2, 7L/2) shifted by half a cell, so the walls 0, L and 2L sit
// midway between samples and strip masks act as midpoint rules.
inline Grid1D staggered_strip_grid(double L, std::size_t n, double hbar = 1.0) {
    const double dx = 4 * L / static_cast<double>(n);
    const double lo = -L / 2 - dx / 2;
    return Grid1D(lo, lo + static_cast<double>(n) * dx, n, hbar);
}

struct WitnessReport {
    double N_bound{};      // infimum of admissible N
    double N_used{};       // 1.5 * N_bound
    double overlap{};      // int int F_Bulk W(psi) dx dp from the sampled fields
    double closed_form{};  // |<phi|psi>|^2 / 2 pi hbar - (N / pi hbar) int int |phi|^2 |chi|^2
    double tolerance{1e-4};
    double denominator{};  // int_0^L dx |phi(x)|^2 int_L^{2L-x} dy |chi(y)|^2
    bool confined{};       // chi == 0, no witness needed
};

// Witness for phi on [0, L] and chi on [L, 2L]. The grid must cover [0, 2L].
inline WitnessReport positivity_witness(const WaveFunction& phi, const WaveFunction& chi, double L,
                                        const PhaseGrid& pg) {
    const auto& g = phi.grid();
    if (!g.same_as(chi.grid())) throw DimensionError("positivity_witness: grids differ");
    if (g.x_min() > 0.0 || g.last() < 2 * L) throw DomainError("positivity_witness: grid must cover [0, 2L]");
    const Interval I{0.0, L};
    if (!detail::vanishes_outside(phi, I)) throw DomainError("positivity_witness: phi leaves [0, L]");
    if (!detail::vanishes_outside(chi, Interval{L, 2 * L}))
        throw DomainError("positivity_witness: chi leaves [L, 2L]");

    const double hbar = g.hbar(), dx = g.dx();
    const double phi_n2 = phi.norm_squared();
    WitnessReport r;

    // Cumulative |chi|^2 from L, so the inner integral up to 2L - x is a lookup.
    std::vector<double> cum(g.size() + 1, 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) cum[j + 1] = cum[j] + std::norm(chi[j]) * dx;
    auto chi_mass_below = [&](double y) {
        const double f = g.position(y) + 0.5;  // sample j covers [x_j - dx/2, x_j + dx/2)
        if (f <= 0) return 0.0;
        if (f >= static_cast<double>(g.size())) return cum.back();
        const std::size_t j = static_cast<std::size_t>(std::floor(f));
        return cum[j] + (f - static_cast<double>(j)) * std::norm(chi[j]) * dx;
    };
    const double chi_at_L = chi_mass_below(L);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g[i];
        if (x <= 0.0 || x > L) continue;
        r.denominator += std::norm(phi[i]) * (chi_mass_below(2 * L - x) - chi_at_L) * dx;
    }

    if (chi.norm_squared() == 0.0) {
        r.confined = true;
        r.closed_form = phi_n2 * phi_n2 / (2 * pi * hbar);
        r.overlap = moyal_overlap(assemble_bulk(phi, chi, I, pg), wigner_transform(phi, pg));
        return r;
    }
    if (!(r.denominator > 1e-300))
        throw WitnessUnavailableError("positivity_witness: phi and chi carry no mass in the overlap region");

    r.N_bound = phi_n2 * phi_n2 / (2 * r.denominator);
    r.N_used = 1.5 * r.N_bound;
    const WaveFunction psi = phi + chi.scaled(-r.N_used);
    const RealField bulk = assemble_bulk(phi, chi, I, pg);
    r.overlap = moyal_overlap(bulk, wigner_transform(psi, pg));
    r.closed_form = phi_n2 * phi_n2 / (2 * pi * hbar) - r.N_used / (pi * hbar) * r.denominator;
    return r;
}

}  // namespace wigdev
