#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "interp.hpp"

namespace wigdev {

namespace detail {

inline void require_dual(const WaveFunction& psi, const PhaseGrid& pg, const char* who) {
    if (!pg.same_as(PhaseGrid::wigner_dual(psi.grid())))
        throw DimensionError(std::string(who) +
                             ": phase grid is not the Wigner dual of the state's grid");
}

// Row i holds K_i(j) = psi(x_i + y_j) phi*(x_i - y_j) for y_j = j dx,
// j = -n/2..n/2-1 stored at (j mod n); psi, phi zero outside the grid.
inline std::vector<cplx> correlation_block(std::span<const cplx> psi, std::span<const cplx> phi) {
    const long n = static_cast<long>(psi.size());
    std::vector<cplx> block(static_cast<std::size_t>(n * n), cplx{});
    for (long i = 0; i < n; ++i) {
        cplx* row = block.data() + i * n;
        const long jlo = std::max(-n / 2, std::max(-i, i - (n - 1)));
        const long jhi = std::min(n / 2 - 1, std::min(n - 1 - i, i));
        for (long j = jlo; j <= jhi; ++j) row[(j + n) % n] = psi[i + j] * std::conj(phi[i - j]);
    }
    return block;
}

// y -> p transform of every row: W_i(p_k) = (dx / pi hbar) sum_j K_i(j) e^{-2 i p_k y_j / hbar}.
inline void rows_to_momentum(std::vector<cplx>& block, std::size_t n, double dx, double hbar) {
    fft::transform_rows(block, n, n, fft::Direction::forward);
    const double scale = dx / (pi * hbar);
    std::vector<cplx> tmp(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx* row = block.data() + i * n;
        // p_k = (k - n/2) dp  <->  DFT bin (k - n/2) mod n
        for (std::size_t k = 0; k < n; ++k) tmp[k] = scale * row[(k + n / 2) % n];
        std::copy(tmp.begin(), tmp.end(), row);
    }
}

// Inverse of rows_to_momentum: recovers K_i(j) from the momentum rows.
inline void rows_to_correlation(std::vector<cplx>& block, std::size_t n, double dx, double hbar) {
    std::vector<cplx> tmp(n);
    const double scale = pi * hbar / (dx * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        cplx* row = block.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) tmp[(k + n / 2) % n] = scale * row[k];
        std::copy(tmp.begin(), tmp.end(), row);
    }
    fft::transform_rows(block, n, n, fft::Direction::backward);
}

}  // namespace detail

// W(psi, phi)(x, p) = (1 / pi hbar) int psi(x + y) phi*(x - y) e^{-2ipy/hbar} dy.
inline ComplexField cross_wigner(const WaveFunction& psi, const WaveFunction& phi,
                                 const PhaseGrid& pg) {
    if (!psi.grid().same_as(phi.grid())) throw DimensionError("cross_wigner: grids differ");
    detail::require_dual(psi, pg, "cross_wigner");
    const std::size_t n = psi.size();
    auto block = detail::correlation_block(psi.values(), phi.values());
    detail::rows_to_momentum(block, n, psi.grid().dx(), psi.grid().hbar());
    return ComplexField(pg, std::move(block));
}

inline ComplexField cross_wigner(const WaveFunction& psi, const WaveFunction& phi) {
    return cross_wigner(psi, phi, PhaseGrid::wigner_dual(psi.grid()));
}

inline RealField wigner_transform(const WaveFunction& psi, const PhaseGrid& pg) {
    const ComplexField w = cross_wigner(psi, psi, pg);
    const double tol = 1e-10 * std::max(1.0, w.sup_norm());
    for (const auto& v : w.values())
        if (std::abs(v.imag()) > tol) throw Error("wigner_transform: non-real result");
    return real_part(w);
}

inline RealField wigner_transform(const WaveFunction& psi) {
    return wigner_transform(psi, PhaseGrid::wigner_dual(psi.grid()));
}

inline RealField mixed_wigner(const MixedState& rho, const PhaseGrid& pg) {
    RealField out(pg);
    for (const auto& c : rho.components()) {
        if (c.weight == 0.0) continue;
        out += c.weight * wigner_transform(c.state, pg);
    }
    return out;
}

struct Marginals {
    std::vector<double> position;  // int F dp, indexed by x sample
    std::vector<double> momentum;  // int F dx, indexed by p sample
};

inline Marginals marginals(const RealField& F) {
    const std::size_t nx = F.nx(), np = F.np();
    const double dx = F.grid().x().dx(), dp = F.grid().p().dx();
    Marginals m{std::vector<double>(nx, 0.0), std::vector<double>(np, 0.0)};
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < np; ++k) {
            m.position[i] += F(i, k) * dp;
            m.momentum[k] += F(i, k) * dx;
        }
    return m;
}

template <class T>
T moyal_overlap(const PhaseSpaceField<T>& F, const PhaseSpaceField<T>& G) {
    F.check_same(G);
    T s{};
    for (std::size_t j = 0; j < F.values().size(); ++j) s += F.values()[j] * G.values()[j];
    return s * F.grid().cell();
}

struct BoundReport {
    double sup_abs{};
    double bound{};              // 1 / (pi hbar)
    double bound_excess{};       // max(0, sup_abs - bound)
    double outside_strip_max{};  // max |F| for x outside [a, b]
    double integral{};
    double normalization_defect{};  // |integral - 1|
    bool within_bound{};
    bool normalized{};           // defect <= 1e-6
};

inline BoundReport support_and_bound_report(const RealField& F, Interval strip) {
    BoundReport r;
    r.bound = 1.0 / (pi * F.grid().hbar());
    r.sup_abs = F.sup_norm();
    r.bound_excess = std::max(0.0, r.sup_abs - r.bound);
    r.within_bound = r.sup_abs <= r.bound + 1e-6;
    const auto& xg = F.grid().x();
    for (std::size_t i = 0; i < F.nx(); ++i) {
        if (strip.contains(xg[i])) continue;
        for (double v : F.row(i)) r.outside_strip_max = std::max(r.outside_strip_max, std::abs(v));
    }
    r.integral = F.integral();
    r.normalization_defect = std::abs(r.integral - 1.0);
    r.normalized = r.normalization_defect <= 1e-6;
    return r;
}

// Momentum profile F(x_i, .) at a grid node.
inline std::vector<double> slice_at(const RealField& F, std::size_t i) {
    const auto r = F.row(i);
    return {r.begin(), r.end()};
}

// One-sided x-derivatives of orders 0..3 at node i0 from the seven nodes
// i0, i0 + dir, ... (dir = +1 right-sided, -1 left-sided), indexed
// [order][k] over the momentum samples.
inline std::array<std::vector<double>, 4> one_sided_x_derivatives(const RealField& F,
                                                                 std::size_t i0, int dir) {
    constexpr std::size_t M = 7;
    std::array<double, M> offs{};
    for (std::size_t j = 0; j < M; ++j) offs[j] = static_cast<double>(j);
    const auto c = interp::fd_weights<M>(0.0, offs, 3);
    const long last = static_cast<long>(i0) + dir * static_cast<long>(M - 1);
    if (last < 0 || last >= static_cast<long>(F.nx()))
        throw DomainError("one_sided_x_derivatives: stencil leaves the grid");
    const double h = F.grid().x().dx() * dir;
    std::array<std::vector<double>, 4> out;
    for (int order = 0; order < 4; ++order) {
        out[order].assign(F.np(), 0.0);
        const double scale = std::pow(h, -order);
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t i = static_cast<std::size_t>(static_cast<long>(i0) + dir * static_cast<long>(j));
            for (std::size_t k = 0; k < F.np(); ++k) out[order][k] += c[order][j] * F(i, k) * scale;
        }
    }
    return out;
}

}  // namespace wigdev
