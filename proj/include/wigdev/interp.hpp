#pragma once

// Local Lagrange interpolation on uniform grids with zero extension.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "grid.hpp"

namespace wigdev::interp {

inline constexpr int kTaps = 8;

// Weights of the kTaps-point Lagrange stencil starting at `base` for the
// fractional index f.
inline std::array<double, kTaps> lagrange_weights(double f, long base) {
    std::array<double, kTaps> w{};
    const double t = f - static_cast<double>(base);
    for (int j = 0; j < kTaps; ++j) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m < kTaps; ++m) {
            if (m == j) continue;
            num *= t - m;
            den *= j - m;
        }
        w[j] = num / den;
    }
    return w;
}

inline long stencil_base(double f) { return static_cast<long>(std::floor(f)) - (kTaps / 2 - 1); }

// Value of samples v (index space) at fractional index f; samples outside
// [0, n) count as zero, and f outside [0, n-1] evaluates to zero.
template <class T>
T at_index(std::span<const T> v, double f) {
    const long n = static_cast<long>(v.size());
    if (!(f >= 0.0) || f > static_cast<double>(n - 1)) return T{};
    const double r = std::round(f);
    if (std::abs(f - r) < 1e-12) return v[static_cast<std::size_t>(r)];
    const long base = stencil_base(f);
    const auto w = lagrange_weights(f, base);
    T acc{};
    for (int j = 0; j < kTaps; ++j) {
        const long idx = base + j;
        if (idx >= 0 && idx < n) acc += w[j] * v[static_cast<std::size_t>(idx)];
    }
    return acc;
}

template <class T>
T at(std::span<const T> v, const Grid1D& g, double x) {
    return at_index(v, g.position(x));
}

// Periodic variant: indices wrap modulo n.
template <class T>
T at_index_periodic(std::span<const T> v, double f) {
    const long n = static_cast<long>(v.size());
    const long base = stencil_base(f);
    const auto w = lagrange_weights(f, base);
    T acc{};
    for (int j = 0; j < kTaps; ++j) {
        long idx = (base + j) % n;
        if (idx < 0) idx += n;
        acc += w[j] * v[static_cast<std::size_t>(idx)];
    }
    return acc;
}

// Tensor-product interpolation of a phase-space field at (x, p); zero
// outside the sampled rectangle.
template <class T>
T at(const PhaseSpaceField<T>& F, double x, double p) {
    const auto& g = F.grid();
    const double fx = g.x().position(x);
    const double fp = g.p().position(p);
    const long nx = static_cast<long>(F.nx()), np = static_cast<long>(F.np());
    if (!(fx >= 0.0) || fx > nx - 1 || !(fp >= 0.0) || fp > np - 1) return T{};

    const double rx = std::round(fx), rp = std::round(fp);
    const bool on_x = std::abs(fx - rx) < 1e-12, on_p = std::abs(fp - rp) < 1e-12;

    std::array<double, kTaps> wx{}, wp{};
    long bx = static_cast<long>(rx), bp = static_cast<long>(rp);
    int tx = 1, tp = 1;
    if (on_x) wx[0] = 1.0;
    else {
        bx = stencil_base(fx);
        wx = lagrange_weights(fx, bx);
        tx = kTaps;
    }
    if (on_p) wp[0] = 1.0;
    else {
        bp = stencil_base(fp);
        wp = lagrange_weights(fp, bp);
        tp = kTaps;
    }

    T acc{};
    for (int a = 0; a < tx; ++a) {
        const long i = bx + a;
        if (i < 0 || i >= nx) continue;
        T row{};
        for (int b = 0; b < tp; ++b) {
            const long k = bp + b;
            if (k < 0 || k >= np) continue;
            row += wp[b] * F(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
        }
        acc += wx[a] * row;
    }
    return acc;
}

// Finite-difference weights (Fornberg) for the derivatives 0..max_order at
// z from nodes offs[j] (in units of the spacing).
template <std::size_t M>
std::array<std::array<double, M>, M> fd_weights(double z, const std::array<double, M>& offs,
                                                int max_order) {
    std::array<std::array<double, M>, M> c{};
    double c1 = 1.0, c4 = offs[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < M; ++i) {
        const int mn = std::min<int>(static_cast<int>(i), max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = offs[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = offs[i] - offs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

}  // namespace wigdev::interp
