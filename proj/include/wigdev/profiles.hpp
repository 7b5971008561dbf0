#pragma once

// One-point Wigner profiles: admissibility, realization by an explicit
// state, and a refuter for two-point compatibility.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "fft.hpp"
#include "grid.hpp"
#include "interp.hpp"
#include "wigner.hpp"

namespace wigdev {

struct Profile {
    Grid1D p_grid;
    std::vector<double> values;
    double anchor_x{};

    void validate() const {
        if (values.size() != p_grid.size()) throw DimensionError("Profile: sample count does not match grid");
        for (double v : values)
            if (!std::isfinite(v)) throw DomainError("Profile: non-finite sample");
        const double half = static_cast<double>(p_grid.size() / 2) * p_grid.dx();
        if (std::abs(p_grid.x_min() + half) > 1e-9 * p_grid.dx())
            throw DomainError("Profile: momentum grid must be symmetric about p = 0");
    }
    [[nodiscard]] double hbar() const { return p_grid.hbar(); }
};

// Profile F(x_i, .) of a field at node i.
inline Profile extract_profile(const RealField& F, std::size_t i) {
    if (i >= F.nx()) throw DomainError("extract_profile: row out of range");
    return {F.grid().p(), slice_at(F, i), F.grid().x()[i]};
}

inline Profile extract_profile(const RealField& F, double x) {
    return extract_profile(F, F.grid().x().node_of(x, "anchor"));
}

// h(y) = int g(p) e^{2iyp/hbar} dp = sqrt(2 pi hbar) g~(-2y) sampled at
// y_i = (i - n/2) dy with dy = pi hbar / (n dp). For a pure state,
// h(y) = psi(a + y) psi*(a - y).
struct ProfileTransform {
    Grid1D y_grid;
    std::vector<cplx> h;
};

inline ProfileTransform profile_transform(const Profile& g) {
    g.validate();
    const std::size_t n = g.p_grid.size();
    const double dp = g.p_grid.dx(), hbar = g.hbar();
    std::vector<cplx> buf(g.values.begin(), g.values.end());
    fft::transform(buf, fft::Direction::backward);
    ProfileTransform t{Grid1D::centered(0.0, pi * hbar / (static_cast<double>(n) * dp), n, hbar),
                       std::vector<cplx>(n)};
    // e^{2 pi i j (l - n/2) / n} = (-1)^j e^{2 pi i j l / n}
    for (std::size_t i = 0; i < n; ++i) {
        const long j = static_cast<long>(i) - static_cast<long>(n / 2);
        const std::size_t bin = static_cast<std::size_t>((j + static_cast<long>(n)) % static_cast<long>(n));
        t.h[i] = (j % 2 == 0 ? 1.0 : -1.0) * dp * buf[bin];
    }
    return t;
}

// g~(x) = (2 pi hbar)^(-1/2) int g(p) e^{-ixp/hbar} dp.
inline WaveFunction profile_fourier(const Profile& g) {
    g.validate();
    return fourier_transform(WaveFunction(g.p_grid, std::vector<cplx>(g.values.begin(), g.values.end())));
}

struct ProfileReport {
    double l2_norm{};
    double fourier_l1{};
    double bound{};       // (2 / pi hbar)^(1/2)
    double saturation{};  // fourier_l1 / bound
    bool admissible{};
    bool degenerate{};    // g == 0, or a negative density at the anchor
    std::string note;
};

inline ProfileReport validate_profile(const Profile& g) {
    g.validate();
    const double hbar = g.hbar();
    ProfileReport r;
    double s2 = 0.0;
    for (double v : g.values) s2 += v * v;
    r.l2_norm = std::sqrt(s2 * g.p_grid.dx());
    const auto t = profile_transform(g);
    double s1 = 0.0;
    for (const auto& v : t.h) s1 += std::abs(v);
    // int |g~| dx = (2 / sqrt(2 pi hbar)) int |h| dy
    r.fourier_l1 = 2 * s1 * t.y_grid.dx() / std::sqrt(2 * pi * hbar);
    r.bound = std::sqrt(2 / (pi * hbar));
    r.saturation = r.fourier_l1 / r.bound;
    r.admissible = std::isfinite(r.l2_norm) && r.fourier_l1 <= r.bound * (1 + 1e-8);
    if (r.l2_norm == 0.0) {
        r.degenerate = true;
        r.note = "identically zero profile";
    } else if (t.h[g.p_grid.size() / 2].real() < 0.0) {
        r.degenerate = true;
        r.note = "negative density at the anchor";
    }
    return r;
}

struct RealizeOptions {
    double sigma = 1.0;                       // width of the odd seed beta * tanh(x / sigma)
    std::function<double(double)> even_seed;  // E(x - a), must be even; empty means 0
    double tolerance = 1e-8;                  // normalization tolerance
};

struct Realization {
    WaveFunction psi;
    std::vector<cplx> h;
    std::vector<double> A;  // |h| made exactly even
    std::vector<double> B;  // hbar * unwrapped phase of h made exactly odd
    double beta{};
    double normalization{};   // int A e^{2O} dx
    double profile_error{};   // sup_p |W psi(anchor, p) - g(p)|
    double reality_defect{};  // sup |h*(-y) - h(y)|
    double parity_defect{};   // sup of |A(y) - A(-y)| and |B(y) + B(-y)| after symmetrization
};

namespace detail {

// W psi(x_i, .) for a single row, on the dual momentum axis.
inline std::vector<double> wigner_row(const WaveFunction& psi, std::size_t i) {
    const long n = static_cast<long>(psi.size());
    const long ii = static_cast<long>(i);
    std::vector<cplx> row(static_cast<std::size_t>(n), cplx{});
    for (long j = -n / 2; j < n / 2; ++j) {
        const long l = ii + j, r = ii - j;
        if (l < 0 || l >= n || r < 0 || r >= n) continue;
        row[static_cast<std::size_t>((j + n) % n)] = psi[static_cast<std::size_t>(l)] *
                                                     std::conj(psi[static_cast<std::size_t>(r)]);
    }
    fft::transform(row, fft::Direction::forward);
    const double scale = psi.grid().dx() / (pi * psi.grid().hbar());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = scale * row[static_cast<std::size_t>((k + n / 2) % n)].real();
    return out;
}

// Unwrapped phase outward from index c.
inline std::vector<double> unwrapped_phase(const std::vector<cplx>& h, std::size_t c) {
    const std::size_t n = h.size();
    std::vector<double> ph(n);
    for (std::size_t i = 0; i < n; ++i) ph[i] = std::arg(h[i]);
    auto step = [&](std::size_t from, std::size_t to) {
        double d = ph[to] - ph[from];
        d -= 2 * pi * std::round(d / (2 * pi));
        ph[to] = ph[from] + d;
    };
    for (std::size_t i = c + 1; i < n; ++i) step(i - 1, i);
    for (std::size_t i = c; i-- > 0;) step(i + 1, i);
    return ph;
}

}  // namespace detail

// State whose Wigner function has profile g at g.anchor_x:
// psi(x) = sqrt(A) exp[O(x - a) + (i / 2 hbar)(B(x - a) + E(x - a))].
inline Realization realize_profile(const Profile& g, const RealizeOptions& opt = {}) {
    const auto rep = validate_profile(g);
    if (rep.l2_norm == 0.0) throw DegenerateProfileError("realize_profile: profile is identically zero");
    if (!(opt.sigma > 0)) throw DomainError("realize_profile: sigma must be positive");
    const std::size_t n = g.p_grid.size(), c = n / 2;
    const double hbar = g.hbar(), a = g.anchor_x;
    auto t = profile_transform(g);
    const double dy = t.y_grid.dx();

    Realization out{WaveFunction(Grid1D::centered(a, dy, n, hbar), std::vector<cplx>(n)), t.h, {}, {}};
    for (std::size_t i = 1; i < n; ++i)
        out.reality_defect = std::max(out.reality_defect, std::abs(std::conj(t.h[n - i]) - t.h[i]));

    if (t.h[c].real() < 0.0)
        throw DegenerateProfileError("realize_profile: negative density at the anchor");
    const auto phase = detail::unwrapped_phase(t.h, c);
    out.A.resize(n);
    out.B.resize(n);
    out.A[0] = std::abs(t.h[0]);
    out.B[0] = hbar * phase[0];
    out.A[c] = std::abs(t.h[c]);
    out.B[c] = 0.0;
    for (std::size_t i = 1; i < c; ++i) {
        const double amp = 0.5 * (std::abs(t.h[c + i]) + std::abs(t.h[c - i]));
        const double ph = 0.5 * hbar * (phase[c + i] - phase[c - i]);
        out.A[c + i] = out.A[c - i] = amp;
        out.B[c + i] = ph;
        out.B[c - i] = -ph;
    }
    for (std::size_t i = 1; i < c; ++i)
        out.parity_defect = std::max({out.parity_defect, std::abs(out.A[c + i] - out.A[c - i]),
                                      std::abs(out.B[c + i] + out.B[c - i])});

    double mass_A = 0.0;
    for (double v : out.A) mass_A += v * dy;
    if (!(mass_A > 0)) throw DegenerateProfileError("realize_profile: int A = 0, normalization unreachable");

    std::vector<double> odd(n);
    for (std::size_t i = 0; i < n; ++i) odd[i] = std::tanh(t.y_grid[i] / opt.sigma);
    auto norm_at = [&](double beta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += out.A[i] * std::exp(2 * beta * odd[i]);
        return s * dy;
    };
    double beta = 0.0;
    if (std::abs(mass_A - 1.0) > opt.tolerance) {
        auto f = [&](double b) { return norm_at(b) - 1.0; };
        if (f(0.0) > 0.0)
            throw ConstructionFailedError("realize_profile: int A = " + num(mass_A) +
                                          " exceeds 1, no odd seed can normalize (profile inadmissible?)");
        double hi = 1.0;
        int expansions = 0;
        while (!(f(hi) > 0.0)) {
            hi *= 2;
            if (++expansions > 60 || !std::isfinite(f(hi)))
                throw ConstructionFailedError("realize_profile: normalization root not bracketed");
        }
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            f, 0.0, hi, f(0.0), f(hi), boost::math::tools::eps_tolerance<double>(52), iters);
        beta = 0.5 * (r.first + r.second);
    }
    out.beta = beta;
    out.normalization = norm_at(beta);

    auto& v = out.psi.mutable_values();
    for (std::size_t i = 0; i < n; ++i) {
        const double y = t.y_grid[i];
        const double E = opt.even_seed ? opt.even_seed(y) : 0.0;
        v[i] = std::sqrt(out.A[i]) * std::exp(cplx(beta * odd[i], (out.B[i] + E) / (2 * hbar)));
    }
    const auto w = detail::wigner_row(out.psi, c);
    for (std::size_t k = 0; k < n; ++k) out.profile_error = std::max(out.profile_error, std::abs(w[k] - g.values[k]));
    return out;
}

struct GaussianBound {
    double fourier_l1{};
    double bound{};
    bool admissible{};
};

// Profile g(p) = N exp(-p^2 / M): ||g~||_1 = N sqrt(2 pi hbar) for every M.
inline GaussianBound gaussian_profile_bound(double N, double M, double hbar = 1.0) {
    if (!(M > 0)) throw DomainError("gaussian_profile_bound: M must be positive");
    GaussianBound r;
    r.fourier_l1 = std::abs(N) * std::sqrt(2 * pi * hbar);
    r.bound = std::sqrt(2 / (pi * hbar));
    r.admissible = std::abs(N) <= (1 + 1e-12) / (pi * hbar);
    return r;
}

struct CompatibilityVerdict {
    bool refuted{};
    std::string violated;              // "zero-set", "same-point" or empty
    std::string evidence;
    std::vector<double> zeros_a;       // zeros of h_a in y = x - a
    std::vector<double> zeros_b;       // zeros of h_b in y = x - b
    std::vector<double> chain;         // u(b + 2k(b - a)) from the reflection recursion
};

namespace detail {

// Sign-flip zeros of h: consecutive resolved nodes whose phases differ by
// more than 0.9 pi, located by linear interpolation of the amplitude.
inline std::vector<double> profile_zeros(const ProfileTransform& t) {
    double mx = 0.0;
    for (const auto& v : t.h) mx = std::max(mx, std::abs(v));
    const double floor = 1e-8 * mx;
    std::vector<double> z;
    std::size_t prev = t.h.size();
    for (std::size_t i = 0; i < t.h.size(); ++i) {
        if (std::abs(t.h[i]) < floor) continue;
        if (prev < t.h.size() && i - prev <= 2) {
            double d = std::abs(std::arg(t.h[i] / t.h[prev]));
            if (d > 0.9 * pi) {
                // bisection on the interpolated component along h[prev]
                const cplx dir = std::conj(t.h[prev]) / std::abs(t.h[prev]);
                auto s = [&](double y) {
                    return (interp::at(std::span<const cplx>(t.h), t.y_grid, y) * dir).real();
                };
                double lo = t.y_grid[prev], hi = t.y_grid[i];
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (s(mid) > 0 ? lo : hi) = mid;
                }
                z.push_back(0.5 * (lo + hi));
            }
        }
        prev = i;
    }
    return z;
}

inline bool vanishes_on_interval(const ProfileTransform& t) {
    double mx = 0.0;
    for (const auto& v : t.h) mx = std::max(mx, std::abs(v));
    const double tiny = 1e-14 * mx;
    std::size_t first = t.h.size(), last = 0;
    for (std::size_t i = 0; i < t.h.size(); ++i)
        if (std::abs(t.h[i]) > tiny) {
            first = std::min(first, i);
            last = i;
        }
    std::size_t run = 0;
    for (std::size_t i = first; i <= last && first < t.h.size(); ++i) {
        run = std::abs(t.h[i]) <= tiny ? run + 1 : 0;
        if (run >= 4) return true;
    }
    return false;
}

inline double relative_amplitude(const ProfileTransform& t, double y, bool& inside) {
    double mx = 0.0;
    for (const auto& v : t.h) mx = std::max(mx, std::abs(v));
    inside = y >= t.y_grid.x_min() && y <= t.y_grid.last();
    if (!inside || mx == 0.0) return 0.0;
    return std::abs(interp::at(std::span<const cplx>(t.h), t.y_grid, y)) / mx;
}

inline bool near_any(const std::vector<double>& zs, double y, double tol) {
    return std::any_of(zs.begin(), zs.end(), [&](double z) { return std::abs(z - y) <= tol; });
}

}  // namespace detail

// Necessary conditions for g_a, g_b to be profiles of one Wigner function.
// A zero z of h_a (absolute position a + y) must reappear for h_b at z or
// at its mirror 2a - z, and symmetrically for zeros of h_b.
inline CompatibilityVerdict check_two_point_compatibility(const Profile& ga, const Profile& gb) {
    const auto ra = validate_profile(ga), rb = validate_profile(gb);
    if (ra.l2_norm == 0.0 || rb.l2_norm == 0.0)
        throw DegenerateProfileError("check_two_point_compatibility: identically zero profile");
    const auto ta = profile_transform(ga), tb = profile_transform(gb);
    if (detail::vanishes_on_interval(ta) || detail::vanishes_on_interval(tb))
        throw DegenerateProfileError("check_two_point_compatibility: transform vanishes on an interval");

    CompatibilityVerdict v;
    const double a = ga.anchor_x, b = gb.anchor_x;
    const double sh = std::sqrt(ga.hbar());
    v.zeros_a = detail::profile_zeros(ta);
    v.zeros_b = detail::profile_zeros(tb);
    std::ostringstream ev;
    ev.precision(4);

    if (!ra.admissible || !rb.admissible) ev << "inadmissible input; ";

    if (std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a))) {
        double diff = 0.0, mx = 0.0;
        if (ga.p_grid.same_as(gb.p_grid)) {
            for (std::size_t k = 0; k < ga.values.size(); ++k) {
                diff = std::max(diff, std::abs(ga.values[k] - gb.values[k]));
                mx = std::max(mx, std::abs(ga.values[k]));
            }
        } else {
            diff = std::numeric_limits<double>::infinity();
        }
        if (diff > 1e-8 * std::max(1.0, mx)) {
            v.refuted = true;
            v.violated = "same-point";
            ev << "different profiles declared at the same point (max difference " << diff << ")";
        } else {
            ev << "identical profiles at the same point";
        }
        v.evidence = ev.str();
        return v;
    }

    const double tol = 2 * std::max(ta.y_grid.dx(), tb.y_grid.dx());
    auto check = [&](const std::vector<double>& zs, double self, double other, const ProfileTransform& to,
                     const std::vector<double>& other_zeros, std::vector<double>& bad) {
        for (double y : zs) {
            const double z = self + y;
            const double y1 = z - other, y2 = 2 * self - z - other;
            if (detail::near_any(other_zeros, y1, tol) || detail::near_any(other_zeros, y2, tol)) continue;
            bool in1 = false, in2 = false;
            const double m1 = detail::relative_amplitude(to, y1, in1);
            const double m2 = detail::relative_amplitude(to, y2, in2);
            if (in1 && in2 && m1 > 1e-3 && m2 > 1e-3) bad.push_back(y);
        }
    };
    std::vector<double> bad_a, bad_b;
    check(v.zeros_a, a, b, tb, v.zeros_b, bad_a);
    check(v.zeros_b, b, a, ta, v.zeros_a, bad_b);

    auto list = [&](const std::vector<double>& ys) {
        std::ostringstream s;
        s.precision(4);
        std::vector<double> done;
        for (double y : ys) {
            if (std::any_of(done.begin(), done.end(), [&](double d) { return std::abs(d + y) < 1e-6 * sh; })) continue;
            const bool paired = std::any_of(ys.begin(), ys.end(), [&](double o) { return std::abs(o + y) < 1e-6 * sh && y != 0; });
            s << (done.empty() ? "" : ", ") << (paired ? "±" : "") << (paired ? std::abs(y) : y) / sh << " sqrt(hbar)";
            done.push_back(y);
        }
        return s.str();
    };
    if (!bad_a.empty() || !bad_b.empty()) {
        v.refuted = true;
        v.violated = "zero-set";
        if (!bad_a.empty()) ev << "profile at " << a << " has unmatched zeros at " << list(bad_a) << "; ";
        if (!bad_b.empty()) ev << "profile at " << b << " has unmatched zeros at " << list(bad_b) << "; ";
    } else {
        ev << "zero sets consistent (" << v.zeros_a.size() << " and " << v.zeros_b.size() << " zeros); ";
    }

    // Reflection recursion for the odd seeds: with D(x) = log|h_a(x-a)| - log|h_b(x-b)|
    // and u(x) = 2 O_b(x - b), u(x + 2 delta) = u(x) - D(x) - D(2a - x), u(b) = 0.
    auto logmod = [&](const ProfileTransform& t, double y, bool& ok) {
        bool inside = false;
        const double m = detail::relative_amplitude(t, y, inside);
        ok = ok && inside && m > 1e-12;
        return inside ? std::log(std::abs(interp::at(std::span<const cplx>(t.h), t.y_grid, y))) : 0.0;
    };
    const double delta = b - a;
    double x = b, u = 0.0;
    for (int k = 0; k < 8; ++k) {
        bool ok = true;
        const double D1 = logmod(ta, x - a, ok) - logmod(tb, x - b, ok);
        const double D2 = logmod(ta, a - x, ok) - logmod(tb, 2 * a - x - b, ok);
        if (!ok) break;
        u = u - D1 - D2;
        x += 2 * delta;
        v.chain.push_back(u);
    }
    ev << "reflection chain resolved " << v.chain.size() << " of 8 steps";
    v.evidence = ev.str();
    return v;
}

}  // namespace wigdev
