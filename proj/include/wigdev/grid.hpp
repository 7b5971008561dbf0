#pragma once

// Uniform grids, sampled states and phase-space fields.
//
// Discretization contract used by every module:
//   * Grid1D samples x_i = x_min + i*dx, i = 0..n-1, dx = (x_max - x_min)/n.
//     x_max itself is not a sample; integrals use the trapezoid rule of the
//     periodic extension, which reduces to dx * sum(f).
//   * Position/momentum transforms use the kernel exp(-i x p / hbar) with
//     prefactor (2 pi hbar)^(-1/2); the momentum grid has spacing
//     2 pi hbar / (n dx) and is centred on p = 0.
//   * Wigner transforms use the kernel exp(-2 i p y / hbar) with y sampled at
//     multiples of dx, so the phase-space momentum axis has spacing
//     pi hbar / (n dx) (PhaseGrid::wigner_dual).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"

namespace wigdev {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Interval {
    double lo;
    double hi;
    [[nodiscard]] double length() const { return hi - lo; }
    [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
};

class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n_points, double hbar = 1.0)
        : x_min_(x_min), x_max_(x_max), n_(n_points), hbar_(hbar) {
        if (n_ < 8 || (n_ & (n_ - 1)) != 0)
            throw DomainError("Grid1D: n_points must be a power of two >= 8, got " +
                              std::to_string(n_));
        if (!(x_max > x_min)) throw DomainError("Grid1D: x_max must exceed x_min");
        if (!(hbar > 0)) throw DomainError("Grid1D: hbar must be positive");
        dx_ = (x_max_ - x_min_) / static_cast<double>(n_);
    }

    // Samples center + (i - n/2) * spacing, the layout of an FFT-dual axis.
    static Grid1D centered(double center, double spacing, std::size_t n, double hbar = 1.0) {
        const double half = static_cast<double>(n / 2) * spacing;
        return Grid1D(center - half, center + half, n, hbar);
    }

    [[nodiscard]] double x_min() const { return x_min_; }
    [[nodiscard]] double x_max() const { return x_max_; }
    [[nodiscard]] double dx() const { return dx_; }
    [[nodiscard]] double hbar() const { return hbar_; }
    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] double span() const { return x_max_ - x_min_; }
    [[nodiscard]] double operator[](std::size_t i) const {
        return x_min_ + static_cast<double>(i) * dx_;
    }
    [[nodiscard]] double last() const { return (*this)[n_ - 1]; }

    [[nodiscard]] std::vector<double> points() const {
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
        return out;
    }

    // Fractional index of x (no bounds check).
    [[nodiscard]] double position(double x) const { return (x - x_min_) / dx_; }

    // Nearest sample index, clamped to the grid.
    [[nodiscard]] std::size_t nearest(double x) const {
        const double f = std::round(position(x));
        if (f <= 0) return 0;
        if (f >= static_cast<double>(n_ - 1)) return n_ - 1;
        return static_cast<std::size_t>(f);
    }

    // Index of the sample that coincides with x, or throws.
    [[nodiscard]] std::size_t node_of(double x, const char* what = "point") const {
        const double f = position(x);
        const double r = std::round(f);
        if (std::abs(f - r) > 1e-7 || r < 0 || r > static_cast<double>(n_ - 1))
            throw DomainError(std::string("Grid1D: ") + what + " " + num(x) +
                              " is not a grid node");
        return static_cast<std::size_t>(r);
    }

    [[nodiscard]] bool covers(double x) const { return x >= x_min_ && x <= last(); }

    [[nodiscard]] bool same_as(const Grid1D& o) const {
        const double tol = 1e-12 * std::max(1.0, std::abs(span()));
        return n_ == o.n_ && std::abs(x_min_ - o.x_min_) <= tol &&
               std::abs(x_max_ - o.x_max_) <= tol &&
               std::abs(hbar_ - o.hbar_) <= 1e-14 * hbar_;
    }

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double hbar_;
    double dx_{};
};

class PhaseGrid {
public:
    // Momentum axis dual to the Wigner y-integration grid of `x`.
    static PhaseGrid wigner_dual(const Grid1D& x) {
        const double dp = pi * x.hbar() / (static_cast<double>(x.size()) * x.dx());
        return PhaseGrid(x, Grid1D::centered(0.0, dp, x.size(), x.hbar()));
    }

    // Square cells (dx == dp) on x in [center - X/2, center + X/2) with
    // X = sqrt(pi hbar n); convenient for rotations in phase space.
    static PhaseGrid balanced(std::size_t n, double hbar = 1.0, double center = 0.0) {
        const double spacing = std::sqrt(pi * hbar / static_cast<double>(n));
        return wigner_dual(Grid1D::centered(center, spacing, n, hbar));
    }

    [[nodiscard]] const Grid1D& x() const { return x_; }
    [[nodiscard]] const Grid1D& p() const { return p_; }
    [[nodiscard]] double hbar() const { return x_.hbar(); }
    [[nodiscard]] std::size_t nx() const { return x_.size(); }
    [[nodiscard]] std::size_t np() const { return p_.size(); }
    [[nodiscard]] double cell() const { return x_.dx() * p_.dx(); }
    [[nodiscard]] bool same_as(const PhaseGrid& o) const {
        return x_.same_as(o.x_) && p_.same_as(o.p_);
    }

private:
    PhaseGrid(Grid1D x, Grid1D p) : x_(std::move(x)), p_(std::move(p)) {}
    Grid1D x_;
    Grid1D p_;
};

inline double integrate_1d(std::span<const double> f, const Grid1D& g) {
    if (f.size() != g.size())
        throw DimensionError("integrate_1d: " + std::to_string(f.size()) + " samples on a " +
                             std::to_string(g.size()) + "-point grid");
    return g.dx() * std::accumulate(f.begin(), f.end(), 0.0);
}

inline cplx integrate_1d(std::span<const cplx> f, const Grid1D& g) {
    if (f.size() != g.size()) throw DimensionError("integrate_1d: sample count mismatch");
    return g.dx() * std::accumulate(f.begin(), f.end(), cplx{});
}

class WaveFunction {
public:
    WaveFunction(Grid1D grid, std::vector<cplx> values, double mass = 1.0)
        : grid_(std::move(grid)), values_(std::move(values)), mass_(mass) {
        if (values_.size() != grid_.size())
            throw DimensionError("WaveFunction: sample count does not match grid");
    }

    template <class F>
    static WaveFunction sample(const Grid1D& grid, F&& f, double mass = 1.0) {
        std::vector<cplx> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = cplx(f(grid[i]));
        return WaveFunction(grid, std::move(v), mass);
    }

    [[nodiscard]] const Grid1D& grid() const { return grid_; }
    [[nodiscard]] std::span<const cplx> values() const { return values_; }
    [[nodiscard]] std::vector<cplx>& mutable_values() { return values_; }
    [[nodiscard]] double mass() const { return mass_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] cplx operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] double norm() const { return std::sqrt(norm_squared()); }
    [[nodiscard]] double norm_squared() const {
        double s = 0;
        for (const auto& v : values_) s += std::norm(v);
        return s * grid_.dx();
    }
    [[nodiscard]] bool normalized() const { return std::abs(norm() - 1.0) <= 1e-10; }

    [[nodiscard]] WaveFunction normalized_copy() const {
        const double nrm = norm();
        if (!(nrm > 0)) throw DomainError("WaveFunction: cannot normalize a zero state");
        WaveFunction out = *this;
        for (auto& v : out.values_) v /= nrm;
        return out;
    }

    [[nodiscard]] WaveFunction scaled(cplx c) const {
        WaveFunction out = *this;
        for (auto& v : out.values_) v *= c;
        return out;
    }

    [[nodiscard]] cplx inner(const WaveFunction& other) const {  // <this|other>
        if (!grid_.same_as(other.grid_)) throw DimensionError("inner: grids differ");
        cplx s{};
        for (std::size_t i = 0; i < values_.size(); ++i) s += std::conj(values_[i]) * other.values_[i];
        return s * grid_.dx();
    }

    // Zero outside [iv.lo, iv.hi].
    [[nodiscard]] WaveFunction restricted(Interval iv) const {
        WaveFunction out = *this;
        for (std::size_t i = 0; i < out.size(); ++i)
            if (!iv.contains(grid_[i])) out.values_[i] = 0;
        return out;
    }

private:
    Grid1D grid_;
    std::vector<cplx> values_;
    double mass_;
};

inline WaveFunction operator+(const WaveFunction& a, const WaveFunction& b) {
    if (!a.grid().same_as(b.grid())) throw DimensionError("operator+: grids differ");
    std::vector<cplx> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return WaveFunction(a.grid(), std::move(v), a.mass());
}

template <class T>
class PhaseSpaceField {
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, cplx>);

public:
    explicit PhaseSpaceField(PhaseGrid grid)
        : grid_(std::move(grid)), values_(grid_.nx() * grid_.np(), T{}) {}
    PhaseSpaceField(PhaseGrid grid, std::vector<T> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.nx() * grid_.np())
            throw DimensionError("PhaseSpaceField: sample count does not match grid");
    }

    template <class F>
    static PhaseSpaceField sample(const PhaseGrid& g, F&& f) {
        PhaseSpaceField out(g);
        for (std::size_t i = 0; i < g.nx(); ++i)
            for (std::size_t k = 0; k < g.np(); ++k) out(i, k) = T(f(g.x()[i], g.p()[k]));
        return out;
    }

    [[nodiscard]] const PhaseGrid& grid() const { return grid_; }
    [[nodiscard]] std::size_t nx() const { return grid_.nx(); }
    [[nodiscard]] std::size_t np() const { return grid_.np(); }
    [[nodiscard]] T& operator()(std::size_t i, std::size_t k) { return values_[i * np() + k]; }
    [[nodiscard]] const T& operator()(std::size_t i, std::size_t k) const {
        return values_[i * np() + k];
    }
    [[nodiscard]] std::span<const T> values() const { return values_; }
    [[nodiscard]] std::span<T> values() { return values_; }
    // Momentum profile at the i-th x sample.
    [[nodiscard]] std::span<const T> row(std::size_t i) const {
        return std::span<const T>(values_).subspan(i * np(), np());
    }
    [[nodiscard]] std::span<T> row(std::size_t i) {
        return std::span<T>(values_).subspan(i * np(), np());
    }

    [[nodiscard]] T integral() const {
        return grid_.cell() * std::accumulate(values_.begin(), values_.end(), T{});
    }
    [[nodiscard]] double l2_norm() const {
        double s = 0;
        for (const auto& v : values_) s += std::norm(v);
        return std::sqrt(s * grid_.cell());
    }
    [[nodiscard]] double sup_norm() const {
        double m = 0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }
    [[nodiscard]] bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](const T& v) {
            if constexpr (std::is_same_v<T, double>) return std::isfinite(v);
            else return std::isfinite(v.real()) && std::isfinite(v.imag());
        });
    }

    PhaseSpaceField& operator+=(const PhaseSpaceField& o) {
        check_same(o);
        for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
        return *this;
    }
    PhaseSpaceField& operator-=(const PhaseSpaceField& o) {
        check_same(o);
        for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
        return *this;
    }
    PhaseSpaceField& operator*=(T c) {
        for (auto& v : values_) v *= c;
        return *this;
    }
    friend PhaseSpaceField operator+(PhaseSpaceField a, const PhaseSpaceField& b) { return a += b; }
    friend PhaseSpaceField operator-(PhaseSpaceField a, const PhaseSpaceField& b) { return a -= b; }
    friend PhaseSpaceField operator*(T c, PhaseSpaceField a) { return a *= c; }

    void check_same(const PhaseSpaceField& o) const {
        if (!grid_.same_as(o.grid_)) throw DimensionError("PhaseSpaceField: grids differ");
    }

private:
    PhaseGrid grid_;
    std::vector<T> values_;
};

using RealField = PhaseSpaceField<double>;
using ComplexField = PhaseSpaceField<cplx>;

inline RealField real_part(const ComplexField& f) {
    RealField out(f.grid());
    for (std::size_t j = 0; j < f.values().size(); ++j) out.values()[j] = f.values()[j].real();
    return out;
}
inline RealField imag_part(const ComplexField& f) {
    RealField out(f.grid());
    for (std::size_t j = 0; j < f.values().size(); ++j) out.values()[j] = f.values()[j].imag();
    return out;
}
inline ComplexField to_complex(const RealField& f) {
    ComplexField out(f.grid());
    for (std::size_t j = 0; j < f.values().size(); ++j) out.values()[j] = f.values()[j];
    return out;
}

template <class T>
double sup_distance(const PhaseSpaceField<T>& a, const PhaseSpaceField<T>& b) {
    a.check_same(b);
    double m = 0;
    for (std::size_t j = 0; j < a.values().size(); ++j)
        m = std::max(m, std::abs(a.values()[j] - b.values()[j]));
    return m;
}

template <class T>
double l2_distance(const PhaseSpaceField<T>& a, const PhaseSpaceField<T>& b) {
    a.check_same(b);
    double s = 0;
    for (std::size_t j = 0; j < a.values().size(); ++j)
        s += std::norm(a.values()[j] - b.values()[j]);
    return std::sqrt(s * a.grid().cell());
}

struct MixedComponent {
    double weight;
    WaveFunction state;
};

class MixedState {
public:
    explicit MixedState(std::vector<MixedComponent> components)
        : components_(std::move(components)) {
        if (components_.empty()) throw DomainError("MixedState: empty component list");
        double total = 0;
        for (const auto& c : components_) {
            if (c.weight < 0) throw DomainError("MixedState: negative weight");
            if (!c.state.grid().same_as(components_.front().state.grid()))
                throw DimensionError("MixedState: components live on different grids");
            total += c.weight;
        }
        if (std::abs(total - 1.0) > 1e-12) throw DomainError("MixedState: weights must sum to 1");
    }
    [[nodiscard]] const std::vector<MixedComponent>& components() const { return components_; }

private:
    std::vector<MixedComponent> components_;
};

// psi~(p) = (2 pi hbar)^(-1/2) int psi(x) exp(-i x p / hbar) dx.
// `pad` zero-pads the position samples, refining the momentum spacing to
// 2 pi hbar / (pad n dx); pad = 2 lands on the Wigner momentum axis.
inline WaveFunction fourier_transform(const WaveFunction& psi, std::size_t pad = 1) {
    const Grid1D& g = psi.grid();
    if (pad == 0 || (pad & (pad - 1)) != 0) throw DomainError("fourier_transform: pad must be a power of two");
    const std::size_t n = g.size() * pad;
    const double hbar = g.hbar();
    const double dp = 2 * pi * hbar / (static_cast<double>(n) * g.dx());
    Grid1D pg = Grid1D::centered(0.0, dp, n, hbar);

    // p_k = (k - n/2) dp; exp(-i x_j p_k/hbar) = exp(-i x_min p_k/hbar) (-1)^j exp(-2 pi i jk/n)
    std::vector<cplx> buf(n, cplx{});
    for (std::size_t j = 0; j < g.size(); ++j) buf[j] = (j % 2 ? -1.0 : 1.0) * psi[j];
    fft::transform(buf, fft::Direction::forward);
    const double pref = g.dx() / std::sqrt(2 * pi * hbar);
    for (std::size_t k = 0; k < n; ++k) {
        const double p = pg[k];
        buf[k] *= pref * std::exp(cplx(0, -g.x_min() * p / hbar));
    }
    return WaveFunction(pg, std::move(buf), psi.mass());
}

// Spectral derivative of order `order` along x of every momentum column,
// treating the x axis as periodic.
template <class T>
ComplexField derivative_x(const PhaseSpaceField<T>& f, int order) {
    const std::size_t nx = f.nx(), np = f.np();
    std::vector<cplx> buf(f.values().begin(), f.values().end());
    fft::transform_columns(buf, nx, np, fft::Direction::forward);
    const double dk = 2 * pi / (static_cast<double>(nx) * f.grid().x().dx());
    for (std::size_t i = 0; i < nx; ++i) {
        const long s = fft::signed_index(i, nx);
        cplx factor = std::pow(cplx(0, dk * static_cast<double>(s)), order);
        // The Nyquist bin of an odd derivative has no symmetric partner.
        if (order % 2 == 1 && 2 * i == nx) factor = 0;
        factor /= static_cast<double>(nx);
        for (std::size_t k = 0; k < np; ++k) buf[i * np + k] *= factor;
    }
    fft::transform_columns(buf, nx, np, fft::Direction::backward);
    return ComplexField(f.grid(), std::move(buf));
}

// Spectral derivative of a sampled function on a periodic grid.
inline std::vector<cplx> derivative(std::span<const cplx> f, const Grid1D& g, int order) {
    const std::size_t n = f.size();
    std::vector<cplx> buf(f.begin(), f.end());
    fft::transform(buf, fft::Direction::forward);
    const double dk = 2 * pi / (static_cast<double>(n) * g.dx());
    for (std::size_t i = 0; i < n; ++i) {
        cplx factor = std::pow(cplx(0, dk * static_cast<double>(fft::signed_index(i, n))), order);
        if (order % 2 == 1 && 2 * i == n) factor = 0;
        buf[i] *= factor / static_cast<double>(n);
    }
    fft::transform(buf, fft::Direction::backward);
    return buf;
}

}  // namespace wigdev
