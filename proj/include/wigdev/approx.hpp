#pragma once

// Closest Wigner functions in a truncated Hermite basis: coefficient
// matrices, spectral decomposition, closest pure state, positive part and
// eigenvalue ladders.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grid.hpp"
#include "states.hpp"
#include "wigner.hpp"

namespace wigdev {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Hermite functions psi_n(x - center), n < N, as the columns of an n_grid x N matrix.
class HermiteBasis {
public:
    HermiteBasis(const Grid1D& grid, int N, double center = 0.0) : grid_(grid), center_(center) {
        if (N < 1) throw DomainError("HermiteBasis: N must be >= 1");
        const Grid1D shifted(grid.x_min() - center, grid.x_max() - center, grid.size(), grid.hbar());
        P_.resize(static_cast<Eigen::Index>(grid.size()), N);
        for (int n = 0; n < N; ++n) {
            const auto s = hermite_state(n, shifted);
            for (std::size_t i = 0; i < grid.size(); ++i) P_(static_cast<Eigen::Index>(i), n) = s[i];
        }
    }
    [[nodiscard]] int size() const { return static_cast<int>(P_.cols()); }
    [[nodiscard]] const Matrix& columns() const { return P_; }
    [[nodiscard]] const Grid1D& grid() const { return grid_; }
    [[nodiscard]] double center() const { return center_; }

    [[nodiscard]] WaveFunction state(const Vector& c) const {
        const Vector v = P_.leftCols(c.size()) * c;
        std::vector<cplx> vals(static_cast<std::size_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) vals[static_cast<std::size_t>(i)] = v(i);
        return WaveFunction(grid_, std::move(vals));
    }

private:
    Grid1D grid_;
    double center_;
    Matrix P_;
};

struct CoefficientMatrix {
    int N{};
    Matrix entries;       // f_nm = <psi_n| rho |psi_m>
    double epsilon{};     // Parseval tail estimate of ||F - F^(N)||
    double field_norm{};  // ||F||_{L2}
    double hermiticity_defect{};
    double hbar{1.0};

    [[nodiscard]] CoefficientMatrix leading(int M) const {
        if (M < 1 || M > N) throw DomainError("CoefficientMatrix: leading order out of range");
        CoefficientMatrix c = *this;
        c.N = M;
        c.entries = entries.topLeftCorner(M, M);
        c.epsilon = tail_for(c.entries);
        return c;
    }
    [[nodiscard]] double tail_for(const Matrix& f) const {
        return std::sqrt(std::max(0.0, field_norm * field_norm - f.squaredNorm() / (2 * pi * hbar)));
    }
};

namespace detail {

// rho(x_u, x_v) = K_{(u+v)/2}((u - v)/2) on the same-parity lattice, zero elsewhere.
inline Matrix density_from_field(const RealField& F) {
    const std::size_t n = F.nx();
    if (F.np() != n || !F.grid().same_as(PhaseGrid::wigner_dual(F.grid().x())))
        throw DimensionError("density_from_field: field must live on a Wigner-dual phase grid");
    std::vector<cplx> K(F.values().begin(), F.values().end());
    rows_to_correlation(K, n, F.grid().x().dx(), F.grid().hbar());
    const long ln = static_cast<long>(n);
    Matrix R = Matrix::Zero(ln, ln);
    for (long u = 0; u < ln; ++u)
        for (long v = u % 2; v < ln; v += 2) {
            const long i = (u + v) / 2, j = (u - v) / 2;
            R(u, v) = K[static_cast<std::size_t>(i * ln + (j + ln) % ln)];
        }
    return R;
}

}  // namespace detail

// Wigner function of the operator sum_nm M_nm |psi_n><psi_m|.
inline RealField wigner_of_operator(const HermiteBasis& basis, const Matrix& M, const PhaseGrid& pg) {
    const auto& g = basis.grid();
    if (!pg.same_as(PhaseGrid::wigner_dual(g))) throw DimensionError("wigner_of_operator: grid mismatch");
    const long n = static_cast<long>(g.size());
    const Matrix P = basis.columns().leftCols(M.rows());
    const Matrix rho = P * M * P.adjoint();
    std::vector<cplx> block(static_cast<std::size_t>(n * n), cplx{});
    for (long i = 0; i < n; ++i)
        for (long j = -n / 2; j < n / 2; ++j) {
            const long u = i + j, v = i - j;
            if (u < 0 || u >= n || v < 0 || v >= n) continue;
            block[static_cast<std::size_t>(i * n + (j + n) % n)] = rho(u, v);
        }
    detail::rows_to_momentum(block, static_cast<std::size_t>(n), g.dx(), g.hbar());
    RealField out(pg);
    for (std::size_t q = 0; q < block.size(); ++q) out.values()[q] = block[q].real();
    return out;
}

// f_nm = 2 pi hbar int int F W(psi_m, psi_n) dx dp, by quadrature of the
// density on the same-parity lattice.
inline CoefficientMatrix coefficients(const RealField& F, const HermiteBasis& basis) {
    if (!F.grid().x().same_as(basis.grid())) throw DimensionError("coefficients: basis grid differs");
    const double dx = basis.grid().dx();
    const Matrix R = detail::density_from_field(F);
    const Matrix& P = basis.columns();
    CoefficientMatrix c;
    c.N = basis.size();
    c.hbar = F.grid().hbar();
    c.entries = 2 * dx * dx * (P.adjoint() * R * P);
    c.hermiticity_defect = (c.entries - c.entries.adjoint()).cwiseAbs().maxCoeff();
    c.field_norm = F.l2_norm();
    c.epsilon = c.tail_for(c.entries);
    return c;
}

inline CoefficientMatrix coefficients(const RealField& F, int N, double center = 0.0) {
    return coefficients(F, HermiteBasis(F.grid().x(), N, center));
}

// Smallest N <= coeffs.N with tail(N) < eps.
inline int choose_truncation(const CoefficientMatrix& coeffs, double eps) {
    if (!(eps > 0)) throw DomainError("choose_truncation: eps must be positive");
    double tail = std::numeric_limits<double>::infinity();
    for (int N = 1; N <= coeffs.N; ++N) {
        tail = coeffs.tail_for(coeffs.entries.topLeftCorner(N, N));
        if (tail < eps) return N;
    }
    throw InsufficientBasisError("choose_truncation: tail " + num(tail) + " still exceeds eps " +
                                     num(eps) + " at N = " + std::to_string(coeffs.N),
                                 tail);
}

struct SpectralDecomposition {
    std::vector<double> positive;  // descending, above roundoff
    std::vector<double> negative;  // ascending (most negative first), below -roundoff
    std::vector<double> values;    // all eigenvalues, descending
    Matrix vectors;                // column j belongs to values[j]
    double orthonormality_defect{};
    double reconstruction_defect{};
};

inline SpectralDecomposition spectral_decomposition(const CoefficientMatrix& c) {
    const Matrix H = 0.5 * (c.entries + c.entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) throw Error("spectral_decomposition: eigensolver failed");
    const Eigen::Index N = H.rows();
    SpectralDecomposition s;
    s.vectors.resize(N, N);
    // eigenvalues within roundoff of zero count as neither sign
    const double cut = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < N; ++j) {
        const double lam = es.eigenvalues()(N - 1 - j);
        s.values.push_back(lam);
        s.vectors.col(j) = es.eigenvectors().col(N - 1 - j);
        if (lam > cut) s.positive.push_back(lam);
    }
    for (Eigen::Index j = 0; j < N; ++j)
        if (es.eigenvalues()(j) < -cut) s.negative.push_back(es.eigenvalues()(j));
    const Matrix I = Matrix::Identity(N, N);
    s.orthonormality_defect = (s.vectors.adjoint() * s.vectors - I).cwiseAbs().maxCoeff();
    Matrix rec = Matrix::Zero(N, N);
    for (Eigen::Index j = 0; j < N; ++j)
        rec += s.values[static_cast<std::size_t>(j)] * s.vectors.col(j) * s.vectors.col(j).adjoint();
    s.reconstruction_defect = (rec - H).norm();
    return s;
}

struct Certificate {
    int N{};
    double eps{};
    double tail{};
    double lambda_1{};
    double eigen_gap{};  // lambda_1 - lambda_2 (lambda_1 when N = 1)
    double bound_13{};   // 2 (2 pi hbar)^(1/2) tail
    double bound_15{};   // 4 eps
    bool degenerate{};   // eigen_gap <= 1e-8 |lambda_1|
};

struct ClosestPure {
    WaveFunction psi;
    RealField wigner;
    Vector coefficients;
    Certificate certificate;
};

// Pure state of the leading eigenvector of the truncated coefficient matrix.
inline ClosestPure closest_pure(const RealField& F, const HermiteBasis& basis, double eps) {
    const auto full = coefficients(F, basis);
    const int N = choose_truncation(full, eps);
    const auto c = full.leading(N);
    const auto s = spectral_decomposition(c);
    Certificate cert;
    cert.N = N;
    cert.eps = eps;
    cert.tail = c.epsilon;
    cert.lambda_1 = s.values.front();
    cert.eigen_gap = N > 1 ? s.values[0] - s.values[1] : s.values[0];
    cert.bound_13 = 2 * std::sqrt(2 * pi * F.grid().hbar()) * c.epsilon;
    cert.bound_15 = 4 * eps;
    cert.degenerate = N > 1 && cert.eigen_gap <= 1e-8 * std::max(1.0, std::abs(cert.lambda_1));
    const Vector v = s.vectors.col(0);
    Matrix M = v * v.adjoint();
    return {basis.state(v), wigner_of_operator(basis, M, F.grid()), v, cert};
}

inline ClosestPure closest_pure(const RealField& F, double eps, int N_max = 32, double center = 0.0) {
    return closest_pure(F, HermiteBasis(F.grid().x(), N_max, center), eps);
}

struct PositivePart {
    RealField field;
    std::vector<double> weights;  // positive eigenvalues, not renormalized
    int N{};
};

inline PositivePart positive_part(const RealField& F, const HermiteBasis& basis, double eps) {
    const auto full = coefficients(F, basis);
    const int N = choose_truncation(full, eps);
    const auto s = spectral_decomposition(full.leading(N));
    Matrix M = Matrix::Zero(N, N);
    for (std::size_t j = 0; j < s.positive.size(); ++j) {
        const Vector v = s.vectors.col(static_cast<Eigen::Index>(j));
        M += s.positive[j] * v * v.adjoint();
    }
    if (s.positive.empty()) return {RealField(F.grid()), {}, N};
    return {wigner_of_operator(basis, M, F.grid()), s.positive, N};
}

inline PositivePart positive_part(const RealField& F, double eps, int N_max = 32, double center = 0.0) {
    return positive_part(F, HermiteBasis(F.grid().x(), N_max, center), eps);
}

// Squared L2 distance between F and the pure Wigner function of the
// normalized coefficient vector c, from the coefficient matrix and tail.
inline double pure_distance_squared(const CoefficientMatrix& f, const Vector& c) {
    const Vector u = c.normalized();
    const Matrix d = f.entries.topLeftCorner(u.size(), u.size()) - u * u.adjoint();
    return d.squaredNorm() / (2 * pi * f.hbar) + f.epsilon * f.epsilon;
}

struct LadderRow {
    int N{};
    double lambda_1{};
    double lambda_2{};
    double lambda_m1{};  // most negative eigenvalue, 0 if none
    double tail{};
};

struct Ladder {
    std::vector<LadderRow> rows;
    bool monotone{};            // lambda_1, lambda_2 nondecreasing, lambda_-1 nonincreasing
    bool bound_respected{};     // |lambda_1(N) - lambda_1(N')| < 2 (2 pi hbar)^(1/2) tail(N)
    double worst_bound_ratio{}; // max |lambda_1(N) - lambda_1(N')| / bound
};

// Eigenvalue ladder over the leading principal submatrices of orders `orders`.
inline Ladder monotonicity_probe(const CoefficientMatrix& full, const std::vector<int>& orders) {
    if (!std::is_sorted(orders.begin(), orders.end())) throw DomainError("monotonicity_probe: orders must ascend");
    Ladder L;
    for (int N : orders) {
        const auto c = full.leading(N);
        const auto s = spectral_decomposition(c);
        LadderRow r;
        r.N = N;
        r.lambda_1 = s.values.front();
        r.lambda_2 = N > 1 ? s.values[1] : 0.0;
        r.lambda_m1 = s.negative.empty() ? 0.0 : s.negative.front();
        r.tail = c.epsilon;
        L.rows.push_back(r);
    }
    constexpr double slack = 1e-10;
    L.monotone = true;
    L.bound_respected = true;
    const double k = 2 * std::sqrt(2 * pi * full.hbar);
    for (std::size_t i = 1; i < L.rows.size(); ++i) {
        const auto& a = L.rows[i - 1];
        const auto& b = L.rows[i];
        if (b.lambda_1 < a.lambda_1 - slack || b.lambda_m1 > a.lambda_m1 + slack) L.monotone = false;
        if (a.N > 1 && b.lambda_2 < a.lambda_2 - slack) L.monotone = false;
        const double bound = k * a.tail + slack;
        const double diff = std::abs(b.lambda_1 - a.lambda_1);
        L.worst_bound_ratio = std::max(L.worst_bound_ratio, diff / bound);
        if (diff >= bound) L.bound_respected = false;
    }
    return L;
}

}  // namespace wigdev
