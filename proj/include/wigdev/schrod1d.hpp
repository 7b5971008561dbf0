#pragma once

// Finite-difference eigenproblems on a line: the hard-wall reference box and
// the boundary-value problem with smoothed distributional wall potentials.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "grid.hpp"
#include "interp.hpp"
#include "starcalc.hpp"

namespace wigdev {

struct Eigenpairs {
    std::vector<double> energies;       // ascending
    std::vector<WaveFunction> states;   // normalized, zero outside the box
};

// Central differences with hard Dirichlet rows at the walls, which must sit
// on grid nodes.
inline Eigenpairs solve_reference_box(Interval box, int n_levels, const Grid1D& grid,
                                      double mass = 1.0) {
    const std::size_t ia = grid.node_of(box.lo, "wall");
    const std::size_t ib = grid.node_of(box.hi, "wall");
    if (ib <= ia + 1) throw DomainError("solve_reference_box: empty interior");
    const std::size_t m = ib - ia - 1;
    if (n_levels < 1 || static_cast<std::size_t>(n_levels) > m / 8)
        throw DomainError("solve_reference_box: " + std::to_string(n_levels) +
                          " levels exceed what " + std::to_string(m) + " interior nodes resolve");
    const double hbar = grid.hbar(), dx = grid.dx();
    const double t = hbar * hbar / (2 * mass * dx * dx);
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 2 * t);
    Eigen::VectorXd off = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m - 1), -t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw Error("solve_reference_box: eigensolver failed");

    Eigenpairs out;
    for (int l = 0; l < n_levels; ++l) {
        out.energies.push_back(es.eigenvalues()(l));
        std::vector<cplx> v(grid.size(), cplx{});
        const auto vec = es.eigenvectors().col(l);
        const double sign = vec(0) < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < m; ++j) v[ia + 1 + j] = sign * vec(static_cast<Eigen::Index>(j));
        out.states.push_back(WaveFunction(grid, std::move(v), mass).normalized_copy());
    }
    return out;
}

inline Eigenpairs solve_reference_box(double L, int n_levels, const Grid1D& grid, double mass = 1.0) {
    return solve_reference_box(Interval{0.0, L}, n_levels, grid, mass);
}

struct SmoothedProblem {
    double a = -1.0;
    double b = 1.0;
    double mass = 1.0;
    bool boundary_potential = true;  // false: the empty-potential reference system
};

struct SmoothedSolution {
    WaveFunction psi;
    WaveFunction reference;   // ground state of the hard-wall box on [a, b]
    double energy{};
    double condition_estimate{};
};

namespace detail {

inline void add_linear_sample(std::vector<Eigen::Triplet<double>>& t, long row, const Grid1D& g,
                              double x, double coeff) {
    const double f = g.position(x);
    const long i = static_cast<long>(std::floor(f));
    const double w = f - static_cast<double>(i);
    const long n = static_cast<long>(g.size());
    if (i >= 0 && i < n) t.emplace_back(row, i, coeff * (1 - w));
    if (w > 0 && i + 1 >= 0 && i + 1 < n) t.emplace_back(row, i + 1, coeff * w);
}

inline double condition_estimate(const Eigen::SparseMatrix<double>& A,
                                 Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu) {
    double norm_inf = 0.0;
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(A.rows());
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            rowsum(it.row()) += std::abs(it.value());
    norm_inf = rowsum.maxCoeff();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(A.rows()).normalized();
    double growth = 0.0;
    for (int it = 0; it < 30; ++it) {
        Eigen::VectorXd w = lu.solve(v);
        const double g = w.norm();
        if (!std::isfinite(g)) return std::numeric_limits<double>::infinity();
        growth = std::max(growth, g);
        v = w / g;
    }
    return norm_inf * growth;
}

}  // namespace detail

// Solves  -hbar^2/2m psi'' - hbar^2/2m d'_eps(x-a) psi(x+2eps) + hbar^2/2m d'_eps(x-b) psi(x-2eps) = E psi
// with psi = 0 at the grid ends and psi(a+2eps) = psi(b-2eps) = phi1(b-2eps).
inline SmoothedSolution solve_boundary_potential(double epsilon, double E, const Grid1D& grid,
                                                 const SmoothedProblem& prob = {}) {
    const double hbar = grid.hbar(), dx = grid.dx(), m = prob.mass;
    const double L = prob.b - prob.a;
    BoundaryPotentialSpec left{prob.a, prob.b, epsilon, hbar * hbar / (2 * m), Side::left};
    BoundaryPotentialSpec right{prob.a, prob.b, epsilon, hbar * hbar / (2 * m), Side::right};
    const auto sl = smoothed_boundary_symbol(left, grid);
    const auto sr = smoothed_boundary_symbol(right, grid);
    const double xa = prob.a + 2 * epsilon, xb = prob.b - 2 * epsilon;
    if (xa < grid[1] || xb > grid[grid.size() - 2] || xa >= xb)
        throw DomainError("solve_boundary_potential: matching points are not inside the grid");

    auto phi1 = [&](double x) {
        return (x > prob.a && x < prob.b) ? std::sqrt(2 / L) * std::sin(pi * (x - prob.a) / L) : 0.0;
    };
    const double target = phi1(xb);
    const long n = static_cast<long>(grid.size());
    const long ra = static_cast<long>(grid.nearest(xa));
    const long rb = static_cast<long>(grid.nearest(xb));

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 6);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const double t = hbar * hbar / (2 * m * dx * dx);
    for (long i = 0; i < n; ++i) {
        if (i == 0 || i == n - 1) {
            trip.emplace_back(i, i, 1.0);
        } else if (i == ra || i == rb) {
            detail::add_linear_sample(trip, i, grid, i == ra ? xa : xb, 1.0);
            rhs(i) = target;
        } else {
            trip.emplace_back(i, i - 1, -t);
            trip.emplace_back(i, i, 2 * t - E);
            trip.emplace_back(i, i + 1, -t);
            if (!prob.boundary_potential) continue;
            for (const auto* s : {&sl, &sr}) {
                const double d = s->delta_prime[static_cast<std::size_t>(i)];
                if (std::abs(grid[static_cast<std::size_t>(i)] - s->spec.wall()) > 12 * epsilon) continue;
                detail::add_linear_sample(trip, i, grid, grid[static_cast<std::size_t>(i)] + s->shift,
                                          s->spec.coefficient() * d);
            }
        }
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw NearResonanceError("solve_boundary_potential: singular system at E = " + num(E),
                                 std::numeric_limits<double>::infinity());
    const double cond = detail::condition_estimate(A, lu);
    if (!(cond < 1e14))
        throw NearResonanceError("solve_boundary_potential: system near resonance at E = " +
                                     num(E) + " (condition ~ " + num(cond) + ")",
                                 cond);
    Eigen::VectorXd sol = lu.solve(rhs);
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = sol(i);
    return {WaveFunction(grid, std::move(v), m), WaveFunction::sample(grid, phi1, m), E, cond};
}

// Sup-norm mismatch between psi and the reference on [lo, hi].
inline double sup_mismatch(const WaveFunction& psi, const WaveFunction& ref, Interval where) {
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        if (where.contains(psi.grid()[i])) worst = std::max(worst, std::abs(psi[i] - ref[i]));
    return worst;
}

struct EnergyScan {
    std::vector<double> energies;
    std::vector<double> defects;  // |psi_E(center) - phi1(center)|, inf where unsolvable
    double best_energy{};
    double best_defect{};
    bool interior_minimum{};       // false: the defect is monotone over the range
};

inline double matching_defect(double epsilon, double E, const Grid1D& grid, const SmoothedProblem& prob) {
    const auto sol = solve_boundary_potential(epsilon, E, grid, prob);
    const double c = 0.5 * (prob.a + prob.b);
    const cplx at_c = interp::at(sol.psi.values(), grid, c);
    const double ref = std::sqrt(2 / (prob.b - prob.a));
    return std::abs(at_c - ref);
}

inline EnergyScan energy_scan(double epsilon, Interval range, const Grid1D& grid,
                              const SmoothedProblem& prob = {}, int samples = 41) {
    if (samples < 3) throw DomainError("energy_scan: need at least 3 samples");
    EnergyScan s;
    auto defect = [&](double E) {
        try {
            return matching_defect(epsilon, E, grid, prob);
        } catch (const NearResonanceError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    for (int k = 0; k < samples; ++k) {
        const double E = range.lo + range.length() * k / (samples - 1);
        s.energies.push_back(E);
        s.defects.push_back(defect(E));
    }
    const auto it = std::min_element(s.defects.begin(), s.defects.end());
    const long kbest = it - s.defects.begin();
    s.interior_minimum = kbest > 0 && kbest < samples - 1;
    if (!s.interior_minimum) {
        s.best_energy = s.energies[static_cast<std::size_t>(kbest)];
        s.best_defect = *it;
        return s;
    }
    double lo = s.energies[static_cast<std::size_t>(kbest - 1)];
    double hi = s.energies[static_cast<std::size_t>(kbest + 1)];
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = defect(c), fd = defect(d);
    for (int it2 = 0; it2 < 60 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it2) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = defect(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = defect(d);
        }
    }
    s.best_energy = fc < fd ? c : d;
    s.best_defect = std::min(fc, fd);
    return s;
}

}  // namespace wigdev
