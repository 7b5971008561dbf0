#include <gtest/gtest.h>

#include <wigdev/states.hpp>
#include <wigdev/wigner.hpp>

using namespace wigdev;

namespace {

// (1 / pi hbar) sum_j psi(x_i + y_j) psi*(x_i - y_j) e^{-2 i p y_j / hbar} dx
double direct_wigner(const WaveFunction& psi, std::size_t i, double p) {
    const long n = static_cast<long>(psi.size());
    const double dx = psi.grid().dx(), hbar = psi.grid().hbar();
    cplx s{};
    for (long j = -n; j <= n; ++j) {
        const long u = static_cast<long>(i) + j, v = static_cast<long>(i) - j;
        if (u < 0 || u >= n || v < 0 || v >= n) continue;
        s += psi[static_cast<std::size_t>(u)] * std::conj(psi[static_cast<std::size_t>(v)]) *
             std::exp(cplx(0, -2 * p * static_cast<double>(j) * dx / hbar));
    }
    return (s * dx).real() / (pi * hbar);
}

// |phi(p)|^2 with phi(p) = (2 pi hbar)^{-1/2} sum_j psi_j e^{-i p x_j / hbar} dx
double momentum_density(const WaveFunction& psi, double p) {
    const auto& g = psi.grid();
    cplx s{};
    for (std::size_t j = 0; j < psi.size(); ++j) s += psi[j] * std::exp(cplx(0, -p * g[j] / g.hbar()));
    return std::norm(s * g.dx()) / (2 * pi * g.hbar());
}

double gaussian_wigner(double x0, double p0, double x, double p, double hbar) {
    return std::exp(-((x - x0) * (x - x0) + (p - p0) * (p - p0)) / hbar) / (pi * hbar);
}

}  // namespace

TEST(Grid, RejectsInvalidSizes) {
    EXPECT_THROW(Grid1D(0, 1, 100), DomainError);
    EXPECT_THROW(Grid1D(0, 1, 4), DomainError);
    EXPECT_THROW(Grid1D(1, 0, 64), DomainError);
    EXPECT_THROW(Grid1D(0, 1, 64, 0.0), DomainError);
}

TEST(Grid, NodesAndDualSpacing) {
    const Grid1D g(-1, 3, 256);
    EXPECT_EQ(g.node_of(0.0), 64u);
    EXPECT_EQ(g.node_of(2.0), 192u);
    EXPECT_THROW((void)g.node_of(0.001), DomainError);
    const auto pg = PhaseGrid::wigner_dual(g);
    EXPECT_NEAR(pg.p().dx(), pi / (256 * g.dx()), 1e-14);
    const auto b = PhaseGrid::balanced(128);
    EXPECT_NEAR(b.x().dx(), b.p().dx(), 1e-14);
}

TEST(Wigner, FftMatchesDirectLatticeSum) {
    const Grid1D g(-1, 3, 128);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto psi = box_eigenstate(2, 2.0, g).state;
    const auto W = wigner_transform(psi, pg);
    for (std::size_t i : {40u, 64u, 70u, 100u})
        for (std::size_t k : {0u, 31u, 64u, 90u}) EXPECT_NEAR(W(i, k), direct_wigner(psi, i, pg.p()[k]), 1e-12);
}

TEST(Wigner, CoherentStateMatchesClosedForm) {
    for (double hbar : {1.0, 0.5}) {
        const auto pg = PhaseGrid::balanced(256, hbar);
        const auto W = wigner_transform(coherent_state(0.7, -0.4, pg.x()), pg);
        double worst = 0;
        for (std::size_t i = 0; i < pg.nx(); ++i)
            for (std::size_t k = 0; k < pg.np(); ++k)
                worst = std::max(worst, std::abs(W(i, k) - gaussian_wigner(0.7, -0.4, pg.x()[i], pg.p()[k], hbar)));
        EXPECT_LT(worst, 1e-10) << "hbar " << hbar;
    }
}

TEST(Wigner, MarginalsReproduceDensities) {
    const auto pg = PhaseGrid::balanced(256);
    const auto psi = hermite_state(1, pg.x());
    const auto W = wigner_transform(psi, pg);
    const auto m = marginals(W);
    for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_NEAR(m.position[i], std::norm(psi[i]), 1e-10);
    for (std::size_t k = 0; k < pg.np(); k += 7) EXPECT_NEAR(m.momentum[k], momentum_density(psi, pg.p()[k]), 1e-8);
}

TEST(Wigner, SelfOverlapAndBoundOnStateLibrary) {
    const Grid1D g(-1, 3, 512);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto bal = PhaseGrid::balanced(512);
    std::vector<std::pair<WaveFunction, PhaseGrid>> lib;
    for (int n = 1; n <= 3; ++n) lib.emplace_back(box_eigenstate(n, 2.0, g).state, pg);
    lib.emplace_back(hermite_state(0, bal.x()), bal);
    lib.emplace_back(hermite_state(1, bal.x()), bal);
    lib.emplace_back(coherent_state(1.0, 0.5, bal.x()), bal);
    for (const auto& [psi, grid] : lib) {
        const auto W = wigner_transform(psi, grid);
        EXPECT_NEAR(W.integral(), 1.0, 1e-8);
        EXPECT_NEAR(moyal_overlap(W, W), 1 / (2 * pi), 1e-8);
        EXPECT_LE(W.sup_norm(), 1 / pi + 1e-12);
    }
}

TEST(Wigner, BoxStateSupportedOnItsStrip) {
    const Grid1D g(-1, 3, 256);
    const auto W = wigner_transform(box_eigenstate(1, 2.0, g).state, PhaseGrid::wigner_dual(g));
    const auto r = support_and_bound_report(W, Interval{0.0, 2.0});
    EXPECT_EQ(r.outside_strip_max, 0.0);
    EXPECT_TRUE(r.within_bound);
    EXPECT_TRUE(r.normalized);
}

TEST(Wigner, CrossWignerIsHermitian) {
    const auto pg = PhaseGrid::balanced(128);
    const auto a = hermite_state(0, pg.x());
    const auto b = coherent_state(0.5, 1.0, pg.x());
    const auto ab = cross_wigner(a, b, pg);
    const auto ba = cross_wigner(b, a, pg);
    double worst = 0;
    for (std::size_t j = 0; j < ab.values().size(); ++j)
        worst = std::max(worst, std::abs(ab.values()[j] - std::conj(ba.values()[j])));
    EXPECT_LT(worst, 1e-14);
    EXPECT_NEAR(std::abs(moyal_overlap(ab, ba)) * 2 * pi, 1.0, 1e-10);
    EXPECT_NEAR(std::abs(moyal_overlap(ab, ab)) * 2 * pi, std::norm(a.inner(b)), 1e-10);
}

TEST(Wigner, MixedStateIsWeightedSum) {
    const auto pg = PhaseGrid::balanced(128);
    MixedState rho({{0.25, hermite_state(0, pg.x())}, {0.75, hermite_state(1, pg.x())}});
    const auto W = mixed_wigner(rho, pg);
    RealField expect = 0.25 * harmonic_wigner(0, pg);
    expect += 0.75 * harmonic_wigner(1, pg);
    EXPECT_LT(sup_distance(W, expect), 1e-10);
    EXPECT_NEAR(W.integral(), 1.0, 1e-10);
    EXPECT_LT(moyal_overlap(W, W), 1 / (2 * pi));
}

TEST(Wigner, RejectsMismatchedGrid) {
    const auto pg = PhaseGrid::balanced(128);
    const auto psi = hermite_state(0, Grid1D(-8, 8, 128));
    EXPECT_THROW(wigner_transform(psi, pg), DimensionError);
}
