#include <gtest/gtest.h>

#include <wigdev/starcalc.hpp>
#include <wigdev/states.hpp>

using namespace wigdev;

TEST(States, BoxEnergiesAndNormalization) {
    const Grid1D g(-1, 3, 512);
    for (int n = 1; n <= 4; ++n) {
        const auto s = box_eigenstate(n, 2.0, g);
        EXPECT_NEAR(s.energy, n * n * pi * pi / 8, 1e-12);
        EXPECT_NEAR(s.state.norm(), 1.0, 1e-10);
    }
    EXPECT_THROW(box_eigenstate(0, 2.0, g), DomainError);
    EXPECT_THROW(box_eigenstate(1, 5.0, g), DomainError);
}

TEST(States, HermiteStatesAreOrthonormal) {
    const auto pg = PhaseGrid::balanced(256);
    std::vector<WaveFunction> h;
    for (int n = 0; n < 6; ++n) h.push_back(hermite_state(n, pg.x()));
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) EXPECT_NEAR(std::abs(h[a].inner(h[b])), a == b ? 1.0 : 0.0, 1e-10);
}

TEST(States, HarmonicWignerMatchesLaguerreForm) {
    const auto pg = PhaseGrid::balanced(256);
    const auto W1 = harmonic_wigner(1, pg);
    double worst = 0;
    for (std::size_t i = 0; i < pg.nx(); ++i)
        for (std::size_t k = 0; k < pg.np(); ++k) {
            const double s = pg.x()[i] * pg.x()[i] + pg.p()[k] * pg.p()[k];
            worst = std::max(worst, std::abs(W1(i, k) - (2 * s - 1) * std::exp(-s) / pi));
        }
    EXPECT_LT(worst, 1e-12);
}

TEST(States, BoxAnalyticMatchesFftAndResonantLimit) {
    const Grid1D g(-1, 3, 1024);
    const auto pg = PhaseGrid::wigner_dual(g);
    for (int n = 1; n <= 3; ++n) {
        const auto W = wigner_transform(box_eigenstate(n, 2.0, g).state, pg);
        EXPECT_LT(sup_distance(W, box_wigner_analytic(n, 2.0, pg)), 1e-5);
        const double pr = n * pi / 2.0;
        for (double x : {0.3, 1.0, 1.7})
            EXPECT_NEAR(box_wigner_resonant(n, 2.0, x, 1.0), box_wigner_value(n, 2.0, x, pr + 1e-7, 1.0), 1e-6);
    }
}

TEST(StarCalc, KineticStarOnGaussianMatchesClosedForm) {
    const auto pg = PhaseGrid::balanced(256);
    const double x0 = 0.5, p0 = -0.3;
    const auto F = coherent_wigner(x0, p0, pg);
    const auto S = kinetic_star(F);
    double worst = 0;
    for (std::size_t i = 0; i < pg.nx(); ++i)
        for (std::size_t k = 0; k < pg.np(); ++k) {
            const double x = pg.x()[i], p = pg.p()[k], f = F(i, k), u = x - x0;
            const cplx expect = p * p / 2 * f - cplx(0, p / 2) * (-2 * u * f) - (4 * u * u - 2) * f / 8;
            worst = std::max(worst, std::abs(S(i, k) - expect));
        }
    EXPECT_LT(worst, 1e-9);
}

TEST(StarCalc, NaiveStargenvalueHasLargeImaginaryPart) {
    const Grid1D g(-1, 3, 512);
    const auto W = wigner_transform(box_eigenstate(1, 2.0, g).state, PhaseGrid::wigner_dual(g));
    EXPECT_GT(imag_part(kinetic_star(W)).sup_norm(), 0.1 * W.sup_norm());
}

TEST(StarCalc, SmoothedDeltaMoments) {
    const double eps = 0.05;
    const Grid1D g(-1, 1, 4096);
    double m0 = 0, d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        m0 += delta_eps(g[i], eps) * g.dx();
        d0 += delta_eps_prime(g[i], eps) * g.dx();
        d1 += g[i] * delta_eps_prime(g[i], eps) * g.dx();
    }
    EXPECT_NEAR(m0, 1.0, 1e-12);
    EXPECT_NEAR(d0, 0.0, 1e-12);
    EXPECT_NEAR(d1, -1.0, 1e-12);
}

TEST(StarCalc, BoundarySymbolNeedsResolution) {
    const Grid1D g(-1, 3, 256);
    EXPECT_THROW(smoothed_boundary_symbol({0, 2, g.dx(), 0.5, Side::left}, g), ResolutionError);
    const auto s = smoothed_boundary_symbol({0, 2, 4 * g.dx(), 0.5, Side::right}, g);
    EXPECT_DOUBLE_EQ(s.shift, -8 * g.dx());
    EXPECT_THROW(smoothed_boundary_symbol({2, 0, 0.1, 0.5, Side::left}, g), DomainError);
}

TEST(StarCalc, PotentialWindowMustCoverKernel) {
    const auto pg = PhaseGrid::balanced(64);
    const auto V = Potential::sample([](double x) { return x * x; }, pg);
    EXPECT_EQ(V.grid.size(), 128u);
    Potential narrow{pg.x(), std::vector<double>(pg.nx(), 0.0)};
    EXPECT_THROW(potential_kernel(narrow, pg), NonlocalityError);
}

TEST(StarCalc, LambdaIdentityGapIsLinearInEpsilon) {
    const Grid1D g(-1, 3, 2048);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto psi = box_eigenstate(1, 2.0, g).state;
    const auto B1 = boundary_term_B1(psi, 0.0, 1.0, pg);
    std::vector<double> gaps;
    for (double eps : {4e-3, 2e-3, 1e-3}) {
        const auto Lam = lambda_epsilon(psi, 0.0, 2.0, eps, 1.0, pg);
        double gap = 0;
        for (std::size_t i = 0; i < pg.nx(); ++i)
            for (std::size_t k = 0; k < pg.np(); ++k)
                if (std::abs(pg.p()[k]) <= 2)
                    gap = std::max(gap, std::abs(cplx(0, 1 / (4 * pi)) * Lam(i, k) - B1(i, k)));
        gaps.push_back(gap);
    }
    EXPECT_LT(gaps.back(), 1e-3);
    EXPECT_NEAR(gaps[0] / gaps[1], 2.0, 0.2);
    EXPECT_NEAR(gaps[1] / gaps[2], 2.0, 0.2);
}

TEST(StarCalc, HalfLineStateShape) {
    const Grid1D g(-1, 3, 512);
    const auto psi = continued_half_line_state([](double x) { return cplx(std::sin(pi * x / 2)); }, 0.0, 2.0, 2.8, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < 0 || g[i] >= 2.8) { EXPECT_EQ(psi[i], cplx{}); }
        if (g[i] >= 0 && g[i] <= 2.0) { EXPECT_NEAR(psi[i].real(), std::sin(pi * g[i] / 2), 1e-15); }
    }
    EXPECT_THROW(continued_half_line_state([](double) { return cplx(1); }, 0.0, 2.0, 1.5, g), DomainError);
}

TEST(StarCalc, CorrectedResidualShrinksWithGrid) {
    const auto phi = [](double x) { return cplx(std::sin(pi * x / 2)); };
    double prev = 0;
    for (std::size_t n : {512u, 1024u}) {
        const Grid1D g(-1, 3, n);
        const auto psi = continued_half_line_state(phi, 0.0, 2.0, 2.8, g);
        const auto F1 = wigner_transform(psi, PhaseGrid::wigner_dual(g));
        const auto r = stargenvalue_residual(F1, pi * pi / 8, psi, 0.0, 1.0, 2.0);
        EXPECT_LT(r.residual, 1e-3);
        EXPECT_GT(r.samples, 0u);
        if (prev > 0) { EXPECT_GT(prev / r.residual, 1.8); }
        prev = r.residual;
    }
}
