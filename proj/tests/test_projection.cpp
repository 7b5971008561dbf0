#include <gtest/gtest.h>

#include <wigdev/projection.hpp>
#include <wigdev/states.hpp>

using namespace wigdev;

namespace {

// int_0^L |phi|^2 int_L^{2L-x} |chi|^2 for box ground states, by fine midpoint quadrature.
double box_pair_denominator(double L) {
    const int M = 200000;
    const double h = L / M;
    double s = 0;
    for (int i = 0; i < M; ++i) {
        const double x = (i + 0.5) * h;
        const double phi2 = 2 / L * std::pow(std::sin(pi * x / L), 2);
        const double inner = (L - x) / L - std::sin(2 * pi * (L - x) / L) / (2 * pi);
        s += phi2 * inner * h;
    }
    return s;
}

}  // namespace

TEST(Projection, StripMaskZeroesOutside) {
    const auto pg = PhaseGrid::balanced(64);
    const auto W = harmonic_wigner(0, pg);
    const auto P = project_strip(W, Interval{-1.0, 1.0});
    for (std::size_t i = 0; i < pg.nx(); ++i)
        for (std::size_t k = 0; k < pg.np(); ++k) {
            const double x = pg.x()[i];
            EXPECT_EQ(P(i, k), (x >= -1 && x <= 1) ? W(i, k) : 0.0);
        }
}

TEST(Projection, StaggeredGridPutsWallsBetweenSamples) {
    const auto g = staggered_strip_grid(2.0, 512);
    for (double wall : {0.0, 2.0, 4.0}) {
        const double f = g.position(wall);
        EXPECT_NEAR(f - std::floor(f), 0.5, 1e-9);
    }
    EXPECT_LE(g.x_min(), 0.0);
    EXPECT_GE(g.last(), 4.0);
}

TEST(Projection, AssembleBulkChecksSupports) {
    const auto g = staggered_strip_grid(2.0, 256);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto phi = box_eigenstate(1, 2.0, g).state;
    const auto chi = box_eigenstate(1, 2.0, g, 2.0).state;
    EXPECT_NO_THROW(assemble_bulk(phi, chi, Interval{0, 2}, pg));
    EXPECT_THROW(assemble_bulk(phi, phi, Interval{0, 2}, pg), DomainError);
    EXPECT_THROW(assemble_bulk(chi, phi, Interval{0, 2}, pg), DomainError);
}

TEST(Projection, WitnessMatchesIndependentClosedForm) {
    const double L = 2.0;
    const auto g = staggered_strip_grid(L, 1024);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto r = positivity_witness(box_eigenstate(1, L, g).state, box_eigenstate(1, L, g, L).state, L, pg);
    const double D = box_pair_denominator(L);
    EXPECT_NEAR(r.denominator, D, 1e-4);
    EXPECT_NEAR(r.N_bound, 1 / (2 * D), 1e-3);
    EXPECT_NEAR(r.N_used, 1.5 * r.N_bound, 1e-12);
    EXPECT_LT(r.overlap, 0.0);
    EXPECT_NEAR(r.overlap, r.closed_form, 1e-4);
    EXPECT_NEAR(r.closed_form, 1 / (2 * pi) - r.N_used / pi * D, 1e-4);
}

TEST(Projection, ConfinedStateNeedsNoWitness) {
    const double L = 2.0;
    const auto g = staggered_strip_grid(L, 512);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto phi = box_eigenstate(2, L, g).state;
    const auto zero = phi.scaled(0.0);
    const auto r = positivity_witness(phi, zero, L, pg);
    EXPECT_TRUE(r.confined);
    EXPECT_NEAR(r.overlap, 1 / (2 * pi), 1e-8);
}

TEST(Projection, WitnessUnavailableWithoutOverlapMass) {
    const double L = 2.0;
    const auto g = staggered_strip_grid(L, 512);
    const auto pg = PhaseGrid::wigner_dual(g);
    auto bump = [&](double lo, double hi) {
        return WaveFunction::sample(g, [=](double x) { return (x > lo && x < hi) ? std::sin(pi * (x - lo) / (hi - lo)) : 0.0; });
    };
    EXPECT_THROW(positivity_witness(bump(1.6, 2.0), bump(3.8, 4.0), L, pg), WitnessUnavailableError);
    EXPECT_THROW(positivity_witness(bump(1.0, 3.0), bump(3.8, 4.0), L, pg), DomainError);
}
