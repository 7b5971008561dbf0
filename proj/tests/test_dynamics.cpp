#include <gtest/gtest.h>

#include <wigdev/dynamics.hpp>

using namespace wigdev;

TEST(Flow, CoherentStateRotatesClockwise) {
    const auto pg = PhaseGrid::balanced(256);
    const auto C = coherent_wigner(1.0, 0.0, pg);
    for (double t : {0.3, 1.0, 2.5}) {
        const auto Ft = harmonic_flow(C, t);
        EXPECT_LT(sup_distance(Ft, coherent_wigner(std::cos(t), -std::sin(t), pg)), 1e-6) << "t " << t;
    }
}

TEST(Flow, ConservesInvariantsOverAPeriod) {
    const auto pg = PhaseGrid::balanced(256);
    const auto W1 = harmonic_wigner(1, pg);
    for (int m = 0; m <= 16; ++m) {
        const auto F = harmonic_flow(W1, 2 * pi * m / 16);
        EXPECT_NEAR(F.integral(), 1.0, 1e-6);
        EXPECT_NEAR(2 * pi * moyal_overlap(F, F), 1.0, 1e-6);
    }
    EXPECT_LT(sup_distance(harmonic_flow(W1, 2 * pi), W1), 1e-10);
    EXPECT_LT(sup_distance(harmonic_flow(W1, 0.7), W1), 1e-6);
}

TEST(Flow, ProfileRoundTrip) {
    const auto pg = PhaseGrid::balanced(256);
    const auto times = period_times(64);
    for (const auto& F0 : {harmonic_wigner(1, pg), coherent_wigner(1.0, 0.5, pg)}) {
        const auto g = profile_from_initial(F0, 0.0, times);
        const auto R = initial_from_profile(g, pg);
        EXPECT_LT(sup_distance(R, F0), 2e-3);
        EXPECT_TRUE(wigner_property_probe(R).passes);
    }
}

TEST(Flow, ReconstructionNeedsFullPeriodFromOrigin) {
    const auto pg = PhaseGrid::balanced(128);
    const auto F0 = harmonic_wigner(0, pg);
    auto g = profile_from_initial(F0, 0.0, period_times(16));
    g.times.pop_back();
    g.values.pop_back();
    EXPECT_THROW(initial_from_profile(g, pg), ReconstructionIncompleteError);
    EXPECT_THROW(initial_from_profile(profile_from_initial(F0, 0.5, period_times(16)), pg), DomainError);
    EXPECT_THROW(period_times(4), DomainError);
}

TEST(Flow, RedundancyCheckRefusesConflictingInputs) {
    const auto pg = PhaseGrid::balanced(256);
    const auto W0 = harmonic_wigner(0, pg), W1 = harmonic_wigner(1, pg);
    const auto times = period_times(32);
    const auto good = check_redundancy(W1, profile_from_initial(W1, 0.0, times), profile_from_initial(W1, 0.8, times));
    EXPECT_TRUE(good.consistent);
    ASSERT_TRUE(good.conflict_L.has_value());
    EXPECT_LT(*good.conflict_L, 1e-3);
    const auto bad = check_redundancy(W1, profile_from_initial(W0, 0.0, times));
    EXPECT_FALSE(bad.consistent);
    EXPECT_GT(bad.conflict_0, 0.1);
}

TEST(Flow, ProbeRejectsNonWignerFields) {
    const auto pg = PhaseGrid::balanced(256);
    EXPECT_TRUE(wigner_property_probe(harmonic_wigner(0, pg)).passes);
    EXPECT_FALSE(wigner_property_probe(2.0 * harmonic_wigner(0, pg)).normalized);
    const auto narrow = RealField::sample(pg, [](double x, double p) { return std::exp(-(x * x + p * p) / 0.1) / (0.1 * pi); });
    const auto r = wigner_property_probe(narrow);
    EXPECT_TRUE(r.normalized);
    EXPECT_FALSE(r.within_bound);
    EXPECT_FALSE(r.passes);
}

TEST(Moyal, OscillatorGeneratesTheFlow) {
    const auto pg = PhaseGrid::balanced(256);
    const auto V = Potential::sample([](double x) { return 0.5 * x * x; }, pg);
    EXPECT_LT(moyal_rhs(harmonic_wigner(0, pg), V).sup_norm(), 1e-10);
    const auto C = coherent_wigner(1.0, 0.5, pg);
    const double h = 1e-4;
    RealField d = harmonic_flow(C, h);
    d -= harmonic_flow(C, -h);
    d *= 1 / (2 * h);
    EXPECT_LT(sup_distance(moyal_rhs(C, V), d), 1e-5);
}

TEST(Moyal, EdgeCheckRejectsTruncatedFields) {
    const auto pg = PhaseGrid::balanced(64);
    const auto C = coherent_wigner(3.0, 0.0, pg);
    EXPECT_GT(edge_magnitude(C), 1e-8);
    EXPECT_THROW(moyal_rhs(C, Potential::zero(pg)), ResolutionError);
}

TEST(Moyal, RungeKuttaTracksExactFlow) {
    const auto pg = PhaseGrid::balanced(128);
    const auto V = Potential::sample([](double x) { return 0.5 * x * x; }, pg);
    const auto C = coherent_wigner(0.8, 0.0, pg);
    const auto R = rk4_evolve(C, V, 0.5, 10);
    EXPECT_LT(sup_distance(R, harmonic_flow(C, 0.5)), 1e-5);
    const auto quartic = Potential::sample([](double x) { return x * x * x * x; }, pg);
    EXPECT_THROW(rk4_evolve(C, quartic, 0.5, 10), DomainError);
}

TEST(Moyal, BoundaryTermsReduceConfinedResidual) {
    double prev = 0;
    for (std::size_t n : {256u, 512u}) {
        const Grid1D g(-1, 3, n);
        const auto pg = PhaseGrid::wigner_dual(g);
        const auto W = wigner_transform(box_eigenstate(1, 2.0, g).state, pg);
        const double eps = 4 * g.dx();
        const std::vector<BoundaryPotentialSpec> specs{{0, 2, eps, 0.5, Side::left}, {0, 2, eps, 0.5, Side::right}};
        const auto with = stationarity_residual(W, Potential::zero(pg), specs, {0, 2}, 0.0, 2.0);
        const auto without = stationarity_residual(W, Potential::zero(pg), {}, {0, 2}, 0.0, 2.0);
        EXPECT_LT(with.relative, 0.5 * without.relative);
        if (prev > 0) { EXPECT_GT(prev / with.relative, 1.5); }
        prev = with.relative;
    }
}
