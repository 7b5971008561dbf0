#include <gtest/gtest.h>

#include <wigdev/approx.hpp>

using namespace wigdev;

namespace {

RealField ho_mix(const PhaseGrid& pg, double c) {
    RealField F = harmonic_wigner(0, pg);
    F += -c * harmonic_wigner(1, pg);
    return F;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST(Approx, GroundStateCoefficients) {
    const auto pg = PhaseGrid::balanced(256);
    const auto c = coefficients(harmonic_wigner(0, pg), 8);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) EXPECT_NEAR(std::abs(c.entries(a, b)), (a == 0 && b == 0) ? 1.0 : 0.0, 1e-10);
    EXPECT_LT(c.epsilon, 1e-6);
    EXPECT_LT(c.hermiticity_defect, 1e-12);
}

TEST(Approx, CoherentStateDiagonalIsPoisson) {
    const auto pg = PhaseGrid::balanced(256);
    const double x0 = 1.2, p0 = -0.4;
    const auto c = coefficients(coherent_wigner(x0, p0, pg), 12);
    const double n_bar = (x0 * x0 + p0 * p0) / 2;
    for (int n = 0; n < 12; ++n)
        EXPECT_NEAR(c.entries(n, n).real(), std::exp(-n_bar) * std::pow(n_bar, n) / factorial(n), 1e-10);
    double prev = 1e9;
    for (int N : {2, 4, 8, 12}) {
        const double t = c.leading(N).epsilon;
        EXPECT_LT(t, prev);
        prev = t;
    }
}

TEST(Approx, OperatorWignerOfProjectorIsEigenstateWigner) {
    const auto pg = PhaseGrid::balanced(256);
    const HermiteBasis B(pg.x(), 4);
    Matrix M = Matrix::Zero(4, 4);
    M(2, 2) = 1.0;
    EXPECT_LT(sup_distance(wigner_of_operator(B, M, pg), wigner_transform(hermite_state(2, pg.x()), pg)), 1e-10);
}

TEST(Approx, ClosestPureOfMixedOscillatorField) {
    const auto pg = PhaseGrid::balanced(512);
    const auto F = ho_mix(pg, 0.3);
    const auto cp = closest_pure(F, 1e-6);
    EXPECT_EQ(cp.certificate.N, 2);
    EXPECT_NEAR(cp.certificate.lambda_1, 1.0, 1e-8);
    EXPECT_NEAR(cp.certificate.eigen_gap, 1.3, 1e-8);
    EXPECT_LT(sup_distance(cp.wigner, harmonic_wigner(0, pg)), 1e-8);
    EXPECT_NEAR(cp.psi.norm(), 1.0, 1e-10);
    const auto pp = positive_part(F, 1e-6);
    ASSERT_EQ(pp.weights.size(), 1u);
    EXPECT_LT(sup_distance(pp.field, harmonic_wigner(0, pg)), 1e-8);
    const auto c = coefficients(F, 2);
    EXPECT_NEAR(pure_distance_squared(c, cp.coefficients), 0.09 / (2 * pi), 1e-9);
}

TEST(Approx, TruncationFailsWhenBasisTooSmall) {
    const auto pg = PhaseGrid::balanced(256);
    const auto c = coefficients(coherent_wigner(2.5, 1.0, pg), 4);
    EXPECT_THROW(choose_truncation(c, 1e-6), InsufficientBasisError);
    EXPECT_THROW(choose_truncation(c, -1.0), DomainError);
}

TEST(Approx, LadderIsMonotoneAndBounded) {
    const auto pg = PhaseGrid::balanced(512);
    for (const auto& F : {ho_mix(pg, 0.3), coherent_wigner(1.5, 0.5, pg)}) {
        const auto full = coefficients(F, 32);
        const auto L = monotonicity_probe(full, {4, 8, 16, 32});
        EXPECT_EQ(L.rows.size(), 4u);
        EXPECT_TRUE(L.monotone);
        EXPECT_TRUE(L.bound_respected);
    }
    EXPECT_THROW(monotonicity_probe(coefficients(ho_mix(pg, 0.3), 8), {8, 4}), DomainError);
}

TEST(Approx, SpectralDecompositionReconstructs) {
    const auto pg = PhaseGrid::balanced(256);
    const auto s = spectral_decomposition(coefficients(ho_mix(pg, 0.5), 6));
    EXPECT_LT(s.orthonormality_defect, 1e-12);
    EXPECT_LT(s.reconstruction_defect, 1e-12);
    ASSERT_EQ(s.positive.size(), 1u);
    ASSERT_EQ(s.negative.size(), 1u);
    EXPECT_NEAR(s.negative.front(), -0.5, 1e-10);
}

TEST(Approx, ShiftedBasisCapturesDisplacedState) {
    const auto pg = PhaseGrid::balanced(512);
    const auto C = coherent_wigner(2.0, 0.0, pg);
    const auto centred = coefficients(C, HermiteBasis(pg.x(), 4, 2.0));
    const auto origin = coefficients(C, HermiteBasis(pg.x(), 4, 0.0));
    EXPECT_LT(centred.epsilon, 1e-6);
    EXPECT_GT(origin.epsilon, 1e-2);
}
