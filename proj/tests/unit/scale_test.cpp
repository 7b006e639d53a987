#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ultimum/error.hpp"
#include "ultimum/scale.hpp"

using namespace ultimum;

namespace {

const ProcessFamily kBrownian{BrownianDrift{1.0, -0.5}};
const ProcessFamily kJump{JumpDiffusion{0.5, 0.5, 1.0, 1.0}};
const ProcessFamily kPoisson{CompoundPoissonDrift{2.0, 5.0, 0.2}};

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

}  // namespace

TEST(ScaleW, FrozenValues) {
    EXPECT_NEAR(scale_w(ScaleModel(kBrownian), 1.0), 2.0 * (std::numbers::e - 1.0), 1e-14);
    EXPECT_NEAR(scale_w_prime(ScaleModel(kBrownian), 1.0), 2.0 * std::numbers::e, 1e-14);
    EXPECT_NEAR(scale_w(ScaleModel(kJump), 1.0), 4.10829004107691596, 1e-13);
    EXPECT_NEAR(scale_w_prime(ScaleModel(kJump), 1.0), 4.30738336777944549, 1e-13);
    EXPECT_NEAR(scale_w(ScaleModel(kPoisson), 1.0), 5.37727307326886997, 1e-13);
    EXPECT_NEAR(scale_w_prime(ScaleModel(kPoisson), 1.0), 12.4677280685184009, 1e-12);
}

TEST(ScaleW, JumpDiffusionCoefficients) {
    const ScaleModel m(kJump);
    ASSERT_TRUE(m.jump_diffusion().has_value());
    const auto& c = *m.jump_diffusion();
    EXPECT_NEAR(c.beta1, -5.70156211871642434, 1e-14);
    EXPECT_NEAR(c.beta3, kJump.phi0(), 1e-14);
    EXPECT_NEAR(c.c1, -1.03025890455187885, 1e-13);
    EXPECT_NEAR(c.c2, -2.0, 1e-13);
    EXPECT_NEAR(c.c3, 3.03025890455187885, 1e-13);
    EXPECT_FALSE(ScaleModel(kBrownian).jump_diffusion().has_value());
}

TEST(ScaleW, AgreesWithIndependentClosedForms) {
    const auto bw = oracle::brownian_w(1.0, -0.5);
    const auto jw = oracle::jump_diffusion_w(0.5, 0.5, 1.0, 1.0);
    const auto cw = oracle::compound_poisson_w(2.0, 5.0, 0.2);
    for (double x : grid(0.0, 5.0, 101)) {
        EXPECT_NEAR(scale_w(ScaleModel(kBrownian), x), bw.w(x), 1e-12 * std::max(1.0, bw.w(x)));
        EXPECT_NEAR(scale_w(ScaleModel(kJump), x), jw.w(x), 1e-12 * std::max(1.0, jw.w(x)));
        EXPECT_NEAR(scale_w(ScaleModel(kPoisson), x), cw.w(x), 1e-12 * std::max(1.0, cw.w(x)));
    }
}

TEST(ScaleW, BoundaryBehaviour) {
    EXPECT_EQ(scale_w(ScaleModel(kBrownian), -0.1), 0.0);
    EXPECT_EQ(scale_w(ScaleModel(kBrownian), 0.0), 0.0);
    EXPECT_EQ(scale_w(ScaleModel(kJump), 0.0), 0.0);
    EXPECT_DOUBLE_EQ(scale_w(ScaleModel(kPoisson), 0.0), 0.5);
    EXPECT_DOUBLE_EQ(ScaleModel(kPoisson).w_at_zero(), 0.5);
    EXPECT_THROW(scale_w_prime(ScaleModel(kBrownian), 0.0), DomainError);
    // W'(0+) = 2/sigma^2 with a Gaussian part.
    EXPECT_NEAR(ScaleModel(kBrownian).w_prime_at_zero(), 2.0, 1e-14);
    EXPECT_NEAR(ScaleModel(kJump).w_prime_at_zero(), 8.0, 1e-12);
    // Bounded variation: W'(0+) = (lambda + q) / mu^2 at q = 0.
    EXPECT_NEAR(ScaleModel(kPoisson).w_prime_at_zero(), 5.0 / 4.0, 1e-13);
}

TEST(ScaleW, JumpDiffusionCoefficientSumVanishes) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double eta = u(rng);
        const double lambda = u(rng);
        const double mu = lambda / eta - u(rng);
        const ScaleModel m(ProcessFamily(JumpDiffusion{u(rng), mu, lambda, eta}));
        const auto& c = *m.jump_diffusion();
        EXPECT_NEAR(c.c1 + c.c2 + c.c3, 0.0, 1e-10 * (std::abs(c.c1) + std::abs(c.c2) + std::abs(c.c3)));
        EXPECT_GT(c.c3, 0.0);
        EXPECT_LT(c.beta1, -eta);
    }
}

TEST(ScaleW, IncreasingAndDerivativeMatchesDifference) {
    for (const auto* f : {&kBrownian, &kJump, &kPoisson}) {
        const ScaleModel m(*f);
        double prev = scale_w(m, 0.0);
        for (double x : grid(0.01, 6.0, 300)) {
            const double w = scale_w(m, x);
            EXPECT_GT(w, prev);
            prev = w;
            const double fd = oracle::central_difference([&](double z) { return scale_w(m, z); }, x, 1e-5);
            EXPECT_NEAR(scale_w_prime(m, x), fd, 1e-7 * std::max(1.0, fd));
            EXPECT_GT(scale_w_prime(m, x), 0.0);
        }
    }
}

TEST(ScaleW, LaplaceTransformIsReciprocalExponent) {
    // int_0^inf e^{-beta x} W(x) dx = 1 / psi(beta) for beta > Phi(0).
    for (const auto* f : {&kBrownian, &kJump, &kPoisson}) {
        const ScaleModel m(*f);
        for (double extra : {0.5, 1.0, 3.0}) {
            const double beta = f->phi0() + extra;
            const double upper = 60.0 / extra;
            const double lt = oracle::gauss_legendre([&](double x) { return std::exp(-beta * x) * scale_w(m, x); },
                                                     0.0, upper, 4000);
            EXPECT_NEAR(lt, 1.0 / laplace_exponent(*f, beta), 1e-9 / laplace_exponent(*f, beta));
        }
    }
}

TEST(ScaleW, ScaledCopy) {
    const ScaleModel m(kJump);
    const auto s = m.scaled(3.5);
    EXPECT_DOUBLE_EQ(s.scale_factor(), 3.5);
    for (double x : {0.1, 1.0, 4.0}) EXPECT_NEAR(scale_w(s, x), 3.5 * scale_w(m, x), 1e-12 * scale_w(s, x));
    EXPECT_THROW(m.scaled(0.0), DomainError);
    EXPECT_DOUBLE_EQ(ScaleModel(kPoisson).scaled(2.0).w_at_zero(), 1.0);
}

TEST(Talbot, MatchesClosedFormOnGrid) {
    for (const auto* f : {&kBrownian, &kJump, &kPoisson}) {
        const ScaleModel m(*f);
        for (double x : grid(0.05, 5.0, 100)) {
            const double exact = scale_w(m, x);
            EXPECT_NEAR(invert_laplace_scale(*f, x), exact, 1e-6 * std::abs(exact)) << "x=" << x;
        }
    }
}

TEST(Talbot, RejectsNonPositivePoint) {
    EXPECT_THROW(invert_laplace_scale(kBrownian, 0.0), DomainError);
    EXPECT_THROW(invert_laplace_scale(kBrownian, -1.0), DomainError);
}

TEST(Potential, DensityFormula) {
    const ScaleModel m(kJump);
    const double y = 0.3, a = 1.5;
    for (double x : grid(0.01, 1.49, 50)) {
        const double expected = scale_w(m, a - y) * scale_w_prime(m, x) / scale_w_prime(m, a) - scale_w(m, x - y);
        EXPECT_NEAR(potential_density(m, y, x, a), std::max(expected, 0.0), 1e-12 * std::max(1.0, scale_w(m, a)));
        EXPECT_GE(potential_density(m, y, x, a), 0.0);
    }
}

TEST(Potential, AtomOnlyForBoundedVariation) {
    EXPECT_EQ(potential_atom(ScaleModel(kBrownian), 0.2, 1.0), 0.0);
    EXPECT_EQ(potential_atom(ScaleModel(kJump), 0.2, 1.0), 0.0);
    const ScaleModel cp(kPoisson);
    EXPECT_NEAR(potential_atom(cp, 0.0, 1.0), 5.37727307326886997 * 0.5 / 12.4677280685184009, 1e-12);
    EXPECT_THROW(potential_atom(cp, 0.0, 0.0), DomainError);
    EXPECT_THROW(potential_atom(cp, -0.1, 1.0), DomainError);
}

TEST(Potential, DomainChecks) {
    const ScaleModel m(kBrownian);
    EXPECT_THROW(potential_density(m, 1.0, 0.5, 1.0), DomainError);
    EXPECT_THROW(potential_density(m, 0.2, 1.5, 1.0), DomainError);
    EXPECT_THROW(potential_density(m, 0.2, 0.5, -1.0), DomainError);
}

TEST(JumpDiffusionRoots, DegenerateParametersThrow) {
    EXPECT_THROW(jump_diffusion_roots(0.5, 2.0, 1.0, 1.0), DegenerateModelError);
    const auto r = jump_diffusion_roots(0.5, 0.5, 1.0, 1.0);
    EXPECT_NEAR(r.beta3, kJump.phi0(), 1e-14);
}
