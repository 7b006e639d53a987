#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ultimum/error.hpp"
#include "ultimum/rng.hpp"
#include "ultimum/stats.hpp"

using namespace ultimum;

TEST(Rng, SplitMixReferenceOutput) {
    std::uint64_t s = 0;
    EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64(s), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, SubstreamsAreReproducibleAndDistinct) {
    EXPECT_EQ(substream_seed(42, 7), substream_seed(42, 7));
    EXPECT_NE(substream_seed(42, 7), substream_seed(42, 8));
    EXPECT_NE(substream_seed(42, 7), substream_seed(43, 7));
    auto a = make_engine(1, 2);
    auto b = make_engine(1, 2);
    EXPECT_TRUE(a == b);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, UniformBitsLookUniform) {
    auto e = make_engine(9, 0);
    std::uniform_real_distribution<double> u;
    std::vector<double> xs(20000);
    for (auto& x : xs) x = u(e);
    std::sort(xs.begin(), xs.end());
    const auto r = ks_test(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
    EXPECT_GT(r.p_value, 1e-3);
}

TEST(Stats, SummarizeKnownSample) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto e = summarize(v, 5);
    EXPECT_DOUBLE_EQ(e.mean, 2.5);
    EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
    EXPECT_EQ(e.n, 4u);
    EXPECT_EQ(e.seed, 5u);
    EXPECT_THROW(summarize(std::vector<double>{1.0}), DomainError);
}

TEST(Stats, CombinedError) {
    McEstimate a{0.0, 3.0, 10, 0}, b{0.0, 4.0, 10, 0};
    EXPECT_DOUBLE_EQ(combined_std_error(a, b), 5.0);
}

TEST(Stats, KolmogorovSurvivalTable) {
    // Standard critical values of the Kolmogorov distribution.
    EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
    EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
    EXPECT_NEAR(kolmogorov_survival(1.2238), 0.10, 1e-4);
    EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
    EXPECT_LT(kolmogorov_survival(5.0), 1e-20);
}

TEST(Stats, KsStatisticByHand) {
    const std::vector<double> v{0.1, 0.4, 0.7};
    const auto r = ks_test(v, [](double x) { return x; });
    // D+ = max(1/3 - .1, 2/3 - .4, 1 - .7) = 0.3; D- = max(.1, .4 - 1/3, .7 - 2/3) = 0.1
    EXPECT_NEAR(r.statistic, 0.3, 1e-15);
}

TEST(Stats, KsRejectsWrongLaw) {
    std::mt19937_64 g(1);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = ex(g);
    std::sort(xs.begin(), xs.end());
    EXPECT_GT(ks_test(xs, [](double x) { return x > 0 ? -std::expm1(-x) : 0.0; }).p_value, 1e-3);
    EXPECT_LT(ks_test(xs, [](double x) { return x > 0 ? -std::expm1(-1.1 * x) : 0.0; }).p_value, 1e-3);
}

TEST(Stats, MedianAndBootstrap) {
    EXPECT_DOUBLE_EQ(sorted_median(std::vector<double>{1.0, 2.0, 10.0}), 2.0);
    EXPECT_DOUBLE_EQ(sorted_median(std::vector<double>{1.0, 2.0, 4.0, 10.0}), 3.0);
    std::mt19937_64 g(2);
    std::normal_distribution<double> n01;
    std::vector<double> xs(4000);
    for (auto& x : xs) x = n01(g);
    // Asymptotic sd of the normal median: sqrt(pi / 2) / sqrt(n).
    const double se = bootstrap_median_std_error(xs, 400, 3);
    EXPECT_NEAR(se, std::sqrt(std::numbers::pi / 2.0 / 4000.0), 0.3 * std::sqrt(std::numbers::pi / 2.0 / 4000.0));
    EXPECT_EQ(se, bootstrap_median_std_error(xs, 400, 3));
}
