#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ultimum/error.hpp"
#include "ultimum/path.hpp"
#include "ultimum/stats.hpp"

using namespace ultimum;

namespace {

const ProcessFamily kBrownian{BrownianDrift{1.0, -0.5}};
const ProcessFamily kJump{JumpDiffusion{0.5, 0.5, 1.0, 1.0}};
const ProcessFamily kPoisson{CompoundPoissonDrift{2.0, 5.0, 0.2}};

}  // namespace

TEST(PathConfig, Validation) {
    PathConfig c;
    EXPECT_NO_THROW(c.validate());
    c.eps_tail = 0.01;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), DomainError);
    c = {};
    c.min_dt = 2 * c.dt;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(PathConfig, CutoffLevel) {
    PathConfig c;
    c.eps_tail = 1e-6;
    c.y_margin = 0.5;
    EXPECT_NEAR(c.cutoff_level(kBrownian), std::log(1e6) + 0.5, 1e-12);
    EXPECT_NEAR(c.cutoff_level(kPoisson), std::log(1e6) / 2.3 + 0.5, 1e-12);
}

TEST(SimulatePath, DeterministicPerSeedAndIndex) {
    PathConfig c;
    const auto a = simulate_path(kJump, c, 11, 3);
    const auto b = simulate_path(kJump, c, 11, 3);
    const auto d = simulate_path(kJump, c, 11, 4);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.times, b.times);
    EXPECT_NE(a.values, d.values);
}

TEST(SimulatePath, RunningSupAndTheta) {
    PathConfig c;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto p = simulate_path(kJump, c, 5, i);
        ASSERT_TRUE(p.truncated_cleanly);
        ASSERT_EQ(p.times.size(), p.values.size());
        double sup = 0.0;
        for (std::size_t k = 0; k < p.values.size(); ++k) {
            sup = std::max(sup, p.values[k]);
            EXPECT_EQ(p.running_sup[k], sup);
            if (k > 0) EXPECT_GE(p.times[k], p.times[k - 1]);
        }
        EXPECT_EQ(p.final_sup, sup);
        EXPECT_EQ(extract_theta(p), p.theta_hat);
        // Terminated by the drawdown cutoff.
        EXPECT_GT(sup - p.values.back(), c.cutoff_level(kJump));
    }
}

TEST(SimulatePath, JumpsAreDownwardPairs) {
    PathConfig c;
    const auto p = simulate_path(kPoisson, c, 2, 0);
    ASSERT_FALSE(p.jump_times.empty());
    EXPECT_EQ(p.jump_times.size(), p.jump_sizes.size());
    for (double s : p.jump_sizes) EXPECT_GT(s, 0.0);
    // Between jumps the compound Poisson path is linear with slope mu.
    for (std::size_t k = 1; k < p.values.size(); ++k) {
        const double dt = p.times[k] - p.times[k - 1];
        if (dt > 0.0) EXPECT_NEAR(p.values[k] - p.values[k - 1], 2.0 * dt, 1e-9 * std::max(1.0, p.times[k]));
    }
}

TEST(SimulatePath, CompoundPoissonSupremumAtJumpEpochs) {
    // With upward drift and downward jumps the supremum is attained just before a jump.
    PathConfig c;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto p = simulate_path(kPoisson, c, 8, i);
        if (p.final_sup == 0.0) {
            EXPECT_EQ(p.theta_hat, 0.0);
            continue;
        }
        bool at_jump = false;
        for (double t : p.jump_times) at_jump = at_jump || t == p.theta_hat;
        EXPECT_TRUE(at_jump) << i;
    }
}

TEST(SimulatePath, HorizonMeanMatchesDrift) {
    // E[X_T] = psi'(0+) T when every path is stopped at T.
    PathConfig c;
    c.horizon_cap = 2.0;
    c.eps_tail = 1e-3;
    c.y_margin = 1e6;
    for (const auto* f : {&kBrownian, &kJump, &kPoisson}) {
        std::vector<double> ends;
        for (std::uint64_t i = 0; i < 4000; ++i) {
            const auto p = simulate_path(*f, c, 17, i);
            EXPECT_FALSE(p.truncated_cleanly);
            EXPECT_DOUBLE_EQ(p.end_time, 2.0);
            ends.push_back(p.values.back());
        }
        const auto e = summarize(ends);
        EXPECT_NEAR(e.mean, laplace_exponent_derivative(*f, 0.0) * 2.0, 4.0 * e.std_error);
    }
}

TEST(SimulatePath, UncleanPathRejectedByThetaExtraction) {
    PathConfig c;
    c.horizon_cap = 0.5;
    c.y_margin = 1e6;
    const auto p = simulate_path(kBrownian, c, 1, 0);
    EXPECT_THROW(extract_theta(p), DomainError);
    EXPECT_NO_THROW(extract_theta(p, true));
}

TEST(SimulatePath, AdaptiveGridRefinesNearSupremum) {
    PathConfig c;
    c.min_dt = 1e-6;
    const auto p = simulate_path(kBrownian, c, 4, 0);
    double smallest = 1.0;
    for (std::size_t k = 1; k < p.times.size(); ++k) smallest = std::min(smallest, p.times[k] - p.times[k - 1]);
    EXPECT_LT(smallest, 1e-4);
    EXPECT_GE(smallest, 1e-6 * (1 - 1e-9));
}

TEST(ReflectedPassage, FirstEpochOfDrawdown) {
    SimulatedPath p;
    p.times = {0, 1, 2, 3, 4};
    p.values = {0, 1, 0.5, -0.2, 2};
    p.running_sup = {0, 1, 1, 1, 2};
    EXPECT_EQ(*reflected_first_passage(p, 0.0), 0.0);
    EXPECT_EQ(*reflected_first_passage(p, 0.5), 2.0);
    EXPECT_EQ(*reflected_first_passage(p, 1.1), 3.0);
    EXPECT_FALSE(reflected_first_passage(p, 1.3).has_value());
}

TEST(ReflectedPieces, SplitAtNewMaximum) {
    ReflectedPiece out[2];
    // Stays below the level: one piece.
    ASSERT_EQ(reflected_pieces(0.0, 0.0, 1.0, -0.5, 1.0, out), 1);
    EXPECT_DOUBLE_EQ(out[0].duration, 1.0);
    EXPECT_DOUBLE_EQ(out[0].y_start, 1.0);
    EXPECT_DOUBLE_EQ(out[0].y_end, 1.5);
    // Crosses the level halfway: linear down to 0, then flat at 0.
    ASSERT_EQ(reflected_pieces(0.0, 0.0, 2.0, 2.0, 1.0, out), 2);
    EXPECT_DOUBLE_EQ(out[0].duration, 1.0);
    EXPECT_DOUBLE_EQ(out[0].y_end, 0.0);
    EXPECT_DOUBLE_EQ(out[1].duration, 1.0);
    EXPECT_DOUBLE_EQ(out[1].y_start, 0.0);
    EXPECT_DOUBLE_EQ(out[1].y_end, 0.0);
}

TEST(RunPath, ObserverCanStopEarly) {
    PathConfig c;
    auto engine = make_engine(3, 0);
    int seen = 0;
    const auto s = run_path(kBrownian, c, engine, [&](const PathEvent&) { return ++seen < 10; });
    EXPECT_EQ(s.termination, Termination::observer);
    EXPECT_EQ(seen, 10);
}

TEST(RunPath, UniformGridIndices) {
    PathConfig c;
    auto engine = make_engine(3, 1);
    std::uint64_t last = 0;
    bool ok = true;
    run_path(kJump, c, engine, [&](const PathEvent& e) {
        if (e.kind == EventKind::grid) {
            ok = ok && e.grid_index == last + 1 && std::abs(e.t - e.grid_index * c.dt) < 1e-9;
            last = e.grid_index;
        }
        return true;
    });
    EXPECT_TRUE(ok);
    EXPECT_GT(last, 100u);
}
