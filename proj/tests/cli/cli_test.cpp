#include <gtest/gtest.h>

#include <clocale>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "ultimum/error.hpp"

using namespace ultimum;
using namespace ultimum::cli;

namespace {

const std::string kFig1 = R"({"family":{"type":"jump_diffusion","sigma":0.5,"mu":0.5,"lambda":1.0,"eta":1.0}})";
const std::string kFig2 = R"({"family":{"type":"compound_poisson_drift","mu":2.0,"lambda":5.0,"eta":0.2}})";
const std::string kBrownian = R"({"family":{"type":"brownian_drift","sigma":1.0,"mu":-0.5}, "seed":42})";

std::string message_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

std::vector<std::pair<double, double>> parse_curve(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "y,V");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return rows;
}

}  // namespace

TEST(ParseConfig, ValidDocuments) {
    const auto b = parse_config(kBrownian);
    EXPECT_EQ(b.seed, 42u);
    EXPECT_TRUE(std::holds_alternative<BrownianDrift>(b.family));
    const auto j = parse_config(kFig1);
    EXPECT_DOUBLE_EQ(std::get<JumpDiffusion>(j.family).lambda, 1.0);
    EXPECT_EQ(j.simulation.paths, 100000u);
    EXPECT_DOUBLE_EQ(j.simulation.dt, 1e-3);
    EXPECT_DOUBLE_EQ(j.simulation.eps_tail, 1e-9);
}

TEST(ParseConfig, DegenerateFamilyCitesDriftCondition) {
    try {
        parse_config(R"({"family":{"type":"jump_diffusion","sigma":0.5,"mu":2.0,"lambda":1.0,"eta":1.0}})");
        FAIL();
    } catch (const DegenerateModelError& e) {
        EXPECT_NE(std::string(e.what()).find("drift condition ψ′(0+)<0 violated"), std::string::npos);
    }
}

TEST(ParseConfig, UnknownKeysAreNamed) {
    EXPECT_NE(message_of(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1},"sed":1})").find("'sed'"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1,"lambda":1}})").find("family.lambda"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1},"simulation":{"n":5}})")
                  .find("simulation.n"),
              std::string::npos);
}

TEST(ParseConfig, SchemaViolations) {
    EXPECT_THROW(parse_config("{not json"), ConfigError);
    EXPECT_THROW(parse_config("[]"), ConfigError);
    EXPECT_THROW(parse_config(R"({"seed":1})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"stable","alpha":1.5}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","sigma":-1,"mu":-1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","sigma":"1","mu":-1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","mu":-1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1},"seed":-3})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1},"simulation":{"dt":0}})"),
                 ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1},"occupation":{"y":3,"a":2}})"),
                 ConfigError);
    EXPECT_THROW(parse_config(R"({"family":{"type":"brownian_drift","sigma":1,"mu":-1},"verify":{"sweep":[-1]}})"),
                 ConfigError);
}

TEST(ParseConfig, EchoRoundTrips) {
    const auto cfg = parse_config(
        R"({"family":{"type":"jump_diffusion","sigma":0.5,"mu":0.5,"lambda":1.0,"eta":1.0},"seed":9,
            "simulation":{"paths":500,"dt":0.002},"verify":{"sweep":[1.0,2.5]},"occupation":{"y":0.1,"a":1.0}})");
    const auto again = parse_config(to_json(cfg).dump());
    EXPECT_EQ(to_json(again), to_json(cfg));
}

TEST(Solve, ReferenceThresholds) {
    const auto fig1 = solve_report(parse_config(kFig1));
    EXPECT_NEAR(fig1["result"]["y_star"].get<double>(), 2.0, 0.05);
    EXPECT_EQ(fig1["result"]["pasting"]["classification"], "smooth");
    const auto fig2 = solve_report(parse_config(kFig2));
    EXPECT_NEAR(fig2["result"]["y_star"].get<double>(), 0.73, 0.03);
    EXPECT_EQ(fig2["result"]["pasting"]["classification"], "continuous");
}

TEST(Solve, BrownianReport) {
    const auto r = solve_report(parse_config(kBrownian));
    EXPECT_NEAR(r["result"]["y_star"].get<double>(), 1.25643, 1e-5);
    EXPECT_NEAR(r["result"]["expected_theta"].get<double>(), 2.0, 1e-12);
    EXPECT_EQ(r["seed"], 42u);
    EXPECT_EQ(r["version"], ULTIMUM_VERSION);
    EXPECT_TRUE(r.contains("tolerances"));
    EXPECT_EQ(r["config"]["family"]["type"], "brownian_drift");
    EXPECT_FALSE(r.contains("timestamp"));
    EXPECT_EQ(r.dump(), solve_report(parse_config(kBrownian)).dump());
}

TEST(Curve, ShapeOfColumn) {
    for (const auto* text : {&kFig1, &kFig2, &kBrownian}) {
        const auto cfg = parse_config(*text);
        const auto rows = parse_curve(curve_csv(cfg));
        ASSERT_EQ(rows.size(), 500u);
        EXPECT_EQ(rows.front().first, 0.0);
        for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].second, rows[i - 1].second - 1e-12);
        for (std::size_t i = 450; i < rows.size(); ++i) EXPECT_EQ(rows[i].second, 0.0);
    }
}

TEST(Curve, LocaleIndependent) {
    const auto cfg = parse_config(kBrownian);
    const auto before = curve_csv(cfg);
    if (std::setlocale(LC_ALL, "de_DE.UTF-8") != nullptr) {
        EXPECT_EQ(curve_csv(cfg), before);
        std::setlocale(LC_ALL, "C");
    }
    EXPECT_EQ(before.find(';'), std::string::npos);
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(-1e-20), "-1e-20");
}

TEST(Verify, SmallRunIsReproducibleAndStructured) {
    auto cfg = parse_config(kFig2);
    cfg.simulation.paths = 2000;
    cfg.verify.supremum_paths = 2000;
    cfg.verify.sweep = {0.0, 0.5};
    const auto a = verify(cfg);
    const auto b = verify(cfg);
    EXPECT_EQ(a.report.dump(), b.report.dump());
    EXPECT_EQ(a.sweep_csv, b.sweep_csv);
    const auto& rows = a.report["sweep"]["rows"];
    ASSERT_EQ(rows.size(), 3u);
    // Stopping at once: E|theta - 0| = E[theta].
    const auto& zero = rows[0]["direct"];
    EXPECT_NEAR(zero["mean"].get<double>(), 0.236294896030245747, 3.0 * zero["std_error"].get<double>());
    EXPECT_TRUE(a.report.contains("supremum_check"));
    EXPECT_TRUE(a.report["verdict"] == "PASS" || a.report["verdict"] == "FAIL");
    EXPECT_EQ(a.sweep_csv.substr(0, a.sweep_csv.find('\n')),
              "y,direct,direct_se,representation,representation_se,bias_allowance,diff_vs_ystar,diff_se");
}

TEST(Verify, SeedOverrideChangesOutput) {
    auto cfg = parse_config(kFig2);
    cfg.simulation.paths = 500;
    cfg.verify.supremum_check = false;
    const auto a = verify(cfg);
    cfg.seed = 43;
    const auto b = verify(cfg);
    EXPECT_NE(a.sweep_csv, b.sweep_csv);
    EXPECT_EQ(b.report["seed"], 43u);
}

TEST(Verify, QualityFailureSurfaces) {
    auto cfg = parse_config(kBrownian);
    cfg.simulation.paths = 200;
    cfg.simulation.horizon_cap = 0.5;
    cfg.verify.supremum_check = false;
    EXPECT_THROW(verify(cfg), SimulationQualityError);
}

TEST(Occupation, CompoundPoissonReport) {
    auto cfg = parse_config(kFig2);
    cfg.simulation.paths = 3000;
    cfg.occupation = {0.0, 1.0, 10, 0.0};
    const auto r = occupation(cfg);
    const auto& atom = r.report["occupation"]["atom"];
    EXPECT_NEAR(atom["analytic"].get<double>(), 0.2156, 1e-3);
    EXPECT_EQ(r.report["occupation"]["bins"].size(), 10u);
    EXPECT_EQ(r.bins_csv.substr(0, r.bins_csv.find('\n')), "x_lo,x_hi,estimate,std_error,analytic,z");
}
