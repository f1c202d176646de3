#include <gtest/gtest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "mfgc/commands.hpp"
#include "oracles.hpp"

namespace mfgc {
namespace {

RunConfig config_for(const ModelParams& p)
{
    RunConfig cfg;
    cfg.params = p;
    return cfg;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <class F>
std::string capture(F&& f)
{
    std::ostringstream os;
    f(os);
    return os.str();
}

TEST(FormatReal, RoundTripsAndInfinities)
{
    EXPECT_EQ(format_real(8.0), "8");
    EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "+inf");
    EXPECT_EQ(format_real(-std::numeric_limits<double>::infinity()), "-inf");
    const double v = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_real(v)), v);
}

TEST(CmdClassify, UniqueCorrupt)
{
    const auto cfg = config_for(oracle::params(1, 1, 1, 0, 1, 0, 0, 1, 10));
    EXPECT_EQ(capture([&](auto& os) { cmd_classify(cfg, os); }), "x_bar = 8, regime: unique corrupt equilibrium\n");
}

TEST(CmdClassify, InfiniteThresholdAndDiscountLine)
{
    auto cfg = config_for(oracle::baseline());
    EXPECT_EQ(lines(capture([&](auto& os) { cmd_classify(cfg, os); }))[0],
              "x_bar = +inf, regime: unique corrupt equilibrium");

    cfg.params = oracle::params(1, 1, 1, 0, 1, 0, 0, 1, 10);
    cfg.params.delta = 1.0;
    const auto out = lines(capture([&](auto& os) { cmd_classify(cfg, os); }));
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1].rfind("x_bar(delta=1) = ", 0), 0u);
    EXPECT_EQ(std::stod(out[1].substr(17)), classifier_xbar_discounted(cfg.params, 1.0).value);
}

TEST(CmdClassify, StructuredDocument)
{
    auto cfg = config_for(oracle::baseline());
    cfg.format = OutputFormat::Structured;
    const auto j = nlohmann::json::parse(capture([&](auto& os) { cmd_classify(cfg, os); }));
    EXPECT_EQ(j["x_bar"], "+inf");
    EXPECT_EQ(j["regime"], "unique corrupt equilibrium");
}

TEST(CmdEquilibria, ThreeRowsWithVerdicts)
{
    const auto cfg = config_for(oracle::three_equilibria());
    std::ostringstream summary;
    const auto out = lines(capture([&](auto& os) { cmd_equilibria(cfg, os, &summary); }));
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out[0], kEquilibriaHeader);
    EXPECT_EQ(fields(out[1])[0], "CorruptRoot");
    EXPECT_EQ(fields(out[1])[8], "InconclusiveFellBack");
    EXPECT_EQ(fields(out[2])[0], "HonestInterior");
    EXPECT_EQ(fields(out[2])[7], "Stable");
    EXPECT_EQ(fields(out[3])[0], "HonestBoundary");
    EXPECT_EQ(fields(out[3])[7], "Unstable");
    EXPECT_FALSE(summary.str().empty());
}

TEST(CmdEquilibria, NoInteractionSingleStableRow)
{
    const auto out = lines(capture([&](auto& os) { cmd_equilibria(config_for(oracle::baseline()), os); }));
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(fields(out[1])[7], "Stable");
}

// Re-parse an emitted table and recompute residuals from the printed states.
void check_round_trip(const ModelParams& p)
{
    const auto out = lines(capture([&](auto& os) { cmd_equilibria(config_for(p), os); }));
    ASSERT_GE(out.size(), 2u);
    for (std::size_t i = 1; i < out.size(); ++i) {
        const auto f = fields(out[i]);
        ASSERT_EQ(f.size(), 12u);
        const auto x = PopulationState::make(std::stod(f[2]), std::stod(f[3]), std::stod(f[4]));
        const StrategyProfile s{f[5] == "1", f[6] == "1"};
        const double residual = std::stod(f[11]);
        EXPECT_LE(residual, 1e-9);
        EXPECT_NEAR(kinetic_rhs(p, x, s).max_norm(), residual, 1e-12);
    }
}

TEST(CmdEquilibria, TableRoundTrip)
{
    check_round_trip(oracle::baseline());
    check_round_trip(oracle::three_equilibria());
    oracle::ParamSampler gen(61);
    for (int i = 0; i < 200; ++i) check_round_trip(gen.draw());
}

TEST(CmdEquilibria, StructuredDocument)
{
    auto cfg = config_for(oracle::three_equilibria());
    cfg.format = OutputFormat::Structured;
    const auto j = nlohmann::json::parse(capture([&](auto& os) { cmd_equilibria(cfg, os); }));
    ASSERT_EQ(j["equilibria"].size(), 3u);
    EXPECT_EQ(j["equilibria"][1]["provenance"], "HonestInterior");
    EXPECT_TRUE(j["equilibria"][0].contains("diagnostics"));
}

TEST(CmdSimulate, HeaderAndRowCount)
{
    auto cfg = config_for(oracle::baseline());
    cfg.x0 = PopulationState::make(0, 1, 0);
    cfg.t_end = 50.0;
    cfg.dt = 0.01;
    const auto out = lines(capture([&](auto& os) { cmd_simulate(cfg, os); }));
    EXPECT_EQ(out[0], "t,x_R,x_H,x_C");
    EXPECT_EQ(out.size(), 1u + 5001u);
    const auto f = fields(out.back());
    EXPECT_NEAR(std::stod(f[2]), 1.0 / 3, 1e-6);
    EXPECT_NEAR(std::stod(f[3]), 1.0 / 3, 1e-6);

    cfg.dt = 0.5;
    EXPECT_THROW(cmd_simulate(cfg, std::cout), NumericalGuardError);
}

TEST(CmdCtmc, DeterministicAndConserving)
{
    auto cfg = config_for(oracle::three_equilibria());
    cfg.N = 200;
    cfg.t_end = 5.0;
    cfg.replications = 3;
    cfg.seed = 7;
    const auto a = capture([&](auto& os) { cmd_ctmc(cfg, os); });
    const auto b = capture([&](auto& os) { cmd_ctmc(cfg, os); });
    EXPECT_EQ(a, b);
    cfg.seed = 8;
    EXPECT_NE(a, capture([&](auto& os) { cmd_ctmc(cfg, os); }));

    const auto out = lines(a);
    EXPECT_EQ(out[0], "t,transition,n_R,n_H,n_C");
    EXPECT_EQ(out.back().rfind("# lln_distance = ", 0), 0u);
    for (std::size_t i = 1; i + 1 < out.size(); ++i) {
        const auto f = fields(out[i]);
        ASSERT_EQ(f.size(), 5u);
        EXPECT_EQ(std::stoll(f[2]) + std::stoll(f[3]) + std::stoll(f[4]), 200);
    }
}

RunConfig sweep_config(double from, double to, int points)
{
    auto cfg = config_for(oracle::three_equilibria());
    cfg.sweep = SweepGrid{SweepAxis::B, from, to, points};
    return cfg;
}

TEST(CmdSweep, RowsPerPointAndTransition)
{
    const auto cfg = sweep_config(0.2, 2.0, 10);
    const auto out = lines(capture([&](auto& os) { cmd_sweep(cfg, os); }));
    EXPECT_EQ(out[0], kSweepHeader);
    EXPECT_GE(out.size() - 1, 10u);
    std::map<std::string, int> per_point;
    std::vector<std::string> order;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const auto f = fields(out[i]);
        ASSERT_EQ(f.size(), 10u);
        EXPECT_TRUE(f[9].empty()) << f[9];
        if (!per_point.contains(f[0])) order.push_back(f[0]);
        ++per_point[f[0]];
        ModelParams p = cfg.params;
        p.b = std::stod(f[0]);
        // same threshold as cmd_classify
        EXPECT_EQ(f[1], format_real(classifier_xbar(p).value));
    }
    ASSERT_EQ(order.size(), 10u);
    EXPECT_EQ(per_point[order.front()], 3);
    EXPECT_EQ(per_point[order.back()], 1);
}

TEST(CmdSweep, OrderedByGridThenHonestFraction)
{
    const auto out = lines(capture([&](auto& os) { cmd_sweep(sweep_config(0.05, 0.5, 10), os); }));
    double prev_v = -1.0, prev_h = -1.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const auto f = fields(out[i]);
        const double v = std::stod(f[0]);
        const double h = std::stod(f[4]);
        if (v == prev_v) EXPECT_GE(h, prev_h);
        else EXPECT_GT(v, prev_v);
        prev_v = v;
        prev_h = h;
    }
}

TEST(CmdSweep, ErrorColumnForInvalidPoints)
{
    // b < 0 is invalid; the sweep continues past it
    const auto out = lines(capture([&](auto& os) { cmd_sweep(sweep_config(-0.1, 0.2, 4), os); }));
    const auto first = fields(out[1]);
    ASSERT_EQ(first.size(), 10u);
    EXPECT_FALSE(first[9].empty());
    EXPECT_TRUE(fields(out.back())[9].empty());
}

TEST(CmdSweep, RequiresGrid)
{
    EXPECT_THROW(cmd_sweep(config_for(oracle::baseline()), std::cout), ConfigError);
}

} // namespace
} // namespace mfgc
