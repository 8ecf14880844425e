#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "xva/error.hpp"
#include "xva/market_config.hpp"

using namespace xva;

TEST(MarketConfig, DefaultsCarryTableOneData) {
    const RunConfig c = default_config();
    EXPECT_EQ(c.option.strike, 15.0);
    EXPECT_EQ(c.option.maturity, 1.0);
    EXPECT_DOUBLE_EQ(c.market.beta(), 0.06);
    EXPECT_NEAR(c.market.convection(), 0.03, 1e-15);
    EXPECT_NEAR(c.market.rB, 0.06 + 0.00133 * 0.3, 1e-15);
    EXPECT_NEAR(c.market.rC, 0.06 + 0.0103 * 0.22, 1e-15);
    EXPECT_EQ(c.capital.eta, 0.08);
    EXPECT_EQ(c.capital.LR, 0.03);
    EXPECT_NO_THROW(validate(c));
}

TEST(MarketConfig, ZeroBasisHoldsAfterDerivation) {
    const auto m = default_config().market;
    EXPECT_LE(std::abs(m.lambdaC - (m.rC - m.qC) / (1.0 - m.RC)), 1e-12);
    EXPECT_LE(std::abs(m.lambdaB - (m.rB - m.r) / (1.0 - m.RB)), 1e-12);
}

TEST(MarketConfig, BetaIsRepoMinusDividend) {
    MarketParams m;
    m.qS = 0.05;
    m.gammaS = 0.02;
    EXPECT_EQ(m.beta(), 0.05 - 0.02);
}

TEST(MarketConfig, DerivesZeroIntensityFromEqualRates) {
    const auto c = parse_config({{"r_b", 0.06}, {"r", 0.06}, {"recovery_b", 0.7}});
    EXPECT_EQ(c.market.lambdaB, 0.0);
}

TEST(MarketConfig, RejectsInconsistentCounterpartyTriple) {
    const double spread = 0.0103 * 0.22;
    nlohmann::json j{{"lambda_c", 0.0103}, {"r_c", 0.06 + 1.1 * spread}, {"q_c", 0.06},
                     {"recovery_c", 0.78}};
    try {
        parse_config(j);
        FAIL() << "expected a zero-basis violation";
    } catch (const Error& e) {
        EXPECT_EQ(e.field(), "lambda_c");
    }
}

TEST(MarketConfig, DerivesRateFromIntensity) {
    const auto c = parse_config({{"lambda_c", 0.02}, {"q_c", 0.05}});
    EXPECT_NEAR(c.market.rC, 0.05 + 0.02 * 0.22, 1e-15);
}

TEST(MarketConfig, RejectsUnknownKeys) {
    EXPECT_THROW(parse_config({{"sigmaa", 0.3}}), Error);
}

TEST(MarketConfig, RejectsLowLeverageRatio) {
    try {
        parse_config({{"leverage_ratio", 0.02}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.field(), "leverage_ratio");
    }
}

TEST(MarketConfig, RejectsOutOfRangeFields) {
    EXPECT_THROW(parse_config({{"sigma", 0.0}}), Error);
    EXPECT_THROW(parse_config({{"gamma_x", 1.5}}), Error);
    EXPECT_THROW(parse_config({{"poly_degree", 3}}), Error);
    EXPECT_THROW(parse_config({{"cells", 1}}), Error);
    EXPECT_THROW(parse_config({{"strike", -1.0}}), Error);
}

TEST(MarketConfig, StrikeMustBeANode) {
    EXPECT_NO_THROW(parse_config({{"cells", 640}}));
    EXPECT_THROW(parse_config({{"cells", 10}}), Error);  // K / h = 2.5
    EXPECT_NO_THROW(parse_config({{"cells", 10}, {"require_strike_node", false}}));
}

TEST(MarketConfig, RoundTripThroughJsonAndFile) {
    RunConfig c = default_config();
    c.option.kind = OptionKind::Put;
    c.market.sigma = 0.25;
    c.mtmConvention = MtmConvention::RiskFree;
    c.cells = 320;
    c.polyDegree = 2;
    c.capital.multiplierSlope = 0.095;

    const auto path = std::filesystem::temp_directory_path() / "xva_roundtrip.json";
    {
        std::ofstream os(path);
        os << to_json(c).dump(2);
    }
    const RunConfig back = load_config(path);
    std::filesystem::remove(path);
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(MarketConfig, LoadReportsMissingFileAndBadJson) {
    EXPECT_THROW(load_config("/nonexistent/xva.json"), Error);
    const auto path = std::filesystem::temp_directory_path() / "xva_bad.json";
    {
        std::ofstream os(path);
        os << "{ not json";
    }
    EXPECT_THROW(load_config(path), Error);
    std::filesystem::remove(path);
}

TEST(MarketConfig, Payoff) {
    OptionSpec call{OptionKind::Call, 15.0, 1.0};
    OptionSpec put{OptionKind::Put, 15.0, 1.0};
    EXPECT_EQ(payoff(call, 20.0), 5.0);
    EXPECT_EQ(payoff(put, 20.0), 0.0);
    EXPECT_EQ(payoff(call, 15.0), 0.0);
    EXPECT_EQ(payoff(put, 10.0), 5.0);
}

TEST(MarketConfig, EnumStrings) {
    EXPECT_EQ(parse_option_kind("call"), OptionKind::Call);
    EXPECT_EQ(parse_mtm("garcia"), MtmConvention::GarciaKVA);
    EXPECT_EQ(to_string(parse_mtm("linear")), "linear");
    EXPECT_THROW(parse_option_kind("straddle"), Error);
}
