#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xva/error.hpp"
#include "xva/harness.hpp"

using namespace xva;
using namespace xva::harness;

TEST(Harness, EocOnSyntheticSequences) {
    const auto e = eoc({1.0, 0.25, 0.0625, 0.0078125});
    ASSERT_EQ(e.size(), 4u);
    EXPECT_TRUE(std::isnan(e[0]));
    EXPECT_DOUBLE_EQ(e[1], 2.0);
    EXPECT_DOUBLE_EQ(e[2], 2.0);
    EXPECT_DOUBLE_EQ(e[3], 3.0);
    EXPECT_TRUE(eoc({}).empty());
}

TEST(Harness, FieldErrorOfIdenticalAndExactlyRepresentedFields) {
    auto coarse = std::make_shared<const ldg::Space>(ldg::Mesh(60.0, 10), 1);
    auto fine = std::make_shared<const ldg::Space>(ldg::Mesh(60.0, 40), 1);
    const auto f = [](double S) { return 0.5 * S - 3.0; };
    const auto a = ldg::interpolate(f, coarse);
    const auto b = ldg::interpolate(f, fine);
    EXPECT_LT(field_error(a, a).l2, 1e-13);
    EXPECT_LT(field_error(a, b).l2, 1e-12);
    EXPECT_LT(field_error(a, b).linf, 1e-12);
    const auto c = ldg::interpolate([](double S) { return 0.5 * S - 2.0; }, fine);
    EXPECT_NEAR(field_error(a, c).l2, std::sqrt(60.0), 1e-10);
    EXPECT_NEAR(field_error(a, c).linf, 1.0, 1e-12);
}

TEST(Harness, LaddersCarryThePrintedStepCounts) {
    const auto t2 = table2_ladder();
    EXPECT_EQ(t2.steps, (std::vector<int>{1, 3, 7, 14, 28, 57, 115}));
    EXPECT_EQ(t2.refSteps, 230);
    EXPECT_EQ(table4_ladder(0.3).refSteps, 383);
    EXPECT_EQ(table4_ladder(0.05).refSteps, 735);
    EXPECT_EQ(table4_ladder(0.05).steps.back(), 367);
}

TEST(Harness, SmallSelfConvergence) {
    RunConfig c = default_config();
    c.option.kind = OptionKind::Put;
    LadderSpec l;
    l.cells = {20, 40, 80};
    l.steps = {};
    l.refCells = 320;
    l.refSteps = 0;
    const auto rep = run_convergence(c, l);
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_TRUE(std::isnan(rep.rows[0].eocL2));
    EXPECT_GT(rep.rows[2].eocL2, 1.5);
    EXPECT_LT(rep.rows[2].errL2, rep.rows[1].errL2);
    EXPECT_EQ(rep.refN, 320);
}

TEST(Harness, NonNestedLadderThrows) {
    LadderSpec l;
    l.cells = {30};
    l.refCells = 80;
    EXPECT_THROW(run_convergence(default_config(), l), Error);
}

TEST(Harness, CsvIsByteStable) {
    EXPECT_EQ(format_number(0.1), "1.0000000000e-01");
    ConvergenceReport r;
    r.rows.push_back({10, 1, 0.5, std::nan(""), 0.25, std::nan("")});
    r.rows.push_back({20, 3, 0.125, 2.0, 0.0625, 2.0});
    std::ostringstream a, b;
    write_convergence_csv(a, r);
    write_convergence_csv(b, r);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str().find("2.0000000000e+00"), std::string::npos);
}

TEST(Harness, Table3ColumnMapping) {
    const auto base = default_config();
    EXPECT_EQ(table3_column(base, 0).option.kind, OptionKind::Put);
    EXPECT_EQ(table3_column(base, 0).mtmConvention, MtmConvention::RiskFree);
    EXPECT_EQ(table3_column(base, 3).option.kind, OptionKind::Call);
    EXPECT_EQ(table3_column(base, 3).mtmConvention, MtmConvention::Risky);
    EXPECT_EQ(Table3::column_names()[1], "put_nonlinear");
}

TEST(Harness, CapitalCostSweepIsMonotone) {
    RunConfig c = default_config();
    c.cells = 80;
    for (auto kind : {OptionKind::Call, OptionKind::Put}) {
        c.option.kind = kind;
        const auto s = run_sweep(c, SweepParameter::GammaK, default_sweep_values(SweepParameter::GammaK),
                                 {5, 10, 15, 20, 30});
        EXPECT_TRUE(s.monotoneNonincreasing) << to_string(kind);
        EXPECT_EQ(s.points.size(), 5u);
        EXPECT_EQ(s.points[0].label, "no-KVA");
        EXPECT_EQ(s.points[1].label, "");
    }
}

TEST(Harness, CollateralRateSweep) {
    RunConfig c = default_config();
    c.cells = 80;
    c.option.kind = OptionKind::Put;
    const auto values = default_sweep_values(SweepParameter::RX);
    EXPECT_TRUE(run_sweep(c, SweepParameter::RX, values, {5, 10, 15, 20, 30}).monotoneNonincreasing);
    // Where the adjusted call price is negative the collateral is posted by
    // the bank, so a higher collateral rate slightly reduces the adjustment.
    c.option.kind = OptionKind::Call;
    EXPECT_TRUE(run_sweep(c, SweepParameter::RX, values, {10, 15, 20, 30}).monotoneNonincreasing);
    const auto low = run_sweep(c, SweepParameter::RX, values, {5});
    EXPECT_FALSE(low.monotoneNonincreasing);
    EXPECT_LT(low.points.front().samples[0].value, 0.0);
}

TEST(Harness, VolatilitySweepStaysBounded) {
    RunConfig c = default_config();
    c.cells = 160;
    std::vector<double> spots;
    for (double S = 0.0; S <= 60.0; S += 0.25) spots.push_back(S);
    const auto s = run_sweep(c, SweepParameter::Sigma, {0.05, 0.3}, spots);
    for (const auto& p : s.points) {
        double lo = 1.0, hi = 0.0;
        for (const auto& g : p.samples) {
            ASSERT_TRUE(std::isfinite(g.value) && std::isfinite(g.delta));
            lo = std::min(lo, g.delta);
            hi = std::max(hi, g.delta);
        }
        EXPECT_LE(hi, 1.05);
        // the mesh-converged dip of the adjusted call price at low spot
        EXPECT_GE(lo, -0.05);
    }
    EXPECT_EQ(parse_sweep_parameter("gammaK"), SweepParameter::GammaK);
    EXPECT_THROW(parse_sweep_parameter("bogus"), Error);
}

TEST(Harness, MetadataRecordsTheRun) {
    RunConfig c = default_config();
    c.cells = 40;
    const auto r = solver::solve(c);
    const auto j = run_metadata(c, r);
    EXPECT_EQ(j.at("cells").get<int>(), 40);
    std::ostringstream os;
    write_nodal_csv(os, r);
    const std::string text = os.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 80);
}
