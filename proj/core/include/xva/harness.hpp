#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xva/fbsde_mc.hpp"
#include "xva/market_config.hpp"
#include "xva/solver.hpp"

namespace xva::harness {

/// log2(err[i-1] / err[i]); the first entry has no predecessor and is NaN.
std::vector<double> eoc(const std::vector<double>& errors);

struct FieldError {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Both fields evaluated at the Gauss nodes of the coarse mesh; L2 by the
/// coarse Gauss rule, Linf as the maximum over the same nodes.
FieldError field_error(const ldg::DGField& coarse, const ldg::DGField& reference);

struct ConvergenceRow {
    int N = 0;
    int L = 0;
    double errL2 = 0.0;
    double eocL2 = 0.0;  // NaN on the first row
    double errLinf = 0.0;
    double eocLinf = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    int refN = 0;
    int refL = 0;
    double runtimeSeconds = 0.0;
};

struct LadderSpec {
    std::vector<int> cells{10, 20, 40, 80, 160, 320, 640};
    /// Per-level step counts; empty means the CFL rule.
    std::vector<int> steps;
    int refCells = 1280;
    int refSteps = 230;  // 0: the CFL rule
};

/// Levels run concurrently. Every level must divide the reference by a power
/// of two. The strike-node requirement is lifted for the whole ladder.
ConvergenceReport run_convergence(const RunConfig& config, const LadderSpec& ladder,
                                  const solver::SolveOptions& options = {}, unsigned threads = 0);

/// Reference ladders with fixed step counts.
LadderSpec table2_ladder();
LadderSpec table4_ladder(double sigma);

struct Table3Cell {
    double pde = 0.0;
    std::optional<fbsde::McEstimate> mc;
};

struct Table3 {
    std::vector<double> spots{5, 10, 15, 20, 30, 60};
    /// Columns: put-linear, put-nonlinear, call-linear, call-nonlinear.
    std::vector<std::array<Table3Cell, 4>> rows;
    static const std::array<std::string, 4>& column_names();
};

struct Table3Options {
    int cells = 1280;
    int steps = 230;
    bool withMc = true;
    fbsde::RegressionGrid mcGrid;
    std::uint64_t seed = 20240521;
    bool useBaseline = true;
    double theta = 0.5;
    std::vector<double> spots{5, 10, 15, 20, 30, 60};
};

/// The column's option kind and MTM convention, in table order.
RunConfig table3_column(const RunConfig& base, int column);
Table3 run_table3(const RunConfig& base, const Table3Options& options = {}, unsigned threads = 0);

enum class SweepParameter { Sigma, GammaK, RX };
SweepParameter parse_sweep_parameter(const std::string& s);
std::string to_string(SweepParameter p);
std::vector<double> default_sweep_values(SweepParameter p);

struct SweepPoint {
    double value = 0.0;
    std::string label;  // "no-KVA" for the gamma^K = 0.06 curve
    std::vector<solver::GreekSample> samples;
};

struct SweepResult {
    SweepParameter parameter = SweepParameter::Sigma;
    std::vector<SweepPoint> points;
    /// For gammaK and rX: XVA nonincreasing in the parameter at every spot.
    bool monotoneNonincreasing = true;
};

SweepResult run_sweep(const RunConfig& base, SweepParameter parameter,
                      const std::vector<double>& values, const std::vector<double>& spots,
                      unsigned threads = 0);

// Output. Numbers use a fixed %.10e format so files are byte-stable.
std::string format_number(double v);
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);
void write_convergence_table(std::ostream& os, const ConvergenceReport& report);
void write_table3_csv(std::ostream& os, const Table3& table);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_greeks_csv(std::ostream& os, const std::vector<solver::GreekSample>& samples);
/// Raw nodal data: cell, node, S, value, q.
void write_nodal_csv(std::ostream& os, const solver::SolveResult& result);
nlohmann::json run_metadata(const RunConfig& config, const solver::SolveResult& result);

}  // namespace xva::harness
