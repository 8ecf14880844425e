#include "xva/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>

#include "xva/analytic_bs.hpp"
#include "xva/error.hpp"
#include "xva/parallel.hpp"

namespace xva::harness {

std::vector<double> eoc(const std::vector<double>& errors) {
    std::vector<double> out(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < errors.size(); ++i) out[i] = std::log2(errors[i - 1] / errors[i]);
    return out;
}

FieldError field_error(const ldg::DGField& coarse, const ldg::DGField& reference) {
    const auto& space = *coarse.space;
    const auto& w = space.basis().weights();
    const double half = 0.5 * space.mesh().h;
    FieldError e;
    double sum = 0.0;
    for (int j = 0; j < space.mesh().cells; ++j) {
        for (int i = 0; i < space.basis().size(); ++i) {
            const double d = coarse.value(j, i) - reference(space.point(j, i));
            sum += half * w[i] * d * d;
            e.linf = std::max(e.linf, std::abs(d));
        }
    }
    e.l2 = std::sqrt(sum);
    return e;
}

namespace {

bool nested(int coarse, int fine) {
    if (coarse <= 0 || fine % coarse != 0) return false;
    const int ratio = fine / coarse;
    return (ratio & (ratio - 1)) == 0;
}

}  // namespace

ConvergenceReport run_convergence(const RunConfig& config, const LadderSpec& ladder,
                                  const solver::SolveOptions& options, unsigned threads) {
    if (!ladder.steps.empty() && ladder.steps.size() != ladder.cells.size())
        throw Error("ladder step list does not match the cell list", "steps");
    for (int N : ladder.cells)
        if (!nested(N, ladder.refCells))
            throw Error("ladder level " + std::to_string(N) + " does not nest in the reference",
                        "cells");
    const auto start = std::chrono::steady_clock::now();

    // slot 0 is the reference, slots 1.. the ladder
    const std::size_t runs = ladder.cells.size() + 1;
    std::vector<solver::SolveResult> results(runs);
    parallel_for(
        runs,
        [&](std::size_t i) {
            RunConfig c = config;
            c.requireStrikeNode = false;
            if (i == 0) {
                c.cells = ladder.refCells;
                c.timeSteps = ladder.refSteps;
            } else {
                c.cells = ladder.cells[i - 1];
                c.timeSteps = ladder.steps.empty() ? 0 : ladder.steps[i - 1];
            }
            results[i] = solver::solve(c, options);
        },
        threads);

    ConvergenceReport report;
    report.refN = ladder.refCells;
    report.refL = results[0].meta.steps;
    std::vector<double> l2, linf;
    for (std::size_t i = 1; i < runs; ++i) {
        const auto e = field_error(results[i].valueField, results[0].valueField);
        ConvergenceRow row;
        row.N = results[i].meta.cells;
        row.L = results[i].meta.steps;
        row.errL2 = e.l2;
        row.errLinf = e.linf;
        report.rows.push_back(row);
        l2.push_back(e.l2);
        linf.push_back(e.linf);
    }
    const auto eL2 = eoc(l2), eLinf = eoc(linf);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        report.rows[i].eocL2 = eL2[i];
        report.rows[i].eocLinf = eLinf[i];
    }
    report.runtimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

LadderSpec table2_ladder() {
    LadderSpec l;
    l.steps = {1, 3, 7, 14, 28, 57, 115};
    l.refSteps = 230;
    return l;
}

LadderSpec table4_ladder(double sigma) {
    LadderSpec l;
    if (std::abs(sigma - 0.05) < 1e-12) {
        l.steps = {5, 11, 22, 45, 91, 183, 367};
        l.refSteps = 735;
    } else {
        l.steps = {2, 5, 11, 23, 47, 95, 190};
        l.refSteps = 383;
    }
    return l;
}

const std::array<std::string, 4>& Table3::column_names() {
    static const std::array<std::string, 4> names{"put_linear", "put_nonlinear", "call_linear",
                                                  "call_nonlinear"};
    return names;
}

RunConfig table3_column(const RunConfig& base, int column) {
    RunConfig c = base;
    c.option.kind = column < 2 ? OptionKind::Put : OptionKind::Call;
    c.mtmConvention = column % 2 == 0 ? MtmConvention::RiskFree : MtmConvention::Risky;
    return c;
}

Table3 run_table3(const RunConfig& base, const Table3Options& options, unsigned threads) {
    Table3 table;
    table.spots = options.spots;
    table.rows.assign(options.spots.size(), {});
    std::array<solver::SolveResult, 4> pde;
    parallel_for(
        4,
        [&](std::size_t col) {
            RunConfig c = table3_column(base, static_cast<int>(col));
            c.cells = options.cells;
            c.timeSteps = options.steps;
            pde[col] = solver::solve(c);
        },
        threads);
    for (int col = 0; col < 4; ++col) {
        for (std::size_t r = 0; r < options.spots.size(); ++r)
            table.rows[r][col].pde = pde[col].xva(options.spots[r]);
        if (!options.withMc) continue;
        const RunConfig c = table3_column(base, col);
        drivers::DriverContext ctx;
        ctx.kind = drivers::driver_for(c.mtmConvention);
        ctx.option = c.option;
        ctx.market = c.market;
        ctx.capital = c.capital;
        const auto mc = fbsde::xva_mc(options.mcGrid, ctx, options.spots, options.seed,
                                      {threads, options.useBaseline, options.theta});
        for (std::size_t r = 0; r < mc.size(); ++r) table.rows[r][col].mc = mc[r];
    }
    return table;
}

SweepParameter parse_sweep_parameter(const std::string& s) {
    if (s == "sigma") return SweepParameter::Sigma;
    if (s == "gammaK" || s == "gamma_k") return SweepParameter::GammaK;
    if (s == "rX" || s == "r_x") return SweepParameter::RX;
    throw Error("unknown sweep parameter '" + s + "'", "parameter");
}

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Sigma: return "sigma";
        case SweepParameter::GammaK: return "gammaK";
        case SweepParameter::RX: return "rX";
    }
    return "unknown";
}

std::vector<double> default_sweep_values(SweepParameter p) {
    switch (p) {
        case SweepParameter::Sigma: return {0.05, 0.1, 0.2, 0.3, 0.4};
        case SweepParameter::GammaK: return {0.06, 0.1, 0.15, 0.2, 0.25};
        case SweepParameter::RX: return {0.06, 0.07, 0.08, 0.09, 0.1};
    }
    return {};
}

SweepResult run_sweep(const RunConfig& base, SweepParameter parameter,
                      const std::vector<double>& values, const std::vector<double>& spots,
                      unsigned threads) {
    SweepResult out;
    out.parameter = parameter;
    out.points.resize(values.size());
    parallel_for(
        values.size(),
        [&](std::size_t i) {
            RunConfig c = base;
            const double v = values[i];
            switch (parameter) {
                case SweepParameter::Sigma: c.market.sigma = v; break;
                case SweepParameter::GammaK: c.market.gammaK = v; break;
                case SweepParameter::RX: c.market.rX = v; break;
            }
            auto& p = out.points[i];
            p.value = v;
            if (parameter == SweepParameter::GammaK && std::abs(v - 0.06) < 1e-12)
                p.label = "no-KVA";
            p.samples = solver::greeks(solver::solve(c), spots);
        },
        threads);

    if (parameter != SweepParameter::Sigma) {
        std::vector<std::size_t> order(values.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        for (std::size_t k = 1; k < order.size(); ++k)
            for (std::size_t s = 0; s < spots.size(); ++s)
                if (out.points[order[k]].samples[s].xva >
                    out.points[order[k - 1]].samples[s].xva + 1e-12)
                    out.monotoneNonincreasing = false;
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "N,L,err_l2,eoc_l2,err_linf,eoc_linf\n";
    for (const auto& r : report.rows)
        os << r.N << ',' << r.L << ',' << format_number(r.errL2) << ',' << format_number(r.eocL2)
           << ',' << format_number(r.errLinf) << ',' << format_number(r.eocLinf) << '\n';
}

void write_convergence_table(std::ostream& os, const ConvergenceReport& report) {
    auto eocText = [](double v) {
        if (std::isnan(v)) return std::string("-");
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    auto errText = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return std::string(buf);
    };
    os << std::setw(6) << "N" << std::setw(6) << "L" << std::setw(12) << "L2-err"
       << std::setw(8) << "EOC" << std::setw(12) << "Linf-err" << std::setw(8) << "EOC" << '\n';
    for (const auto& r : report.rows)
        os << std::setw(6) << r.N << std::setw(6) << r.L << std::setw(12) << errText(r.errL2)
           << std::setw(8) << eocText(r.eocL2) << std::setw(12) << errText(r.errLinf)
           << std::setw(8) << eocText(r.eocLinf) << '\n';
    os << "reference: N=" << report.refN << " L=" << report.refL << '\n';
}

void write_table3_csv(std::ostream& os, const Table3& table) {
    os << "S";
    for (const auto& name : Table3::column_names())
        os << ',' << name << "_fbsde," << name << "_fbsde_stderr," << name << "_pde";
    os << '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << format_number(table.spots[r]);
        for (const auto& cell : table.rows[r]) {
            if (cell.mc)
                os << ',' << format_number(cell.mc->xva) << ',' << format_number(cell.mc->stdError);
            else
                os << ",,";
            os << ',' << format_number(cell.pde);
        }
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << to_string(sweep.parameter) << ",label,S,value,delta,gamma,xva\n";
    for (const auto& p : sweep.points)
        for (const auto& s : p.samples)
            os << format_number(p.value) << ',' << p.label << ',' << format_number(s.S) << ','
               << format_number(s.value) << ',' << format_number(s.delta) << ','
               << format_number(s.gamma) << ',' << format_number(s.xva) << '\n';
}

void write_greeks_csv(std::ostream& os, const std::vector<solver::GreekSample>& samples) {
    os << "S,value,delta,gamma,xva\n";
    for (const auto& s : samples)
        os << format_number(s.S) << ',' << format_number(s.value) << ','
           << format_number(s.delta) << ',' << format_number(s.gamma) << ','
           << format_number(s.xva) << '\n';
}

void write_nodal_csv(std::ostream& os, const solver::SolveResult& result) {
    const auto& space = *result.valueField.space;
    os << "cell,node,S,value,q\n";
    for (int j = 0; j < space.mesh().cells; ++j)
        for (int i = 0; i < space.basis().size(); ++i)
            os << j << ',' << i << ',' << format_number(space.point(j, i)) << ','
               << format_number(result.valueField.value(j, i)) << ','
               << format_number(result.qField.value(j, i)) << '\n';
}

nlohmann::json run_metadata(const RunConfig& config, const solver::SolveResult& result) {
    nlohmann::json j;
    j["config"] = to_json(config);
    j["cells"] = result.meta.cells;
    j["degree"] = result.meta.degree;
    j["time_steps"] = result.meta.steps;
    j["dt"] = result.meta.dt;
    j["smax"] = result.meta.smax;
    j["scheme_order"] = result.meta.schemeOrder;
    j["flux_variant"] = result.meta.variant == ldg::FluxVariant::A1_CallBC ? "A1" : "A2";
    j["driver"] = solver::to_string(result.meta.driver);
    j["runtime_seconds"] = result.meta.runtimeSeconds;
    return j;
}

}  // namespace xva::harness
