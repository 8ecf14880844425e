#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xva/breakdown.hpp"
#include "xva/error.hpp"
#include "xva/fbsde_mc.hpp"
#include "xva/harness.hpp"
#include "xva/market_config.hpp"
#include "xva/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::optional<std::string> option;
    std::optional<std::string> driver;
    std::optional<int> cells;
    std::optional<int> degree;
    std::optional<int> steps;
    std::string out = ".";
    std::uint64_t seed = 20240521;
    unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "JSON config file (flat snake_case keys)");
    app->add_option("--option", c.option, "call or put")->check(CLI::IsMember({"call", "put"}));
    app->add_option("--driver", c.driver, "MTM convention")
        ->check(CLI::IsMember({"linear", "nonlinear", "garcia"}));
    app->add_option("--cells", c.cells, "number of cells N")->check(CLI::PositiveNumber);
    app->add_option("--degree", c.degree, "polynomial degree k")->check(CLI::Range(1, 2));
    app->add_option("--steps", c.steps, "time steps (0: CFL rule)")->check(CLI::NonNegativeNumber);
    app->add_option("--out", c.out, "output directory");
    app->add_option("--seed", c.seed, "Monte Carlo seed");
    app->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

xva::RunConfig build_config(const Common& c) {
    xva::RunConfig cfg = c.config.empty() ? xva::default_config() : xva::load_config(c.config);
    if (c.option) cfg.option.kind = xva::parse_option_kind(*c.option);
    if (c.driver) cfg.mtmConvention = xva::parse_mtm(*c.driver);
    if (c.cells) cfg.cells = *c.cells;
    if (c.degree) cfg.polyDegree = *c.degree;
    if (c.steps) cfg.timeSteps = *c.steps;
    xva::validate(cfg);
    return cfg;
}

std::ofstream open_out(const Common& c, const std::string& name) {
    fs::create_directories(c.out);
    const fs::path p = fs::path(c.out) / name;
    std::ofstream os(p);
    if (!os) throw xva::Error("cannot write " + p.string(), "out");
    return os;
}

const std::vector<double> kSpots{5, 10, 15, 20, 30, 60};

int cmd_price(const Common& c) {
    const auto cfg = build_config(c);
    const auto result = xva::solver::solve(cfg);
    {
        auto os = open_out(c, "greeks.csv");
        xva::harness::write_greeks_csv(os, xva::solver::greeks(result));
    }
    {
        auto os = open_out(c, "nodal.csv");
        xva::harness::write_nodal_csv(os, result);
    }
    json meta = xva::harness::run_metadata(cfg, result);
    json samples = json::array();
    for (const auto& s : xva::solver::greeks(result, kSpots))
        samples.push_back({{"S", s.S}, {"value", s.value}, {"delta", s.delta},
                           {"gamma", s.gamma}, {"xva", s.xva}});
    meta["samples"] = samples;
    open_out(c, "metadata.json") << meta.dump(2) << '\n';
    std::cout << samples.dump(2) << '\n';
    return 0;
}

int cmd_converge(const Common& c, int table, std::vector<int> ladder, int refCells,
                 int refSteps) {
    auto cfg = build_config(c);
    xva::harness::LadderSpec spec;
    if (table == 2) {
        spec = xva::harness::table2_ladder();
        cfg.polyDegree = 1;
    } else if (table == 4) {
        spec = xva::harness::table4_ladder(cfg.market.sigma);
        cfg.polyDegree = 2;
    }
    if (!ladder.empty()) {
        spec.cells = ladder;
        spec.steps.clear();
    }
    if (refCells > 0) spec.refCells = refCells;
    if (refSteps >= 0) spec.refSteps = refSteps;
    const auto report = xva::harness::run_convergence(cfg, spec, {}, c.threads);
    {
        auto os = open_out(c, "convergence.csv");
        xva::harness::write_convergence_csv(os, report);
    }
    xva::harness::write_convergence_table(std::cout, report);
    return 0;
}

int cmd_table3(const Common& c, bool noMc, int strata, int paths, int mcSteps, bool noBaseline,
               double theta) {
    const auto cfg = build_config(c);
    xva::harness::Table3Options opt;
    opt.withMc = !noMc;
    opt.seed = c.seed;
    opt.mcGrid.strata = strata;
    opt.mcGrid.pathsPerStratum = paths;
    opt.mcGrid.timeSteps = mcSteps;
    opt.useBaseline = !noBaseline;
    opt.theta = theta;
    if (c.cells) opt.cells = *c.cells;
    if (c.steps) opt.steps = *c.steps;
    const auto table = xva::harness::run_table3(cfg, opt, c.threads);
    {
        auto os = open_out(c, "table3.csv");
        xva::harness::write_table3_csv(os, table);
    }
    xva::harness::write_table3_csv(std::cout, table);
    return 0;
}

int cmd_sweep(const Common& c, const std::string& parameter, std::vector<double> values) {
    const auto cfg = build_config(c);
    const auto p = xva::harness::parse_sweep_parameter(parameter);
    if (values.empty()) values = xva::harness::default_sweep_values(p);
    std::vector<double> spots;
    for (int i = 1; i <= 60; ++i) spots.push_back(i);
    const auto sweep = xva::harness::run_sweep(cfg, p, values, spots, c.threads);
    {
        auto os = open_out(c, "sweep_" + parameter + ".csv");
        xva::harness::write_sweep_csv(os, sweep);
    }
    json summary = {{"parameter", parameter},
                    {"values", values},
                    {"xva_nonincreasing", sweep.monotoneNonincreasing}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_fbsde(const Common& c, int strata, int paths, int mcSteps, bool noBaseline,
              double theta) {
    const auto cfg = build_config(c);
    xva::fbsde::RegressionGrid grid;
    grid.strata = strata;
    grid.pathsPerStratum = paths;
    grid.timeSteps = mcSteps;
    xva::drivers::DriverContext ctx;
    ctx.kind = xva::drivers::driver_for(cfg.mtmConvention);
    ctx.option = cfg.option;
    ctx.market = cfg.market;
    ctx.capital = cfg.capital;
    const auto est = xva::fbsde::xva_mc(grid, ctx, kSpots, c.seed, {c.threads, !noBaseline, theta});
    auto os = open_out(c, "fbsde.csv");
    os << "S,xva_mc,stderr\n";
    std::cout << "S,xva_mc,stderr\n";
    for (const auto& e : est) {
        const std::string line = xva::harness::format_number(e.S) + ',' +
                                 xva::harness::format_number(e.xva) + ',' +
                                 xva::harness::format_number(e.stdError) + '\n';
        os << line;
        std::cout << line;
    }
    return 0;
}

int cmd_breakdown(const Common& c, double spot) {
    const auto cfg = build_config(c);
    const auto b = xva::breakdown::xva_breakdown(spot, cfg.option, cfg.market, cfg.capital);
    json j = {{"S", spot},     {"cva", b.cva}, {"fbva", b.fbva}, {"fcva", b.fcva},
              {"cra", b.cra},  {"kva", b.kva}, {"total", b.total()}};
    open_out(c, "breakdown.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_garcia(const Common& c) {
    const auto cfg = build_config(c);
    const auto g = xva::breakdown::garcia_scaling_check(cfg);
    json j = {{"scale", g.scale}, {"max_abs_diff", g.maxAbsDiff}, {"argmax_S", g.argmaxS},
              {"kva_garcia_at_strike", g.garcia.value(cfg.option.strike)},
              {"kva_capital_cost_at_strike", g.capitalCost.value(cfg.option.strike)}};
    open_out(c, "garcia_check.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDG-IMEX XVA pricer with KVA"};
    app.require_subcommand(1);
    Common common;

    auto* price = app.add_subcommand("price", "solve one configuration; write Greeks and metadata");
    add_common(price, common);

    auto* converge = app.add_subcommand("converge", "convergence ladder with errors and EOC");
    add_common(converge, common);
    int table = 2;
    std::vector<int> ladder;
    int refCells = 0, refSteps = -1;
    converge->add_option("--table", table, "preset ladder: 2 (k=1) or 4 (k=2); 0 for none")
        ->check(CLI::IsMember({0, 2, 4}));
    converge->add_option("--ladder", ladder, "explicit list of N (CFL step counts)");
    converge->add_option("--ref-cells", refCells, "reference N");
    converge->add_option("--ref-steps", refSteps, "reference L (0: CFL rule)");

    auto* t3 = app.add_subcommand("table3", "PDE and FBSDE XVA at the reference spots");
    add_common(t3, common);
    bool noMc = false;
    int strata = 500, paths = 10000, mcSteps = 20;
    t3->add_flag("--no-mc", noMc, "skip the Monte Carlo columns");
    bool noBaseline = false;
    double theta = 0.5;

    auto* sweep = app.add_subcommand("sweep", "sensitivity sweep over sigma, gammaK or rX");
    add_common(sweep, common);
    std::string parameter = "gammaK";
    std::vector<double> values;
    sweep->add_option("--parameter", parameter)->check(CLI::IsMember({"sigma", "gammaK", "rX"}));
    sweep->add_option("--values", values);

    auto* mc = app.add_subcommand("fbsde", "stratified regression Monte Carlo XVA");
    add_common(mc, common);
    for (auto* sub : {t3, mc}) {
        sub->add_option("--strata", strata);
        sub->add_option("--paths", paths, "paths per stratum");
        sub->add_option("--mc-steps", mcSteps);
        sub->add_flag("--no-baseline", noBaseline, "regress Y itself instead of its gap to the risk-free price");
        sub->add_option("--theta", theta, "driver weight at t_i (0: explicit)")
            ->check(CLI::Range(0.0, 1.0));
    }

    auto* bd = app.add_subcommand("breakdown", "CVA/FBVA/FCVA/CRA/KVA by quadrature (linear)");
    add_common(bd, common);
    double spot = 15.0;
    bd->add_option("--spot", spot);

    auto* garcia = app.add_subcommand("garcia-check", "compare U with the rescaled U'");
    add_common(garcia, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*price) return cmd_price(common);
        if (*converge) return cmd_converge(common, table, ladder, refCells, refSteps);
        if (*t3) return cmd_table3(common, noMc, strata, paths, mcSteps, noBaseline, theta);
        if (*sweep) return cmd_sweep(common, parameter, values);
        if (*mc) return cmd_fbsde(common, strata, paths, mcSteps, noBaseline, theta);
        if (*bd) return cmd_breakdown(common, spot);
        if (*garcia) return cmd_garcia(common);
    } catch (const xva::Error& e) {
        std::cerr << json{{"error", e.what()}, {"field", e.field()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 1;
}
