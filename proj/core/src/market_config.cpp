#include "xva/market_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "xva/error.hpp"

namespace xva {

namespace {

constexpr double kBasisTolerance = 1e-12;

void require(bool ok, const std::string& field, const std::string& constraint) {
    if (!ok) throw Error(field + ": " + constraint, field);
}

void require_unit(double v, const std::string& field) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, field, "must lie in [0, 1]");
}

void require_finite(double v, const std::string& field) {
    require(std::isfinite(v), field, "must be finite");
}

// One zero-basis relation  lambda = (hi - lo) / (1 - R)  over (lambda, hi, lo).
struct BasisTriple {
    const char* lambdaKey;
    const char* hiKey;
    const char* loKey;
    double* lambda;
    double* hi;
    double* lo;
    double recovery;
};

void resolve_triple(BasisTriple t, const nlohmann::json& j) {
    const bool hasLambda = j.contains(t.lambdaKey);
    const bool hasHi = j.contains(t.hiKey);
    const bool hasLo = j.contains(t.loKey);
    const double lgd = 1.0 - t.recovery;

    if (hasLambda && hasHi && hasLo) {
        const double implied = lgd > 0.0 ? (*t.hi - *t.lo) / lgd : 0.0;
        if (std::abs(*t.lambda - implied) > kBasisTolerance) {
            std::ostringstream os;
            os << "zero-basis violation: " << t.lambdaKey << "=" << *t.lambda << " but ("
               << t.hiKey << " - " << t.loKey << ")/(1 - recovery)=" << implied;
            throw Error(os.str(), t.lambdaKey);
        }
        return;
    }
    // Derive the hi rate unless it is the only supplied member of the triple
    // together with one other; defaults fill whatever is left.
    if (hasHi && (hasLambda || hasLo)) {
        if (!hasLambda) {
            require(lgd > 0.0, t.lambdaKey, "cannot be derived when recovery is 1");
            *t.lambda = (*t.hi - *t.lo) / lgd;
        } else {
            *t.lo = *t.hi - *t.lambda * lgd;
        }
        return;
    }
    if (hasHi) {
        // hi alone: keep the default lo and derive the intensity.
        require(lgd > 0.0, t.lambdaKey, "cannot be derived when recovery is 1");
        *t.lambda = (*t.hi - *t.lo) / lgd;
        return;
    }
    *t.hi = *t.lo + *t.lambda * lgd;
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string(key) + ": " + e.what(), key);
    }
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "option_kind", "strike", "maturity",
        "sigma", "r", "r_b", "lambda_b", "recovery_b", "r_c", "q_c", "lambda_c", "recovery_c",
        "q_s", "gamma_s", "r_x", "gamma_x", "gamma_k", "phi",
        "eta", "omega", "alpha", "supervisory_factor", "sigma_r", "risk_weight", "leverage_ratio",
        "multiplier_floor", "multiplier_slope", "day_count_add_days", "business_days_per_year",
        "mtm_convention", "domain_multiple", "cells", "poly_degree", "cfl_constant", "time_steps",
        "require_strike_node"};
    return keys;
}

}  // namespace

RunConfig default_config() {
    RunConfig c;
    c.market.rB = c.market.r + c.market.issuerSpread();
    c.market.rC = c.market.qC + c.market.counterpartySpread();
    return c;
}

void validate(const RunConfig& c) {
    const auto& o = c.option;
    require(std::isfinite(o.strike) && o.strike > 0.0, "strike", "must be > 0");
    require(std::isfinite(o.maturity) && o.maturity > 0.0, "maturity", "must be > 0");

    const auto& m = c.market;
    require(std::isfinite(m.sigma) && m.sigma > 0.0, "sigma", "must be > 0");
    for (auto [v, name] : {std::pair{m.r, "r"}, {m.rB, "r_b"}, {m.lambdaB, "lambda_b"},
                           {m.rC, "r_c"}, {m.qC, "q_c"}, {m.lambdaC, "lambda_c"}, {m.qS, "q_s"},
                           {m.gammaS, "gamma_s"}, {m.rX, "r_x"}, {m.gammaK, "gamma_k"}})
        require_finite(v, name);
    require(m.lambdaB >= 0.0, "lambda_b", "must be >= 0");
    require(m.lambdaC >= 0.0, "lambda_c", "must be >= 0");
    require_unit(m.RB, "recovery_b");
    require_unit(m.RC, "recovery_c");
    require_unit(m.gammaX, "gamma_x");
    require_unit(m.phi, "phi");
    require(std::abs(m.lambdaC * (1.0 - m.RC) - (m.rC - m.qC)) <= kBasisTolerance, "lambda_c",
            "zero-basis relation lambda_c = (r_c - q_c)/(1 - recovery_c) violated");
    require(std::abs(m.lambdaB * (1.0 - m.RB) - (m.rB - m.r)) <= kBasisTolerance, "lambda_b",
            "zero-basis relation lambda_b = (r_b - r)/(1 - recovery_b) violated");

    const auto& k = c.capital;
    require(std::isfinite(k.eta) && k.eta > 0.0 && k.eta <= 1.0, "eta", "must lie in (0, 1]");
    require(std::isfinite(k.LR) && k.LR >= 0.03, "leverage_ratio", "must be >= 0.03");
    for (auto [v, name] : {std::pair{k.omega, "omega"}, {k.alpha, "alpha"},
                           {k.SF, "supervisory_factor"}, {k.sigmaR, "sigma_r"},
                           {k.RW, "risk_weight"}, {k.multiplierFloor, "multiplier_floor"},
                           {k.multiplierSlope, "multiplier_slope"}})
        require(std::isfinite(v) && v >= 0.0, name, "must be finite and >= 0");
    require(k.alpha > 0.0, "alpha", "must be > 0");
    require(k.sigmaR > 0.0, "sigma_r", "must be > 0");
    require(k.multiplierFloor > 0.0 && k.multiplierFloor <= 1.0, "multiplier_floor",
            "must lie in (0, 1]");
    require(k.dayCountAddDays >= 0, "day_count_add_days", "must be >= 0");
    require(k.businessDaysPerYear > 0, "business_days_per_year", "must be > 0");

    require(c.cells >= 2, "cells", "must be >= 2");
    require(c.polyDegree == 1 || c.polyDegree == 2, "poly_degree", "must be 1 or 2");
    require(std::isfinite(c.domainMultiple) && c.domainMultiple > 1.0, "domain_multiple",
            "must be > 1");
    require(std::isfinite(c.cflConstant) && c.cflConstant > 0.0 && c.cflConstant <= 1.0,
            "cfl_constant", "must lie in (0, 1]");
    require(c.timeSteps >= 0, "time_steps", "must be >= 0");
    if (c.requireStrikeNode) {
        const double ratio = o.strike / c.cellWidth();
        require(std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio), "cells",
                "strike must coincide with a mesh node (strike / cell width must be an integer)");
    }
}

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known_keys().count(key)) throw Error("unknown config key '" + key + "'", key);

    RunConfig c = default_config();
    std::string s;
    if (j.contains("option_kind")) {
        read(j, "option_kind", s);
        c.option.kind = parse_option_kind(s);
    }
    read(j, "strike", c.option.strike);
    read(j, "maturity", c.option.maturity);

    auto& m = c.market;
    read(j, "sigma", m.sigma);
    read(j, "r", m.r);
    read(j, "r_b", m.rB);
    read(j, "lambda_b", m.lambdaB);
    read(j, "recovery_b", m.RB);
    read(j, "r_c", m.rC);
    read(j, "q_c", m.qC);
    read(j, "lambda_c", m.lambdaC);
    read(j, "recovery_c", m.RC);
    read(j, "q_s", m.qS);
    read(j, "gamma_s", m.gammaS);
    read(j, "r_x", m.rX);
    read(j, "gamma_x", m.gammaX);
    read(j, "gamma_k", m.gammaK);
    read(j, "phi", m.phi);
    require_unit(m.RB, "recovery_b");
    require_unit(m.RC, "recovery_c");
    resolve_triple({"lambda_b", "r_b", "r", &m.lambdaB, &m.rB, &m.r, m.RB}, j);
    resolve_triple({"lambda_c", "r_c", "q_c", &m.lambdaC, &m.rC, &m.qC, m.RC}, j);

    auto& k = c.capital;
    read(j, "eta", k.eta);
    read(j, "omega", k.omega);
    read(j, "alpha", k.alpha);
    read(j, "supervisory_factor", k.SF);
    read(j, "sigma_r", k.sigmaR);
    read(j, "risk_weight", k.RW);
    read(j, "leverage_ratio", k.LR);
    read(j, "multiplier_floor", k.multiplierFloor);
    read(j, "multiplier_slope", k.multiplierSlope);
    read(j, "day_count_add_days", k.dayCountAddDays);
    read(j, "business_days_per_year", k.businessDaysPerYear);

    if (j.contains("mtm_convention")) {
        read(j, "mtm_convention", s);
        c.mtmConvention = parse_mtm(s);
    }
    read(j, "domain_multiple", c.domainMultiple);
    read(j, "cells", c.cells);
    read(j, "poly_degree", c.polyDegree);
    read(j, "cfl_constant", c.cflConstant);
    read(j, "time_steps", c.timeSteps);
    read(j, "require_strike_node", c.requireStrikeNode);

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path.string() + "'", "config");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("config parse error in '" + path.string() + "': " + e.what(), "config");
    }
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
    const auto& m = c.market;
    const auto& k = c.capital;
    return nlohmann::json{
        {"option_kind", to_string(c.option.kind)},
        {"strike", c.option.strike},
        {"maturity", c.option.maturity},
        {"sigma", m.sigma},
        {"r", m.r},
        {"r_b", m.rB},
        {"lambda_b", m.lambdaB},
        {"recovery_b", m.RB},
        {"r_c", m.rC},
        {"q_c", m.qC},
        {"lambda_c", m.lambdaC},
        {"recovery_c", m.RC},
        {"q_s", m.qS},
        {"gamma_s", m.gammaS},
        {"r_x", m.rX},
        {"gamma_x", m.gammaX},
        {"gamma_k", m.gammaK},
        {"phi", m.phi},
        {"eta", k.eta},
        {"omega", k.omega},
        {"alpha", k.alpha},
        {"supervisory_factor", k.SF},
        {"sigma_r", k.sigmaR},
        {"risk_weight", k.RW},
        {"leverage_ratio", k.LR},
        {"multiplier_floor", k.multiplierFloor},
        {"multiplier_slope", k.multiplierSlope},
        {"day_count_add_days", k.dayCountAddDays},
        {"business_days_per_year", k.businessDaysPerYear},
        {"mtm_convention", to_string(c.mtmConvention)},
        {"domain_multiple", c.domainMultiple},
        {"cells", c.cells},
        {"poly_degree", c.polyDegree},
        {"cfl_constant", c.cflConstant},
        {"time_steps", c.timeSteps},
        {"require_strike_node", c.requireStrikeNode},
    };
}

double payoff(const OptionSpec& option, double S) {
    return option.kind == OptionKind::Call ? std::max(S - option.strike, 0.0)
                                           : std::max(option.strike - S, 0.0);
}

std::string to_string(OptionKind kind) { return kind == OptionKind::Call ? "call" : "put"; }

std::string to_string(MtmConvention mtm) {
    switch (mtm) {
        case MtmConvention::RiskFree: return "linear";
        case MtmConvention::Risky: return "nonlinear";
        case MtmConvention::GarciaKVA: return "garcia";
    }
    return "nonlinear";
}

OptionKind parse_option_kind(const std::string& s) {
    if (s == "call") return OptionKind::Call;
    if (s == "put") return OptionKind::Put;
    throw Error("option_kind: expected 'call' or 'put', got '" + s + "'", "option_kind");
}

MtmConvention parse_mtm(const std::string& s) {
    if (s == "linear" || s == "risk_free") return MtmConvention::RiskFree;
    if (s == "nonlinear" || s == "risky") return MtmConvention::Risky;
    if (s == "garcia") return MtmConvention::GarciaKVA;
    throw Error("mtm_convention: expected linear|nonlinear|garcia, got '" + s + "'",
                "mtm_convention");
}

}  // namespace xva
