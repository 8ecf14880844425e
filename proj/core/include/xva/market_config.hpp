#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace xva {

enum class OptionKind { Call, Put };

struct OptionSpec {
    OptionKind kind = OptionKind::Call;
    double strike = 15.0;
    double maturity = 1.0;
};

/// Market and model scalars. All rates and intensities are per year and
/// constant in time.
struct MarketParams {
    double sigma = 0.3;
    double r = 0.06;
    double rB = 0.0;  // derived from lambdaB when not supplied
    double lambdaB = 0.00133;
    double RB = 0.7;
    double rC = 0.0;  // derived from lambdaC when not supplied
    double qC = 0.06;
    double lambdaC = 0.0103;
    double RC = 0.78;
    double qS = 0.06;
    double gammaS = 0.0;
    double rX = 0.07;
    double gammaX = 0.9;
    double gammaK = 0.15;
    double phi = 1.0;

    /// Stock drift under the pricing measure, q_S - gamma_S.
    double beta() const noexcept { return qS - gammaS; }
    /// Convection speed coefficient sigma^2 - beta of the conservative form.
    double convection() const noexcept { return sigma * sigma - beta(); }
    /// lambda^C (1 - R^C), equal to r^C - q^C under zero basis.
    double counterpartySpread() const noexcept { return lambdaC * (1.0 - RC); }
    /// lambda^B (1 - R^B), equal to r^B - r under zero basis.
    double issuerSpread() const noexcept { return lambdaB * (1.0 - RB); }
};

/// Regulatory constants for SA-CCR exposure and the capital stack.
struct CapitalParams {
    double eta = 0.08;
    double omega = 0.75;
    double alpha = 1.4;
    double SF = 0.32;
    double sigmaR = 1.5;
    double RW = 0.05;
    double LR = 0.03;
    double multiplierFloor = 0.05;
    double multiplierSlope = 0.95;
    int dayCountAddDays = 10;
    int businessDaysPerYear = 360;
};

enum class MtmConvention { RiskFree, Risky, GarciaKVA };

struct RunConfig {
    OptionSpec option;
    MarketParams market;
    CapitalParams capital;
    MtmConvention mtmConvention = MtmConvention::Risky;
    double domainMultiple = 4.0;
    int cells = 640;
    int polyDegree = 1;
    double cflConstant = 0.5;
    int timeSteps = 0;  // 0: derive from the CFL rule
    bool requireStrikeNode = true;

    double smax() const noexcept { return domainMultiple * option.strike; }
    double cellWidth() const noexcept { return smax() / cells; }
};

/// Table-1 market data with derived rates filled in (r^B, r^C).
RunConfig default_config();

/// Checks every invariant; throws xva::Error naming the field on failure.
void validate(const RunConfig& config);

/// Parses a flat snake_case JSON object over the defaults. Missing members of
/// a zero-basis triple are derived from the supplied ones; a fully supplied
/// inconsistent triple is rejected.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

double payoff(const OptionSpec& option, double S);

std::string to_string(OptionKind kind);
std::string to_string(MtmConvention mtm);
OptionKind parse_option_kind(const std::string& s);
MtmConvention parse_mtm(const std::string& s);

}  // namespace xva
