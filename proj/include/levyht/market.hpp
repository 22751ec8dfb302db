#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levyht/likelihood.hpp"
#include "levyht/sample_path.hpp"
#include "levyht/supersub.hpp"

namespace levyht {

// Exponential-Levy price model with OU variance driven by a deterministic
// mix of two subordinators (the second with greater intensity).
struct BnsParams {
    double mu = 0.0;
    double beta = 0.0;         // variance loading in the price drift
    double rho = 0.0;          // jump leverage, <= 0
    double lambda = 1.0;       // mean-reversion rate, > 0
    double theta = 1.0;        // price-side mixing weight in [0,1]
    double theta_prime = 1.0;  // variance-side mixing weight in [0,1]
    double sigma0_sq = 0.04;   // initial variance, > 0
    JumpMeasureSpec Z_spec = JumpMeasureSpec::exponential(1.0, 0.5);
    JumpMeasureSpec Zb_spec = JumpMeasureSpec::exponential(2.0, 0.5);
    double S0 = 1.0;

    void validate() const;
};

struct BnsPaths {
    SamplePath price;
    SamplePath log_price;  // X
    SamplePath variance;   // sigma^2
};

// Euler scheme for X with exact exponential decay of sigma^2 between jump
// epochs; both subordinator clocks run at rate lambda * intensity and feed
// the price through rho and the variance through the mixing weights.
BnsPaths simulate_bns(const BnsParams& params, double horizon, double dt, std::uint64_t seed,
                      std::uint64_t stream = 0);

struct PriceSeries {
    std::vector<std::string> dates;  // ISO, strictly increasing after load
    std::vector<double> close;
    std::vector<double> log_returns;

    std::size_t size() const { return close.size(); }
};

PriceSeries load_prices(const std::string& csv_path);
PriceSeries parse_prices(const std::string& csv_text);
std::string to_csv(const PriceSeries& series);

enum class FitConvention { PriceDifferences, LogReturns };

struct FitResult {
    double mu_hat = 0.0;     // per day
    double sigma_hat = 0.0;  // per sqrt(day)
    bool degenerate = false;
    FitConvention convention = FitConvention::PriceDifferences;
    std::size_t n_returns = 0;
};

// Sample mean/sd of daily price differences (default; the fitted magnitudes
// in the experiment are in price units) or of log returns.
FitResult fit_parameters(const PriceSeries& series,
                         FitConvention convention = FitConvention::PriceDifferences);

struct OilConfig {
    double a = 19.0;       // jump test statistic (required input, not estimated)
    double alpha0 = 0.9;
    double l = -0.03;
    int n_runs = 30;
    double horizon = 500.0;  // cap in days; runs-to-exit with censoring reported
    std::uint64_t seed = 123456789;
    JumpMeasureSpec nu = JumpMeasureSpec::exponential(1.0, 1.0);
    KForm kform = KForm::Pushforward;
    bool alpha_is_confidence = false;  // as printed: target = 1 - alpha0
    double k_bound = 1.0;              // L = max{K M, M}
    int world = 1;                     // digit of the simulated hypothesis
    double r_override = 0.0;           // > 0: skip the envelope solve (sensitivity runs)
};

struct OilReport {
    FitResult fit;
    OilConfig config;
    LlrCoefficients coeffs;
    double C_1d = 0.0;  // 1-D kernel compensator int y/(1+y) K(dy)
    double M_1d = 0.0;
    double L_const = 0.0;
    double target = 0.0;
    double r_lower_env = 0.0;  // candidate solved from the lower envelope
    double r_upper_env = 0.0;  // candidate solved from the upper envelope
    double r = 0.0;            // max of the two candidates
    int right_exits = 0;
    int left_exits = 0;
    int censored = 0;
    std::string to_json() const;
};

// The one-dimensional experiment: build the jump-test LLR from
// (a, sigma_hat, nu), back the interval out of the envelope inequalities
// (1-D reduction, world 0, max-of-candidates rule), then run n_runs LLR
// paths and count exit sides.
OilReport run_oil_experiment(const FitResult& fit, const OilConfig& config);

}  // namespace levyht
