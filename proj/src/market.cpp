#include "levyht/market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "levyht/decision.hpp"
#include "levyht/errors.hpp"
#include "levyht/rng.hpp"

namespace levyht {

namespace {

std::vector<double> draw_epochs(double rate, double horizon, RngStream& rng) {
    std::vector<double> out;
    if (rate <= 0) return out;
    double t = rng.exponential(1.0 / rate);
    while (t < horizon) {
        out.push_back(t);
        t += rng.exponential(1.0 / rate);
    }
    return out;
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void BnsParams::validate() const {
    if (!(lambda > 0)) throw parameter_error("bns: lambda must be > 0");
    if (rho > 0) throw parameter_error("bns: rho must be <= 0");
    if (theta < 0 || theta > 1 || theta_prime < 0 || theta_prime > 1)
        throw parameter_error("bns: mixing weights must lie in [0,1]");
    if (!(sigma0_sq > 0)) throw parameter_error("bns: sigma0_sq must be > 0");
    if (!(S0 > 0)) throw parameter_error("bns: S0 must be > 0");
    if (!Z_spec.is_zero() && !Zb_spec.is_zero() &&
        !(Zb_spec.base_mass() > Z_spec.base_mass()))
        throw parameter_error("bns: Z^(b) must have greater intensity than Z");
}

BnsPaths simulate_bns(const BnsParams& params, double horizon, double dt, std::uint64_t seed,
                      std::uint64_t stream) {
    params.validate();
    if (!(dt > 0) || !(horizon >= dt)) throw parameter_error("bns: bad horizon/dt");
    RngStream rng_w(seed, stream * 8 + 0);
    RngStream rng_z(seed, stream * 8 + 1);
    RngStream rng_zb(seed, stream * 8 + 2);

    // subordinator clocks run at rate lambda * intensity
    const auto ez = draw_epochs(params.lambda * params.Z_spec.total_mass(), horizon, rng_z);
    const auto ezb = draw_epochs(params.lambda * params.Zb_spec.total_mass(), horizon, rng_zb);

    std::vector<double> grid;
    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    grid.reserve(n_steps + 1 + ez.size() + ezb.size());
    for (std::size_t i = 0; i <= n_steps; ++i) grid.push_back(std::min(i * dt, horizon));
    grid.back() = horizon;
    grid.insert(grid.end(), ez.begin(), ez.end());
    grid.insert(grid.end(), ezb.begin(), ezb.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto locate = [&grid](const std::vector<double>& epochs) {
        std::vector<std::size_t> idx;
        idx.reserve(epochs.size());
        for (double t : epochs)
            idx.push_back(static_cast<std::size_t>(
                std::lower_bound(grid.begin(), grid.end(), t) - grid.begin()));
        return idx;
    };
    const auto iz = locate(ez);
    const auto izb = locate(ezb);

    const std::size_t n = grid.size();
    std::vector<double> X(n, 0.0), V(n, params.sigma0_sq);
    std::size_t jz = 0, jzb = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = grid[i] - grid[i - 1];
        const double v_prev = V[i - 1];
        X[i] = X[i - 1] + (params.mu + params.beta * v_prev) * step +
               std::sqrt(v_prev * step) * rng_w.gaussian();
        V[i] = v_prev * std::exp(-params.lambda * step);
        if (jz < iz.size() && iz[jz] == i) {
            const double jump = params.Z_spec.sample(rng_z);
            V[i] += params.theta_prime * jump;
            X[i] += params.rho * params.theta * jump;
            ++jz;
        }
        if (jzb < izb.size() && izb[jzb] == i) {
            const double jump = params.Zb_spec.sample(rng_zb);
            V[i] += (1.0 - params.theta_prime) * jump;
            X[i] += params.rho * (1.0 - params.theta) * jump;
            ++jzb;
        }
    }

    BnsPaths out;
    out.log_price.times = grid;
    out.log_price.values = X;
    out.log_price.dt = dt;
    out.variance.times = grid;
    out.variance.values = V;
    out.variance.dt = dt;
    out.price.times = grid;
    out.price.dt = dt;
    out.price.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.price.values[i] = params.S0 * std::exp(X[i]);
    auto merge_idx = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        std::vector<std::size_t> m;
        m.reserve(a.size() + b.size());
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
        m.erase(std::unique(m.begin(), m.end()), m.end());
        return m;
    };
    out.price.jump_indices = merge_idx(iz, izb);
    out.log_price.jump_indices = out.price.jump_indices;
    out.variance.jump_indices = out.price.jump_indices;
    return out;
}

PriceSeries parse_prices(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    std::size_t row = 0;
    struct Entry {
        std::string date;
        double close;
    };
    std::vector<Entry> entries;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row == 1) {
            if (line != "date,close")
                throw parameter_error("load_prices: expected header 'date,close', row 1");
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw parameter_error("load_prices: malformed row " + std::to_string(row));
        const std::string date = line.substr(0, comma);
        const std::string value = line.substr(comma + 1);
        if (date.size() != 10 || date[4] != '-' || date[7] != '-')
            throw parameter_error("load_prices: bad ISO date at row " + std::to_string(row));
        double close = 0.0;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), close);
        if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
            throw parameter_error("load_prices: bad close value at row " + std::to_string(row));
        if (!(close > 0))
            throw parameter_error("load_prices: nonpositive price at row " + std::to_string(row));
        entries.push_back({date, close});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].date == entries[i - 1].date)
            throw parameter_error("load_prices: duplicate date " + entries[i].date);
    PriceSeries out;
    out.dates.reserve(entries.size());
    out.close.reserve(entries.size());
    for (const auto& e : entries) {
        out.dates.push_back(e.date);
        out.close.push_back(e.close);
    }
    if (out.close.size() >= 2) {
        out.log_returns.resize(out.close.size() - 1);
        for (std::size_t i = 1; i < out.close.size(); ++i)
            out.log_returns[i - 1] = std::log(out.close[i] / out.close[i - 1]);
    }
    return out;
}

PriceSeries load_prices(const std::string& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw parameter_error("load_prices: cannot open " + csv_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_prices(buf.str());
}

std::string to_csv(const PriceSeries& series) {
    std::string out = "date,close\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += series.dates[i];
        out.push_back(',');
        append_double(out, series.close[i]);
        out.push_back('\n');
    }
    return out;
}

FitResult fit_parameters(const PriceSeries& series, FitConvention convention) {
    FitResult out;
    out.convention = convention;
    std::vector<double> d;
    if (convention == FitConvention::PriceDifferences) {
        if (series.size() < 31)
            throw parameter_error("fit_parameters: need at least 30 observed differences");
        d.resize(series.size() - 1);
        for (std::size_t i = 1; i < series.size(); ++i)
            d[i - 1] = series.close[i] - series.close[i - 1];
    } else {
        if (series.log_returns.size() < 30)
            throw parameter_error("fit_parameters: need at least 30 log returns");
        d = series.log_returns;
    }
    out.n_returns = d.size();
    const double n = static_cast<double>(d.size());
    out.mu_hat = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : d) ss += (v - out.mu_hat) * (v - out.mu_hat);
    out.sigma_hat = std::sqrt(ss / (n - 1));
    out.degenerate = out.sigma_hat == 0.0;
    return out;
}

std::string OilReport::to_json() const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"fit\":{\"mu\":" << fit.mu_hat << ",\"sigma\":" << fit.sigma_hat << "},"
       << "\"a\":" << config.a << ",\"alpha0\":" << config.alpha0 << ",\"l\":" << config.l
       << ",\"coeffs\":" << coeffs.to_json() << ",\"C_1d\":" << C_1d << ",\"M_1d\":" << M_1d
       << ",\"L\":" << L_const << ",\"target\":" << target
       << ",\"r_candidates\":[" << r_lower_env << "," << r_upper_env << "],\"r\":" << r
       << ",\"exits\":{\"right\":" << right_exits << ",\"left\":" << left_exits
       << ",\"none\":" << censored << "},\"n_runs\":" << config.n_runs
       << ",\"seed\":" << config.seed << "}";
    return os.str();
}

OilReport run_oil_experiment(const FitResult& fit, const OilConfig& config) {
    if (!(config.a > 0)) throw parameter_error("oil experiment: a must be > 0");
    if (!(fit.sigma_hat > 0)) throw parameter_error("oil experiment: fitted sigma must be > 0");
    if (!(config.l < 0)) throw parameter_error("oil experiment: l must be negative");
    if (config.n_runs < 1) throw parameter_error("oil experiment: n_runs must be >= 1");
    if (config.world != 0 && config.world != 1)
        throw parameter_error("oil experiment: world digit must be 0 or 1");

    OilReport rep;
    rep.fit = fit;
    rep.config = config;

    JumpTestParams params;
    params.a = config.a;
    params.sigma = fit.sigma_hat;
    params.nu = config.nu;
    rep.coeffs = jump_llr_coefficients(params, 1, {}, config.kform);

    rep.M_1d = rep.coeffs.K.total_mass();
    rep.C_1d = rep.coeffs.K.integrate([](double y) { return y / (1.0 + y); });
    rep.L_const = std::max(config.k_bound * rep.M_1d, rep.M_1d);
    rep.target = config.alpha_is_confidence ? config.alpha0 : 1.0 - config.alpha0;

    if (config.r_override > 0.0) {
        rep.r_lower_env = rep.r_upper_env = rep.r = config.r_override;
    } else {
        const Envelope1D env{std::abs(rep.coeffs.beta), rep.coeffs.gamma, rep.C_1d, rep.L_const};
        rep.r_lower_env = solve_r_1d(env, 0, config.l, rep.target, +1);
        rep.r_upper_env = solve_r_1d(env, 0, config.l, rep.target, -1);
        rep.r = std::max(rep.r_lower_env, rep.r_upper_env);
    }

    const LevyCharacteristics ch = jump_llr_characteristics(rep.coeffs, config.world);
    const double width = rep.r - config.l;
    const double dt =
        kDefaultDtFactor * width * width / std::max(ch.diffusion_var, 1e-12);
    for (int run = 0; run < config.n_runs; ++run) {
        const FirstExit exit = first_exit_1d(ch, config.l, rep.r, dt, config.horizon,
                                             config.seed, static_cast<std::uint64_t>(run));
        if (exit.side == ExitSide::Right)
            ++rep.right_exits;
        else if (exit.side == ExitSide::Left)
            ++rep.left_exits;
        else
            ++rep.censored;
    }
    return rep;
}

}  // namespace levyht
