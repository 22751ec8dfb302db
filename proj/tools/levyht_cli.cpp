// Command-line front end: config-driven, reproducible runs over the library.
//
// Every run writes its outputs plus manifest.json (the fully resolved
// configuration) and resolved.cfg (a key=value file that reproduces the run
// byte-for-byte when passed back through --config).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "levyht/decision.hpp"
#include "levyht/generators.hpp"
#include "levyht/levy_sim.hpp"
#include "levyht/likelihood.hpp"
#include "levyht/market.hpp"
#include "levyht/supersub.hpp"
#include "levyht/thresholds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace levyht;

namespace {

constexpr std::uint64_t kDefaultSeed = 123456789;

std::string fmt12(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

json jnum(double v) { return json::parse(fmt12(v)); }

// resolved key=value configuration; every key read gets recorded so the
// manifest echoes the full effective configuration
class Config {
public:
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw parameter_error("config: cannot open " + path);
        std::string line;
        int row = 0;
        while (std::getline(in, line)) {
            ++row;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
            std::size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw parameter_error("config: missing '=' at line " + std::to_string(row));
            set(line.substr(start, eq - start), line.substr(eq + 1));
        }
    }

    void set(const std::string& key, const std::string& value) { values_[trim(key)] = trim(value); }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_str(const std::string& key, const std::string& fallback) {
        if (!has(key)) values_[key] = fallback;
        return values_.at(key);
    }

    double get_num(const std::string& key, double fallback) {
        if (!has(key)) values_[key] = fmt12(fallback);
        const std::string& s = values_.at(key);
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw parameter_error("config: key '" + key + "' is not a number: " + s);
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) values_[key] = std::to_string(fallback);
        return std::stoull(values_.at(key));
    }

    std::vector<double> get_list(const std::string& key, const std::string& fallback) {
        const std::string s = get_str(key, fallback);
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    }

    const std::map<std::string, std::string>& resolved() const { return values_; }

private:
    static std::string trim(std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? "" : s.substr(a, b - a + 1);
    }
    std::map<std::string, std::string> values_;
};

struct RunContext {
    Config cfg;
    fs::path out_dir;
    std::string subcommand;
    json manifest_extra = json::object();
    std::vector<std::string> outputs;

    std::uint64_t seed() { return cfg.get_u64("seed", kDefaultSeed); }
    int threads() { return static_cast<int>(cfg.get_u64("threads", 1)); }

    void write_file(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir);
        std::ofstream out(out_dir / name, std::ios::binary);
        out << content;
        outputs.push_back(name);
    }

    void finish() {
        json manifest;
        manifest["subcommand"] = subcommand;
        manifest["config"] = json::object();
        std::string resolved_cfg;
        for (const auto& [k, v] : cfg.resolved()) {
            if (k == "out") continue;  // run placement, not run configuration
            manifest["config"][k] = v;
            resolved_cfg += k + "=" + v + "\n";
        }
        write_file("resolved.cfg", resolved_cfg);
        manifest["outputs"] = outputs;
        for (auto& [k, v] : manifest_extra.items()) manifest[k] = v;
        fs::create_directories(out_dir);
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
        std::cout << "wrote " << (out_dir / "manifest.json").string() << "\n";
    }
};

JumpMeasureSpec measure_from(Config& cfg, const std::string& prefix, double def_intensity,
                             double def_scale, double def_tilt = 0.0) {
    const double intensity = cfg.get_num(prefix + "_intensity", def_intensity);
    const double scale = cfg.get_num(prefix + "_scale", def_scale);
    const double tilt = cfg.get_num(prefix + "_tilt", def_tilt);
    return intensity > 0 ? JumpMeasureSpec::exponential(intensity, scale, tilt)
                         : JumpMeasureSpec::zero();
}

KForm kform_from(Config& cfg) {
    const std::string k = cfg.get_str("kform", "tilt");
    if (k == "tilt") return KForm::DensityTilt;
    if (k == "pushforward") return KForm::Pushforward;
    throw parameter_error("config: kform must be 'tilt' or 'pushforward'");
}

CouplingVariant variant_from(Config& cfg) {
    const std::string v = cfg.get_str("variant", "printed");
    if (v == "printed") return CouplingVariant::Printed;
    if (v == "corrected") return CouplingVariant::Corrected;
    throw parameter_error("config: variant must be 'printed' or 'corrected'");
}

json rect_json(const Rectangle& r) {
    return {{"l1", jnum(r.l1)}, {"r1", jnum(r.r1)}, {"l2", jnum(r.l2)}, {"r2", jnum(r.r2)}};
}

void cmd_simulate(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string kind = cfg.get_str("kind", "bm");
    const double horizon = cfg.get_num("horizon", 1.0);
    const double dt = cfg.get_num("dt", 0.01);
    const std::uint64_t seed = ctx.seed();

    if (kind == "bm") {
        const SamplePath p = simulate_bm_drift(cfg.get_num("drift", 0.0), cfg.get_num("vol", 1.0),
                                               horizon, dt, seed);
        ctx.write_file("path.csv", to_csv(p));
    } else if (kind == "cp") {
        const SamplePath p =
            simulate_compound_poisson(measure_from(cfg, "nu", 1.0, 1.0), horizon, seed);
        ctx.write_file("path.csv", to_csv(p));
    } else if (kind == "levy2d") {
        const Sigma2 sigma{cfg.get_num("s11", 1.0), cfg.get_num("s12", 0.0),
                           cfg.get_num("s22", 1.0)};
        const SamplePath2D p = simulate_levy2d(
            {cfg.get_num("mu1", 0.0), cfg.get_num("mu2", 0.0)}, sigma,
            {measure_from(cfg, "nu1", 0.0, 1.0), measure_from(cfg, "nu2", 0.0, 1.0)}, horizon,
            dt, seed);
        ctx.write_file("path.csv", to_csv(p));
    } else if (kind == "bns") {
        BnsParams p;
        p.mu = cfg.get_num("mu", 0.0);
        p.beta = cfg.get_num("beta", 0.0);
        p.rho = cfg.get_num("rho", -0.5);
        p.lambda = cfg.get_num("lambda", 1.0);
        p.theta = cfg.get_num("theta", 1.0);
        p.theta_prime = cfg.get_num("theta_prime", 1.0);
        p.sigma0_sq = cfg.get_num("sigma0_sq", 0.04);
        p.S0 = cfg.get_num("s0", 100.0);
        p.Z_spec = measure_from(cfg, "z", 1.0, 0.04);
        p.Zb_spec = measure_from(cfg, "zb", 2.5, 0.04);
        const BnsPaths paths = simulate_bns(p, horizon, dt, seed);
        ctx.write_file("price.csv", to_csv(paths.price));
        ctx.write_file("variance.csv", to_csv(paths.variance));
        ctx.write_file("log_price.csv", to_csv(paths.log_price));
    } else {
        throw parameter_error("simulate: kind must be bm|cp|levy2d|bns");
    }
}

void cmd_thresholds(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const double a00 = cfg.get_num("alpha00", 0.05);
    const double a01 = cfg.get_num("alpha01", 0.05);
    const double a10 = cfg.get_num("alpha10", 0.05);
    const double a11 = cfg.has("alpha11") ? cfg.get_num("alpha11", 0.0)
                                          : induce_fourth_alpha(a00, a01, a10);
    cfg.set("alpha11", fmt12(a11));
    const ErrorSpec errors{a00, a01, a10, a11};
    const double l1 = cfg.get_num("l1", -3.5);
    const CouplingVariant variant = variant_from(cfg);

    json out;
    out["alpha"] = {{"alpha00", jnum(a00)}, {"alpha01", jnum(a01)}, {"alpha10", jnum(a10)},
                    {"alpha11", jnum(a11)}};
    if (a10 > a00) {
        const auto [lo, hi] = l1_feasible_interval(a00, a10);
        out["l1_feasible"] = {jnum(lo), jnum(hi)};
    }
    // both readings of the coupled equation are reported side by side
    for (const auto [v, name] : {std::pair{CouplingVariant::Printed, "printed"},
                                 std::pair{CouplingVariant::Corrected, "corrected"}}) {
        try {
            const Rectangle r = solve_rectangle(errors, l1, v);
            out[name] = rect_json(r);
        } catch (const infeasible_error& err) {
            out[name] = {{"infeasible", err.what()}};
        }
    }
    out["variant"] = cfg.get_str("variant", "printed");
    const Rectangle chosen = solve_rectangle(errors, l1, variant);
    out["rectangle"] = rect_json(chosen);

    if (cfg.has("alpha_grid")) {
        std::string csv = "alpha,l1,r1,l2,r2\n";
        for (double a : cfg.get_list("alpha_grid", "")) {
            const ErrorSpec level{a, a, a, a};
            const double la = std::log(a / (1 - a)) - std::log(2.0);
            const Rectangle r = solve_rectangle(level, la, variant);
            csv += fmt12(a) + "," + fmt12(r.l1) + "," + fmt12(r.r1) + "," + fmt12(r.l2) + "," +
                   fmt12(r.r2) + "\n";
        }
        ctx.write_file("thresholds_grid.csv", csv);
    }
    ctx.write_file("rectangle.json", out.dump(2) + "\n");
}

void cmd_montecarlo(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    const std::string world_s = cfg.get_str("world", "00");
    if (world_s.size() != 2) throw parameter_error("montecarlo: world must be two digits");
    const WorldIndex world{world_s[0] - '0', world_s[1] - '0'};
    world.validate();
    McOptions opts;
    opts.n_paths = static_cast<std::size_t>(cfg.get_num("n_paths", 20000));
    if (opts.n_paths == 0) throw parameter_error("montecarlo: n_paths must be positive");
    opts.horizon = cfg.get_num("horizon", 10000.0);
    opts.dt = cfg.get_num("dt", 0.0);
    opts.seed = ctx.seed();
    opts.threads = ctx.threads();
    const std::string test = cfg.get_str("test", "drift");
    const CouplingVariant variant = variant_from(cfg);

    const auto levels = cfg.get_list("alpha_levels", "0.05");
    std::string csv = "world,alpha,l1,r1,l2,r2,alpha_hat,alpha_se,mean_tau,mean_tau1,gap,gap_se,"
                      "no_decision\n";
    json rows = json::array();
    for (double alpha : levels) {
        Rectangle rect;
        if (cfg.has("l1") && cfg.has("r1")) {
            rect = Rectangle{cfg.get_num("l1", -1), cfg.get_num("r1", 1),
                             cfg.get_num("l2", -1), cfg.get_num("r2", 1)};
            rect.validate();
        } else {
            const ErrorSpec errors{alpha, alpha, alpha, alpha};
            const double la = std::log(alpha / (1 - alpha)) - std::log(2.0);
            rect = solve_rectangle(errors, la, variant);
        }
        OperatingStats st;
        if (test == "drift") {
            DriftTestPair tp;
            tp.c1 = {cfg.get_num("m1", 1.0), cfg.get_num("sigma1", 1.0)};
            tp.c2 = {cfg.get_num("m2", 1.0), cfg.get_num("sigma2", 1.0)};
            st = monte_carlo_operating_stats(world, tp, rect, opts);
        } else if (test == "jump") {
            JumpTestPair tp;
            tp.c1.a = cfg.get_num("a1", 1.0);
            tp.c1.sigma = cfg.get_num("sigma1", 1.0);
            tp.c1.nu = measure_from(cfg, "nu", 1.0, 1.0);
            tp.c2.a = cfg.get_num("a2", 1.0);
            tp.c2.sigma = cfg.get_num("sigma2", 1.0);
            tp.c2.nu = tp.c1.nu;
            tp.kform = kform_from(cfg);
            st = monte_carlo_operating_stats(world, tp, rect, opts);
        } else {
            throw parameter_error("montecarlo: test must be drift|jump");
        }
        csv += world.label() + "," + fmt12(alpha) + "," + fmt12(rect.l1) + "," + fmt12(rect.r1) +
               "," + fmt12(rect.l2) + "," + fmt12(rect.r2) + "," + fmt12(st.alpha_hat) + "," +
               fmt12(st.alpha_se) + "," + fmt12(st.mean_tau) + "," + fmt12(st.mean_tau1) + "," +
               fmt12(st.gap) + "," + fmt12(st.gap_se) + "," + fmt12(st.no_decision_fraction) +
               "\n";
        rows.push_back({{"world", world.label()},
                        {"alpha", jnum(alpha)},
                        {"rect", rect_json(rect)},
                        {"alpha_hat", jnum(st.alpha_hat)},
                        {"alpha_se", jnum(st.alpha_se)},
                        {"delta_freq", {jnum(st.delta_freq[0]), jnum(st.delta_freq[1]),
                                        jnum(st.delta_freq[2]), jnum(st.delta_freq[3])}},
                        {"mean_tau", jnum(st.mean_tau)},
                        {"mean_tau1", jnum(st.mean_tau1)},
                        {"gap", jnum(st.gap)},
                        {"gap_se", jnum(st.gap_se)},
                        {"n_decided", st.n_decided},
                        {"no_decision_fraction", jnum(st.no_decision_fraction)}});
    }
    ctx.write_file("stats.csv", csv);
    json out;
    out["rows"] = rows;
    ctx.write_file("stats.json", out.dump(2) + "\n");
}

void cmd_envelopes(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    EnvelopeParams params;
    const std::string mode = cfg.get_str("mode", "llr");
    if (mode == "llr") {
        JumpTestParams p1;
        p1.a = cfg.get_num("a1", 1.0);
        p1.sigma = cfg.get_num("sigma1", 1.0);
        p1.nu = measure_from(cfg, "nu", 1.0, 1.0);
        JumpTestParams p2 = p1;
        p2.a = cfg.get_num("a2", 1.0);
        p2.sigma = cfg.get_num("sigma2", 1.0);
        const KForm kf = kform_from(cfg);
        const LlrCoefficients co1 = jump_llr_coefficients(p1, 1, {}, kf);
        const LlrCoefficients co2 = jump_llr_coefficients(p2, 1, {}, kf);
        const double k_bound = cfg.get_num("k_bound", 1.0);
        params.coeffs = EnvelopeCoeffs::from_llr(co1, co2, k_bound);
    } else if (mode == "direct") {
        params.coeffs.beta1 = cfg.get_num("beta1", 1.0);
        params.coeffs.beta2 = cfg.get_num("beta2", 1.0);
        params.coeffs.gamma1 = cfg.get_num("gamma1", 0.0);
        params.coeffs.gamma2 = cfg.get_num("gamma2", 0.0);
        params.coeffs.C1 = cfg.get_num("C1", 0.0);
        params.coeffs.C2 = cfg.get_num("C2", 0.0);
        params.coeffs.M = cfg.get_num("M", 0.0);
        params.coeffs.K_bound = cfg.get_num("k_bound", 1.0);
        params.coeffs.L_const = cfg.get_num("L", 0.0);
        params.coeffs.L_overridden = true;
    } else {
        throw parameter_error("envelopes: mode must be llr|direct");
    }
    params.rect = Rectangle{cfg.get_num("l1", -1.0), cfg.get_num("r1", 1.0),
                            cfg.get_num("l2", -1.0), cfg.get_num("r2", 1.0)};
    const std::string world_s = cfg.get_str("world", "00");
    if (world_s.size() != 2) throw parameter_error("envelopes: world must be two digits");
    params.world = WorldIndex{world_s[0] - '0', world_s[1] - '0'};
    params.world.validate();
    const int grid_n = static_cast<int>(cfg.get_num("grid_n", 64));
    if (grid_n < 2) throw parameter_error("envelopes: grid_n must be >= 2");

    const auto sweep = cfg.get_list("L_sweep", fmt12(params.coeffs.L_const));
    json gaps = json::array();
    bool continued_any = false;
    for (double L : sweep) {
        EnvelopeParams p = params;
        p.coeffs.L_const = L;
        p.coeffs.L_overridden = true;
        std::string csv = "x,y,lower,upper\n";
        double sup_gap = 0.0;
        for (int a = 0; a < grid_n; ++a) {
            for (int b = 0; b < grid_n; ++b) {
                const double x = p.rect.l1 + (p.rect.r1 - p.rect.l1) * a / (grid_n - 1.0);
                const double y = p.rect.l2 + (p.rect.r2 - p.rect.l2) * b / (grid_n - 1.0);
                const EnvelopeValue v = eval_envelopes(p, x, y);
                continued_any = continued_any || v.lower_continued || v.upper_continued;
                sup_gap = std::max(sup_gap, v.upper - v.lower);
                csv += fmt12(x) + "," + fmt12(y) + "," + fmt12(v.lower) + "," + fmt12(v.upper) +
                       "\n";
            }
        }
        std::ostringstream name;
        name << "envelope_" << params.world.label() << "_L" << L << ".csv";
        ctx.write_file(name.str(), csv);
        gaps.push_back({{"L", jnum(L)}, {"gap_sup_norm", jnum(sup_gap)}});
    }
    ctx.manifest_extra["gap_sweep"] = gaps;
    ctx.manifest_extra["sin_branch_continuation"] = continued_any;
}

void cmd_oil(RunContext& ctx) {
    Config& cfg = ctx.cfg;
    FitResult fit;
    if (cfg.has("csv")) {
        const PriceSeries series = load_prices(cfg.get_str("csv", ""));
        const std::string conv = cfg.get_str("fit_convention", "price_diff");
        fit = fit_parameters(series, conv == "log_return" ? FitConvention::LogReturns
                                                          : FitConvention::PriceDifferences);
    } else {
        fit.mu_hat = cfg.get_num("mu", 0.0238);
        fit.sigma_hat = cfg.get_num("sigma", 11.419);
        fit.n_returns = 1000;
    }
    OilConfig oil;
    oil.a = cfg.get_num("a", 19.0);
    oil.alpha0 = cfg.get_num("alpha0", 0.9);
    oil.l = cfg.get_num("l", -0.03);
    oil.n_runs = static_cast<int>(cfg.get_num("n_runs", 30));
    oil.horizon = cfg.get_num("horizon", 500.0);
    oil.seed = ctx.seed();
    oil.nu = measure_from(cfg, "nu", 1.0, 1.0);
    oil.kform = kform_from(cfg);
    oil.alpha_is_confidence = cfg.get_num("confidence", 0.0) != 0.0;
    oil.k_bound = cfg.get_num("k_bound", 1.0);
    oil.world = static_cast<int>(cfg.get_num("world", 1));
    oil.r_override = cfg.get_num("r_override", 0.0);

    const OilReport rep = run_oil_experiment(fit, oil);
    ctx.write_file("oil_report.json", rep.to_json() + "\n");

    if (cfg.get_num("emit_paths", 0.0) != 0.0) {
        const auto ch = jump_llr_characteristics(rep.coeffs, oil.world);
        const double width = rep.r - oil.l;
        const double dt = kDefaultDtFactor * width * width / std::max(ch.diffusion_var, 1e-12);
        // paths truncated shortly after the first exit to keep files bounded
        std::string csv = "run,time,value,is_jump\n";
        for (int run = 0; run < oil.n_runs; ++run) {
            const double cap = std::min(oil.horizon, 50.0 * width * width /
                                                         std::max(ch.diffusion_var, 1e-12));
            const SamplePath p = simulate_characteristics(ch, cap, dt, oil.seed,
                                                          static_cast<std::uint64_t>(run));
            std::size_t j = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const bool jump = j < p.jump_indices.size() && p.jump_indices[j] == i;
                if (jump) ++j;
                csv += std::to_string(run) + "," + fmt12(p.times[i]) + "," +
                       fmt12(p.values[i]) + "," + (jump ? "1" : "0") + "\n";
                if (p.values[i] > rep.r || p.values[i] < oil.l) break;
            }
        }
        ctx.write_file("llr_paths.csv", csv);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levyht: two-dimensional Levy-driven sequential hypothesis testing"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir_flag;
    std::string seed_flag, threads_flag;

    const std::vector<std::string> subs = {"simulate", "thresholds", "montecarlo", "envelopes",
                                           "oil"};
    std::map<std::string, CLI::App*> apps;
    for (const std::string& name : subs) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value parameter file");
        sub->add_option("--set", sets, "override key=value (repeatable)");
        sub->add_option("--out", out_dir_flag, "output directory");
        sub->add_option("--seed", seed_flag, "RNG seed");
        sub->add_option("--threads", threads_flag, "worker cap for path-parallel runs");
        apps[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config/usage error\n";
        app.exit(e);
        return 2;
    }

    RunContext ctx;
    try {
        for (const std::string& name : subs)
            if (apps[name]->parsed()) ctx.subcommand = name;

        if (!config_path.empty()) ctx.cfg.load_file(config_path);
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw parameter_error("--set expects key=value, got: " + kv);
            ctx.cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!seed_flag.empty()) ctx.cfg.set("seed", seed_flag);
        if (!threads_flag.empty()) ctx.cfg.set("threads", threads_flag);

        const char* env_out = std::getenv("LEVYHT_OUT_DIR");
        std::string out = !out_dir_flag.empty() ? out_dir_flag
                          : ctx.cfg.has("out")  ? ctx.cfg.get_str("out", ".")
                          : env_out             ? std::string(env_out)
                                                : std::string(".");
        ctx.cfg.set("out", out);
        ctx.out_dir = out;

        if (ctx.subcommand == "simulate")
            cmd_simulate(ctx);
        else if (ctx.subcommand == "thresholds")
            cmd_thresholds(ctx);
        else if (ctx.subcommand == "montecarlo")
            cmd_montecarlo(ctx);
        else if (ctx.subcommand == "envelopes")
            cmd_envelopes(ctx);
        else if (ctx.subcommand == "oil")
            cmd_oil(ctx);
        ctx.finish();
    } catch (const parameter_error& e) {
        std::cerr << "config/input error: " << e.what() << "\n";
        return 2;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
