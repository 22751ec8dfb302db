#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyht/decision.hpp"
#include "levyht/generators.hpp"
#include "levyht/levy_sim.hpp"
#include "levyht/likelihood.hpp"
#include "levyht/market.hpp"
#include "levyht/supersub.hpp"
#include "levyht/thresholds.hpp"

namespace py = pybind11;
using namespace levyht;

PYBIND11_MODULE(_levyht, m) {
    m.doc() = "Levy-process-driven two-dimensional sequential hypothesis testing";

    py::register_exception<parameter_error>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<infeasible_error>(m, "InfeasibleError", PyExc_ArithmeticError);
    py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);

    // ---- measures and paths ----
    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init([](double abs_tol, int max_panels) {
                 QuadratureSpec q;
                 q.abs_tol = abs_tol;
                 q.max_panels = max_panels;
                 q.validate();
                 return q;
             }),
             py::arg("abs_tol") = 1e-10, py::arg("max_panels") = 4000)
        .def_readonly("abs_tol", &QuadratureSpec::abs_tol);

    py::class_<JumpMeasureSpec>(m, "JumpMeasureSpec")
        .def_static("zero", &JumpMeasureSpec::zero)
        .def_static("exponential", &JumpMeasureSpec::exponential, py::arg("intensity"),
                    py::arg("scale"), py::arg("tilt_a") = 0.0)
        .def_static("tabulated", &JumpMeasureSpec::tabulated, py::arg("xs"), py::arg("density"),
                    py::arg("tilt_a") = 0.0)
        .def("total_mass", &JumpMeasureSpec::total_mass)
        .def("base_mass", &JumpMeasureSpec::base_mass)
        .def("mean_jump", &JumpMeasureSpec::mean_jump)
        .def("density", &JumpMeasureSpec::density)
        .def("is_zero", &JumpMeasureSpec::is_zero)
        .def("integrate",
             [](const JumpMeasureSpec& s, const std::function<double(double)>& f, double tol) {
                 return s.integrate(f, tol);
             },
             py::arg("f"), py::arg("abs_tol") = 1e-10)
        .def("__repr__", &JumpMeasureSpec::describe);

    py::class_<SamplePath>(m, "SamplePath")
        .def_readonly("times", &SamplePath::times)
        .def_readonly("values", &SamplePath::values)
        .def_readonly("jump_indices", &SamplePath::jump_indices)
        .def_readonly("dt", &SamplePath::dt)
        .def("terminal", &SamplePath::terminal)
        .def("to_csv", [](const SamplePath& p) { return to_csv(p); });

    py::class_<SamplePath2D>(m, "SamplePath2D")
        .def_readonly("times", &SamplePath2D::times)
        .def_readonly("values1", &SamplePath2D::values1)
        .def_readonly("values2", &SamplePath2D::values2)
        .def_readonly("jump_indices1", &SamplePath2D::jump_indices1)
        .def_readonly("jump_indices2", &SamplePath2D::jump_indices2)
        .def("to_csv", [](const SamplePath2D& p) { return to_csv(p); });

    py::class_<LevyCharacteristics>(m, "LevyCharacteristics")
        .def(py::init([](double drift, double diffusion_var, JumpMeasureSpec jumps,
                         int jump_sign) {
                 LevyCharacteristics c{drift, diffusion_var, std::move(jumps), jump_sign};
                 c.validate();
                 return c;
             }),
             py::arg("drift") = 0.0, py::arg("diffusion_var") = 0.0,
             py::arg("jumps") = JumpMeasureSpec::zero(), py::arg("jump_sign") = 1)
        .def_readonly("drift", &LevyCharacteristics::drift)
        .def_readonly("diffusion_var", &LevyCharacteristics::diffusion_var)
        .def_readonly("jumps", &LevyCharacteristics::jumps)
        .def_readonly("jump_sign", &LevyCharacteristics::jump_sign);

    py::class_<Sigma2>(m, "Sigma2")
        .def(py::init<double, double, double>(), py::arg("xx"), py::arg("xy"), py::arg("yy"));

    m.def("simulate_bm_drift", &simulate_bm_drift, py::arg("drift"), py::arg("vol"),
          py::arg("horizon"), py::arg("dt"), py::arg("seed"), py::arg("stream") = 0);
    m.def("simulate_compound_poisson", &simulate_compound_poisson, py::arg("spec"),
          py::arg("horizon"), py::arg("seed"), py::arg("stream") = 0);
    m.def("simulate_levy2d", &simulate_levy2d, py::arg("mu"), py::arg("sigma"), py::arg("specs"),
          py::arg("horizon"), py::arg("dt"), py::arg("seed"), py::arg("stream") = 0);
    m.def("simulate_characteristics", &simulate_characteristics, py::arg("characteristics"),
          py::arg("horizon"), py::arg("dt"), py::arg("seed"), py::arg("stream") = 0);
    m.def("simulate_characteristics_pair", &simulate_characteristics_pair, py::arg("c1"),
          py::arg("c2"), py::arg("rho"), py::arg("horizon"), py::arg("dt"), py::arg("seed"),
          py::arg("stream") = 0);

    // ---- likelihood ----
    py::enum_<SignConvention>(m, "SignConvention")
        .value("Proof", SignConvention::Proof)
        .value("Statement", SignConvention::Statement);
    py::enum_<KForm>(m, "KForm")
        .value("DensityTilt", KForm::DensityTilt)
        .value("Pushforward", KForm::Pushforward);

    py::class_<DriftTestParams>(m, "DriftTestParams")
        .def(py::init([](double m_, double sigma) {
                 DriftTestParams p{m_, sigma};
                 p.validate();
                 return p;
             }),
             py::arg("m"), py::arg("sigma"))
        .def_readonly("m", &DriftTestParams::m)
        .def_readonly("sigma", &DriftTestParams::sigma);

    py::class_<JumpTestParams>(m, "JumpTestParams")
        .def(py::init([](double a, double sigma, JumpMeasureSpec nu) {
                 JumpTestParams p{a, sigma, std::move(nu)};
                 p.validate();
                 return p;
             }),
             py::arg("a"), py::arg("sigma"), py::arg("nu"))
        .def_readonly("a", &JumpTestParams::a)
        .def_readonly("sigma", &JumpTestParams::sigma)
        .def_readonly("nu", &JumpTestParams::nu);

    py::class_<LlrCoefficients>(m, "LlrCoefficients")
        .def_readonly("beta", &LlrCoefficients::beta)
        .def_readonly("m_jump", &LlrCoefficients::m_jump)
        .def_readonly("gamma", &LlrCoefficients::gamma)
        .def_readonly("K", &LlrCoefficients::K)
        .def_readonly("sign", &LlrCoefficients::sign)
        .def("K_mass", &LlrCoefficients::K_mass)
        .def("to_json", &LlrCoefficients::to_json);

    m.def("drift_llr_characteristics", &drift_llr_characteristics, py::arg("params"),
          py::arg("index"), py::arg("convention") = SignConvention::Proof);
    m.def("drift_llr_from_observation", &drift_llr_from_observation, py::arg("obs"),
          py::arg("m"), py::arg("sigma"));
    m.def("jump_llr_coefficients", &jump_llr_coefficients, py::arg("params"), py::arg("index"),
          py::arg("quad") = QuadratureSpec{}, py::arg("kform") = KForm::DensityTilt);
    m.def("jump_llr_characteristics", &jump_llr_characteristics, py::arg("coeffs"),
          py::arg("index"));

    // ---- thresholds ----
    py::class_<ErrorSpec>(m, "ErrorSpec")
        .def(py::init([](double a00, double a01, double a10, double a11) {
                 ErrorSpec e{a00, a01, a10, a11};
                 e.validate();
                 return e;
             }),
             py::arg("alpha00"), py::arg("alpha01"), py::arg("alpha10"), py::arg("alpha11"))
        .def_readonly("alpha00", &ErrorSpec::alpha00)
        .def_readonly("alpha01", &ErrorSpec::alpha01)
        .def_readonly("alpha10", &ErrorSpec::alpha10)
        .def_readonly("alpha11", &ErrorSpec::alpha11);

    py::class_<Rectangle>(m, "Rectangle")
        .def(py::init([](double l1, double r1, double l2, double r2) {
                 Rectangle r{l1, r1, l2, r2};
                 r.validate();
                 return r;
             }),
             py::arg("l1"), py::arg("r1"), py::arg("l2"), py::arg("r2"))
        .def_readonly("l1", &Rectangle::l1)
        .def_readonly("r1", &Rectangle::r1)
        .def_readonly("l2", &Rectangle::l2)
        .def_readonly("r2", &Rectangle::r2);

    py::enum_<CouplingVariant>(m, "CouplingVariant")
        .value("Printed", CouplingVariant::Printed)
        .value("Corrected", CouplingVariant::Corrected);

    m.def("induce_fourth_alpha", &induce_fourth_alpha, py::arg("alpha00"), py::arg("alpha01"),
          py::arg("alpha10"));
    m.def("l1_feasible_interval", &l1_feasible_interval, py::arg("alpha00"), py::arg("alpha10"));
    m.def("solve_rectangle", &solve_rectangle, py::arg("errors"), py::arg("l1"),
          py::arg("variant") = CouplingVariant::Printed);

    // ---- decision ----
    py::class_<WorldIndex>(m, "WorldIndex")
        .def(py::init([](int i, int j) {
                 WorldIndex w{i, j};
                 w.validate();
                 return w;
             }),
             py::arg("i"), py::arg("j"))
        .def_readonly("i", &WorldIndex::i)
        .def_readonly("j", &WorldIndex::j)
        .def("label", &WorldIndex::label);

    py::enum_<ExitSide>(m, "ExitSide")
        .value("Left", ExitSide::Left)
        .value("Right", ExitSide::Right)
        .value("None", ExitSide::None);

    py::class_<DecisionOutcome>(m, "DecisionOutcome")
        .def_readonly("tau1", &DecisionOutcome::tau1)
        .def_readonly("tau2", &DecisionOutcome::tau2)
        .def_readonly("tau", &DecisionOutcome::tau)
        .def_readonly("side1", &DecisionOutcome::side1)
        .def_readonly("side2", &DecisionOutcome::side2)
        .def_readonly("decided", &DecisionOutcome::decided)
        .def("delta", &DecisionOutcome::delta);

    py::class_<OperatingStats>(m, "OperatingStats")
        .def_readonly("world", &OperatingStats::world)
        .def_readonly("n_paths", &OperatingStats::n_paths)
        .def_readonly("n_decided", &OperatingStats::n_decided)
        .def_readonly("no_decision_fraction", &OperatingStats::no_decision_fraction)
        .def_readonly("alpha_hat", &OperatingStats::alpha_hat)
        .def_readonly("alpha_se", &OperatingStats::alpha_se)
        .def_readonly("delta_freq", &OperatingStats::delta_freq)
        .def_readonly("mean_tau", &OperatingStats::mean_tau)
        .def_readonly("mean_tau1", &OperatingStats::mean_tau1)
        .def_readonly("gap", &OperatingStats::gap)
        .def_readonly("gap_se", &OperatingStats::gap_se);

    py::class_<DriftTestPair>(m, "DriftTestPair")
        .def(py::init([](const DriftTestParams& c1, const DriftTestParams& c2) {
                 return DriftTestPair{c1, c2};
             }),
             py::arg("c1"), py::arg("c2"));

    py::class_<JumpTestPair>(m, "JumpTestPair")
        .def(py::init([](const JumpTestParams& c1, const JumpTestParams& c2, KForm kform) {
                 return JumpTestPair{c1, c2, kform};
             }),
             py::arg("c1"), py::arg("c2"), py::arg("kform") = KForm::DensityTilt);

    py::class_<McOptions>(m, "McOptions")
        .def(py::init([](std::size_t n_paths, double dt, double horizon, std::uint64_t seed,
                         int threads) {
                 return McOptions{n_paths, dt, horizon, seed, threads};
             }),
             py::arg("n_paths") = 20000, py::arg("dt") = 0.0, py::arg("horizon") = 1e4,
             py::arg("seed") = 123456789, py::arg("threads") = 1);

    m.def("run_decision", &run_decision, py::arg("llr2d"), py::arg("rect"));
    m.def("monte_carlo_operating_stats",
          py::overload_cast<const WorldIndex&, const DriftTestPair&, const Rectangle&,
                            const McOptions&>(&monte_carlo_operating_stats),
          py::arg("world"), py::arg("test"), py::arg("rect"), py::arg("options"));
    m.def("monte_carlo_operating_stats",
          py::overload_cast<const WorldIndex&, const JumpTestPair&, const Rectangle&,
                            const McOptions&>(&monte_carlo_operating_stats),
          py::arg("world"), py::arg("test"), py::arg("rect"), py::arg("options"));
    m.def("exit_probability_oracle_1d", &exit_probability_oracle_1d, py::arg("drift"),
          py::arg("variance"), py::arg("l"), py::arg("r"));

    // ---- generators ----
    py::class_<TestFunction>(m, "TestFunction")
        .def_readonly("name", &TestFunction::name)
        .def("__call__", [](const TestFunction& tf, double x, double y) { return tf.f(x, y); })
        .def("partials_consistent", &TestFunction::partials_consistent, py::arg("x"),
             py::arg("y"), py::arg("h") = 1e-4);
    m.def("tf_constant", &tf_constant);
    m.def("tf_x1", &tf_x1);
    m.def("tf_x2", &tf_x2);
    m.def("tf_x1_squared", &tf_x1_squared);
    m.def("tf_x1_x2", &tf_x1_x2);
    m.def("tf_exp_neg_x1", &tf_exp_neg_x1);

    py::enum_<JumpCompensation>(m, "JumpCompensation")
        .value("Kernel", JumpCompensation::Kernel)
        .value("NoCompensation", JumpCompensation::None);

    m.def("apply_drift_generator", &apply_drift_generator, py::arg("world"), py::arg("params"),
          py::arg("xi"), py::arg("x"), py::arg("y"),
          py::arg("convention") = SignConvention::Statement);
    m.def("apply_jump_generator", &apply_jump_generator, py::arg("world"), py::arg("rho"),
          py::arg("co1"), py::arg("co2"), py::arg("xi"), py::arg("x"), py::arg("y"),
          py::arg("quad") = QuadratureSpec{}, py::arg("convention") = SignConvention::Statement);
    m.def("generator_from_characteristics", &generator_from_characteristics, py::arg("c1"),
          py::arg("c2"), py::arg("rho"), py::arg("xi"), py::arg("x"), py::arg("y"),
          py::arg("quad") = QuadratureSpec{},
          py::arg("compensation") = JumpCompensation::Kernel);
    m.def("jump_mass_M", &jump_mass_M, py::arg("K1"), py::arg("K2"));

    py::class_<DynkinResult>(m, "DynkinResult")
        .def_readonly("estimate", &DynkinResult::estimate)
        .def_readonly("standard_error", &DynkinResult::standard_error)
        .def_readonly("generator_value", &DynkinResult::generator_value)
        .def_readonly("mc_value", &DynkinResult::mc_value);
    m.def("dynkin_residual", &dynkin_residual, py::arg("c1"), py::arg("c2"), py::arg("rho"),
          py::arg("xi"), py::arg("x"), py::arg("y"), py::arg("t_small"), py::arg("n_mc"),
          py::arg("seed"), py::arg("compensation") = JumpCompensation::Kernel,
          py::arg("threads") = 1);

    // ---- supersub ----
    py::class_<EnvelopeCoeffs>(m, "EnvelopeCoeffs")
        .def(py::init([](double beta1, double beta2, double gamma1, double gamma2, double C1,
                         double C2, double M, double K_bound, double L_const,
                         bool L_overridden) {
                 EnvelopeCoeffs c{beta1, beta2, gamma1, gamma2, C1, C2, M, K_bound, L_const,
                                  L_overridden};
                 c.validate();
                 return c;
             }),
             py::arg("beta1"), py::arg("beta2"), py::arg("gamma1") = 0.0,
             py::arg("gamma2") = 0.0, py::arg("C1") = 0.0, py::arg("C2") = 0.0,
             py::arg("M") = 0.0, py::arg("K_bound") = 1.0, py::arg("L_const") = 0.0,
             py::arg("L_overridden") = true)
        .def_static("from_llr", &EnvelopeCoeffs::from_llr, py::arg("co1"), py::arg("co2"),
                    py::arg("k_bound"), py::arg("quad") = QuadratureSpec{})
        .def_readonly("beta1", &EnvelopeCoeffs::beta1)
        .def_readonly("beta2", &EnvelopeCoeffs::beta2)
        .def_readonly("gamma1", &EnvelopeCoeffs::gamma1)
        .def_readonly("gamma2", &EnvelopeCoeffs::gamma2)
        .def_readonly("C1", &EnvelopeCoeffs::C1)
        .def_readonly("C2", &EnvelopeCoeffs::C2)
        .def_readonly("M", &EnvelopeCoeffs::M)
        .def_readonly("L_const", &EnvelopeCoeffs::L_const);

    py::class_<EnvelopeParams>(m, "EnvelopeParams")
        .def(py::init([](const EnvelopeCoeffs& coeffs, const Rectangle& rect,
                         const WorldIndex& world) {
                 return EnvelopeParams{coeffs, rect, world};
             }),
             py::arg("coeffs"), py::arg("rect"), py::arg("world"));

    py::class_<EnvelopeValue>(m, "EnvelopeValue")
        .def_readonly("lower", &EnvelopeValue::lower)
        .def_readonly("upper", &EnvelopeValue::upper)
        .def_readonly("lower_continued", &EnvelopeValue::lower_continued)
        .def_readonly("upper_continued", &EnvelopeValue::upper_continued);

    m.def("compensator_constant", &compensator_constant, py::arg("K1"), py::arg("K2"),
          py::arg("coord"), py::arg("quad") = QuadratureSpec{});
    m.def("eval_envelopes", &eval_envelopes, py::arg("params"), py::arg("x"), py::arg("y"));
    m.def("envelope_test_function", &envelope_test_function, py::arg("params"),
          py::arg("branch"));
    m.def("estimate_k_bound", &estimate_k_bound, py::arg("coeffs"), py::arg("rect"),
          py::arg("K1"), py::arg("K2"), py::arg("cap") = 1e6);

    py::class_<Envelope1D>(m, "Envelope1D")
        .def(py::init([](double beta, double gamma, double C, double L_const) {
                 return Envelope1D{beta, gamma, C, L_const};
             }),
             py::arg("beta"), py::arg("gamma"), py::arg("C"), py::arg("L_const"));
    m.def("envelope1d_value",
          [](const Envelope1D& env, int w, double l, double r, double x, int branch) {
              return envelope1d_value(env, w, l, r, x, branch);
          },
          py::arg("env"), py::arg("w"), py::arg("l"), py::arg("r"), py::arg("x"),
          py::arg("branch"));
    m.def("solve_r_1d", &solve_r_1d, py::arg("env"), py::arg("w"), py::arg("l"),
          py::arg("target"), py::arg("branch"));

    py::class_<EnvelopeRectangles>(m, "EnvelopeRectangles")
        .def_readonly("lower_rect", &EnvelopeRectangles::lower_rect)
        .def_readonly("upper_rect", &EnvelopeRectangles::upper_rect)
        .def_readonly("combined", &EnvelopeRectangles::combined)
        .def_readonly("audit_upper", &EnvelopeRectangles::audit_upper)
        .def_readonly("audit_lower", &EnvelopeRectangles::audit_lower);
    m.def("rectangle_from_envelopes", &rectangle_from_envelopes, py::arg("alphas"),
          py::arg("coeffs"), py::arg("l1"), py::arg("l2"));

    // ---- market ----
    py::class_<BnsParams>(m, "BnsParams")
        .def(py::init([](double mu, double beta, double rho, double lambda, double theta,
                         double theta_prime, double sigma0_sq, JumpMeasureSpec Z,
                         JumpMeasureSpec Zb, double S0) {
                 BnsParams p{mu, beta, rho, lambda, theta, theta_prime, sigma0_sq, std::move(Z),
                             std::move(Zb), S0};
                 p.validate();
                 return p;
             }),
             py::arg("mu") = 0.0, py::arg("beta") = 0.0, py::arg("rho") = 0.0,
             py::arg("lam") = 1.0, py::arg("theta") = 1.0, py::arg("theta_prime") = 1.0,
             py::arg("sigma0_sq") = 0.04,
             py::arg("Z") = JumpMeasureSpec::exponential(1.0, 0.5),
             py::arg("Zb") = JumpMeasureSpec::exponential(2.0, 0.5), py::arg("S0") = 1.0);

    py::class_<BnsPaths>(m, "BnsPaths")
        .def_readonly("price", &BnsPaths::price)
        .def_readonly("log_price", &BnsPaths::log_price)
        .def_readonly("variance", &BnsPaths::variance);
    m.def("simulate_bns", &simulate_bns, py::arg("params"), py::arg("horizon"), py::arg("dt"),
          py::arg("seed"), py::arg("stream") = 0);

    py::class_<PriceSeries>(m, "PriceSeries")
        .def_readonly("dates", &PriceSeries::dates)
        .def_readonly("close", &PriceSeries::close)
        .def_readonly("log_returns", &PriceSeries::log_returns);
    m.def("load_prices", &load_prices, py::arg("csv_path"));
    m.def("parse_prices", &parse_prices, py::arg("csv_text"));
    m.def("prices_to_csv", [](const PriceSeries& s) { return to_csv(s); });

    py::enum_<FitConvention>(m, "FitConvention")
        .value("PriceDifferences", FitConvention::PriceDifferences)
        .value("LogReturns", FitConvention::LogReturns);
    py::class_<FitResult>(m, "FitResult")
        .def(py::init([](double mu_hat, double sigma_hat) {
                 FitResult f;
                 f.mu_hat = mu_hat;
                 f.sigma_hat = sigma_hat;
                 f.n_returns = 1000;
                 return f;
             }),
             py::arg("mu_hat"), py::arg("sigma_hat"))
        .def_readonly("mu_hat", &FitResult::mu_hat)
        .def_readonly("sigma_hat", &FitResult::sigma_hat)
        .def_readonly("degenerate", &FitResult::degenerate)
        .def_readonly("n_returns", &FitResult::n_returns);
    m.def("fit_parameters", &fit_parameters, py::arg("series"),
          py::arg("convention") = FitConvention::PriceDifferences);

    py::class_<OilConfig>(m, "OilConfig")
        .def(py::init<>())
        .def_readwrite("a", &OilConfig::a)
        .def_readwrite("alpha0", &OilConfig::alpha0)
        .def_readwrite("l", &OilConfig::l)
        .def_readwrite("n_runs", &OilConfig::n_runs)
        .def_readwrite("horizon", &OilConfig::horizon)
        .def_readwrite("seed", &OilConfig::seed)
        .def_readwrite("nu", &OilConfig::nu)
        .def_readwrite("kform", &OilConfig::kform)
        .def_readwrite("alpha_is_confidence", &OilConfig::alpha_is_confidence)
        .def_readwrite("k_bound", &OilConfig::k_bound)
        .def_readwrite("world", &OilConfig::world)
        .def_readwrite("r_override", &OilConfig::r_override);

    py::class_<OilReport>(m, "OilReport")
        .def_readonly("coeffs", &OilReport::coeffs)
        .def_readonly("C_1d", &OilReport::C_1d)
        .def_readonly("M_1d", &OilReport::M_1d)
        .def_readonly("L_const", &OilReport::L_const)
        .def_readonly("target", &OilReport::target)
        .def_readonly("r_lower_env", &OilReport::r_lower_env)
        .def_readonly("r_upper_env", &OilReport::r_upper_env)
        .def_readonly("r", &OilReport::r)
        .def_readonly("right_exits", &OilReport::right_exits)
        .def_readonly("left_exits", &OilReport::left_exits)
        .def_readonly("censored", &OilReport::censored)
        .def("to_json", &OilReport::to_json);
    m.def("run_oil_experiment", &run_oil_experiment, py::arg("fit"), py::arg("config"));
}
