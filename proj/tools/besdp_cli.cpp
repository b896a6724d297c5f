// Command-line front end: instance ingestion, solver orchestration, bound
// verification, estimator demos, and machine-readable reports.
//
// Exit codes: 0 ok, 1 acceptance failure, 2 iteration-cap stop,
// 3 infeasible, 64 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "besdp/besdp.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptanceFailure = 1;
constexpr int kExitIterationCap = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUsage = 64;

struct SolveOptions {
  std::string instance_path;
  std::string method = "ga";
  double temperature = 0.0;  // 0: use schedule
  std::string schedule;      // "entropy:SMAX" | "dimension" | "spectral"
  double epsilon = 0.1;
  int max_iters = 100000;
  double grad_tol = 1e-8;
  double lambda_floor = 1e-8;
  double smoothness_floor = 0.0;
  double step = 0.0;
  double estimator_eps = 0.0;
  double delta = 0.05;
  bool exact_expectation = false;
  std::uint64_t seed = 0;
  std::string trace_path;
  std::string report_path;
};

json config_echo(const SolveOptions& opt) {
  json j;
  j["instance"] = opt.instance_path;
  j["method"] = opt.method;
  if (opt.temperature > 0.0) j["temperature"] = opt.temperature;
  if (!opt.schedule.empty()) j["schedule"] = opt.schedule;
  j["epsilon"] = opt.epsilon;
  j["max_iters"] = opt.max_iters;
  j["grad_tol"] = opt.grad_tol;
  j["lambda_floor"] = opt.lambda_floor;
  if (opt.smoothness_floor > 0.0) j["smoothness_floor"] = opt.smoothness_floor;
  if (opt.step > 0.0) j["step"] = opt.step;
  if (opt.estimator_eps > 0.0) j["estimator_eps"] = opt.estimator_eps;
  j["delta"] = opt.delta;
  j["exact_expectation"] = opt.exact_expectation;
  j["seed"] = opt.seed;
  if (!opt.trace_path.empty()) j["trace"] = opt.trace_path;
  if (!opt.report_path.empty()) j["report"] = opt.report_path;
  return j;
}

besdp::Method parse_method(const std::string& name) {
  if (name == "ga") return besdp::Method::GradientAscent;
  if (name == "newton") return besdp::Method::Newton;
  if (name == "sga") return besdp::Method::StochasticGradientAscent;
  if (name == "snewton") return besdp::Method::StochasticNewton;
  throw CLI::ValidationError("--method must be one of ga|newton|sga|snewton");
}

// Resolve the schedule string to a temperature. The spectral schedule needs
// the low-spectrum structure of K at the optimum, which is not known up
// front: run a pilot solve at the dimension-schedule temperature, summarize
// the pilot slack spectrum, and derive the final temperature from it.
std::pair<double, std::optional<besdp::TemperatureSchedule>> resolve_temperature(
    const besdp::SdpInstance& inst, const SolveOptions& opt) {
  if (opt.temperature > 0.0) return {opt.temperature, std::nullopt};
  const int d = static_cast<int>(inst.dim());
  if (opt.schedule.empty()) {
    throw CLI::ValidationError("either --temperature or --schedule is required");
  }
  if (opt.schedule == "dimension") {
    const auto sched = besdp::TemperatureSchedule::dimension(d, opt.epsilon);
    return {besdp::temperature_for_precision(sched), sched};
  }
  if (opt.schedule.rfind("entropy:", 0) == 0) {
    const double smax = std::stod(opt.schedule.substr(8));
    const auto sched = besdp::TemperatureSchedule::entropy(smax, opt.epsilon);
    return {besdp::temperature_for_precision(sched), sched};
  }
  if (opt.schedule == "spectral") {
    const auto pilot_sched = besdp::TemperatureSchedule::dimension(d, opt.epsilon);
    const double pilot_T = besdp::temperature_for_precision(pilot_sched);
    const besdp::DualPoint mu_pilot = besdp::solve_reference(inst, pilot_T, 1e-10);
    const besdp::SpectralSummary sum =
        besdp::spectral_summary(besdp::dual_slack(inst, mu_pilot));
    const auto sched = besdp::TemperatureSchedule::spectral(
        sum.lambda_min, sum.gap, sum.degeneracy, d, opt.epsilon);
    return {besdp::temperature_for_precision(sched), sched};
  }
  throw CLI::ValidationError("--schedule must be dimension, spectral, or entropy:SMAX");
}

besdp::OptimizerConfig make_config(const SolveOptions& opt, double T,
                                   const std::optional<besdp::TemperatureSchedule>& sched) {
  besdp::OptimizerConfig cfg;
  cfg.method = parse_method(opt.method);
  cfg.temperature = T;
  cfg.schedule = sched;
  cfg.max_iters = opt.max_iters;
  cfg.grad_tol = opt.grad_tol;
  cfg.lambda_floor = opt.lambda_floor;
  cfg.smoothness_floor = opt.smoothness_floor;
  cfg.step = opt.step;
  cfg.estimator_precision = opt.estimator_eps;
  cfg.suboptimality_delta = opt.delta;
  cfg.estimator_mode = opt.exact_expectation ? besdp::EstimatorMode::Exact
                                             : besdp::EstimatorMode::Stochastic;
  cfg.seed = opt.seed;
  return cfg;
}

void emit_report(const std::string& path, const json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    besdp::write_file(path, j.dump(2) + "\n");
  }
}

int cmd_solve(const SolveOptions& opt) {
  const besdp::SdpInstance inst = besdp::load_instance(opt.instance_path);
  const auto [T, sched] = resolve_temperature(inst, opt);
  const besdp::OptimizerConfig cfg = make_config(opt, T, sched);
  const besdp::RunTrace trace = besdp::solve(inst, cfg);

  json report;
  report["schema_version"] = besdp::kReportSchemaVersion;
  report["command"] = "solve";
  report["config"] = config_echo(opt);
  report.update(besdp::final_report_to_json(trace.final));
  if (!opt.trace_path.empty()) {
    besdp::write_file(opt.trace_path, besdp::trace_to_csv(trace));
  }
  emit_report(opt.report_path, report);

  const bool deterministic = cfg.method == besdp::Method::GradientAscent ||
                             cfg.method == besdp::Method::Newton ||
                             cfg.estimator_mode == besdp::EstimatorMode::Exact;
  if (deterministic && !trace.final.converged) return kExitIterationCap;
  return kExitOk;
}

int cmd_oracle(const std::string& instance_path, double tol, const std::string& report_path) {
  const besdp::SdpInstance inst = besdp::load_instance(instance_path);
  const besdp::OracleSolution sol = besdp::oracle_solve(inst, tol);
  json report;
  report["schema_version"] = besdp::kReportSchemaVersion;
  report["command"] = "oracle";
  report["instance"] = instance_path;
  report["tol"] = tol;
  report["value"] = sol.value;
  json mu = json::array();
  for (Eigen::Index i = 0; i < sol.mu.size(); ++i) mu.push_back(sol.mu(i));
  report["mu_star"] = std::move(mu);
  emit_report(report_path, report);
  return kExitOk;
}

// Detect a fixed-trace constraint (some Q_i = I) to bound S_max.
std::optional<double> entropy_cap_of(const besdp::SdpInstance& inst) {
  for (Eigen::Index i = 0; i < inst.num_constraints(); ++i) {
    const besdp::Matrix diff =
        inst.constraints[static_cast<std::size_t>(i)].mat() -
        besdp::Matrix::Identity(inst.dim(), inst.dim());
    if (diff.cwiseAbs().maxCoeff() < 1e-12 && inst.targets(i) > 0.0) {
      return besdp::entropy_cap_for_fixed_trace(inst.targets(i),
                                                static_cast<int>(inst.dim()));
    }
  }
  return std::nullopt;
}

int cmd_bounds(const SolveOptions& opt, double oracle_tol) {
  const besdp::SdpInstance inst = besdp::load_instance(opt.instance_path);
  const auto [T, sched] = resolve_temperature(inst, opt);

  SolveOptions det = opt;
  det.method = opt.method == "sga" || opt.method == "snewton" ? "newton" : opt.method;
  const besdp::OptimizerConfig cfg = make_config(det, T, sched);
  const besdp::RunTrace trace = besdp::solve(inst, cfg);
  const besdp::OracleSolution oracle = besdp::oracle_solve(inst, oracle_tol);

  const besdp::DualPoint& mu = trace.final.mu_final;
  const besdp::ThermalOperator op = besdp::thermal_operator(besdp::dual_slack(inst, mu), T);
  const double f_tilde = trace.final.f_tilde_exact;
  const double f_t = trace.final.f_T;
  const double slack_tol = 10.0 * opt.grad_tol + oracle_tol;

  json bounds = json::array();
  bool all_hold = true;
  auto push_bound = [&](const std::string& name, double bound, bool applicable) {
    if (!applicable) return;
    // E-side: E >= f_T >= E - bound. f~-side: E <= f~ <= E + bound.
    const bool e_side = oracle.value + slack_tol >= f_t &&
                        f_t >= oracle.value - bound - slack_tol;
    const bool f_side = f_tilde >= oracle.value - slack_tol &&
                        f_tilde <= oracle.value + bound + slack_tol;
    all_hold = all_hold && e_side && f_side;
    json b;
    b["name"] = name;
    b["bound"] = bound;
    b["e_side_slack"] = oracle.value - f_t;
    b["f_side_slack"] = oracle.value + bound - f_tilde;
    b["holds"] = e_side && f_side;
    bounds.push_back(std::move(b));
  };

  const auto cap = entropy_cap_of(inst);
  push_bound("entropy", cap ? T * *cap : 0.0, cap.has_value());
  push_bound("dimension", T * static_cast<double>(inst.dim()), true);
  {
    const besdp::SpectralSummary sum = besdp::spectral_summary(besdp::dual_slack(inst, mu));
    const double level = sum.lambda_min + sum.gap;
    const double excited = sum.has_excited
                               ? static_cast<double>(inst.dim() - sum.degeneracy) *
                                     level / std::expm1(level / T)
                               : 0.0;
    push_bound("spectral", T * sum.degeneracy + excited, true);
  }

  json report;
  report["schema_version"] = besdp::kReportSchemaVersion;
  report["command"] = "bounds";
  report["config"] = config_echo(opt);
  report["temperature"] = T;
  report["e_oracle"] = oracle.value;
  report["f_tilde"] = f_tilde;
  report["f_t"] = f_t;
  report["bounds"] = std::move(bounds);
  report["all_hold"] = all_hold;
  emit_report(opt.report_path, report);
  return all_hold ? kExitOk : kExitAcceptanceFailure;
}

int cmd_estimate(const std::string& instance_path, std::vector<double> mu_values,
                 double T, double eps, const std::string& mode, int qi, int qj,
                 bool exact, std::uint64_t seed, const std::string& report_path) {
  const besdp::SdpInstance inst = besdp::load_instance(instance_path);
  besdp::DualPoint mu = besdp::DualPoint::Zero(inst.num_constraints());
  if (!mu_values.empty()) {
    if (static_cast<Eigen::Index>(mu_values.size()) != inst.num_constraints()) {
      throw besdp::InstanceFormatError("--mu length must equal the constraint count");
    }
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      mu(i) = mu_values[static_cast<std::size_t>(i)];
    }
  }
  if (qi < 0 || qi >= inst.num_constraints() || qj < 0 || qj >= inst.num_constraints()) {
    throw besdp::InstanceFormatError("--i/--j must index a constraint");
  }

  const besdp::HermitianMatrix K = besdp::dual_slack(inst, mu);
  const besdp::ThermalOperator op = besdp::thermal_operator(K, T);
  const double lambda_min = op.K_spectrum.eigenvalues(0);
  const double h_norm = besdp::trace_norm(K);
  const besdp::EstimatorMode est_mode =
      exact ? besdp::EstimatorMode::Exact : besdp::EstimatorMode::Stochastic;
  besdp::RngStream stream = besdp::RngStream::from_seed(seed);

  json report;
  report["schema_version"] = besdp::kReportSchemaVersion;
  report["command"] = "estimate";
  report["mode"] = mode;
  report["temperature"] = T;
  report["epsilon"] = eps;
  report["seed"] = seed;

  double error = 0.0, stderr_val = 0.0;
  if (mode == "gradient") {
    const besdp::StateModel model =
        besdp::decompose_state_model(inst.constraints[static_cast<std::size_t>(qi)]);
    const besdp::EstimatorBudget budget = besdp::plan_budget(
        lambda_min, T, eps, model.one_norm, besdp::EstimatorKind::Gradient);
    const besdp::Estimate est = besdp::estimate_thermal_trace(
        K, T, model, budget, stream.child(1), est_mode);
    const double exact_value =
        besdp::trace_product(op.X, inst.constraints[static_cast<std::size_t>(qi)]);
    const auto rt = besdp::runtime_model(budget, h_norm, lambda_min, T, model.one_norm);
    report["budget"] = besdp::budget_to_json(budget);
    report["estimate"] = est.value;
    report["stderr"] = est.stderr_;
    report["exact_value"] = exact_value;
    report["predicted_gates"] = rt.concrete_gates;
    report["asymptotic_gates"] = rt.asymptotic;
    error = std::abs(est.value - exact_value);
    stderr_val = est.stderr_;
  } else if (mode == "hessian") {
    const besdp::StateModel mi =
        besdp::decompose_state_model(inst.constraints[static_cast<std::size_t>(qi)]);
    const besdp::StateModel mj =
        besdp::decompose_state_model(inst.constraints[static_cast<std::size_t>(qj)]);
    const besdp::EstimatorBudget budget =
        besdp::plan_budget(lambda_min, T, eps, mi.one_norm, besdp::EstimatorKind::Hessian,
                           mj.one_norm);
    const besdp::Estimate est = besdp::estimate_hessian_element(
        K, T, mi, mj, budget, stream.child(2), est_mode);
    const double exact_value = besdp::hessian(inst, mu, op)(qi, qj);
    const auto rt =
        besdp::runtime_model(budget, h_norm, lambda_min, T, mi.one_norm, mj.one_norm);
    report["budget"] = besdp::budget_to_json(budget);
    report["estimate"] = est.value;
    report["stderr"] = est.stderr_;
    report["exact_value"] = exact_value;
    report["predicted_gates"] = rt.concrete_gates;
    report["asymptotic_gates"] = rt.asymptotic;
    error = std::abs(est.value - exact_value);
    stderr_val = est.stderr_;
  } else {
    throw besdp::InstanceFormatError("--mode must be gradient or hessian");
  }
  report["abs_error"] = error;
  const bool pass = error <= eps + 3.0 * stderr_val;
  report["within_budget"] = pass;
  emit_report(report_path, report);
  return pass ? kExitOk : kExitAcceptanceFailure;
}

besdp::HermitianMatrix parse_psd_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw besdp::InstanceFormatError(field + ": expected a matrix");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(j.size());
  return besdp::HermitianMatrix(besdp::io_detail::parse_complex_matrix(j, d, field));
}

int cmd_divergence(const std::string& pair_path, const std::string& generator, int dim,
                   bool equal, std::uint64_t seed, const std::string& channel,
                   std::vector<double> channel_params, const std::string& report_path) {
  std::optional<besdp::HermitianMatrix> X, Y;
  if (!pair_path.empty()) {
    std::ifstream in(pair_path);
    if (!in) throw besdp::InstanceFormatError("cannot open pair file: " + pair_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw besdp::InstanceFormatError("pair JSON parse error: " + std::string(e.what()));
    }
    if (!j.contains("X") || !j.contains("Y")) {
      throw besdp::InstanceFormatError("pair file must contain fields X and Y");
    }
    X = parse_psd_json(j["X"], "X");
    Y = parse_psd_json(j["Y"], "Y");
  } else if (generator == "random-psd") {
    besdp::RngStream s = besdp::RngStream::from_seed(seed);
    auto draw = [&](besdp::RngStream& st) {
      besdp::Matrix g(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index k = 0; k < dim; ++k) {
          const double u1 = st.next_double(), u2 = st.next_double();
          const double u3 = st.next_double(), u4 = st.next_double();
          g(i, k) = besdp::Complex(
              std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2),
              std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * std::numbers::pi * u4));
        }
      }
      return besdp::HermitianMatrix((g * g.adjoint()) / static_cast<double>(dim));
    };
    X = draw(s);
    Y = equal ? X : draw(s);
  } else if (generator == "diagonal") {
    besdp::RealVector dx(2), dy(2);
    dx << 1.0, 3.0;
    dy << 2.0, 2.0;
    X = besdp::HermitianMatrix::diagonal(dx);
    Y = equal ? X : besdp::HermitianMatrix::diagonal(dy);
  } else {
    throw besdp::InstanceFormatError(
        "divergence needs --pair FILE or --generator random-psd|diagonal");
  }

  const double value = besdp::dbe(*X, *Y);
  json report;
  report["schema_version"] = besdp::kReportSchemaVersion;
  report["command"] = "divergence";
  if (std::isinf(value)) {
    report["d_be"] = "+inf";
  } else {
    report["d_be"] = value;
    // Cross-checks only make sense off the boundary.
    const double xmin = besdp::min_eigenvalue(*X);
    const double ymin = besdp::min_eigenvalue(*Y);
    if (xmin > 1e-12 && ymin > 1e-12) {
      const double spectral = besdp::dbe_spectral(*X, *Y);
      report["d_be_spectral"] = spectral;
      report["spectral_residual"] = std::abs(spectral - value);
      // Umegaki decomposition D_BE = D(X||Y) - D(X+I||Y+I).
      auto umegaki = [](const besdp::HermitianMatrix& A, const besdp::HermitianMatrix& B) {
        const besdp::EigenSystem ea = besdp::eigendecompose(A);
        double s = 0.0;
        for (Eigen::Index i = 0; i < ea.eigenvalues.size(); ++i) {
          s += ea.eigenvalues(i) * std::log(ea.eigenvalues(i));
        }
        const besdp::HermitianMatrix lnB =
            besdp::spectral_apply(B, [](double v) { return std::log(v); });
        return s - besdp::trace_product(A, lnB);
      };
      const Eigen::Index d = X->dim();
      const besdp::HermitianMatrix Xp(X->mat() + besdp::Matrix::Identity(d, d));
      const besdp::HermitianMatrix Yp(Y->mat() + besdp::Matrix::Identity(d, d));
      const double decomposition = umegaki(*X, *Y) - umegaki(Xp, Yp);
      report["umegaki_residual"] = std::abs(decomposition - value);
    }
  }

  if (!channel.empty()) {
    besdp::AffineChannelParams params = [&] {
      if (channel == "attenuator") {
        if (channel_params.size() != 2) {
          throw besdp::InstanceFormatError("--attenuator needs eta and N");
        }
        return besdp::AffineChannelParams::attenuator(channel_params[0], channel_params[1]);
      }
      if (channel == "amplifier") {
        if (channel_params.size() != 2) {
          throw besdp::InstanceFormatError("--amplifier needs G and N");
        }
        return besdp::AffineChannelParams::amplifier(channel_params[0], channel_params[1]);
      }
      if (channel == "additive") {
        if (channel_params.size() != 1) {
          throw besdp::InstanceFormatError("--additive needs N");
        }
        return besdp::AffineChannelParams::additive_noise(channel_params[0]);
      }
      if (channel_params.size() != 2) {
        throw besdp::InstanceFormatError("--affine needs a and b");
      }
      return besdp::AffineChannelParams::raw(channel_params[0], channel_params[1]);
    }();
    const besdp::MonotonicityCheck check =
        besdp::affine_monotonicity_check(*X, *Y, params);
    json c;
    c["label"] = params.label;
    c["a"] = params.a;
    c["b"] = params.b;
    c["condition_satisfied"] = params.monotone();
    c["lhs"] = std::isinf(check.lhs) ? json("+inf") : json(check.lhs);
    c["rhs"] = std::isinf(check.rhs) ? json("+inf") : json(check.rhs);
    c["holds"] = check.holds;
    report["affine_check"] = std::move(c);
  }
  emit_report(report_path, report);
  return kExitOk;
}

int cmd_budget(double lambda_min, double T, double eps, double alpha, double alpha_j,
               double h_norm, const std::string& mode, const std::string& density_path,
               double density_tau, const std::string& report_path) {
  const besdp::EstimatorKind kind =
      mode == "hessian" ? besdp::EstimatorKind::Hessian : besdp::EstimatorKind::Gradient;
  const besdp::EstimatorBudget budget =
      besdp::plan_budget(lambda_min, T, eps, alpha, kind, alpha_j);
  json report;
  report["schema_version"] = besdp::kReportSchemaVersion;
  report["command"] = "budget";
  report["budget"] = besdp::budget_to_json(budget);
  if (h_norm > 0.0) {
    const auto rt = besdp::runtime_model(budget, h_norm, lambda_min, T, alpha, alpha_j);
    report["predicted_gates"] = rt.concrete_gates;
    report["asymptotic_gates"] = rt.asymptotic;
  }
  if (!density_path.empty()) {
    // (t, p(t; tau)) samples of the Cauchy density for external plotting.
    const double tau = density_tau > 0.0 ? density_tau : budget.M / T;
    std::ostringstream csv;
    csv << "t,p\n";
    const double span = 8.0 * tau;
    for (int i = 0; i <= 400; ++i) {
      const double t = -span + 2.0 * span * i / 400.0;
      const double p = tau / (std::numbers::pi * (t * t + tau * tau));
      csv << t << ',' << p << '\n';
    }
    besdp::write_file(density_path, csv.str());
  }
  emit_report(report_path, report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Einstein thermal-operator SDP solver"};
  app.require_subcommand(1);

  SolveOptions opt;
  double oracle_tol = 1e-9;

  auto* solve = app.add_subcommand("solve", "run a dual solver on an instance");
  solve->add_option("--instance", opt.instance_path, "instance JSON path")->required();
  solve->add_option("--method", opt.method, "ga|newton|sga|snewton");
  solve->add_option("--temperature", opt.temperature, "fixed temperature T");
  solve->add_option("--schedule", opt.schedule, "dimension | spectral | entropy:SMAX");
  solve->add_option("--epsilon", opt.epsilon, "target precision for schedules");
  solve->add_option("--max-iters", opt.max_iters, "iteration cap J");
  solve->add_option("--grad-tol", opt.grad_tol, "gradient-norm stopping tolerance");
  solve->add_option("--floor", opt.lambda_floor, "lambda_min feasibility safeguard");
  solve->add_option("--smoothness-floor", opt.smoothness_floor,
                    "lambda_min floor for the auto step size");
  solve->add_option("--step", opt.step, "step size (0 = auto)");
  solve->add_option("--estimator-eps", opt.estimator_eps,
                    "per-iteration estimator precision (stochastic)");
  solve->add_option("--delta", opt.delta, "suboptimality budget delta (stochastic)");
  solve->add_flag("--exact-expectation", opt.exact_expectation,
                  "replace sampling with exact expectations");
  solve->add_option("--seed", opt.seed, "master seed (default 0)");
  solve->add_option("--trace", opt.trace_path, "write per-iteration CSV here");
  solve->add_option("--report", opt.report_path, "write JSON report here");

  std::string oracle_instance, oracle_report;
  auto* oracle = app.add_subcommand("oracle", "reference solve of the unregularized SDP");
  oracle->add_option("--instance", oracle_instance)->required();
  oracle->add_option("--tol", oracle_tol);
  oracle->add_option("--report", oracle_report);

  auto* bounds = app.add_subcommand("bounds", "verify the approximation bounds");
  bounds->add_option("--instance", opt.instance_path)->required();
  bounds->add_option("--method", opt.method);
  bounds->add_option("--temperature", opt.temperature);
  bounds->add_option("--schedule", opt.schedule);
  bounds->add_option("--epsilon", opt.epsilon);
  bounds->add_option("--grad-tol", opt.grad_tol);
  bounds->add_option("--floor", opt.lambda_floor);
  bounds->add_option("--oracle-tol", oracle_tol);
  bounds->add_option("--report", opt.report_path);

  std::string est_instance, est_mode = "gradient", est_report;
  std::vector<double> est_mu;
  double est_T = 1.0, est_eps = 0.1;
  int est_i = 0, est_j = 0;
  bool est_exact = false;
  std::uint64_t est_seed = 0;
  auto* estimate = app.add_subcommand("estimate", "estimator demo against the exact value");
  estimate->add_option("--instance", est_instance)->required();
  estimate->add_option("--mu", est_mu, "dual point (defaults to 0)");
  estimate->add_option("--temperature", est_T);
  estimate->add_option("--epsilon", est_eps);
  estimate->add_option("--mode", est_mode, "gradient | hessian");
  estimate->add_option("--i", est_i, "constraint index");
  estimate->add_option("--j", est_j, "second constraint index (hessian)");
  estimate->add_flag("--exact-expectation", est_exact);
  estimate->add_option("--seed", est_seed);
  estimate->add_option("--report", est_report);

  std::string div_pair, div_generator, div_channel, div_report;
  int div_dim = 2;
  bool div_equal = false;
  std::uint64_t div_seed = 0;
  std::vector<double> div_attenuator, div_amplifier, div_affine;
  double div_additive = -1.0;
  auto* divergence = app.add_subcommand("divergence", "divergence of a PSD pair");
  divergence->add_option("--pair", div_pair, "JSON file with fields X, Y");
  divergence->add_option("--generator", div_generator, "random-psd | diagonal");
  divergence->add_option("--dim", div_dim);
  divergence->add_flag("--equal", div_equal, "set Y = X");
  divergence->add_option("--seed", div_seed);
  divergence->add_option("--attenuator", div_attenuator, "eta N")->expected(2);
  divergence->add_option("--amplifier", div_amplifier, "G N")->expected(2);
  divergence->add_option("--additive", div_additive, "N");
  divergence->add_option("--affine", div_affine, "a b")->expected(2);
  divergence->add_option("--report", div_report);

  double b_lambda = 0.5, b_T = 1.0, b_eps = 0.3, b_alpha = 1.0, b_alpha_j = -1.0,
         b_h = 0.0, b_tau = 0.0;
  std::string b_mode = "gradient", b_density, b_report;
  auto* budget = app.add_subcommand("budget", "plan an estimator budget");
  budget->add_option("--lambda-min", b_lambda);
  budget->add_option("--temperature", b_T);
  budget->add_option("--epsilon", b_eps);
  budget->add_option("--alpha", b_alpha, "state-model 1-norm");
  budget->add_option("--alpha-j", b_alpha_j, "second 1-norm (hessian)");
  budget->add_option("--h-norm", b_h, "slack-operator 1-norm for gate prediction");
  budget->add_option("--mode", b_mode, "gradient | hessian");
  budget->add_option("--emit-density", b_density, "write (t, p(t;tau)) CSV here");
  budget->add_option("--tau", b_tau, "density scale (default M/T)");
  budget->add_option("--report", b_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (oracle->parsed()) return cmd_oracle(oracle_instance, oracle_tol, oracle_report);
    if (bounds->parsed()) return cmd_bounds(opt, oracle_tol);
    if (estimate->parsed()) {
      return cmd_estimate(est_instance, est_mu, est_T, est_eps, est_mode, est_i, est_j,
                          est_exact, est_seed, est_report);
    }
    if (divergence->parsed()) {
      std::string channel;
      std::vector<double> params;
      if (!div_attenuator.empty()) {
        channel = "attenuator";
        params = div_attenuator;
      } else if (!div_amplifier.empty()) {
        channel = "amplifier";
        params = div_amplifier;
      } else if (div_additive >= 0.0) {
        channel = "additive";
        params = {div_additive};
      } else if (!div_affine.empty()) {
        channel = "affine";
        params = div_affine;
      }
      return cmd_divergence(div_pair, div_generator, div_dim, div_equal, div_seed,
                            channel, params, div_report);
    }
    if (budget->parsed()) {
      return cmd_budget(b_lambda, b_T, b_eps, b_alpha, b_alpha_j, b_h, b_mode, b_density,
                        b_tau, b_report);
    }
  } catch (const besdp::InstanceFormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const besdp::DualInfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const besdp::DualUnboundedError& e) {
    std::cerr << "unbounded: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const besdp::BudgetError& e) {
    std::cerr << "budget infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
