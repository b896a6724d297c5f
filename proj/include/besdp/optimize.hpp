#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "besdp/errors.hpp"
#include "besdp/linalg.hpp"
#include "besdp/qsim.hpp"
#include "besdp/sdp.hpp"
#include "besdp/thermal.hpp"

namespace besdp {

enum class Method { GradientAscent, Newton, StochasticGradientAscent, StochasticNewton };

struct OptimizerConfig {
  Method method = Method::GradientAscent;
  double step = 0.0;        // <= 0: auto (1/L_T for first-order, 1 for Newton-type)
  int max_iters = 100000;   // J
  double grad_tol = 1e-8;   // deterministic stopping; stochastic methods run all J
  double lambda_floor = 1e-10;    // feasibility safeguard on every iterate
  double smoothness_floor = 0.0;  // L_T floor for auto step; <= 0: lambda_min(K_mu0)/2
  std::optional<double> temperature;
  std::optional<TemperatureSchedule> schedule;
  double estimator_precision = 0.0;   // eps_j; <= 0: sqrt(L_T * delta / c)
  double suboptimality_delta = 0.05;  // delta driving auto eps_j and the final estimation split
  EstimatorMode estimator_mode = EstimatorMode::Stochastic;
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int iter;
  DualPoint mu;
  double f_T;
  double grad_norm;
  double lambda_min;
  double step;
  double wall_ms;
  double newton_shift = 0.0;      // negative-definiteness shift applied this step
  bool gradient_fallback = false; // Newton-type step replaced by a gradient step
};

// Eq-80-style decomposition of the gap to the unregularized optimum.
struct BoundAudit {
  double entropy_correction;  // T * S_BE(X_T(mu_J)), exact
  double dual_subopt_bound;   // reference-solve difference plus gradient-norm residuals
  double approx_bound;        // realized T * S_BE(X_T(mu_ref)) >= E - F_T
  double schedule_bound;      // theoretical f~-side bound of the active schedule
  double bound_total;         // entropy + subopt + approx
  std::optional<double> measured_gap;  // |f~(mu_J) - E_oracle| when an oracle value is attached
  bool dominated = true;
};

struct FinalReport {
  DualPoint mu_final;
  double temperature = 0.0;
  double f_tilde = 0.0;        // returned estimate of E (stochastic: estimated)
  double f_T = 0.0;            // exact dual objective at mu_final
  double f_tilde_exact = 0.0;  // exact unregularized energy at mu_final
  double final_estimate_stderr = 0.0;
  int iterations = 0;
  double lambda_min_final = 0.0;
  double grad_norm_final = 0.0;
  bool converged = false;
  std::int64_t gradient_estimator_calls = 0;
  std::int64_t hessian_estimator_calls = 0;
  std::optional<BoundAudit> audit;
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  FinalReport final;
};

namespace detail {

inline double resolve_temperature(const OptimizerConfig& cfg) {
  if (cfg.temperature) {
    if (*cfg.temperature <= 0.0) throw std::domain_error("optimizer: temperature must be positive");
    return *cfg.temperature;
  }
  if (cfg.schedule) return temperature_for_precision(*cfg.schedule);
  throw std::invalid_argument("optimizer: either a temperature or a schedule is required");
}

struct DualState {
  DualPoint mu;
  ThermalOperator op;
};

inline DualState evaluate_point(const SdpInstance& inst, const DualPoint& mu, double T) {
  return DualState{mu, thermal_operator(dual_slack(inst, mu), T)};
}

// Halve the step until the trial iterate respects the feasibility floor
// (lambda_min is concave in mu, so endpoint checks certify the segment) and,
// when requested, does not decrease f_T. Throws on cap exhaustion.
inline std::pair<DualState, double> backtrack_step(const SdpInstance& inst,
                                                   const DualState& current,
                                                   const RealVector& direction, double eta,
                                                   double floor, bool enforce_ascent,
                                                   double T) {
  const double f_base =
      enforce_ascent ? dual_objective(inst, current.mu, current.op) : 0.0;
  for (int h = 0; h < 60; ++h) {
    const DualPoint trial = current.mu + eta * direction;
    const HermitianMatrix K = dual_slack(inst, trial);
    const EigenSystem es = eigendecompose(K);
    if (es.eigenvalues(0) >= floor) {
      ThermalOperator op = thermal_operator(es, T);
      if (!enforce_ascent || dual_objective(inst, trial, op) >= f_base) {
        return {DualState{trial, std::move(op)}, eta};
      }
    }
    eta *= 0.5;
  }
  throw std::runtime_error(
      "optimizer: step underflow, feasibility floor unreachable along the step ray");
}

// Gradient supplier: exact thermal traces or the qsim Monte Carlo estimator.
struct GradientOracle {
  std::function<RealVector(const DualState&, int iter)> eval;
};

// Hessian supplier for Newton-type methods.
struct HessianOracle {
  std::function<RealMatrix(const DualState&, int iter)> eval;
};

struct CoreResult {
  RunTrace trace;
  DualState last;
};

inline CoreResult run_core(const SdpInstance& inst, const OptimizerConfig& cfg, double T,
                           const GradientOracle& grad_oracle,
                           const HessianOracle* hess_oracle, bool enforce_ascent,
                           bool deterministic_stop, double fallback_step,
                           FinalReport& report) {
  using clock = std::chrono::steady_clock;

  DualPoint mu0 = find_strictly_feasible(inst);
  DualState state = evaluate_point(inst, mu0, T);
  if (state.op.K_spectrum.eigenvalues(0) < cfg.lambda_floor) {
    throw DualInfeasibleError(
        "optimizer: no feasible start above the safeguard floor");
  }

  RunTrace trace;
  RealVector g = grad_oracle.eval(state, 0);
  trace.iterations.push_back(IterationRecord{0, state.mu,
                                             dual_objective(inst, state.mu, state.op),
                                             g.norm(),
                                             state.op.K_spectrum.eigenvalues(0), 0.0, 0.0});

  const double eta0 = cfg.step > 0.0 ? cfg.step : fallback_step;
  int completed = 0;
  bool converged = deterministic_stop && g.norm() <= cfg.grad_tol;

  for (int j = 1; j <= cfg.max_iters && !converged; ++j) {
    const auto tic = clock::now();
    RealVector direction = g;
    double shift = 0.0;
    bool fallback = false;

    if (hess_oracle != nullptr) {
      RealMatrix H = hess_oracle->eval(state, j);
      H = ((H + H.transpose()) * 0.5).eval();
      const Eigen::SelfAdjointEigenSolver<RealMatrix> hs(H);
      const double lmax = hs.eigenvalues().maxCoeff();
      const double hnorm = hs.eigenvalues().cwiseAbs().maxCoeff();
      const double target = -1e-12 * std::max(hnorm, 1.0);
      shift = std::max(0.0, lmax - target);
      if (shift > 0.5 * std::max(hnorm, 1.0)) {
        // Estimate is indefinite beyond the shift cap: take a safe gradient step.
        fallback = true;
        direction = g;
      } else {
        RealMatrix neg = -(H - shift * RealMatrix::Identity(H.rows(), H.cols()));
        direction = neg.llt().solve(g);
      }
    }

    const double eta_used_base = (hess_oracle != nullptr && fallback) ? fallback_step : eta0;
    auto [next, eta_used] = backtrack_step(inst, state, direction, eta_used_base,
                                           cfg.lambda_floor, enforce_ascent, T);
    state = std::move(next);
    g = grad_oracle.eval(state, j);
    completed = j;

    const double ms =
        std::chrono::duration<double, std::milli>(clock::now() - tic).count();
    trace.iterations.push_back(IterationRecord{
        j, state.mu, dual_objective(inst, state.mu, state.op), g.norm(),
        state.op.K_spectrum.eigenvalues(0), eta_used, ms, shift, fallback});
    if (deterministic_stop && g.norm() <= cfg.grad_tol) converged = true;
  }

  report.mu_final = state.mu;
  report.temperature = T;
  report.f_T = dual_objective(inst, state.mu, state.op);
  report.f_tilde_exact = unregularized_energy(inst, state.mu, state.op);
  report.iterations = completed;
  report.lambda_min_final = state.op.K_spectrum.eigenvalues(0);
  report.grad_norm_final = g.norm();
  report.converged = deterministic_stop ? converged : true;
  trace.final = report;
  return CoreResult{std::move(trace), std::move(state)};
}

}  // namespace detail

// Reference high-precision deterministic Newton solve; used by the audit and
// by callers needing mu_T* itself.
inline DualPoint solve_reference(const SdpInstance& inst, double T,
                                 double grad_tol = 1e-11, int max_iters = 300) {
  OptimizerConfig cfg;
  cfg.method = Method::Newton;
  cfg.temperature = T;
  cfg.grad_tol = grad_tol;
  cfg.max_iters = max_iters;
  cfg.lambda_floor = 1e-12;
  FinalReport report;
  detail::GradientOracle go{[&](const detail::DualState& s, int) {
    return gradient(inst, s.mu, s.op);
  }};
  detail::HessianOracle ho{[&](const detail::DualState& s, int) {
    return hessian(inst, s.mu, s.op);
  }};
  auto res = detail::run_core(inst, cfg, T, go, &ho, /*enforce_ascent=*/true,
                              /*deterministic_stop=*/true, /*fallback_step=*/1.0, report);
  return res.trace.final.mu_final;
}

// Decomposition of |f~(mu_J) - E| into entropy correction, dual
// suboptimality, and approximation error, each replaced by a computable
// bound whose sum must dominate the measured gap.
inline BoundAudit audit_error_decomposition(const SdpInstance& inst, const DualPoint& mu_J,
                                            double T,
                                            const std::optional<TemperatureSchedule>& schedule,
                                            std::optional<double> oracle_value = std::nullopt,
                                            std::optional<double> f_tilde_exact = std::nullopt) {
  const ThermalOperator op_J = thermal_operator(dual_slack(inst, mu_J), T);
  double s_J = 0.0;
  for (Eigen::Index j = 0; j < op_J.occupations.size(); ++j) {
    s_J += scalar_entropy(op_J.occupations(j));
  }

  const DualPoint mu_ref = solve_reference(inst, T);
  const ThermalOperator op_ref = thermal_operator(dual_slack(inst, mu_ref), T);
  double s_ref = 0.0;
  for (Eigen::Index j = 0; j < op_ref.occupations.size(); ++j) {
    s_ref += scalar_entropy(op_ref.occupations(j));
  }

  const double f_J = dual_objective(inst, mu_J, op_J);
  const double f_ref = dual_objective(inst, mu_ref, op_ref);
  const double g_ref = gradient(inst, mu_ref, op_ref).norm();
  const double g_J = gradient(inst, mu_J, op_J).norm();
  const double floor_ref = 0.5 * op_ref.K_spectrum.eigenvalues(0);
  const double L_T = smoothness_bound(inst, floor_ref, T).L_T;

  BoundAudit audit;
  audit.entropy_correction = T * s_J;
  audit.dual_subopt_bound = std::max(0.0, f_ref - f_J) + g_ref * g_ref / L_T +
                            g_J * g_J / (2.0 * L_T);
  audit.approx_bound = T * s_ref;
  audit.bound_total =
      audit.entropy_correction + audit.dual_subopt_bound + audit.approx_bound;

  if (schedule) {
    switch (schedule->mode) {
      case ScheduleMode::Entropy:
        audit.schedule_bound = T * schedule->s_max;
        break;
      case ScheduleMode::Dimension:
        audit.schedule_bound = T * static_cast<double>(inst.dim());
        break;
      case ScheduleMode::Spectral: {
        const SpectralSummary sum = spectral_summary(dual_slack(inst, mu_ref));
        const double level = sum.lambda_min + sum.gap;
        const double excited =
            sum.has_excited
                ? static_cast<double>(inst.dim() - sum.degeneracy) * level /
                      std::expm1(level / T)
                : 0.0;
        audit.schedule_bound = T * sum.degeneracy + excited;
        break;
      }
    }
  } else {
    audit.schedule_bound = T * static_cast<double>(inst.dim());
  }

  if (oracle_value) {
    const double f_tilde =
        f_tilde_exact ? *f_tilde_exact : unregularized_energy(inst, mu_J, op_J);
    audit.measured_gap = std::abs(f_tilde - *oracle_value);
    audit.dominated =
        audit.bound_total + 1e-8 * (1.0 + std::abs(*oracle_value)) >= *audit.measured_gap;
  }
  return audit;
}

namespace detail {

inline double auto_first_order_step(const SdpInstance& inst, const OptimizerConfig& cfg,
                                    double T) {
  double floor = cfg.smoothness_floor;
  if (floor <= 0.0) {
    const DualPoint mu0 = find_strictly_feasible(inst);
    floor = 0.5 * min_eigenvalue(dual_slack(inst, mu0));
    if (floor <= 0.0) floor = cfg.lambda_floor;
  }
  return 1.0 / smoothness_bound(inst, floor, T).L_T;
}

inline double auto_estimator_precision(const SdpInstance& inst, const OptimizerConfig& cfg,
                                       double T) {
  if (cfg.estimator_precision > 0.0) return cfg.estimator_precision;
  double floor = cfg.smoothness_floor > 0.0 ? cfg.smoothness_floor : cfg.lambda_floor;
  const double L_T = smoothness_bound(inst, floor, T).L_T;
  return std::sqrt(L_T * cfg.suboptimality_delta /
                   static_cast<double>(inst.num_constraints()));
}

// Stream tags keeping the per-iteration / per-component / final-estimate
// derivations disjoint.
inline constexpr std::uint64_t kGradientTag = 0x67;
inline constexpr std::uint64_t kHessianTag = 0x68;
inline constexpr std::uint64_t kFinalTag = 0x66;

struct StochasticContext {
  std::vector<StateModel> q_models;
  StateModel h_model;
  RngStream root;
  double eps_j;
  std::int64_t gradient_calls = 0;
  std::int64_t hessian_calls = 0;

  StochasticContext(const SdpInstance& inst, std::uint64_t seed, double eps)
      : h_model(decompose_state_model(inst.objective)),
        root(RngStream::from_seed(seed)),
        eps_j(eps) {
    for (const auto& Qi : inst.constraints) {
      q_models.push_back(decompose_state_model(Qi));
    }
  }

  double estimate_trace(const SdpInstance& inst, const DualState& s, const StateModel& model,
                        double eps, RngStream stream, EstimatorMode mode, double* stderr_out) {
    const double lambda_here = s.op.K_spectrum.eigenvalues(0);
    const EstimatorBudget budget =
        plan_budget(lambda_here, s.op.temperature, eps, model.one_norm,
                    EstimatorKind::Gradient);
    const HermitianMatrix K = dual_slack(inst, s.mu);
    const Estimate est = estimate_thermal_trace(K, s.op.temperature, model, budget,
                                                stream, mode);
    ++gradient_calls;
    if (stderr_out != nullptr) *stderr_out = est.stderr_;
    return est.value;
  }
};

}  // namespace detail

// Deterministic gradient ascent with feasibility-and-ascent backtracking.
// Returns the full per-iteration trace; final.f_tilde is the unregularized
// energy at the last iterate.
inline RunTrace gradient_ascent(const SdpInstance& inst, OptimizerConfig cfg) {
  const double T = detail::resolve_temperature(cfg);
  const double eta = cfg.step > 0.0 ? cfg.step : detail::auto_first_order_step(inst, cfg, T);
  FinalReport report;
  detail::GradientOracle go{[&](const detail::DualState& s, int) {
    return gradient(inst, s.mu, s.op);
  }};
  auto res = detail::run_core(inst, cfg, T, go, nullptr, /*enforce_ascent=*/true,
                              /*deterministic_stop=*/true, eta, report);
  res.trace.final.f_tilde = res.trace.final.f_tilde_exact;
  res.trace.final.audit =
      audit_error_decomposition(inst, res.trace.final.mu_final, T, cfg.schedule);
  return res.trace;
}

// Damped Newton with the same backtracking; near-singular Hessians receive a
// Tikhonov shift, recorded per iteration.
inline RunTrace newton(const SdpInstance& inst, OptimizerConfig cfg) {
  const double T = detail::resolve_temperature(cfg);
  const double eta = cfg.step > 0.0 ? cfg.step : 1.0;
  const double eta_fallback = detail::auto_first_order_step(inst, cfg, T);
  FinalReport report;
  detail::GradientOracle go{[&](const detail::DualState& s, int) {
    return gradient(inst, s.mu, s.op);
  }};
  detail::HessianOracle ho{[&](const detail::DualState& s, int) {
    return hessian(inst, s.mu, s.op);
  }};
  OptimizerConfig cfg2 = cfg;
  cfg2.step = eta;
  auto res = detail::run_core(inst, cfg2, T, go, &ho, /*enforce_ascent=*/true,
                              /*deterministic_stop=*/true, eta_fallback, report);
  res.trace.final.f_tilde = res.trace.final.f_tilde_exact;
  res.trace.final.audit =
      audit_error_decomposition(inst, res.trace.final.mu_final, T, cfg.schedule);
  return res.trace;
}

// Stochastic gradient ascent: per-iteration gradient components from the
// Monte Carlo trace estimator at precision eps_j, fixed step, J iterations,
// and a final estimation step producing f~(mu_J). Exact estimator mode
// reduces bit-for-bit to the deterministic method.
inline RunTrace stochastic_gradient_ascent(const SdpInstance& inst, OptimizerConfig cfg) {
  const double T = detail::resolve_temperature(cfg);
  if (cfg.estimator_mode == EstimatorMode::Exact) {
    OptimizerConfig det = cfg;
    det.method = Method::GradientAscent;
    return gradient_ascent(inst, det);
  }
  const double eta = cfg.step > 0.0 ? cfg.step : detail::auto_first_order_step(inst, cfg, T);
  const double eps_j = detail::auto_estimator_precision(inst, cfg, T);
  const Eigen::Index c = inst.num_constraints();

  detail::StochasticContext ctx(inst, cfg.seed, eps_j);
  FinalReport report;
  detail::GradientOracle go{[&](const detail::DualState& s, int iter) {
    RealVector g(c);
    for (Eigen::Index i = 0; i < c; ++i) {
      RngStream stream = ctx.root.child(detail::kGradientTag,
                                        static_cast<std::uint64_t>(iter),
                                        static_cast<std::uint64_t>(i));
      g(i) = inst.targets(i) -
             ctx.estimate_trace(inst, s, ctx.q_models[static_cast<std::size_t>(i)],
                                ctx.eps_j, stream, cfg.estimator_mode, nullptr);
    }
    return g;
  }};
  OptimizerConfig cfg2 = cfg;
  cfg2.step = eta;
  auto res = detail::run_core(inst, cfg2, T, go, nullptr, /*enforce_ascent=*/false,
                              /*deterministic_stop=*/false, eta, report);

  // Final estimation of Tr[H X] and each Tr[Q_i X] with the delta/4 budget.
  const double delta = cfg.suboptimality_delta;
  const DualPoint& mu = res.trace.final.mu_final;
  double se_h = 0.0;
  const double tr_h = ctx.estimate_trace(inst, res.last, ctx.h_model, delta / 8.0,
                                         ctx.root.child(detail::kFinalTag, 0, 0),
                                         cfg.estimator_mode, &se_h);
  double f_tilde = mu.dot(inst.targets) + tr_h;
  double var = se_h * se_h;
  for (Eigen::Index i = 0; i < c; ++i) {
    const double eps_i =
        delta / (8.0 * static_cast<double>(c) * (std::abs(mu(i)) + 1.0));
    double se_i = 0.0;
    const double tr_i = ctx.estimate_trace(
        inst, res.last, ctx.q_models[static_cast<std::size_t>(i)], eps_i,
        ctx.root.child(detail::kFinalTag, 0, static_cast<std::uint64_t>(i + 1)),
        cfg.estimator_mode, &se_i);
    f_tilde -= mu(i) * tr_i;
    var += mu(i) * mu(i) * se_i * se_i;
  }
  res.trace.final.f_tilde = f_tilde;
  res.trace.final.final_estimate_stderr = std::sqrt(var);
  res.trace.final.gradient_estimator_calls = ctx.gradient_calls;
  res.trace.final.audit = audit_error_decomposition(inst, mu, T, cfg.schedule);
  return res.trace;
}

// Stochastic Newton: estimated gradient and c^2 estimated Hessian elements
// per iteration; the estimated Hessian is symmetrized and shifted to be
// negative definite, falling back to a gradient step when indefinite beyond
// the shift cap.
inline RunTrace stochastic_newton(const SdpInstance& inst, OptimizerConfig cfg) {
  const double T = detail::resolve_temperature(cfg);
  if (cfg.estimator_mode == EstimatorMode::Exact) {
    OptimizerConfig det = cfg;
    det.method = Method::Newton;
    return newton(inst, det);
  }
  const double eta = cfg.step > 0.0 ? cfg.step : 1.0;
  const double eta_fallback = detail::auto_first_order_step(inst, cfg, T);
  const double eps_j = detail::auto_estimator_precision(inst, cfg, T);
  const Eigen::Index c = inst.num_constraints();

  detail::StochasticContext ctx(inst, cfg.seed, eps_j);
  FinalReport report;
  detail::GradientOracle go{[&](const detail::DualState& s, int iter) {
    RealVector g(c);
    for (Eigen::Index i = 0; i < c; ++i) {
      RngStream stream = ctx.root.child(detail::kGradientTag,
                                        static_cast<std::uint64_t>(iter),
                                        static_cast<std::uint64_t>(i));
      g(i) = inst.targets(i) -
             ctx.estimate_trace(inst, s, ctx.q_models[static_cast<std::size_t>(i)],
                                ctx.eps_j, stream, cfg.estimator_mode, nullptr);
    }
    return g;
  }};
  detail::HessianOracle ho{[&](const detail::DualState& s, int iter) {
    RealMatrix H(c, c);
    const double lambda_here = s.op.K_spectrum.eigenvalues(0);
    const HermitianMatrix K = dual_slack(inst, s.mu);
    for (Eigen::Index i = 0; i < c; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) {
        const auto& mi = ctx.q_models[static_cast<std::size_t>(i)];
        const auto& mj = ctx.q_models[static_cast<std::size_t>(j)];
        const EstimatorBudget budget =
            plan_budget(lambda_here, T, ctx.eps_j, mi.one_norm, EstimatorKind::Hessian,
                        mj.one_norm);
        RngStream stream = ctx.root.child(detail::kHessianTag,
                                          static_cast<std::uint64_t>(iter),
                                          static_cast<std::uint64_t>(i * c + j));
        H(i, j) = estimate_hessian_element(K, T, mi, mj, budget, stream,
                                           cfg.estimator_mode)
                      .value;
        ++ctx.hessian_calls;
      }
    }
    return H;
  }};
  OptimizerConfig cfg2 = cfg;
  cfg2.step = eta;
  auto res = detail::run_core(inst, cfg2, T, go, &ho, /*enforce_ascent=*/false,
                              /*deterministic_stop=*/false, eta_fallback, report);

  const double delta = cfg.suboptimality_delta;
  const DualPoint& mu = res.trace.final.mu_final;
  double se_h = 0.0;
  const double tr_h = ctx.estimate_trace(inst, res.last, ctx.h_model, delta / 8.0,
                                         ctx.root.child(detail::kFinalTag, 0, 0),
                                         cfg.estimator_mode, &se_h);
  double f_tilde = mu.dot(inst.targets) + tr_h;
  double var = se_h * se_h;
  for (Eigen::Index i = 0; i < c; ++i) {
    const double eps_i =
        delta / (8.0 * static_cast<double>(c) * (std::abs(mu(i)) + 1.0));
    double se_i = 0.0;
    const double tr_i = ctx.estimate_trace(
        inst, res.last, ctx.q_models[static_cast<std::size_t>(i)], eps_i,
        ctx.root.child(detail::kFinalTag, 0, static_cast<std::uint64_t>(i + 1)),
        cfg.estimator_mode, &se_i);
    f_tilde -= mu(i) * tr_i;
    var += mu(i) * mu(i) * se_i * se_i;
  }
  res.trace.final.f_tilde = f_tilde;
  res.trace.final.final_estimate_stderr = std::sqrt(var);
  res.trace.final.gradient_estimator_calls = ctx.gradient_calls;
  res.trace.final.hessian_estimator_calls = ctx.hessian_calls;
  res.trace.final.audit = audit_error_decomposition(inst, mu, T, cfg.schedule);
  return res.trace;
}

// Dispatch on the configured method.
inline RunTrace solve(const SdpInstance& inst, const OptimizerConfig& cfg) {
  switch (cfg.method) {
    case Method::GradientAscent:
      return gradient_ascent(inst, cfg);
    case Method::Newton:
      return newton(inst, cfg);
    case Method::StochasticGradientAscent:
      return stochastic_gradient_ascent(inst, cfg);
    case Method::StochasticNewton:
      return stochastic_newton(inst, cfg);
  }
  throw std::logic_error("solve: unknown method");
}

}  // namespace besdp
