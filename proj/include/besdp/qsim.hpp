#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "besdp/errors.hpp"
#include "besdp/linalg.hpp"
#include "besdp/rng.hpp"
#include "besdp/sdp.hpp"
#include "besdp/thermal.hpp"

namespace besdp {

enum class EstimatorKind { Gradient, Hessian };

// Shots are expectation-exact Bernoulli draws: the circuit outcome
// distribution P(z=+1) = (1 + <Z>)/2 is sampled with <Z> from the
// closed-form trace, which has identical statistics to simulating the
// circuit at d^2 instead of exponential cost. A statevector simulation of
// the two circuits exists in the test suite as an independent oracle.
enum class EstimatorMode { Stochastic, Exact };

// Truncation depth, per-index time cutoffs, shot counts, and the equal
// three-way error split (series / truncated-time tail / statistical).
struct EstimatorBudget {
  EstimatorKind kind;
  int M = 1;
  std::vector<double> t_max;         // indexed by series index m-1
  std::vector<std::int64_t> shots;   // gradient: N(m); hessian: per-cell count, constant
  double epsilon = 0.0;
  double series_budget = 0.0;
  double tail_budget = 0.0;
  double stat_budget = 0.0;
};

// t = tau * tan(pi (u - 1/2)) for u uniform on (0,1).
inline double sample_cauchy(double tau, RngStream& stream) {
  if (tau <= 0.0) throw std::domain_error("sample_cauchy: scale must be positive");
  return tau * std::tan(std::numbers::pi * (stream.next_double() - 0.5));
}

namespace detail {

// Rejection-resample inside [-t_max, t_max]; the renormalization bias is
// covered by the tail budget.
inline double sample_truncated_cauchy(double tau, double t_max, RngStream& stream) {
  for (;;) {
    const double t = sample_cauchy(tau, stream);
    if (std::abs(t) <= t_max) return t;
  }
}

inline void require_density_matrix(const HermitianMatrix& rho, const char* where) {
  if (!is_psd_within_clip(rho)) {
    std::ostringstream msg;
    msg << where << ": state is not PSD within clip tolerance";
    throw std::domain_error(msg.str());
  }
  const double tr = rho.mat().trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << where << ": state trace " << tr << " is not 1";
    throw std::domain_error(msg.str());
  }
}

inline std::int64_t checked_shot_count(double n) {
  if (!(n > 0.0) || n > 4e9) {
    std::ostringstream msg;
    msg << "plan_budget: shot count " << n << " infeasible";
    throw BudgetError(msg.str());
  }
  return static_cast<std::int64_t>(std::ceil(n));
}

}  // namespace detail

// <Z> of the one-ancilla interferometric circuit: Re Tr[rho e^{-itK}].
inline double hadamard_expectation(const HermitianMatrix& rho, const HermitianMatrix& K,
                                   double t) {
  detail::require_density_matrix(rho, "hadamard_expectation");
  if (rho.dim() != K.dim()) {
    throw std::invalid_argument("hadamard_expectation: dimension mismatch");
  }
  const EigenSystem es = eigendecompose(K);
  const Matrix rot = es.eigenvectors.adjoint() * rho.mat() * es.eigenvectors;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < K.dim(); ++j) {
    acc += std::cos(t * es.eigenvalues(j)) * rot(j, j).real();
  }
  return acc;
}

// <Z> of the controlled-SWAP circuit: Re Tr[e^{-i t1 K} rho e^{-i t2 K} sigma].
inline double swap_hadamard_expectation(const HermitianMatrix& rho,
                                        const HermitianMatrix& sigma,
                                        const HermitianMatrix& K, double t1, double t2) {
  detail::require_density_matrix(rho, "swap_hadamard_expectation");
  detail::require_density_matrix(sigma, "swap_hadamard_expectation");
  if (rho.dim() != K.dim() || sigma.dim() != K.dim()) {
    throw std::invalid_argument("swap_hadamard_expectation: dimension mismatch");
  }
  const EigenSystem es = eigendecompose(K);
  const Matrix r = es.eigenvectors.adjoint() * rho.mat() * es.eigenvectors;
  const Matrix s = es.eigenvectors.adjoint() * sigma.mat() * es.eigenvectors;
  double acc = 0.0;
  for (Eigen::Index a = 0; a < K.dim(); ++a) {
    for (Eigen::Index b = 0; b < K.dim(); ++b) {
      const double phase = t1 * es.eigenvalues(a) + t2 * es.eigenvalues(b);
      const Complex term = r(a, b) * s(b, a);
      acc += std::cos(phase) * term.real() + std::sin(phase) * term.imag();
    }
  }
  return acc;
}

// Budget planning from the series/tail/statistical three-way error split.
//
// Gradient mode: M = ceil((T/lambda) ln(3 alpha / (eps (1 - e^{-lambda/T}))) - 1),
// floored at 1; t_max(m) = 2 alpha m M / (pi T (eps/3/M)); N(m) = ceil(9 M^2 alpha^2 / eps^2).
//
// Hessian mode: the double-series analogue, with the two-strip tail bound
// giving M, per-cell shots ceil(9 M^4 alpha_i^2 alpha_j^2 / eps^2), and the
// per-time cutoff sized so each of the two evolutions contributes at most
// eps/(6 M^2) truncation bias per cell.
inline EstimatorBudget plan_budget(double lambda_min, double T, double eps,
                                   double alpha_norm, EstimatorKind kind,
                                   double alpha_norm_j = -1.0) {
  if (lambda_min <= 0.0) throw std::domain_error("plan_budget: lambda_min must be positive");
  if (T <= 0.0 || eps <= 0.0 || alpha_norm <= 0.0) {
    throw std::domain_error("plan_budget: T, eps, alpha_norm must be positive");
  }
  constexpr double pi = std::numbers::pi;
  constexpr double kMaxDepth = 2e6;
  EstimatorBudget b;
  b.kind = kind;
  b.epsilon = eps;
  b.series_budget = b.tail_budget = b.stat_budget = eps / 3.0;

  const double one_minus = -std::expm1(-lambda_min / T);
  if (kind == EstimatorKind::Gradient) {
    const double m_real =
        (T / lambda_min) * std::log(3.0 * alpha_norm / (eps * one_minus)) - 1.0;
    if (!(m_real < kMaxDepth)) {
      std::ostringstream msg;
      msg << "plan_budget: truncation depth M=" << m_real
          << " infeasible for lambda_min=" << lambda_min << ", eps=" << eps;
      throw BudgetError(msg.str());
    }
    b.M = std::max(1, static_cast<int>(std::ceil(m_real)));
    const std::int64_t n =
        detail::checked_shot_count(9.0 * b.M * b.M * alpha_norm * alpha_norm / (eps * eps));
    for (int m = 1; m <= b.M; ++m) {
      b.t_max.push_back(2.0 * alpha_norm * m * b.M / (pi * T * (eps / 3.0 / b.M)));
      b.shots.push_back(n);
    }
    return b;
  }

  const double aj = alpha_norm_j > 0.0 ? alpha_norm_j : alpha_norm;
  const double m_real =
      (T / lambda_min) * std::log(6.0 * alpha_norm * aj / (eps * one_minus * one_minus)) + 1.0;
  if (!(m_real < kMaxDepth)) {
    std::ostringstream msg;
    msg << "plan_budget: truncation depth M=" << m_real
        << " infeasible for lambda_min=" << lambda_min << ", eps=" << eps;
    throw BudgetError(msg.str());
  }
  b.M = std::max(1, static_cast<int>(std::ceil(m_real)));
  const double mm = static_cast<double>(b.M) * static_cast<double>(b.M);
  const std::int64_t n = detail::checked_shot_count(
      9.0 * mm * mm * alpha_norm * alpha_norm * aj * aj / (eps * eps));
  for (int m = 1; m <= b.M; ++m) {
    b.t_max.push_back(12.0 * alpha_norm * aj * m * mm / (pi * T * eps));
    b.shots.push_back(n);
  }
  return b;
}

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Joint Monte Carlo estimator of Tr[X_T(mu) Q]: for each series index m,
// draw (t, k) pairs, run one Bernoulli shot of the interferometric circuit,
// weight by ||alpha||_1 sgn(alpha_k), average, and sum over m. Exact mode
// replaces sampling by the per-eigenvalue thermal weights and reproduces
// the truncated series deterministically.
inline Estimate estimate_thermal_trace(const HermitianMatrix& K, double T,
                                       const StateModel& Q_model,
                                       const EstimatorBudget& budget, RngStream stream,
                                       EstimatorMode mode = EstimatorMode::Stochastic) {
  if (budget.kind != EstimatorKind::Gradient) {
    throw std::invalid_argument("estimate_thermal_trace: budget is not gradient-mode");
  }
  const EigenSystem es = eigendecompose(K);
  const RealVector lambda = clip_psd_spectrum(es.eigenvalues);
  if (lambda(0) <= 0.0) {
    throw DualInfeasibleError("estimate_thermal_trace: K must be strictly positive definite");
  }
  const Eigen::Index d = K.dim();
  const std::size_t n_terms = Q_model.terms.size();

  // Rotated diagonal weights <phi_j|rho_k|phi_j> per model state.
  std::vector<RealVector> diag(n_terms);
  std::vector<double> sign(n_terms), cumulative(n_terms);
  double cum = 0.0;
  for (std::size_t k = 0; k < n_terms; ++k) {
    const Matrix rot =
        es.eigenvectors.adjoint() * Q_model.terms[k].state.mat() * es.eigenvectors;
    diag[k] = rot.diagonal().real();
    sign[k] = Q_model.terms[k].weight >= 0.0 ? 1.0 : -1.0;
    cum += std::abs(Q_model.terms[k].weight) / Q_model.one_norm;
    cumulative[k] = cum;
  }

  Estimate out;
  if (mode == EstimatorMode::Exact) {
    for (int m = 1; m <= budget.M; ++m) {
      double term = 0.0;
      for (std::size_t k = 0; k < n_terms; ++k) {
        double tr = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
          tr += std::exp(-m * lambda(j) / T) * diag[k](j);
        }
        term += Q_model.terms[k].weight * tr;
      }
      out.value += term;
    }
    return out;
  }

  const double alpha = Q_model.one_norm;
  double var_acc = 0.0;
  for (int m = 1; m <= budget.M; ++m) {
    const double tau = static_cast<double>(m) / T;
    const double tmax = budget.t_max[static_cast<std::size_t>(m - 1)];
    const std::int64_t n = budget.shots[static_cast<std::size_t>(m - 1)];
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t s = 0; s < n; ++s) {
      RngStream shot = stream.child(static_cast<std::uint64_t>(m),
                                    static_cast<std::uint64_t>(s));
      const double t = detail::sample_truncated_cauchy(tau, tmax, shot);
      const double u = shot.next_double();
      std::size_t k = 0;
      while (k + 1 < n_terms && u > cumulative[k]) ++k;
      double z_exp = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) z_exp += std::cos(t * lambda(j)) * diag[k](j);
      const double p_plus = std::clamp(0.5 * (1.0 + z_exp), 0.0, 1.0);
      const double z = shot.next_double() < p_plus ? 1.0 : -1.0;
      const double y = alpha * sign[k] * z;
      sum += y;
      sumsq += y * y;
    }
    const double mean = sum / static_cast<double>(n);
    out.value += mean;
    const double var =
        n > 1 ? std::max(0.0, (sumsq - static_cast<double>(n) * mean * mean) /
                                  static_cast<double>(n - 1))
              : alpha * alpha;
    var_acc += var / static_cast<double>(n);
  }
  out.stderr_ = std::sqrt(var_acc);
  return out;
}

// Double-series estimator of the Hessian element: per cell (m1, m2) draw
// (s, t1, t2, k, l), run a Bernoulli shot of the controlled-SWAP circuit,
// weight by ||alpha_i||_1 ||alpha_j||_1 sgn(alpha_ik alpha_jl), average,
// sum the cells, and scale by -1/T.
inline Estimate estimate_hessian_element(const HermitianMatrix& K, double T,
                                         const StateModel& Qi_model,
                                         const StateModel& Qj_model,
                                         const EstimatorBudget& budget, RngStream stream,
                                         EstimatorMode mode = EstimatorMode::Stochastic) {
  if (budget.kind != EstimatorKind::Hessian) {
    throw std::invalid_argument("estimate_hessian_element: budget is not hessian-mode");
  }
  const EigenSystem es = eigendecompose(K);
  const RealVector lambda = clip_psd_spectrum(es.eigenvalues);
  if (lambda(0) <= 0.0) {
    throw DualInfeasibleError("estimate_hessian_element: K must be strictly positive definite");
  }
  const Eigen::Index d = K.dim();
  const std::size_t ni = Qi_model.terms.size();
  const std::size_t nj = Qj_model.terms.size();

  // P_{kl}[a,b] = (V' rho_k V)[a,b] (V' sigma_l V)[b,a].
  std::vector<Matrix> pair_products(ni * nj);
  {
    std::vector<Matrix> ri(ni), rj(nj);
    for (std::size_t k = 0; k < ni; ++k) {
      ri[k] = es.eigenvectors.adjoint() * Qi_model.terms[k].state.mat() * es.eigenvectors;
    }
    for (std::size_t l = 0; l < nj; ++l) {
      rj[l] = es.eigenvectors.adjoint() * Qj_model.terms[l].state.mat() * es.eigenvectors;
    }
    for (std::size_t k = 0; k < ni; ++k) {
      for (std::size_t l = 0; l < nj; ++l) {
        Matrix P(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
          for (Eigen::Index b = 0; b < d; ++b) P(a, b) = ri[k](a, b) * rj[l](b, a);
        }
        pair_products[k * nj + l] = std::move(P);
      }
    }
  }

  auto cumulative_of = [](const StateModel& m) {
    std::vector<double> c(m.terms.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < m.terms.size(); ++k) {
      acc += std::abs(m.terms[k].weight) / m.one_norm;
      c[k] = acc;
    }
    return c;
  };
  const std::vector<double> cum_i = cumulative_of(Qi_model);
  const std::vector<double> cum_j = cumulative_of(Qj_model);

  Estimate out;
  if (mode == EstimatorMode::Exact) {
    // Analytic s-integral per eigenpair: the (m1, m2) cell contributes
    // exp(-((m1-1/2) la + (m2-1/2) lb)/T) sinhc((la - lb)/(2T)).
    double total = 0.0;
    for (int m1 = 1; m1 <= budget.M; ++m1) {
      for (int m2 = 1; m2 <= budget.M; ++m2) {
        for (std::size_t k = 0; k < ni; ++k) {
          for (std::size_t l = 0; l < nj; ++l) {
            const Matrix& P = pair_products[k * nj + l];
            const double w = Qi_model.terms[k].weight * Qj_model.terms[l].weight;
            for (Eigen::Index a = 0; a < d; ++a) {
              for (Eigen::Index b = 0; b < d; ++b) {
                const double expo = -((m1 - 0.5) * lambda(a) + (m2 - 0.5) * lambda(b)) / T;
                if (expo < -kExpArgCutoff) continue;
                const double z = (lambda(a) - lambda(b)) / (2.0 * T);
                total += w * P(a, b).real() * std::exp(expo) * detail::sinhc(z);
              }
            }
          }
        }
      }
    }
    out.value = -total / T;
    return out;
  }

  const double alpha = Qi_model.one_norm * Qj_model.one_norm;
  double var_acc = 0.0;
  double cell_sum = 0.0;
  for (int m1 = 1; m1 <= budget.M; ++m1) {
    for (int m2 = 1; m2 <= budget.M; ++m2) {
      const double t1max = budget.t_max[static_cast<std::size_t>(m1 - 1)];
      const double t2max = budget.t_max[static_cast<std::size_t>(m2 - 1)];
      const std::int64_t n = budget.shots[static_cast<std::size_t>(m1 - 1)];
      double sum = 0.0, sumsq = 0.0;
      for (std::int64_t s = 0; s < n; ++s) {
        RngStream shot = stream.child(static_cast<std::uint64_t>(m1),
                                      static_cast<std::uint64_t>(m2),
                                      static_cast<std::uint64_t>(s));
        const double sv = shot.next_double();
        const double tau1 = (static_cast<double>(m1) - sv) / T;
        const double tau2 = (static_cast<double>(m2) - 1.0 + sv) / T;
        const double t1 = detail::sample_truncated_cauchy(tau1, t1max, shot);
        const double t2 = detail::sample_truncated_cauchy(tau2, t2max, shot);
        std::size_t k = 0, l = 0;
        {
          const double u1 = shot.next_double();
          while (k + 1 < ni && u1 > cum_i[k]) ++k;
          const double u2 = shot.next_double();
          while (l + 1 < nj && u2 > cum_j[l]) ++l;
        }
        const Matrix& P = pair_products[k * nj + l];
        double z_exp = 0.0;
        for (Eigen::Index a = 0; a < d; ++a) {
          for (Eigen::Index b = 0; b < d; ++b) {
            const double phase = t1 * lambda(a) + t2 * lambda(b);
            z_exp += std::cos(phase) * P(a, b).real() + std::sin(phase) * P(a, b).imag();
          }
        }
        const double p_plus = std::clamp(0.5 * (1.0 + z_exp), 0.0, 1.0);
        const double z = shot.next_double() < p_plus ? 1.0 : -1.0;
        const double sgn = (Qi_model.terms[k].weight >= 0.0 ? 1.0 : -1.0) *
                           (Qj_model.terms[l].weight >= 0.0 ? 1.0 : -1.0);
        const double y = alpha * sgn * z;
        sum += y;
        sumsq += y * y;
      }
      const double mean = sum / static_cast<double>(n);
      cell_sum += mean;
      const double var =
          n > 1 ? std::max(0.0, (sumsq - static_cast<double>(n) * mean * mean) /
                                    static_cast<double>(n - 1))
                : alpha * alpha;
      var_acc += var / static_cast<double>(n);
    }
  }
  out.value = -cell_sum / T;
  out.stderr_ = std::sqrt(var_acc) / T;
  return out;
}

// Runtime predictions: the concrete gate count of a planned budget under the
// linear Hamiltonian-simulation cost model, and the closed-form asymptotic
// scaling for reporting.
struct RuntimePrediction {
  double concrete_gates;
  double asymptotic;
};

inline double runtime_asymptotic_gradient(double lambda_min, double T, double eps,
                                          double alpha_norm, double h_norm) {
  return std::pow(alpha_norm, 3) * h_norm * std::pow(T, 4) /
         (std::pow(lambda_min, 5) * std::pow(eps, 3));
}

inline double runtime_asymptotic_hessian(double lambda_min, double T, double eps,
                                         double alpha_i, double alpha_j, double h_norm) {
  return std::pow(alpha_i, 3) * std::pow(alpha_j, 3) * h_norm * std::pow(T, 8) /
         (std::pow(lambda_min, 9) * std::pow(eps, 3));
}

inline RuntimePrediction runtime_model(const EstimatorBudget& budget, double h_norm,
                                       double lambda_min, double T, double alpha_norm,
                                       double alpha_norm_j = -1.0) {
  if (h_norm <= 0.0) throw std::domain_error("runtime_model: h_norm must be positive");
  double gates = 0.0;
  if (budget.kind == EstimatorKind::Gradient) {
    for (int m = 1; m <= budget.M; ++m) {
      gates += static_cast<double>(budget.shots[static_cast<std::size_t>(m - 1)]) *
               std::ceil(h_norm * budget.t_max[static_cast<std::size_t>(m - 1)]);
    }
    return RuntimePrediction{
        gates, runtime_asymptotic_gradient(lambda_min, T, budget.epsilon, alpha_norm, h_norm)};
  }
  for (int m1 = 1; m1 <= budget.M; ++m1) {
    for (int m2 = 1; m2 <= budget.M; ++m2) {
      gates += static_cast<double>(budget.shots[static_cast<std::size_t>(m1 - 1)]) *
               (std::ceil(h_norm * budget.t_max[static_cast<std::size_t>(m1 - 1)]) +
                std::ceil(h_norm * budget.t_max[static_cast<std::size_t>(m2 - 1)]));
    }
  }
  const double aj = alpha_norm_j > 0.0 ? alpha_norm_j : alpha_norm;
  return RuntimePrediction{
      gates, runtime_asymptotic_hessian(lambda_min, T, budget.epsilon, alpha_norm, aj, h_norm)};
}

// End-to-end gate-count scaling of the stochastic first-order scheme:
// c^{5/2} ||mu*||^2 ||alpha||^3 ||h||_1 T^4 / (lambda^5 sqrt(L_T) delta^{5/2}).
inline double runtime_end_to_end(int c, double mu_star_norm, double L_T, double delta,
                                 double lambda_min, double T, double alpha_norm,
                                 double h_norm) {
  if (c <= 0 || L_T <= 0.0 || delta <= 0.0) {
    throw std::domain_error("runtime_end_to_end: invalid arguments");
  }
  return std::pow(static_cast<double>(c), 2.5) * mu_star_norm * mu_star_norm *
         std::pow(alpha_norm, 3) * h_norm * std::pow(T, 4) /
         (std::pow(lambda_min, 5) * std::sqrt(L_T) * std::pow(delta, 2.5));
}

}  // namespace besdp
