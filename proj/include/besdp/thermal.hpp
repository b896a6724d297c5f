#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "besdp/errors.hpp"
#include "besdp/linalg.hpp"
#include "besdp/sdp.hpp"

namespace besdp {

// Arguments above this threshold underflow every thermal weight to zero in
// double precision.
inline constexpr double kExpArgCutoff = 700.0;

namespace detail {

// Mean occupation 1/(e^{lambda/T} - 1), evaluated with expm1.
inline double occupation(double lambda, double T) {
  const double a = lambda / T;
  if (a > kExpArgCutoff) return 0.0;
  return 1.0 / std::expm1(a);
}

// ln(1 - e^{-lambda/T}); 0 beyond the underflow cutoff.
inline double log_one_minus_boltzmann(double lambda, double T) {
  const double a = lambda / T;
  if (a > kExpArgCutoff) return 0.0;
  return std::log1p(-std::exp(-a));
}

inline double sinhc(double z) {
  if (std::abs(z) < 1e-8) return 1.0 + z * z / 6.0;
  return std::sinh(z) / z;
}

// Divided-difference kernel of the Hessian's s-integral:
//   w(la, lb) = T (e^{la/T} - e^{lb/T}) / ((la - lb)(e^{la/T}-1)(e^{lb/T}-1)),
// with the removable singularity w(l, l) = e^{l/T}/(e^{l/T}-1)^2. Evaluated
// in negative-exponential form to stay finite for large arguments.
inline double hessian_kernel(double la, double lb, double T) {
  const double da = -std::expm1(-la / T);  // 1 - e^{-la/T}
  const double db = -std::expm1(-lb / T);
  const double z = (la - lb) / (2.0 * T);
  if (std::abs(z) > 1.0) {
    const double num = std::exp(-lb / T) - std::exp(-la / T);
    return T * num / ((la - lb) * da * db);
  }
  const double m = std::exp(-(la + lb) / (2.0 * T));
  return m * sinhc(z) / (da * db);
}

}  // namespace detail

// Scalar bosonic entropy g(x) = (x+1)ln(x+1) - x ln x, with x ln x -> 0 at 0.
inline double scalar_entropy(double x) {
  if (x < 0.0) {
    throw std::domain_error("scalar_entropy: negative occupation");
  }
  if (x == 0.0) return 0.0;
  return (x + 1.0) * std::log1p(x) - x * std::log(x);
}

// Sum of g over the spectrum of a PSD operator.
inline double be_entropy(const HermitianMatrix& X) {
  const EigenSystem es = eigendecompose(X);
  const RealVector lambda = clip_psd_spectrum(es.eigenvalues);
  if (lambda(0) < 0.0) {
    std::ostringstream msg;
    msg << "be_entropy: eigenvalue " << es.eigenvalues(0) << " negative beyond clip tolerance";
    throw std::domain_error(msg.str());
  }
  double s = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) s += scalar_entropy(lambda(j));
  return s;
}

// X_T = (e^{K/T} - I)^{-1} with its companion X_T + I, both built from one
// eigendecomposition of K, which is cached for downstream derivative work.
struct ThermalOperator {
  HermitianMatrix X;
  HermitianMatrix X_plus_I;
  EigenSystem K_spectrum;
  RealVector occupations;  // per-mode x_j, aligned with K_spectrum
  double temperature;
};

// Overload reusing an eigendecomposition of K computed by the caller; the
// (mu, T) evaluation contexts in the optimizers share one factorization this
// way.
inline ThermalOperator thermal_operator(EigenSystem es, double T) {
  if (T <= 0.0) throw std::domain_error("thermal_operator: temperature must be positive");
  const RealVector lambda = clip_psd_spectrum(es.eigenvalues);
  if (lambda(0) <= 0.0) {
    std::ostringstream msg;
    msg << "thermal_operator: dual slack operator not strictly positive definite (lambda_min="
        << es.eigenvalues(0) << "); occupation of the ground mode diverges";
    throw DualInfeasibleError(msg.str());
  }
  RealVector x(lambda.size());
  RealVector xp1(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    x(j) = detail::occupation(lambda(j), T);
    const double a = lambda(j) / T;
    xp1(j) = a > kExpArgCutoff ? 1.0 : 1.0 / (-std::expm1(-a));
  }
  Matrix Xm = es.eigenvectors * x.asDiagonal() * es.eigenvectors.adjoint();
  Matrix Xp = es.eigenvectors * xp1.asDiagonal() * es.eigenvectors.adjoint();
  return ThermalOperator{HermitianMatrix(std::move(Xm)), HermitianMatrix(std::move(Xp)),
                         std::move(es), std::move(x), T};
}

inline ThermalOperator thermal_operator(const HermitianMatrix& K, double T) {
  return thermal_operator(eigendecompose(K), T);
}

// f_T(mu) = mu.q + T sum_j ln(1 - e^{-lambda_j/T}) over the spectrum of K_mu.
inline double dual_objective(const SdpInstance& inst, const DualPoint& mu,
                             const ThermalOperator& op) {
  double s = 0.0;
  const RealVector& lambda = op.K_spectrum.eigenvalues;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    s += detail::log_one_minus_boltzmann(lambda(j), op.temperature);
  }
  return mu.dot(inst.targets) + op.temperature * s;
}

inline double dual_objective(const SdpInstance& inst, const DualPoint& mu, double T) {
  return dual_objective(inst, mu, thermal_operator(dual_slack(inst, mu), T));
}

// Unregularized energy f~_T(mu) = mu.q + Tr[K_mu X_T(mu)]; at a dual optimum
// this equals Tr[H X_T].
inline double unregularized_energy(const SdpInstance& inst, const DualPoint& mu,
                                   const ThermalOperator& op) {
  const RealVector& lambda = op.K_spectrum.eigenvalues;
  double s = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) s += lambda(j) * op.occupations(j);
  return mu.dot(inst.targets) + s;
}

inline double unregularized_energy(const SdpInstance& inst, const DualPoint& mu, double T) {
  return unregularized_energy(inst, mu, thermal_operator(dual_slack(inst, mu), T));
}

// Gradient component i: q_i - Tr[X_T(mu) Q_i].
inline RealVector gradient(const SdpInstance& inst, const DualPoint& mu,
                           const ThermalOperator& op) {
  RealVector g(inst.num_constraints());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g(i) = inst.targets(i) -
           trace_product(op.X, inst.constraints[static_cast<std::size_t>(i)]);
  }
  return g;
}

inline RealVector gradient(const SdpInstance& inst, const DualPoint& mu, double T) {
  return gradient(inst, mu, thermal_operator(dual_slack(inst, mu), T));
}

// Closed-form Hessian via the divided-difference kernel: with Qt = V' Q V in
// the eigenbasis of K_mu,
//   H_ij = -(1/T) sum_{a,b} Qt_i[a,b] Qt_j[b,a] w(lambda_a, lambda_b).
// The upper triangle is computed and mirrored, so the result is exactly
// symmetric.
inline RealMatrix hessian(const SdpInstance& inst, const DualPoint& mu,
                          const ThermalOperator& op) {
  const Eigen::Index c = inst.num_constraints();
  const Eigen::Index d = inst.dim();
  const RealVector& lambda = op.K_spectrum.eigenvalues;
  const Matrix& V = op.K_spectrum.eigenvectors;
  const double T = op.temperature;

  std::vector<Matrix> Qt(static_cast<std::size_t>(c));
  for (Eigen::Index i = 0; i < c; ++i) {
    Qt[static_cast<std::size_t>(i)] =
        V.adjoint() * inst.constraints[static_cast<std::size_t>(i)].mat() * V;
  }
  RealMatrix W(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      W(a, b) = detail::hessian_kernel(lambda(a), lambda(b), T);
    }
  }
  RealMatrix H(c, c);
  for (Eigen::Index i = 0; i < c; ++i) {
    for (Eigen::Index j = i; j < c; ++j) {
      double s = 0.0;
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          s += (Qt[static_cast<std::size_t>(i)](a, b) *
                Qt[static_cast<std::size_t>(j)](b, a))
                   .real() *
               W(a, b);
        }
      }
      H(i, j) = H(j, i) = -s / T;
    }
  }
  return H;
}

inline RealMatrix hessian(const SdpInstance& inst, const DualPoint& mu, double T) {
  return hessian(inst, mu, thermal_operator(dual_slack(inst, mu), T));
}

// Uniform smoothness bound over a lambda_min-floored trajectory set:
//   L_T = (nbar(nbar+1)/T) * sum_i ||Q_i||_1 ||Q_i||,
// with nbar the worst-case occupation at the floor.
struct SmoothnessBound {
  double lambda_floor;
  double occupation;  // nbar
  double L_T;
};

inline SmoothnessBound smoothness_bound(const SdpInstance& inst, double lambda_floor,
                                        double T) {
  if (lambda_floor <= 0.0) {
    throw std::domain_error("smoothness_bound: lambda_min floor must be positive");
  }
  const double nbar = detail::occupation(lambda_floor, T);
  double norm_sum = 0.0;
  for (const auto& Qi : inst.constraints) {
    const EigenSystem es = eigendecompose(Qi);
    norm_sum += es.eigenvalues.cwiseAbs().sum() * es.eigenvalues.cwiseAbs().maxCoeff();
  }
  return SmoothnessBound{lambda_floor, nbar, nbar * (nbar + 1.0) / T * norm_sum};
}

// Temperature schedules realizing the approximation bounds.
enum class ScheduleMode { Entropy, Dimension, Spectral };

struct TemperatureSchedule {
  ScheduleMode mode;
  double epsilon;

  // entropy mode
  double s_max = 0.0;
  bool s_max_finite = true;
  // dimension and spectral modes
  int dim = 0;
  // spectral mode
  double lambda_min = 0.0;
  double gap = 0.0;
  int degeneracy = 0;

  static TemperatureSchedule entropy(double s_max, double eps, bool finite = true) {
    TemperatureSchedule s{ScheduleMode::Entropy, eps};
    s.s_max = s_max;
    s.s_max_finite = finite;
    return s;
  }
  static TemperatureSchedule dimension(int d, double eps) {
    TemperatureSchedule s{ScheduleMode::Dimension, eps};
    s.dim = d;
    return s;
  }
  static TemperatureSchedule spectral(double lambda_min, double gap, int degeneracy,
                                      int d, double eps) {
    TemperatureSchedule s{ScheduleMode::Spectral, eps};
    s.lambda_min = lambda_min;
    s.gap = gap;
    s.degeneracy = degeneracy;
    s.dim = d;
    return s;
  }
};

inline double temperature_for_precision(const TemperatureSchedule& sched) {
  if (sched.epsilon <= 0.0) {
    throw std::domain_error("temperature_for_precision: target precision must be positive");
  }
  switch (sched.mode) {
    case ScheduleMode::Entropy:
      if (!sched.s_max_finite) {
        throw std::domain_error(
            "temperature_for_precision: S_max is infinite (non-compact feasible set); "
            "use the dimension schedule instead");
      }
      if (sched.s_max <= 0.0) {
        throw std::domain_error("temperature_for_precision: S_max must be positive");
      }
      return sched.epsilon / sched.s_max;
    case ScheduleMode::Dimension:
      if (sched.dim <= 0) {
        throw std::domain_error("temperature_for_precision: dimension must be positive");
      }
      return sched.epsilon / static_cast<double>(sched.dim);
    case ScheduleMode::Spectral: {
      if (sched.lambda_min <= 0.0 || sched.degeneracy <= 0 || sched.dim <= 0 ||
          sched.gap < 0.0 || sched.dim < sched.degeneracy) {
        throw std::domain_error("temperature_for_precision: invalid spectral parameters");
      }
      const double ground = sched.epsilon / (2.0 * static_cast<double>(sched.degeneracy));
      if (sched.dim == sched.degeneracy) return ground;  // no excited spectrum
      const double level = sched.lambda_min + sched.gap;
      const double excited =
          level / std::log1p(2.0 * static_cast<double>(sched.dim - sched.degeneracy) *
                             level / sched.epsilon);
      return std::min(ground, excited);
    }
  }
  throw std::logic_error("temperature_for_precision: unknown mode");
}

// Trace-fixed entropy cap: with Tr[X] = N fixed, Schur concavity gives
// S_max <= d g(N/d).
inline double entropy_cap_for_fixed_trace(double total_occupation, int d) {
  if (total_occupation < 0.0 || d <= 0) {
    throw std::domain_error("entropy_cap_for_fixed_trace: invalid arguments");
  }
  return static_cast<double>(d) * scalar_entropy(total_occupation / static_cast<double>(d));
}

// Per-mode residuals of the smoothed slackness relation
// lambda_j x_j = T x_j ln(1 + 1/x_j), plus the total energy penalty.
struct SlacknessReport {
  RealVector residuals;
  double total_energy;  // sum_j lambda_j x_j
};

inline SlacknessReport regularized_slackness(const HermitianMatrix& K,
                                             const ThermalOperator& op) {
  if (K.dim() != op.X.dim()) {
    throw std::invalid_argument("regularized_slackness: mismatched spectra");
  }
  const RealVector& lambda = op.K_spectrum.eigenvalues;
  RealVector res(lambda.size());
  double total = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const double x = op.occupations(j);
    const double energy = lambda(j) * x;
    total += energy;
    res(j) = x == 0.0 ? energy : energy - op.temperature * x * std::log1p(1.0 / x);
  }
  return SlacknessReport{std::move(res), total};
}

}  // namespace besdp
