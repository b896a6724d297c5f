#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "besdp/errors.hpp"
#include "besdp/linalg.hpp"

namespace besdp {

// Standard-form problem data: minimize Tr[HX] over X >= 0 subject to
// Tr[Q_i X] = q_i.
struct SdpInstance {
  HermitianMatrix objective;                 // H
  std::vector<HermitianMatrix> constraints;  // Q_1..Q_c
  RealVector targets;                        // q

  SdpInstance(HermitianMatrix H, std::vector<HermitianMatrix> Q, RealVector q)
      : objective(std::move(H)), constraints(std::move(Q)), targets(std::move(q)) {
    if (constraints.empty()) {
      throw std::invalid_argument("SdpInstance: at least one constraint required");
    }
    if (static_cast<Eigen::Index>(constraints.size()) != targets.size()) {
      throw std::invalid_argument("SdpInstance: constraint/target count mismatch");
    }
    if (!targets.allFinite()) {
      throw std::invalid_argument("SdpInstance: targets must be finite");
    }
    for (const auto& Qi : constraints) {
      if (Qi.dim() != objective.dim()) {
        throw std::invalid_argument("SdpInstance: constraint dimension mismatch");
      }
    }
  }

  Eigen::Index dim() const noexcept { return objective.dim(); }
  Eigen::Index num_constraints() const noexcept {
    return static_cast<Eigen::Index>(constraints.size());
  }
};

// Dual chemical-potential vector.
using DualPoint = RealVector;

// K_mu = H - sum_i mu_i Q_i.
inline HermitianMatrix dual_slack(const SdpInstance& inst, const DualPoint& mu) {
  if (mu.size() != inst.num_constraints()) {
    throw std::invalid_argument("dual_slack: mu length does not match constraint count");
  }
  Matrix K = inst.objective.mat();
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    K -= mu(i) * inst.constraints[static_cast<std::size_t>(i)].mat();
  }
  return HermitianMatrix(std::move(K));
}

struct SlacknessResiduals {
  double trace_residual;  // Tr[KX]
  double product_norm;    // Frobenius norm of KX
};

// Both residuals vanish iff exact complementary slackness K X = 0 holds.
inline SlacknessResiduals slackness_residuals(const HermitianMatrix& K,
                                              const HermitianMatrix& X) {
  if (K.dim() != X.dim()) {
    throw std::invalid_argument("slackness_residuals: dimension mismatch");
  }
  if (!is_psd_within_clip(K) || !is_psd_within_clip(X)) {
    throw std::domain_error("slackness_residuals: inputs must be PSD within clip tolerance");
  }
  const Matrix KX = K.mat() * X.mat();
  return SlacknessResiduals{KX.trace().real(), KX.norm()};
}

// Signed combination of density matrices reconstructing a Hermitian operator.
struct StateTerm {
  double weight;
  HermitianMatrix state;  // PSD, unit trace
};

struct StateModel {
  std::vector<StateTerm> terms;
  double one_norm = 0.0;  // sum_k |weight_k|

  Matrix reconstruct() const {
    Matrix acc = Matrix::Zero(terms.front().state.dim(), terms.front().state.dim());
    for (const auto& t : terms) acc += t.weight * t.state.mat();
    return acc;
  }
};

// Jordan decomposition A = A+ - A- emitted as at most two density-matrix
// terms (Tr[A+], A+/Tr[A+]) and (-Tr[A-], A-/Tr[A-]). Minimizes the 1-norm
// among sign-split decompositions, which keeps estimator variance small.
inline StateModel decompose_state_model(const HermitianMatrix& A) {
  const EigenSystem es = eigendecompose(A);
  const RealVector lambda = clip_psd_spectrum(es.eigenvalues);

  Matrix pos = Matrix::Zero(A.dim(), A.dim());
  Matrix neg = Matrix::Zero(A.dim(), A.dim());
  double tr_pos = 0.0, tr_neg = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (lambda(j) > 0.0) {
      pos += lambda(j) * (es.eigenvectors.col(j) * es.eigenvectors.col(j).adjoint());
      tr_pos += lambda(j);
    } else if (lambda(j) < 0.0) {
      neg += (-lambda(j)) * (es.eigenvectors.col(j) * es.eigenvectors.col(j).adjoint());
      tr_neg += -lambda(j);
    }
  }
  if (tr_pos == 0.0 && tr_neg == 0.0) {
    throw std::invalid_argument("decompose_state_model: zero operator has no density-matrix term");
  }
  StateModel model;
  if (tr_pos > 0.0) {
    model.terms.push_back({tr_pos, HermitianMatrix(pos / tr_pos)});
  }
  if (tr_neg > 0.0) {
    model.terms.push_back({-tr_neg, HermitianMatrix(neg / tr_neg)});
  }
  model.one_norm = tr_pos + tr_neg;
  return model;
}

// Low-spectrum structure of a strictly positive definite slack operator.
struct SpectralSummary {
  double lambda_min;
  int degeneracy;      // d0: eigenvalues within grouping_tol of lambda_min
  double gap;          // distance from the ground group to the next distinct eigenvalue
  double grouping_tol;
  bool has_excited;    // false when every eigenvalue sits in the ground group
};

inline SpectralSummary spectral_summary(const HermitianMatrix& K,
                                        double grouping_tol = -1.0) {
  const EigenSystem es = eigendecompose(K);
  const RealVector lambda = clip_psd_spectrum(es.eigenvalues);
  const double lambda_min = lambda(0);
  if (lambda_min <= 0.0) {
    std::ostringstream msg;
    msg << "spectral_summary: operator not strictly positive definite (lambda_min="
        << es.eigenvalues(0) << "), dual point infeasible";
    throw DualInfeasibleError(msg.str());
  }
  if (grouping_tol < 0.0) grouping_tol = 1e-8 * lambda_min;

  int d0 = 1;
  while (d0 < lambda.size() && lambda(d0) - lambda_min <= grouping_tol) ++d0;
  const bool has_excited = d0 < lambda.size();
  const double gap = has_excited ? lambda(d0) - lambda_min : 0.0;
  return SpectralSummary{lambda_min, d0, gap, grouping_tol, has_excited};
}

// Phase-1 initialization: a dual point with K_mu strictly positive definite.
// Returns 0 immediately when H is already positive definite; otherwise runs
// subgradient ascent on mu -> lambda_min(K_mu) from the origin.
inline DualPoint find_strictly_feasible(const SdpInstance& inst, int max_iters = 600) {
  const Eigen::Index c = inst.num_constraints();
  DualPoint mu = DualPoint::Zero(c);

  auto lambda_min_and_vec = [&](const DualPoint& m) {
    const EigenSystem es = eigendecompose(dual_slack(inst, m));
    return std::make_pair(es.eigenvalues(0), Matrix(es.eigenvectors.col(0)));
  };

  auto [lmin, vec] = lambda_min_and_vec(mu);
  if (lmin > 0.0) return mu;

  double step = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    // Subgradient of lambda_min at mu: component i is -<v|Q_i|v>.
    RealVector g(c);
    for (Eigen::Index i = 0; i < c; ++i) {
      g(i) = -(vec.adjoint() * inst.constraints[static_cast<std::size_t>(i)].mat() * vec)(0, 0).real();
    }
    const double gnorm = g.norm();
    if (gnorm < 1e-14) break;  // stalled: lambda_min cannot be raised

    const DualPoint trial = mu + (step / gnorm) * g;
    auto [lmin_t, vec_t] = lambda_min_and_vec(trial);
    if (lmin_t > lmin) {
      mu = trial;
      lmin = lmin_t;
      vec = vec_t;
      step *= 1.5;
      // A positive margin well clear of rounding is enough for phase 1.
      if (lmin > 1e-6 * (1.0 + spectral_norm(inst.objective))) return mu;
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
  }
  if (lmin > 0.0) return mu;
  throw DualInfeasibleError("find_strictly_feasible: dual has empty interior");
}

struct OracleSolution {
  double value;   // E
  DualPoint mu;   // approximate maximizer
};

namespace detail {

// Barrier central-path reference solver for c >= 2: maximize
// mu.q + t * sum_j ln lambda_j(K_mu), driving t -> 0. At the central point
// X_t = t * K_mu^{-1} is primal feasible, certifying E in [mu.q, mu.q + t*d].
inline OracleSolution oracle_barrier(const SdpInstance& inst, double tol, DualPoint mu) {
  const Eigen::Index c = inst.num_constraints();
  const Eigen::Index d = inst.dim();
  const double mu_cap = 1e8;

  double t = std::max(1.0, std::abs(inst.targets.norm()));
  const double t_final = 0.5 * tol / static_cast<double>(d);

  auto barrier_value = [&](const DualPoint& m) {
    const EigenSystem es = eigendecompose(dual_slack(inst, m));
    if (es.eigenvalues(0) <= 0.0) return -std::numeric_limits<double>::infinity();
    double logdet = 0.0;
    for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) logdet += std::log(es.eigenvalues(j));
    return m.dot(inst.targets) + t * logdet;
  };

  while (true) {
    // Newton-maximize the barrier objective at this t.
    for (int it = 0; it < 200; ++it) {
      const HermitianMatrix K = dual_slack(inst, mu);
      const EigenSystem es = eigendecompose(K);
      if (es.eigenvalues(0) <= 0.0) {
        throw std::runtime_error("oracle_solve: barrier iterate left the feasible cone");
      }
      // Kinv and the rotated constraints give gradient and Hessian in closed form.
      RealVector inv = es.eigenvalues.cwiseInverse();
      std::vector<Matrix> Qt(static_cast<std::size_t>(c));
      RealVector grad(c);
      for (Eigen::Index i = 0; i < c; ++i) {
        Qt[static_cast<std::size_t>(i)] =
            es.eigenvectors.adjoint() * inst.constraints[static_cast<std::size_t>(i)].mat() * es.eigenvectors;
        double tr = 0.0;
        for (Eigen::Index a = 0; a < d; ++a) tr += inv(a) * Qt[static_cast<std::size_t>(i)](a, a).real();
        grad(i) = inst.targets(i) - t * tr;
      }
      RealMatrix hess(c, c);
      for (Eigen::Index i = 0; i < c; ++i) {
        for (Eigen::Index j = i; j < c; ++j) {
          double s = 0.0;
          for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = 0; b < d; ++b) {
              s += inv(a) * inv(b) *
                   (Qt[static_cast<std::size_t>(i)](a, b) * Qt[static_cast<std::size_t>(j)](b, a)).real();
            }
          }
          hess(i, j) = hess(j, i) = -t * s;
        }
      }
      if (grad.norm() <= 1e-11 * (1.0 + std::abs(mu.dot(inst.targets)))) break;

      RealMatrix neg = -hess;
      neg.diagonal().array() += 1e-14 * (1.0 + neg.norm());
      RealVector dir = neg.ldlt().solve(grad);

      // Damped step: halve until feasible and non-decreasing.
      const double base = barrier_value(mu);
      double eta = 1.0;
      bool accepted = false;
      for (int h = 0; h < 60; ++h) {
        const DualPoint trial = mu + eta * dir;
        if (barrier_value(trial) >= base) {
          mu = trial;
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) break;
      if (mu.norm() > mu_cap) {
        throw DualUnboundedError("oracle_solve: dual objective appears unbounded");
      }
    }
    if (t <= t_final) break;
    t = std::max(t / 10.0, t_final);
  }
  const double lower = mu.dot(inst.targets);
  return OracleSolution{lower + 0.5 * t * static_cast<double>(d), mu};
}

// Bisection reference solver for c = 1 against the feasibility boundary
// lambda_min(H - mu Q) = 0, driven by the sign of q.
inline OracleSolution oracle_bisection(const SdpInstance& inst, double tol, DualPoint mu0) {
  const double q = inst.targets(0);
  auto lmin = [&](double m) {
    DualPoint mu(1);
    mu << m;
    return min_eigenvalue(dual_slack(inst, mu));
  };

  if (q == 0.0) return OracleSolution{0.0, mu0};
  const double dir = q > 0.0 ? 1.0 : -1.0;

  // Expand from the feasible start until the boundary is bracketed.
  double lo = mu0(0);
  double step = 1.0;
  double hi = lo + dir * step;
  while (lmin(hi) > 0.0) {
    lo = hi;
    step *= 2.0;
    hi = lo + dir * step;
    if (std::abs(hi) > 1e9) {
      throw DualUnboundedError("oracle_solve: dual objective unbounded along the bisection ray");
    }
  }
  // Bisect until the value bracket is inside tol.
  while (std::abs(q * (hi - lo)) > 0.25 * tol) {
    const double mid = 0.5 * (lo + hi);
    if (lmin(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  DualPoint mu(1);
  mu << lo;
  return OracleSolution{q * lo, mu};
}

}  // namespace detail

// Reference solution of the unregularized SDP. Independent of the thermal
// machinery: c=1 uses feasibility bisection, c>=2 a log-det barrier central
// path. Slater's condition is the caller's assertion.
inline OracleSolution oracle_solve(const SdpInstance& inst, double tol = 1e-9) {
  const DualPoint mu0 = find_strictly_feasible(inst);
  if (inst.num_constraints() == 1) {
    return detail::oracle_bisection(inst, tol, mu0);
  }
  return detail::oracle_barrier(inst, tol, mu0);
}

}  // namespace besdp
