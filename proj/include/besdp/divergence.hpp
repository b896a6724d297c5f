#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "besdp/linalg.hpp"
#include "besdp/sdp.hpp"
#include "besdp/thermal.hpp"

namespace besdp {

// Eigenvalues of the second argument below this fraction of its norm count
// as support violations rather than huge finite penalties.
inline constexpr double kSupportTol = 1e-14;

// Scalar divergence d(x||y) = x ln(x/y) + (x+1) ln((y+1)/(x+1)).
// Limits: d(0||y) = ln(y+1); y = 0 with x > 0 is a support violation (+inf).
inline double scalar_dbe(double x, double y) {
  if (x < 0.0 || y < 0.0) {
    throw std::domain_error("scalar_dbe: arguments must be non-negative");
  }
  if (y == 0.0) {
    return x == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (x == 0.0) return std::log1p(y);
  return x * std::log(x / y) + (x + 1.0) * (std::log1p(y) - std::log1p(x));
}

// D(X||Y) = -S(X) + Tr[(X+I)ln(Y+I) - X ln Y] on the PSD cone, +inf when
// supp(X) is not contained in supp(Y). Evaluated through the two spectra:
// the X-entropy in X's basis, the cross terms in Y's basis.
inline double dbe(const HermitianMatrix& X, const HermitianMatrix& Y) {
  if (X.dim() != Y.dim()) throw std::invalid_argument("dbe: dimension mismatch");
  const EigenSystem ex = eigendecompose(X);
  const EigenSystem ey = eigendecompose(Y);
  const RealVector xs = clip_psd_spectrum(ex.eigenvalues);
  const RealVector ys = clip_psd_spectrum(ey.eigenvalues);
  if (xs(0) < 0.0 || ys(0) < 0.0) {
    throw std::domain_error("dbe: inputs must be PSD within clip tolerance");
  }

  double acc = 0.0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) acc -= scalar_entropy(xs(i));

  const double y_scale = std::max(ys.cwiseAbs().maxCoeff(), 1e-300);
  const Matrix Xy = ey.eigenvectors.adjoint() * X.mat() * ey.eigenvectors;
  for (Eigen::Index j = 0; j < ys.size(); ++j) {
    const double weight = Xy(j, j).real();  // <phi_j|X|phi_j> >= 0
    if (ys(j) <= kSupportTol * y_scale) {
      if (weight > 1e-12) return std::numeric_limits<double>::infinity();
      // X has no weight on this kernel direction; the ln(Y+I) term is
      // ln(1) = 0 there, so the mode contributes nothing.
      continue;
    }
    acc += (weight + 1.0) * std::log1p(ys(j)) - weight * std::log(ys(j));
  }
  return acc;
}

// Spectral-expansion route: sum_{i,j} d(x_i||y_j) |<psi_i|phi_j>|^2.
// Restricted to strictly positive definite inputs; the direct dbe handles
// boundary spectra.
inline double dbe_spectral(const HermitianMatrix& X, const HermitianMatrix& Y) {
  if (X.dim() != Y.dim()) throw std::invalid_argument("dbe_spectral: dimension mismatch");
  const EigenSystem ex = eigendecompose(X);
  const EigenSystem ey = eigendecompose(Y);
  if (ex.eigenvalues(0) <= 0.0) {
    throw std::domain_error("dbe_spectral: first argument must be strictly positive definite");
  }
  if (ey.eigenvalues(0) <= 0.0) {
    throw std::domain_error("dbe_spectral: second argument is singular");
  }
  const Matrix overlap = ex.eigenvectors.adjoint() * ey.eigenvectors;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ex.eigenvalues.size(); ++i) {
    for (Eigen::Index j = 0; j < ey.eigenvalues.size(); ++j) {
      acc += scalar_dbe(ex.eigenvalues(i), ey.eigenvalues(j)) * std::norm(overlap(i, j));
    }
  }
  return acc;
}

// Parameters of the affine map Z -> aZ + bI; the named labels are the
// single-mode bosonic Gaussian channels. Monotonicity of the divergence is
// guaranteed when 2b + 1 >= a.
struct AffineChannelParams {
  double a;
  double b;
  std::string label;

  bool monotone() const noexcept { return 2.0 * b + 1.0 >= a; }

  static AffineChannelParams attenuator(double eta, double N) {
    if (eta < 0.0 || eta > 1.0 || N < 0.0) {
      throw std::domain_error("attenuator: requires eta in [0,1], N >= 0");
    }
    return {eta, (1.0 - eta) * N, "attenuator"};
  }
  static AffineChannelParams amplifier(double G, double N) {
    if (G < 1.0 || N < 0.0) {
      throw std::domain_error("amplifier: requires G >= 1, N >= 0");
    }
    return {G, (G - 1.0) * (N + 1.0), "amplifier"};
  }
  static AffineChannelParams additive_noise(double N) {
    if (N < 0.0) throw std::domain_error("additive_noise: requires N >= 0");
    return {1.0, N, "additive_noise"};
  }
  static AffineChannelParams raw(double a, double b) {
    if (a < 0.0 || b < 0.0) throw std::domain_error("raw affine map: requires a, b >= 0");
    return {a, b, "raw"};
  }
};

struct MonotonicityCheck {
  double lhs;  // D(X||Y)
  double rhs;  // D(aX+bI||aY+bI)
  bool holds;
};

inline MonotonicityCheck affine_monotonicity_check(const HermitianMatrix& X,
                                                   const HermitianMatrix& Y,
                                                   const AffineChannelParams& params) {
  const Eigen::Index d = X.dim();
  const HermitianMatrix Xc(params.a * X.mat() + params.b * Matrix::Identity(d, d));
  const HermitianMatrix Yc(params.a * Y.mat() + params.b * Matrix::Identity(d, d));
  const double lhs = dbe(X, Y);
  const double rhs = dbe(Xc, Yc);
  return MonotonicityCheck{lhs, rhs, lhs >= rhs - 1e-10};
}

// Closed-form determinant of the scalar Hessian of d(x||y):
// -(x-y)^2 / (x(x+1) y^2 (y+1)^2). Strictly negative off the diagonal x=y,
// which is the joint-convexity failure witness.
inline double joint_convexity_det(double x, double y) {
  if (x <= 0.0 || y <= 0.0) {
    throw std::domain_error("joint_convexity_det: arguments must be positive");
  }
  const double diff = x - y;
  return -(diff * diff) / (x * (x + 1.0) * y * y * (y + 1.0) * (y + 1.0));
}

// Fisher information of the thermal family: I(mu) = -(1/T) Hessian(f_T).
inline RealMatrix fisher_information(const SdpInstance& inst, const DualPoint& mu,
                                     double T) {
  return (-1.0 / T) * hessian(inst, mu, T);
}

inline RealMatrix fisher_information(const SdpInstance& inst, const DualPoint& mu,
                                     const ThermalOperator& op) {
  return (-1.0 / op.temperature) * hessian(inst, mu, op);
}

}  // namespace besdp
