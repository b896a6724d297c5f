#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace besdp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Relative tolerance for Hermiticity on ingestion and for clipping tiny
// negative eigenvalues of nominally-PSD operators.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdClipTol = 1e-12;

// Dense Hermitian matrix. Construction symmetrizes the input by averaging
// with its adjoint and records the pre-averaging residual; inputs whose
// residual exceeds kHermitianTol * max-norm are rejected.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix raw) {
    if (raw.rows() != raw.cols() || raw.rows() == 0) {
      throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty");
    }
    if (!raw.allFinite()) {
      throw std::invalid_argument("HermitianMatrix: entries must be finite");
    }
    const double max_norm = raw.cwiseAbs().maxCoeff();
    residual_ = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    if (residual_ > kHermitianTol * std::max(max_norm, 1.0)) {
      std::ostringstream msg;
      msg << "HermitianMatrix: input is not Hermitian (symmetrization residual "
          << residual_ << " exceeds " << kHermitianTol * std::max(max_norm, 1.0) << ")";
      throw std::invalid_argument(msg.str());
    }
    m_ = ((raw + raw.adjoint()) * 0.5).eval();
  }

  static HermitianMatrix identity(Eigen::Index d) {
    return HermitianMatrix(Matrix::Identity(d, d));
  }
  static HermitianMatrix zero(Eigen::Index d) {
    return HermitianMatrix(Matrix::Zero(d, d));
  }
  static HermitianMatrix diagonal(const RealVector& diag) {
    Matrix m = Matrix::Zero(diag.size(), diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = diag(i);
    return HermitianMatrix(std::move(m));
  }

  const Matrix& mat() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double ingest_residual() const noexcept { return residual_; }

 private:
  Matrix m_;
  double residual_ = 0.0;
};

// Eigenvalues ascending; eigenvectors are the matching columns.
struct EigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

inline EigenSystem eigendecompose(const HermitianMatrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: eigensolver failed to converge");
  }
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

// V diag(f(lambda)) V^dagger. f must be finite on the spectrum; a NaN/Inf
// value is reported together with the offending eigenvalue.
template <class F>
HermitianMatrix spectral_apply(const HermitianMatrix& A, F&& f) {
  const EigenSystem es = eigendecompose(A);
  RealVector mapped(es.eigenvalues.size());
  for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) {
    const double y = f(es.eigenvalues(j));
    if (!std::isfinite(y)) {
      std::ostringstream msg;
      msg << "spectral_apply: function not finite at eigenvalue "
          << es.eigenvalues(j) << " (index " << j << ")";
      throw std::domain_error(msg.str());
    }
    mapped(j) = y;
  }
  Matrix out = es.eigenvectors * mapped.asDiagonal() * es.eigenvectors.adjoint();
  return HermitianMatrix(std::move(out));
}

// Re Tr[AB] for Hermitian A, B; the imaginary residual is asserted to be
// numerically zero.
inline double trace_product(const HermitianMatrix& A, const HermitianMatrix& B) {
  if (A.dim() != B.dim()) {
    throw std::invalid_argument("trace_product: dimension mismatch");
  }
  const Complex t = (A.mat().cwiseProduct(B.mat().transpose())).sum();
  const double scale = std::max(1.0, std::abs(t.real()));
  if (std::abs(t.imag()) > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "trace_product: imaginary residual " << t.imag() << " exceeds tolerance";
    throw std::logic_error(msg.str());
  }
  return t.real();
}

inline double spectral_norm(const HermitianMatrix& A) {
  const EigenSystem es = eigendecompose(A);
  return es.eigenvalues.cwiseAbs().maxCoeff();
}

inline double trace_norm(const HermitianMatrix& A) {
  const EigenSystem es = eigendecompose(A);
  return es.eigenvalues.cwiseAbs().sum();
}

inline double min_eigenvalue(const HermitianMatrix& A) {
  return eigendecompose(A).eigenvalues(0);
}

// Clip eigenvalues with tiny negative parts on a nominally-PSD spectrum.
// Entries with |lambda| <= kPsdClipTol * spectral-norm are set to 0; a
// negative eigenvalue beyond that tolerance is an error in the caller's
// domain and is left untouched (callers check).
inline RealVector clip_psd_spectrum(const RealVector& eigenvalues) {
  const double scale = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double tol = kPsdClipTol * std::max(scale, 1e-300);
  RealVector out = eigenvalues;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    if (std::abs(out(j)) <= tol) out(j) = 0.0;
  }
  return out;
}

inline bool is_psd_within_clip(const HermitianMatrix& A) {
  const EigenSystem es = eigendecompose(A);
  const double scale = std::max(es.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  return es.eigenvalues(0) >= -kPsdClipTol * scale;
}

}  // namespace besdp
