#include "crank/core/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "crank/core/error.hpp"

namespace crank::core {

FeatureVector CholeskyFactor::solve(const FeatureVector& rhs) const {
  FeatureVector x = lower_.triangularView<Eigen::Lower>().solve(rhs);
  lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

void CholeskyFactor::solve_transpose_in_place(FeatureVector& z) const {
  lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(z);
}

void CholeskyFactor::rank_one_update(FeatureVector v) {
  const Eigen::Index n = dim();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lkk = lower_(k, k);
    const double r = std::hypot(lkk, v(k));
    const double c = r / lkk;
    const double s = v(k) / lkk;
    lower_(k, k) = r;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      lower_(i, k) = (lower_(i, k) + s * v(i)) / c;
      v(i) = c * v(i) - s * lower_(i, k);
    }
  }
}

double CholeskyFactor::log_determinant() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

Matrix CholeskyFactor::reconstruct() const {
  return lower_ * lower_.transpose();
}

CholeskyFactor cholesky(const Matrix& m) {
  if (m.rows() != m.cols()) {
    fail(Errc::PreconditionViolated, "cholesky: matrix is not square");
  }
  const Eigen::Index n = m.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      fail(Errc::NotPositiveDefinite,
           "cholesky: non-positive pivot " + std::to_string(pivot) +
               " at index " + std::to_string(j));
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double acc = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

namespace {

Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) {
    fail(Errc::PreconditionViolated, "SpdMatrix: matrix is not square");
  }
  if (!m.allFinite()) {
    fail(Errc::PreconditionViolated, "SpdMatrix: non-finite entry");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    fail(Errc::PreconditionViolated,
         "SpdMatrix: asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace

SpdMatrix::SpdMatrix(const Matrix& m) : m_(symmetrized(m)), factor_(cholesky(m_)) {}

SpdMatrix::SpdMatrix(Matrix m, CholeskyFactor factor)
    : m_(std::move(m)), factor_(std::move(factor)) {}

SpdMatrix SpdMatrix::scaled_identity(Eigen::Index d, double scale) {
  if (!(scale > 0.0)) {
    fail(Errc::NotPositiveDefinite, "scaled_identity: scale must be positive");
  }
  Matrix m = scale * Matrix::Identity(d, d);
  Matrix l = std::sqrt(scale) * Matrix::Identity(d, d);
  return SpdMatrix(std::move(m), CholeskyFactor(std::move(l)));
}

}  // namespace crank::core
