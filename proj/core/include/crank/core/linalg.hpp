#pragma once

#include <Eigen/Core>

namespace crank {

/// Dense real vector of fixed length d per dataset (a creative's context).
using FeatureVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace core {

/// Lower-triangular factor L of a symmetric positive-definite matrix, L·Lᵀ = M.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}

  const Matrix& lower() const noexcept { return lower_; }
  Eigen::Index dim() const noexcept { return lower_.rows(); }

  /// Solves (L·Lᵀ)·x = rhs.
  FeatureVector solve(const FeatureVector& rhs) const;

  /// Overwrites z with x such that Lᵀ·x = z.
  void solve_transpose_in_place(FeatureVector& z) const;

  /// Turns the factor of M into the factor of M + v·vᵀ in O(d²).
  void rank_one_update(FeatureVector v);

  /// log det(L·Lᵀ).
  double log_determinant() const;

  Matrix reconstruct() const;

 private:
  Matrix lower_;
};

/// Throws Errc::NotPositiveDefinite if any pivot is not strictly positive.
CholeskyFactor cholesky(const Matrix& m);

/// Symmetric positive-definite matrix. Construction symmetrizes the input,
/// rejects asymmetry above 1e-12 (relative to the largest entry) and keeps
/// the Cholesky factor next to the matrix.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m);
  SpdMatrix(Matrix m, CholeskyFactor factor);

  static SpdMatrix scaled_identity(Eigen::Index d, double scale);

  const Matrix& matrix() const noexcept { return m_; }
  const CholeskyFactor& factor() const noexcept { return factor_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
  CholeskyFactor factor_;
};

inline constexpr double kSymmetryTolerance = 1e-12;

}  // namespace core
}  // namespace crank
