#pragma once

#include <Eigen/Dense>

namespace becurv {

/// Dense real symmetric matrix. Construction checks symmetry within
/// tol * max(1, |a_ij|) and stores the symmetrised (a + a^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& a, double symmetry_tol = 1e-12);

  static SymMatrix identity(Eigen::Index order);

  Eigen::Index order() const { return a_.rows(); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }
  double frobenius_norm() const { return a_.norm(); }
  /// max(1, ||A||_F), the scale all relative tolerances refer to.
  double scale() const;

 private:
  Eigen::MatrixXd a_;
};

/// Eigenvalues in nondecreasing order; column i of `vectors` pairs with
/// values(i). Columns form an orthonormal basis and are sign-normalised so
/// that their largest-magnitude entry is positive.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  double min() const { return values(0); }
  /// Number of eigenvalues within eps of the smallest one.
  Eigen::Index min_multiplicity(double eps) const;
  /// Orthonormal basis of the eps-clustered minimal eigenspace.
  Eigen::MatrixXd min_eigenspace(double eps) const;
};

/// Full eigendecomposition by cyclic Jacobi rotations. Deterministic.
/// Throws LinalgError on non-finite input.
Spectrum eig_sym(const SymMatrix& a);

/// lambda_min(a) >= -tol, decided from the spectrum.
bool is_psd(const SymMatrix& a, double tol);

/// Same predicate decided by a diagonally pivoted Cholesky factorisation of
/// a + tol * I, without computing eigenvalues.
bool is_psd_cholesky(const SymMatrix& a, double tol);

/// Solves a x = b for positive definite a (lambda_min > 1e-12 ||a||_F).
/// Throws LinalgError("singular system") otherwise.
Eigen::VectorXd solve_spd(const SymMatrix& a, const Eigen::VectorXd& b);

/// Block diagonal a (+) b.
Eigen::MatrixXd direct_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace becurv
