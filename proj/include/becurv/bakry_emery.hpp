#pragma once

#include "becurv/graph.hpp"
#include "becurv/linalg.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace becurv {

/// The dimension parameter N in (0, inf]. Infinity is a separate state and
/// never enters matrix arithmetic as an IEEE infinity.
class Dimension {
 public:
  /// Throws DomainError unless 0 < n < inf.
  static Dimension finite(double n);
  static Dimension infinity() { return Dimension(); }

  bool is_infinite() const { return infinite_; }
  /// The finite value; only meaningful when !is_infinite().
  double value() const { return value_; }
  /// 1/N, or 0 for infinity.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  friend bool operator<(const Dimension& a, const Dimension& b);
  friend bool operator==(const Dimension& a, const Dimension& b) = default;

 private:
  Dimension() = default;
  bool infinite_ = true;
  double value_ = 0.0;
};

std::string to_string(const Dimension& n);

/// Blocks of Gamma(x), Delta(x) and Gamma_2(x) with the row and column of x
/// removed, at true scale.
struct GammaMatrices {
  /// (p_{x y_1}, ..., p_{x y_m}).
  Eigen::VectorXd delta_s1;
  /// diag(delta_s1) / 2.
  Eigen::MatrixXd gamma_s1;
  Eigen::MatrixXd gamma2_s1s1;
  Eigen::MatrixXd gamma2_s1s2;
  /// Diagonal with entries p2_z / 4.
  Eigen::MatrixXd gamma2_s2s2;
};

/// Q(x) (the Schur complement of Gamma_2 onto S1), the curvature matrix
/// A_inf(x) = 2 diag(v0)^-1 Q diag(v0)^-1 and v0 = (sqrt(p_{x y_i}))_i.
struct CurvatureMatrix {
  SymMatrix q;
  SymMatrix a_inf;
  Eigen::VectorXd v0;
  LocalBall ball;
};

GammaMatrices gamma_matrices(const LocalBall& ball);

/// Q(x) from the closed-form entries.
Eigen::MatrixXd q_direct(const LocalBall& ball);
/// Q(x) as Gamma2_{S1S1} - Gamma2_{S1S2} Gamma2_{S2S2}^-1 Gamma2_{S2S1}.
Eigen::MatrixXd q_schur(const GammaMatrices& gm);
/// Q(x) assembled from the two auxiliary Laplacians on S1.
Eigen::MatrixXd q_laplacian(const LocalBall& ball);
/// A_inf(x) assembled from the same Laplacians.
Eigen::MatrixXd a_inf_laplacian(const LocalBall& ball);
/// A_inf(x) by the non-weighted combinatorial formula (induced S1 Laplacian,
/// in/out-degrees); nullopt unless the ball is non-weighted.
std::optional<Eigen::MatrixXd> a_inf_non_weighted(const LocalBall& ball);

CurvatureMatrix curvature_matrix(const LocalBall& ball);

/// A_N = A_inf - (2/N) v0 v0^T; A_inf for infinity.
SymMatrix a_n(const CurvatureMatrix& cm, Dimension n);

/// K0_inf(x) = (d/mu + 3 (mu/d) p2_xx - (mu/d) sum_z p2_xz) / 2.
double k0_infinity(const LocalBall& ball);

/// Generalised scalar curvature tr A_N from the closed-form trace.
double scalar_curvature(const LocalBall& ball, Dimension n);

/// The non-weighted closed form
///   d - d^2/2 + (3/2) sum_y d_y + #triangles - 2|S2| - 2d/N;
/// nullopt unless the ball is non-weighted.
std::optional<double> scalar_curvature_non_weighted(const LocalBall& ball, Dimension n);

struct DecompositionReport {
  /// max |Q_direct - Q_schur|.
  double schur = 0.0;
  /// max |Q_direct - Q_laplacian|.
  double laplacian_q = 0.0;
  /// max |A_inf - A_inf_laplacian|.
  double laplacian_a = 0.0;
  /// max |A_inf - A_inf_non_weighted| when the ball is non-weighted.
  std::optional<double> non_weighted;
  double tolerance = 0.0;

  double max_discrepancy() const;
  bool ok() const { return max_discrepancy() <= tolerance; }
};

/// Cross-checks the direct construction of Q / A_inf against the Schur and
/// Laplacian constructions.
DecompositionReport verify_decomposition(const LocalBall& ball, double tolerance = 1e-9);

}  // namespace becurv
