#pragma once

#include "becurv/bakry_emery.hpp"
#include "becurv/curvature_function.hpp"
#include "becurv/graph.hpp"
#include "becurv/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace becurv {

inline constexpr char kProductSeparator = '|';

struct ProductSpec {
  WeightedGraph g;
  WeightedGraph gp;
  double alpha = 1.0;
  double beta = 1.0;
};

/// "u|u'".
VertexId product_id(std::string_view u, std::string_view up);

/// Weighted Cartesian product G x_{alpha,beta} G'. Horizontal edges get
/// alpha w_xy mu_x', vertical edges beta w_x'y' mu_x, measures mu_x mu_x'.
/// Throws DomainError for non-positive alpha / beta and for ids containing
/// the separator.
WeightedGraph cartesian_product(const ProductSpec& spec);

struct DirectSumReport {
  /// S1 of (x, x') in block order: horizontal neighbours in G order, then
  /// vertical neighbours in G' order.
  std::vector<VertexId> s1;
  /// A_inf of the product at (x, x'), permuted to block order.
  Eigen::MatrixXd product;
  /// alpha A_inf(x) (+) beta A_inf(x').
  Eigen::MatrixXd expected;
  double max_discrepancy = 0.0;
};

DirectSumReport product_curvature_matrix_check(const ProductSpec& spec, std::string_view x,
                                               std::string_view xp);

struct SandwichReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  /// lambda_min(A(N1 + N2)).
  double lambda = 0.0;
  /// lambda - min(alpha lambda1, beta lambda2).
  double lower_slack = 0.0;
  /// max(alpha lambda1, beta lambda2) - lambda.
  double upper_slack = 0.0;
  double tolerance = 0.0;

  bool ok() const { return lower_slack >= -tolerance && upper_slack >= -tolerance; }
};

/// A = alpha a1 (+) beta a2, v = sqrt(alpha) v1 (+) sqrt(beta) v2, compared
/// against lambda_i = lambda_min(a_i - (2/N_i) v_i v_i^T).
/// Throws LinalgError on inconsistent dimensions.
SandwichReport eigen_sandwich_check(const SymMatrix& a1, const Eigen::VectorXd& v1, const SymMatrix& a2,
                                    const Eigen::VectorXd& v2, double alpha, double beta, Dimension n1,
                                    Dimension n2, double tolerance = 1e-9);

/// A continuous nondecreasing f on (0, inf) with f -> -inf at 0 and a
/// declared value at infinity.
struct MonotoneFunction {
  std::function<double(double)> f;
  double limit = 0.0;

  double operator()(Dimension n) const { return n.is_infinite() ? limit : f(n.value()); }
};

/// N -> alpha K(N).
MonotoneFunction scaled_curvature(CurvatureFunction cf, double alpha = 1.0);

/// (f1 * f2)(t) = f1(t1) = f2(t - t1). Finite t by bisection on t1 until
/// |f1(t1) - f2(t - t1)| <= 1e-10; infinite t gives min of the limits.
/// Throws ContractViolation when the samples are not monotone or the root
/// cannot be bracketed.
double star_product(const MonotoneFunction& f1, const MonotoneFunction& f2, Dimension t);

struct StarProductReport {
  std::vector<Dimension> grid;
  std::vector<double> product;
  std::vector<double> star;
  double max_deviation = 0.0;
};

/// K of the product at (x, x') against (alpha K_{G,x}) * (beta K_{G',x'}).
StarProductReport star_product_check(const ProductSpec& spec, std::string_view x, std::string_view xp,
                                     const std::vector<Dimension>& grid);

}  // namespace becurv
