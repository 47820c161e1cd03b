#pragma once

#include "becurv/bakry_emery.hpp"
#include "becurv/graph.hpp"
#include "becurv/tolerances.hpp"

#include <string>
#include <vector>

namespace becurv {

/// Gamma(x), Delta(x) and Gamma_2(x) as forms on functions over B2(x),
/// built from first principles (x first, then S1, then S2), together with
/// the reduced blocks on S1 u S2.
struct FullForms {
  Eigen::MatrixXd gamma2_full;
  /// Row of the Laplacian at x; zero outside B1(x).
  Eigen::VectorXd delta_full;
  Eigen::MatrixXd gamma_full;
  GammaMatrices reduced;
};

FullForms full_forms(const LocalBall& ball);

/// K(N) as the largest K with Gamma_2 - (1/N) Delta Delta^T - K Gamma >= 0
/// on S1 u S2, by bisection on K to width tol.oracle_width with the PSD
/// slack tol.oracle_psd. Uses only the Gamma blocks.
double oracle_curvature(const LocalBall& ball, Dimension n, const Tolerances& tol = {});

/// Same feasibility problem posed on all of B2(x), functions free at x.
double oracle_curvature_full(const LocalBall& ball, Dimension n, const Tolerances& tol = {});

struct EquivalenceReport {
  double max_deviation = 0.0;
  VertexId worst_vertex;
  Dimension worst_n = Dimension::infinity();
  std::size_t evaluations = 0;
  double tolerance = 1e-7;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Oracle against lambda_min(A_N) at every vertex with neighbours and every
/// grid point.
EquivalenceReport equivalence_suite(const WeightedGraph& g, const std::vector<Dimension>& grid,
                                    const Tolerances& tol = {});

}  // namespace becurv
