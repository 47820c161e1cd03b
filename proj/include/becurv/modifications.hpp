#pragma once

#include "becurv/bakry_emery.hpp"
#include "becurv/graph.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace becurv {

/// Raise w_{y y'} by c1 for two distinct neighbours y, y' of x.
struct EdgeIncrease {
  VertexId y;
  VertexId yp;
  double c1 = 1.0;
};

/// Cut z0 in S2(x) off from S1(x) and raise every w_{y y'} (y != y' in S1)
/// by c2 w_{y z0} w_{z0 y'}.
struct VertexRemoval {
  VertexId z0;
  double c2 = 1.0;
};

using ModificationSpec = std::variant<EdgeIncrease, VertexRemoval>;

/// Smallest admissible c2: p_yx / (mu_x p2_{x z0}) for any y adjacent to z0.
/// Throws DomainError when z0 is not in S2(x).
double removal_threshold(const WeightedGraph& g, std::string_view x, std::string_view z0);

/// Applies the modification at x. Measures are unchanged; z0 is dropped when
/// the removal leaves it isolated. Throws DomainError naming the offending
/// vertices when p_yx is not constant over the involved neighbours (within
/// 1e-10), when the vertices are not in the right spheres, or when c2 is
/// below removal_threshold.
WeightedGraph apply_modification(const WeightedGraph& g, std::string_view x, const ModificationSpec& spec);

struct MonotonicitySample {
  Dimension n;
  double k = 0.0;
  double k_modified = 0.0;
};

struct MonotonicityReport {
  WeightedGraph modified;
  std::vector<MonotonicitySample> samples;
  /// min over the grid of K_modified - K.
  double min_gain = 0.0;
  /// lambda_min(Q_modified - Q).
  double q_gain_min_eigenvalue = 0.0;
  /// Vertex removal only: max |row sum of Q_modified - Q - p_xy p_yz0 / 4|
  /// and the largest off-diagonal entry of Q_modified - Q.
  std::optional<double> row_sum_error;
  std::optional<double> max_offdiagonal;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks K_modified >= K - 1e-8 on the grid, Q_modified - Q >= -1e-9 and,
/// for vertex removal, the row sums (1e-10) and the off-diagonal signs.
/// Precondition failures propagate from apply_modification; violations of
/// the conclusions are reported.
MonotonicityReport verify_monotonicity(const WeightedGraph& g, std::string_view x, const ModificationSpec& spec,
                                       const std::vector<Dimension>& grid);

}  // namespace becurv
