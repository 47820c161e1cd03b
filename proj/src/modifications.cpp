#include "becurv/modifications.hpp"

#include "becurv/curvature_function.hpp"
#include "becurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace becurv {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

constexpr double kRegularity = 1e-10;
constexpr double kRowSum = 1e-10;
constexpr double kCurvatureSlack = 1e-8;
constexpr double kPsdSlack = 1e-9;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

void require_positive(double c, const char* name) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError(std::string(name) + " must be positive, got " + fmt(c));
}

bool adjacent(const WeightedGraph& g, std::size_t a, std::size_t b) { return g.weight(a, b) > 0.0; }

// Neighbours of z0 inside S1(x), in graph order.
std::vector<std::size_t> s1_neighbours_of(const WeightedGraph& g, std::size_t x, std::size_t z0) {
  std::vector<std::size_t> out;
  for (const auto& nb : g.neighbors(z0)) {
    if (adjacent(g, nb.index, x)) out.push_back(nb.index);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t require_s2(const WeightedGraph& g, std::size_t x, std::string_view z0) {
  const std::size_t z = g.require(z0);
  if (z == x || adjacent(g, x, z) || s1_neighbours_of(g, x, z).empty()) {
    throw DomainError("vertex " + std::string(z0) + " is not in S2(" + g.id(x) + ")");
  }
  return z;
}

void require_in_regular(const WeightedGraph& g, std::size_t x, const std::vector<std::size_t>& ys) {
  const double p0 = g.transition_rate(ys.front(), x);
  for (auto y : ys) {
    const double p = g.transition_rate(y, x);
    if (!close(p0, p, kRegularity)) {
      throw DomainError("p_yx differs between " + g.id(ys.front()) + " (" + fmt(p0) + ") and " + g.id(y) + " (" +
                        fmt(p) + ")");
    }
  }
}

void add_weight(std::vector<EdgeSpec>& edges, const VertexId& a, const VertexId& b, double w) {
  for (auto& e : edges) {
    if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
      e.w += w;
      return;
    }
  }
  edges.push_back({a, b, w});
}

WeightedGraph increase_edge(const WeightedGraph& g, std::size_t x, const EdgeIncrease& op) {
  require_positive(op.c1, "c1");
  const std::size_t y = g.require(op.y);
  const std::size_t yp = g.require(op.yp);
  if (y == yp) throw DomainError("edge increase needs two distinct vertices, got " + op.y + " twice");
  for (auto v : {y, yp}) {
    if (!adjacent(g, x, v)) throw DomainError("vertex " + g.id(v) + " is not in S1(" + g.id(x) + ")");
  }
  require_in_regular(g, x, {y, yp});
  auto edges = g.edges();
  add_weight(edges, g.id(y), g.id(yp), op.c1);
  return WeightedGraph(g.vertices(), std::move(edges));
}

WeightedGraph remove_vertex(const WeightedGraph& g, std::size_t x, const VertexRemoval& op) {
  require_positive(op.c2, "c2");
  const std::size_t z = require_s2(g, x, op.z0);
  const auto ys = s1_neighbours_of(g, x, z);
  require_in_regular(g, x, ys);
  const double threshold = removal_threshold(g, g.id(x), op.z0);
  if (op.c2 < threshold - kRegularity * std::max(1.0, threshold)) {
    throw DomainError("c2 = " + fmt(op.c2) + " is below the threshold " + fmt(threshold) + " for " + op.z0);
  }

  std::vector<EdgeSpec> edges;
  for (const auto& e : g.edges()) {
    const bool cut = (e.u == op.z0 && adjacent(g, x, g.require(e.v))) ||
                     (e.v == op.z0 && adjacent(g, x, g.require(e.u)));
    if (!cut) edges.push_back(e);
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      add_weight(edges, g.id(ys[i]), g.id(ys[j]), op.c2 * g.weight(ys[i], z) * g.weight(z, ys[j]));
    }
  }
  const bool isolated = std::none_of(edges.begin(), edges.end(),
                                     [&](const EdgeSpec& e) { return e.u == op.z0 || e.v == op.z0; });
  std::vector<VertexSpec> vertices = g.vertices();
  if (isolated) {
    std::erase_if(vertices, [&](const VertexSpec& v) { return v.id == op.z0; });
  }
  return WeightedGraph(std::move(vertices), std::move(edges));
}

}  // namespace

double removal_threshold(const WeightedGraph& g, std::string_view x, std::string_view z0) {
  const std::size_t xi = g.require(x);
  const std::size_t z = require_s2(g, xi, z0);
  const auto ys = s1_neighbours_of(g, xi, z);
  double p2 = 0.0;
  for (auto y : ys) p2 += g.transition_rate(xi, y) * g.transition_rate(y, z);
  return g.transition_rate(ys.front(), xi) / (g.mu(xi) * p2);
}

WeightedGraph apply_modification(const WeightedGraph& g, std::string_view x, const ModificationSpec& spec) {
  const std::size_t xi = g.require(x);
  if (g.neighbors(xi).empty()) throw DomainError("curvature undefined at isolated vertex " + std::string(x));
  if (const auto* o1 = std::get_if<EdgeIncrease>(&spec)) return increase_edge(g, xi, *o1);
  return remove_vertex(g, xi, std::get<VertexRemoval>(spec));
}

MonotonicityReport verify_monotonicity(const WeightedGraph& g, std::string_view x, const ModificationSpec& spec,
                                       const std::vector<Dimension>& grid) {
  MonotonicityReport r;
  r.modified = apply_modification(g, x, spec);
  const CurvatureFunction before = curvature_function(g, x);
  const CurvatureFunction after = curvature_function(r.modified, x);
  const auto& ball = before.matrix().ball;
  if (ball.s1 != after.matrix().ball.s1) throw ContractViolation("modification changed S1(" + std::string(x) + ")");

  r.min_gain = std::numeric_limits<double>::infinity();
  for (const auto& n : grid) {
    const MonotonicitySample s{n, before(n), after(n)};
    r.samples.push_back(s);
    r.min_gain = std::min(r.min_gain, s.k_modified - s.k);
    if (s.k_modified < s.k - kCurvatureSlack) {
      r.violations.push_back("curvature decreases at N=" + to_string(n) + ": " + fmt(s.k) + " -> " +
                             fmt(s.k_modified));
    }
  }

  const MatrixXd diff = after.matrix().q.matrix() - before.matrix().q.matrix();
  const SymMatrix sd(diff);
  r.q_gain_min_eigenvalue = eig_sym(sd).min();
  if (!is_psd(sd, kPsdSlack)) {
    r.violations.push_back("Q_modified - Q is not positive semidefinite (lambda_min " +
                           fmt(r.q_gain_min_eigenvalue) + ")");
  }

  if (const auto* o2 = std::get_if<VertexRemoval>(&spec)) {
    const std::size_t z = g.require(o2->z0);
    const std::size_t xi = g.require(x);
    double row_err = 0.0;
    double off = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < diff.rows(); ++i) {
      const std::size_t y = g.require(ball.s1[static_cast<std::size_t>(i)]);
      const double expect = 0.25 * g.transition_rate(xi, y) * g.transition_rate(y, z);
      const double err = std::abs(diff.row(i).sum() - expect);
      row_err = std::max(row_err, err);
      if (err > kRowSum) {
        r.violations.push_back("row sum of Q_modified - Q at " + ball.s1[static_cast<std::size_t>(i)] + " is " +
                               fmt(diff.row(i).sum()) + ", expected " + fmt(expect));
      }
      for (Index j = 0; j < diff.cols(); ++j) {
        if (i == j) continue;
        off = std::max(off, diff(i, j));
        if (diff(i, j) > kRowSum) {
          r.violations.push_back("positive off-diagonal entry of Q_modified - Q at (" +
                                 ball.s1[static_cast<std::size_t>(i)] + ", " + ball.s1[static_cast<std::size_t>(j)] +
                                 "): " + fmt(diff(i, j)));
        }
      }
    }
    r.row_sum_error = row_err;
    if (diff.rows() > 1) r.max_offdiagonal = off;
  }
  return r;
}

}  // namespace becurv
