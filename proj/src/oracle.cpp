#include "becurv/oracle.hpp"

#include "becurv/curvature_function.hpp"
#include "becurv/errors.hpp"
#include "becurv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace becurv {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kEquivalence = 1e-7;
constexpr int kMaxExpansions = 200;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

struct Forms {
  MatrixXd gamma2;
  VectorXd delta;
  MatrixXd gamma;
};

// Largest feasible K for Gamma_2 - (1/N) delta delta^T - K Gamma.
double bisect(const Forms& f, const LocalBall& ball, Dimension n, const Tolerances& tol) {
  const MatrixXd base = f.gamma2 - n.reciprocal() * f.delta * f.delta.transpose();
  const auto feasible = [&](double k) { return is_psd(SymMatrix(base - k * f.gamma), tol.oracle_psd); };

  double hi = k0_infinity(ball) - 2.0 * n.reciprocal() * ball.degree_ratio + 1.0;
  if (feasible(hi)) throw ContractViolation("oracle upper bracket " + fmt(hi) + " is feasible at " + ball.center);
  double step = 2.0;
  double lo = hi - step;
  for (int i = 0; !feasible(lo); ++i) {
    if (i > kMaxExpansions) throw ContractViolation("oracle lower bracket not found at " + ball.center);
    step *= 2.0;
    lo = hi - step;
  }
  while (hi - lo > tol.oracle_width) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FullForms full_forms(const LocalBall& ball) {
  const Index s = static_cast<Index>(ball.size());
  const Index b1 = 1 + static_cast<Index>(ball.m());
  const MatrixXd& p = ball.p;
  const auto e = [s](Index i) { return VectorXd::Unit(s, i); };

  // Laplacian rows and Gamma forms at x and the S1 vertices.
  std::vector<VectorXd> lap(static_cast<std::size_t>(b1), VectorXd::Zero(s));
  std::vector<MatrixXd> gam(static_cast<std::size_t>(b1), MatrixXd::Zero(s, s));
  for (Index a = 0; a < b1; ++a) {
    auto& l = lap[static_cast<std::size_t>(a)];
    auto& g = gam[static_cast<std::size_t>(a)];
    for (Index b = 0; b < s; ++b) {
      if (p(a, b) == 0.0) continue;
      const VectorXd d = e(b) - e(a);
      l += p(a, b) * d;
      g += 0.5 * p(a, b) * d * d.transpose();
    }
  }

  MatrixXd h = MatrixXd::Zero(s, s);
  MatrixXd c = MatrixXd::Zero(s, s);
  for (Index y = 1; y < b1; ++y) {
    const double pxy = p(0, y);
    h += pxy * (gam[static_cast<std::size_t>(y)] - gam[0]);
    c += 0.5 * pxy * (e(y) - e(0)) * (lap[static_cast<std::size_t>(y)] - lap[0]).transpose();
  }

  FullForms f;
  f.gamma2_full = 0.5 * (h - c - c.transpose());
  f.delta_full = lap[0];
  f.gamma_full = gam[0];
  f.reduced = gamma_matrices(ball);
  return f;
}

double oracle_curvature(const LocalBall& ball, Dimension n, const Tolerances& tol) {
  const GammaMatrices gm = gamma_matrices(ball);
  const Index m = gm.gamma2_s1s1.rows();
  const Index k = gm.gamma2_s2s2.rows();
  Forms f;
  f.gamma2.resize(m + k, m + k);
  f.gamma2 << gm.gamma2_s1s1, gm.gamma2_s1s2, gm.gamma2_s1s2.transpose(), gm.gamma2_s2s2;
  f.delta = VectorXd::Zero(m + k);
  f.delta.head(m) = gm.delta_s1;
  f.gamma = MatrixXd::Zero(m + k, m + k);
  f.gamma.topLeftCorner(m, m) = gm.gamma_s1;
  return bisect(f, ball, n, tol);
}

double oracle_curvature_full(const LocalBall& ball, Dimension n, const Tolerances& tol) {
  const FullForms ff = full_forms(ball);
  return bisect({ff.gamma2_full, ff.delta_full, ff.gamma_full}, ball, n, tol);
}

EquivalenceReport equivalence_suite(const WeightedGraph& g, const std::vector<Dimension>& grid,
                                    const Tolerances& tol) {
  EquivalenceReport r;
  r.tolerance = kEquivalence;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.neighbors(i).empty()) continue;
    const CurvatureFunction cf = curvature_function(g, g.id(i), tol);
    for (const auto& n : grid) {
      const double fast = cf(n);
      const double slow = oracle_curvature(cf.matrix().ball, n, tol);
      const double dev = std::abs(fast - slow);
      ++r.evaluations;
      if (dev > r.max_deviation || r.worst_vertex.empty()) {
        r.max_deviation = std::max(r.max_deviation, dev);
        r.worst_vertex = g.id(i);
        r.worst_n = n;
      }
      if (dev > kEquivalence) {
        r.violations.push_back("oracle deviates at " + g.id(i) + ", N=" + to_string(n) + ": " + fmt(fast) +
                               " vs " + fmt(slow));
      }
    }
  }
  return r;
}

}  // namespace becurv
