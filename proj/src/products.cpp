#include "becurv/products.hpp"

#include "becurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace becurv {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStarTolerance = 1e-10;
constexpr int kMaxHalvings = 200;

void reject_separator(const WeightedGraph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.id(i).find(kProductSeparator) != std::string::npos) {
      throw DomainError("vertex id '" + g.id(i) + "' contains the product separator '" +
                        std::string(1, kProductSeparator) + "'");
    }
  }
}

// Samples of one factor seen during a bisection; each insertion is checked
// against its neighbours in t.
class MonotoneLog {
 public:
  MonotoneLog(const MonotoneFunction& f, const char* name) : f_(f), name_(name) {}

  double operator()(double t) {
    const auto found = seen_.find(t);
    if (found != seen_.end()) return found->second;
    const double v = f_.f(t);
    if (!std::isfinite(v)) throw ContractViolation(std::string(name_) + " is not finite at t=" + std::to_string(t));
    const auto it = seen_.emplace(t, v).first;
    const double slack = 1e-9 * std::max(1.0, std::abs(v));
    if (it != seen_.begin() && std::prev(it)->second > v + slack) fail(std::prev(it)->first, t);
    if (std::next(it) != seen_.end() && v > std::next(it)->second + slack) fail(t, std::next(it)->first);
    return v;
  }

 private:
  [[noreturn]] void fail(double a, double b) const {
    throw ContractViolation(std::string(name_) + " is not monotone between t=" + std::to_string(a) +
                            " and t=" + std::to_string(b));
  }

  const MonotoneFunction& f_;
  const char* name_;
  std::map<double, double> seen_;
};

}  // namespace

VertexId product_id(std::string_view u, std::string_view up) {
  VertexId id(u);
  id += kProductSeparator;
  id += up;
  return id;
}

WeightedGraph cartesian_product(const ProductSpec& spec) {
  if (!(spec.alpha > 0.0) || !(spec.beta > 0.0) || !std::isfinite(spec.alpha) || !std::isfinite(spec.beta)) {
    throw DomainError("product weights alpha and beta must be positive");
  }
  reject_separator(spec.g);
  reject_separator(spec.gp);

  std::vector<VertexSpec> v;
  v.reserve(spec.g.size() * spec.gp.size());
  for (std::size_t i = 0; i < spec.g.size(); ++i) {
    for (std::size_t j = 0; j < spec.gp.size(); ++j) {
      v.push_back({product_id(spec.g.id(i), spec.gp.id(j)), spec.g.mu(i) * spec.gp.mu(j)});
    }
  }
  std::vector<EdgeSpec> e;
  for (const auto& ed : spec.g.edges()) {
    for (std::size_t j = 0; j < spec.gp.size(); ++j) {
      const auto& up = spec.gp.id(j);
      e.push_back({product_id(ed.u, up), product_id(ed.v, up), spec.alpha * ed.w * spec.gp.mu(j)});
    }
  }
  for (const auto& ed : spec.gp.edges()) {
    for (std::size_t i = 0; i < spec.g.size(); ++i) {
      const auto& u = spec.g.id(i);
      e.push_back({product_id(u, ed.u), product_id(u, ed.v), spec.beta * ed.w * spec.g.mu(i)});
    }
  }
  return WeightedGraph(std::move(v), std::move(e));
}

DirectSumReport product_curvature_matrix_check(const ProductSpec& spec, std::string_view x,
                                               std::string_view xp) {
  const CurvatureMatrix c1 = curvature_matrix(two_ball(spec.g, x));
  const CurvatureMatrix c2 = curvature_matrix(two_ball(spec.gp, xp));
  const WeightedGraph prod = cartesian_product(spec);
  const CurvatureMatrix cp = curvature_matrix(two_ball(prod, product_id(x, xp)));

  DirectSumReport r;
  for (const auto& y : c1.ball.s1) r.s1.push_back(product_id(y, xp));
  for (const auto& y : c2.ball.s1) r.s1.push_back(product_id(x, y));

  const auto& s1 = cp.ball.s1;
  std::vector<Index> perm;
  for (const auto& id : r.s1) {
    const auto it = std::find(s1.begin(), s1.end(), id);
    if (it == s1.end()) throw ContractViolation("product neighbour " + id + " missing from S1");
    perm.push_back(static_cast<Index>(it - s1.begin()));
  }
  if (perm.size() != s1.size()) throw ContractViolation("product S1 has unexpected size");

  const Index m = static_cast<Index>(perm.size());
  r.product.resize(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) r.product(i, j) = cp.a_inf(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  r.expected = direct_sum(spec.alpha * c1.a_inf.matrix(), spec.beta * c2.a_inf.matrix());
  r.max_discrepancy = (r.product - r.expected).cwiseAbs().maxCoeff();
  return r;
}

SandwichReport eigen_sandwich_check(const SymMatrix& a1, const VectorXd& v1, const SymMatrix& a2,
                                    const VectorXd& v2, double alpha, double beta, Dimension n1,
                                    Dimension n2, double tolerance) {
  if (a1.order() != v1.size() || a2.order() != v2.size()) throw LinalgError("dimension mismatch");
  const auto perturbed = [](const SymMatrix& a, const VectorXd& v, double r) {
    return SymMatrix(a.matrix() - 2.0 * r * v * v.transpose());
  };
  SandwichReport rep;
  rep.tolerance = tolerance;
  rep.lambda1 = eig_sym(perturbed(a1, v1, n1.reciprocal())).min();
  rep.lambda2 = eig_sym(perturbed(a2, v2, n2.reciprocal())).min();

  const SymMatrix a(direct_sum(alpha * a1.matrix(), beta * a2.matrix()));
  VectorXd v(v1.size() + v2.size());
  v << std::sqrt(alpha) * v1, std::sqrt(beta) * v2;
  const double r = (n1.is_infinite() || n2.is_infinite()) ? 0.0 : 1.0 / (n1.value() + n2.value());
  rep.lambda = eig_sym(perturbed(a, v, r)).min();

  const double l1 = alpha * rep.lambda1;
  const double l2 = beta * rep.lambda2;
  rep.lower_slack = rep.lambda - std::min(l1, l2);
  rep.upper_slack = std::max(l1, l2) - rep.lambda;
  return rep;
}

MonotoneFunction scaled_curvature(CurvatureFunction cf, double alpha) {
  auto p = std::make_shared<const CurvatureFunction>(std::move(cf));
  const double limit = alpha * p->k_inf();
  return {[p, alpha](double n) { return alpha * (*p)(Dimension::finite(n)); }, limit};
}

double star_product(const MonotoneFunction& f1, const MonotoneFunction& f2, Dimension t) {
  if (t.is_infinite()) return std::min(f1.limit, f2.limit);

  const double tv = t.value();
  MonotoneLog l1(f1, "f1");
  MonotoneLog l2(f2, "f2");
  const auto g = [&](double s) { return l1(s) - l2(tv - s); };

  double lo = 0.5 * tv;
  double glo = g(lo);
  if (std::abs(glo) <= kStarTolerance) return l1(lo);
  double hi = lo;
  double ghi = glo;
  if (glo < 0.0) {
    for (int k = 2; ghi < 0.0; ++k) {
      if (k > kMaxHalvings) throw ContractViolation("star product root not bracketed at t=" + to_string(t));
      hi = tv - std::ldexp(tv, -k);
      ghi = g(hi);
    }
  } else {
    for (int k = 2; glo > 0.0; ++k) {
      if (k > kMaxHalvings) throw ContractViolation("star product root not bracketed at t=" + to_string(t));
      lo = std::ldexp(tv, -k);
      glo = g(lo);
    }
  }

  for (;;) {
    if (std::abs(glo) <= kStarTolerance) return l1(lo);
    if (std::abs(ghi) <= kStarTolerance) return l1(hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      // No representable point left between lo and hi.
      return 0.5 * (l1(mid) + l2(tv - mid));
    }
    const double gm = g(mid);
    if (gm < 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
}

StarProductReport star_product_check(const ProductSpec& spec, std::string_view x, std::string_view xp,
                                     const std::vector<Dimension>& grid) {
  const MonotoneFunction f1 = scaled_curvature(curvature_function(spec.g, x), spec.alpha);
  const MonotoneFunction f2 = scaled_curvature(curvature_function(spec.gp, xp), spec.beta);
  const CurvatureFunction kp = curvature_function(cartesian_product(spec), product_id(x, xp));

  StarProductReport r;
  r.grid = grid;
  for (const auto& n : grid) {
    r.product.push_back(kp(n));
    r.star.push_back(star_product(f1, f2, n));
    r.max_deviation = std::max(r.max_deviation, std::abs(r.product.back() - r.star.back()));
  }
  return r;
}

}  // namespace becurv
