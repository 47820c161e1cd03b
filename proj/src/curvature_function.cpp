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
using Eigen::VectorXd;

constexpr double kBisectLo = 1e-3;
constexpr double kBisectHi = 1e6;
constexpr double kBisectWidth = 1e-9;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

std::string at(Dimension n) { return "N=" + to_string(n); }

// Internal sampling grid for the sharpness cross-checks.
std::vector<Dimension> probe_grid(const Dimension& n1) {
  std::vector<Dimension> grid;
  for (int k = 0; k <= 24; ++k) grid.push_back(Dimension::finite(std::pow(10.0, -2.0 + 5.0 * k / 24.0)));
  if (!n1.is_infinite()) grid.push_back(n1);
  grid.push_back(Dimension::infinity());
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace

CurvatureFunction::CurvatureFunction(CurvatureMatrix cm, Tolerances tol)
    : cm_(std::move(cm)), tol_(tol), spec_inf_(eig_sym(cm_.a_inf)), k0_inf_(k0_infinity(cm_.ball)) {}

Spectrum CurvatureFunction::spectrum(Dimension n) const {
  if (n.is_infinite()) return spec_inf_;
  return eig_sym(a_n(cm_, n));
}

double CurvatureFunction::operator()(Dimension n) const { return spectrum(n).min(); }

double CurvatureFunction::rayleigh() const {
  const VectorXd& v = cm_.v0;
  return v.dot(cm_.a_inf.matrix() * v) / v.squaredNorm();
}

bool CurvatureFunction::v0_is_eigenvector() const {
  const VectorXd& v = cm_.v0;
  const VectorXd r = cm_.a_inf.matrix() * v - rayleigh() * v;
  return r.norm() <= tol_.eigvec * v.norm();
}

double CurvatureFunction::multiplicity_gap() const { return tol_.eps_mult * cm_.a_inf.scale(); }

bool CurvatureFunction::v0_perp_emin() const {
  const MatrixXd e = spec_inf_.min_eigenspace(multiplicity_gap());
  return (e.transpose() * cm_.v0).norm() <= tol_.eigvec * cm_.v0.norm();
}

bool CurvatureFunction::v0_in_emin() const {
  const MatrixXd e = spec_inf_.min_eigenspace(multiplicity_gap());
  const VectorXd rest = cm_.v0 - e * (e.transpose() * cm_.v0);
  return rest.norm() <= tol_.eigvec * cm_.v0.norm();
}

CurvatureFunction curvature_function(const WeightedGraph& g, std::string_view x, Tolerances tol) {
  return CurvatureFunction(curvature_matrix(two_ball(g, x)), tol);
}

double curvature(const CurvatureFunction& cf, Dimension n) { return cf(n); }

std::optional<double> n_zero(const CurvatureFunction& cf) {
  if (!(cf.k_inf() > cf.tolerances().positive)) return std::nullopt;
  const VectorXd& v = cf.matrix().v0;
  return 2.0 * v.dot(solve_spd(cf.matrix().a_inf, v));
}

Dimension n_one(const CurvatureFunction& cf) {
  const CurvatureMatrix& cm = cf.matrix();
  const VectorXd& v = cm.v0;
  const double gap = cf.multiplicity_gap();
  const Index m = v.size();

  if (cf.v0_is_eigenvector()) {
    if (m == 1) return Dimension::infinity();
    // Push v0's eigenvalue above the rest of the spectrum; what remains at
    // the bottom is lambda_1 on the complement of v0.
    const double lambda = cf.rayleigh();
    const double shift = 2.0 * cm.a_inf.frobenius_norm() + std::abs(lambda) + 1.0;
    const VectorXd u = v.normalized();
    const SymMatrix deflated(cm.a_inf.matrix() + shift * u * u.transpose());
    const double lambda1 = eig_sym(deflated).min();
    if (lambda - lambda1 <= gap) return Dimension::infinity();
    return Dimension::finite(2.0 * v.squaredNorm() / (lambda - lambda1));
  }

  if (cf.v0_perp_emin()) {
    const Spectrum& s = cf.spectrum_inf();
    const Index k = s.min_multiplicity(gap);
    double sum = 0.0;
    for (Index i = k; i < m; ++i) {
      const double c = v.dot(s.vectors.col(i));
      sum += c * c / (s.values(i) - s.min());
    }
    return Dimension::finite(2.0 * sum);
  }
  return Dimension::infinity();
}

Dimension n_one_bisection(const CurvatureFunction& cf) {
  const double target = cf.k_inf() - cf.multiplicity_gap();
  auto constant = [&](double n) { return cf(Dimension::finite(n)) >= target; };
  if (!constant(kBisectHi)) return Dimension::infinity();
  if (constant(kBisectLo)) return Dimension::finite(kBisectLo);
  double lo = std::log(kBisectLo);
  double hi = std::log(kBisectHi);
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    if (constant(std::exp(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return Dimension::finite(std::exp(hi));
}

bool is_curvature_sharp(const CurvatureFunction& cf, Dimension n) {
  const double bound = cf.k0_inf() - 2.0 * n.reciprocal() * cf.degree_ratio();
  return cf(n) >= bound - cf.tolerances().equality;
}

CurvatureProfile spectral_characterization(const CurvatureFunction& cf) {
  const Tolerances& tol = cf.tolerances();
  CurvatureProfile p;
  p.k_inf = cf.k_inf();
  p.k0_inf = cf.k0_inf();
  p.n0 = n_zero(cf);
  p.n1 = n_one(cf);
  p.v0_is_eigvec = cf.v0_is_eigenvector();
  p.v0_perp_emin = cf.v0_perp_emin();
  p.v0_in_emin = cf.v0_in_emin();
  if (p.v0_is_eigvec) p.sharp_up_to = p.n1;

  auto& bad = p.violations;
  const bool sharp_at_n1 = is_curvature_sharp(cf, p.n1);
  const bool sharp_at_inf = is_curvature_sharp(cf, Dimension::infinity());

  // Eigenvector iff sharp at the threshold.
  if (p.v0_is_eigvec != sharp_at_n1) {
    bad.push_back("v0 eigenvector=" + std::string(p.v0_is_eigvec ? "true" : "false") +
                  " but sharpness at " + at(p.n1) + " is " + (sharp_at_n1 ? "true" : "false"));
  }
  // Minimal eigenvector iff sharp at infinity.
  if (p.v0_in_emin != sharp_at_inf) {
    bad.push_back("v0 in E_min=" + std::string(p.v0_in_emin ? "true" : "false") +
                  " but infinity-sharpness is " + (sharp_at_inf ? "true" : "false"));
  }
  // Perpendicular to E_min iff eventually constant.
  if (p.v0_perp_emin == p.n1.is_infinite()) {
    bad.push_back("v0 perpendicular to E_min=" + std::string(p.v0_perp_emin ? "true" : "false") +
                  " but N1=" + to_string(p.n1));
  }
  if (!p.n1.is_infinite()) {
    for (double f : {1.0 + 1e-6, 2.0, 10.0}) {
      const Dimension n = Dimension::finite(p.n1.value() * f);
      const double k = cf(n);
      if (std::abs(k - p.k_inf) > tol.equality) {
        bad.push_back("K not constant beyond N1 at " + at(n) + ": " + fmt(k) + " vs " + fmt(p.k_inf));
      }
    }
  }

  // Persistence: sharp at N implies sharp at every smaller sampled N, and
  // sharp exactly up to sharp_up_to.
  const std::vector<Dimension> grid = probe_grid(p.n1);
  std::vector<char> sharp;
  sharp.reserve(grid.size());
  for (const auto& n : grid) sharp.push_back(is_curvature_sharp(cf, n) ? 1 : 0);
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (!sharp[i]) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (!sharp[j]) {
        bad.push_back("sharp at " + at(grid[i]) + " but not at " + at(grid[j]));
        break;
      }
    }
    break;
  }
  if (p.sharp_up_to) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(*p.sharp_up_to < grid[i]) && !sharp[i]) {
        bad.push_back("not sharp at " + at(grid[i]) + " below sharp_up_to=" + to_string(*p.sharp_up_to));
      }
    }
  }

  if (p.n0) {
    const double k = cf(Dimension::finite(*p.n0));
    if (std::abs(k) > tol.equality) bad.push_back("K(N0)=" + fmt(k) + " is not zero");
  }
  return p;
}

BoundsReport check_bounds(const CurvatureFunction& cf, std::vector<Dimension> grid) {
  const Tolerances& tol = cf.tolerances();
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  BoundsReport r;
  if (grid.empty()) {
    r.violations.push_back("empty grid");
    return r;
  }
  const double d = cf.degree_ratio();
  const bool positive = cf.k_inf() > tol.positive;
  r.min_lower_slack = std::numeric_limits<double>::infinity();
  r.min_upper_slack = std::numeric_limits<double>::infinity();

  for (const auto& n : grid) {
    const Spectrum s = cf.spectrum(n);
    CurvatureSample sample{n, s.min(), cf.k_inf() - 2.0 * n.reciprocal() * d,
                           cf.k0_inf() - 2.0 * n.reciprocal() * d};
    const double lower_slack = sample.k - sample.lower;
    const double upper_slack = sample.upper - sample.k;
    r.min_lower_slack = std::min(r.min_lower_slack, lower_slack);
    r.min_upper_slack = std::min(r.min_upper_slack, upper_slack);
    if (lower_slack < -tol.equality) {
      r.violations.push_back("lower bound fails at " + at(n) + ": K=" + fmt(sample.k) +
                             " < " + fmt(sample.lower));
    }
    if (upper_slack < -tol.equality) {
      r.violations.push_back("upper bound fails at " + at(n) + ": K=" + fmt(sample.k) +
                             " > " + fmt(sample.upper));
    }
    if (positive && s.values.size() > 1) {
      const double second = s.values(1);
      r.min_nonsmallest_eigenvalue =
          std::min(r.min_nonsmallest_eigenvalue.value_or(second), second);
      if (!(second > tol.strict_margin)) {
        r.violations.push_back("non-smallest eigenvalue " + fmt(second) + " not positive at " + at(n));
      }
    }
    r.samples.push_back(sample);
  }

  const Dimension n1 = n_one(cf);
  const auto& smp = r.samples;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double inc = smp[i + 1].k - smp[i].k;
    if (inc < -tol.equality) {
      r.violations.push_back("K decreases between " + at(smp[i].n) + " and " + at(smp[i + 1].n));
    }
    if (!smp[i + 1].n.is_infinite() && smp[i + 1].n < n1) {
      const double h = smp[i + 1].n.value() - smp[i].n.value();
      if (!(inc > tol.strict_margin * h)) {
        r.strictness.push_back("K not strictly increasing between " + at(smp[i].n) + " and " +
                               at(smp[i + 1].n));
      }
    }
  }
  for (std::size_t i = 0; i + 2 < smp.size(); ++i) {
    if (smp[i + 2].n.is_infinite()) break;
    const double a = smp[i].n.value();
    const double b = smp[i + 1].n.value();
    const double c = smp[i + 2].n.value();
    const double chord = smp[i].k + (smp[i + 2].k - smp[i].k) * (b - a) / (c - a);
    const double residual = smp[i + 1].k - chord;
    if (residual < -tol.equality) {
      r.violations.push_back("K not concave around " + at(smp[i + 1].n));
    }
    if (smp[i + 2].n < n1 && !(residual > tol.strict_margin * (c - a))) {
      r.strictness.push_back("K not strictly concave around " + at(smp[i + 1].n) + " (chord residual " + fmt(residual) + ")");
    }
  }
  if (!n1.is_infinite()) {
    for (const auto& s : smp) {
      if (!s.n.is_infinite() && s.n.value() < n1.value() + 1e-6) continue;
      if (std::abs(s.k - cf.k_inf()) > tol.equality) {
        r.violations.push_back("K not constant beyond N1=" + to_string(n1) + " at " + at(s.n));
      }
    }
  }
  if (const auto n0 = n_zero(cf)) {
    const double k = cf(Dimension::finite(*n0));
    if (std::abs(k) > tol.equality) r.violations.push_back("K(N0)=" + fmt(k) + " is not zero");
    for (const auto& s : smp) {
      if (s.n.is_infinite()) continue;
      if (s.n.value() < *n0 && s.k > tol.equality) {
        r.violations.push_back("K positive below N0 at " + at(s.n));
      }
      if (s.n.value() > *n0 && s.k < -tol.equality) {
        r.violations.push_back("K negative above N0 at " + at(s.n));
      }
    }
  }
  return r;
}

}  // namespace becurv
