#pragma once

#include "becurv/bakry_emery.hpp"
#include "becurv/linalg.hpp"
#include "becurv/tolerances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace becurv {

/// N -> K_{G,x}(N) = lambda_min(A_N(x)) with the spectrum of A_inf cached.
class CurvatureFunction {
 public:
  explicit CurvatureFunction(CurvatureMatrix cm, Tolerances tol = {});

  const CurvatureMatrix& matrix() const { return cm_; }
  const Spectrum& spectrum_inf() const { return spec_inf_; }
  const Tolerances& tolerances() const { return tol_; }

  double k_inf() const { return spec_inf_.min(); }
  /// Closed-form K0_inf(x).
  double k0_inf() const { return k0_inf_; }
  /// d_x / mu_x.
  double degree_ratio() const { return cm_.ball.degree_ratio; }
  /// Spectrum of A_N.
  Spectrum spectrum(Dimension n) const;
  double operator()(Dimension n) const;

  /// Rayleigh quotient v0^T A_inf v0 / v0^T v0.
  double rayleigh() const;
  /// ||A_inf v0 - rayleigh() v0|| <= eigvec * ||v0||.
  bool v0_is_eigenvector() const;
  /// Projection of v0 onto the eps_mult-clustered minimal eigenspace is
  /// at most eigvec * ||v0|| in norm.
  bool v0_perp_emin() const;
  /// Component of v0 orthogonal to the minimal eigenspace is at most
  /// eigvec * ||v0|| in norm.
  bool v0_in_emin() const;
  /// eps_mult * max(1, ||A_inf||_F).
  double multiplicity_gap() const;

 private:
  CurvatureMatrix cm_;
  Tolerances tol_;
  Spectrum spec_inf_;
  double k0_inf_ = 0.0;
};

CurvatureFunction curvature_function(const WeightedGraph& g, std::string_view x, Tolerances tol = {});

double curvature(const CurvatureFunction& cf, Dimension n);

/// N0 = 2 v0^T A_inf^-1 v0 when K(inf) > tol.positive.
std::optional<double> n_zero(const CurvatureFunction& cf);

/// The threshold N1 after which K is constant, from the spectrum of A_inf.
/// v0 an eigenvector with eigenvalue lambda: 2 v0^T v0 / (lambda - lambda_1)
/// when lambda - lambda_1 exceeds the multiplicity gap, else infinity.
/// v0 perpendicular to E_min: the root of the secular equation at lambda_min,
///   N1 = 2 sum_{i outside E_min} (v0 . u_i)^2 / (lambda_i - lambda_min).
/// Otherwise infinity.
Dimension n_one(const CurvatureFunction& cf);

/// N1 located by log-scale bisection on [1e-3, 1e6] for the onset of
/// K(N) >= K(inf) - eps_mult * max(1, ||A_inf||_F), to relative width 1e-9.
/// Infinity when the predicate fails at 1e6.
Dimension n_one_bisection(const CurvatureFunction& cf);

/// K(N) >= K0_inf - (2/N) d_x/mu_x - tol.equality.
bool is_curvature_sharp(const CurvatureFunction& cf, Dimension n);

struct CurvatureProfile {
  double k_inf = 0.0;
  double k0_inf = 0.0;
  std::optional<double> n0;
  Dimension n1 = Dimension::infinity();
  /// Largest N with N-curvature sharpness; absent if never sharp.
  std::optional<Dimension> sharp_up_to;
  bool v0_is_eigvec = false;
  bool v0_perp_emin = false;
  bool v0_in_emin = false;
  /// Failed cross-checks between the spectral data and sampled curvature.
  std::vector<std::string> violations;
};

CurvatureProfile spectral_characterization(const CurvatureFunction& cf);

struct CurvatureSample {
  Dimension n;
  double k = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct BoundsReport {
  std::vector<CurvatureSample> samples;
  double min_lower_slack = 0.0;
  double min_upper_slack = 0.0;
  /// Smallest non-smallest eigenvalue of any A_N; only set when K(inf) > 0.
  std::optional<double> min_nonsmallest_eigenvalue;
  std::vector<std::string> violations;
  /// Strict monotonicity / concavity below N1 that could not be certified:
  /// increments under strict_margin * (b - a), or chord residuals under
  /// strict_margin * (c - a) for consecutive samples a < b < c. Far beyond
  /// the curvature scale these fall under rounding, so they are kept apart
  /// from the violations.
  std::vector<std::string> strictness;

  bool ok() const { return violations.empty(); }
};

/// Bounds, positivity of non-smallest eigenvalues, monotonicity, concavity,
/// constancy beyond N1 and the N0 sign change on the given grid. Never throws
/// for a nonempty grid.
BoundsReport check_bounds(const CurvatureFunction& cf, std::vector<Dimension> grid);

}  // namespace becurv
