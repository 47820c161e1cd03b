#pragma once

namespace becurv {

// Every numerical threshold used by the engine. Relative tolerances are
// scaled by max(1, ||A||_F) of the matrix they refer to.
struct Tolerances {
  // Accepted asymmetry |a_ij - a_ji| <= symmetry * max(1, |a_ij|).
  double symmetry = 1e-12;
  // Two eigenvalues are "equal" iff they differ by at most eps_mult * max(1, ||A||_F).
  double eps_mult = 1e-8;
  // Equality slack for curvature sharpness, the two-sided bounds and shape checks.
  double equality = 1e-8;
  // v0 eigenvector / perpendicularity tests, relative to ||v0||.
  double eigvec = 1e-8;
  // Maximum entrywise discrepancy between the independent Q / A constructions.
  double decomposition = 1e-9;
  // Positive-semidefiniteness slack inside the feasibility oracle.
  double oracle_psd = 1e-10;
  // Final bracket width of the oracle bisection on K.
  double oracle_width = 1e-9;
  // Margin (per unit of grid spacing) for strict monotonicity below N1.
  double strict_margin = 1e-10;
  // Threshold above which K(inf) counts as positive (N0 exists).
  double positive = 1e-8;
};

}  // namespace becurv
