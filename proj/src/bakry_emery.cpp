#include "becurv/bakry_emery.hpp"

#include "becurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace becurv {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index ix(std::size_t i) { return static_cast<Index>(i); }

double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// Laplacian matrix (off-diagonal w_ij, diagonal -sum_j w_ij) of symmetric weights.
MatrixXd laplacian(const MatrixXd& weights) {
  MatrixXd l = weights;
  l.diagonal().setZero();
  for (Index i = 0; i < l.rows(); ++i) l(i, i) = -l.row(i).sum();
  return l;
}

// Weights of Delta_{S1(x)}: p_xyi p_yiyj / 2 + p_xyj p_yjyi / 2.
MatrixXd s1_weights(const LocalBall& b) {
  const std::size_t m = b.m();
  MatrixXd w = MatrixXd::Zero(ix(m), ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      w(ix(i), ix(j)) =
          0.5 * b.pxy(i) * b.p(b.y(i), b.y(j)) + 0.5 * b.pxy(j) * b.p(b.y(j), b.y(i));
    }
  }
  return w;
}

// Weights of Delta_{S1'(x)}: sum_z p_xyi p_yiz p_xyj p_yjz / p2_z.
MatrixXd s1_prime_weights(const LocalBall& b) {
  const std::size_t m = b.m();
  MatrixXd w = MatrixXd::Zero(ix(m), ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < b.n(); ++k) {
        s += b.pxy(i) * b.p(b.y(i), b.z(k)) * b.pxy(j) * b.p(b.y(j), b.z(k)) / b.p2(ix(k));
      }
      w(ix(i), ix(j)) = s;
    }
  }
  return w;
}

// sum_{y'} (p_xyi p_yiy' - p_xy' p_y'yi).
double s1_flow(const LocalBall& b, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < b.m(); ++k) {
    s += b.pxy(i) * b.p(b.y(i), b.y(k)) - b.pxy(k) * b.p(b.y(k), b.y(i));
  }
  return s;
}

VectorXd v0_of(const LocalBall& b) {
  VectorXd v(ix(b.m()));
  for (std::size_t i = 0; i < b.m(); ++i) v(ix(i)) = std::sqrt(b.pxy(i));
  return v;
}

}  // namespace

Dimension Dimension::finite(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    std::ostringstream s;
    s << "dimension must be a positive finite number or inf, got " << n;
    throw DomainError(s.str());
  }
  Dimension d;
  d.infinite_ = false;
  d.value_ = n;
  return d;
}

bool operator<(const Dimension& a, const Dimension& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value() < b.value();
}

std::string to_string(const Dimension& n) {
  if (n.is_infinite()) return "inf";
  std::ostringstream s;
  s.precision(17);
  s << n.value();
  return s.str();
}

GammaMatrices gamma_matrices(const LocalBall& b) {
  const std::size_t m = b.m();
  const std::size_t n = b.n();
  const double d = b.degree_ratio;
  GammaMatrices gm;
  gm.delta_s1.resize(ix(m));
  for (std::size_t i = 0; i < m; ++i) gm.delta_s1(ix(i)) = b.pxy(i);
  gm.gamma_s1 = 0.5 * gm.delta_s1.asDiagonal().toDenseMatrix();

  gm.gamma2_s1s1 = MatrixXd::Zero(ix(m), ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double pi = b.pxy(i);
    const std::size_t yi = b.y(i);
    double diag = 2.0 * pi * pi + 3.0 * pi * b.p(yi, 0) - d * pi + 3.0 * pi * b.out_rate(i);
    for (std::size_t k = 0; k < m; ++k) {
      diag += 3.0 * pi * b.p(yi, b.y(k)) + b.pxy(k) * b.p(b.y(k), yi);
    }
    gm.gamma2_s1s1(ix(i), ix(i)) = diag / 4.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double pj = b.pxy(j);
      gm.gamma2_s1s1(ix(i), ix(j)) =
          (2.0 * pi * pj - 2.0 * pi * b.p(yi, b.y(j)) - 2.0 * pj * b.p(b.y(j), yi)) / 4.0;
    }
  }

  gm.gamma2_s1s2 = MatrixXd::Zero(ix(m), ix(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      gm.gamma2_s1s2(ix(i), ix(k)) = -2.0 * b.pxy(i) * b.p(b.y(i), b.z(k)) / 4.0;
    }
  }
  gm.gamma2_s2s2 = MatrixXd::Zero(ix(n), ix(n));
  for (std::size_t k = 0; k < n; ++k) gm.gamma2_s2s2(ix(k), ix(k)) = b.p2(ix(k)) / 4.0;
  return gm;
}

MatrixXd q_direct(const LocalBall& b) {
  const std::size_t m = b.m();
  const double d = b.degree_ratio;
  MatrixXd q = MatrixXd::Zero(ix(m), ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double pi = b.pxy(i);
    const std::size_t yi = b.y(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double pj = b.pxy(j);
      const std::size_t yj = b.y(j);
      double fold = 0.0;
      for (std::size_t k = 0; k < b.n(); ++k) {
        fold += pi * b.p(yi, b.z(k)) * pj * b.p(yj, b.z(k)) / b.p2(ix(k));
      }
      double v = 0.0;
      if (i == j) {
        v = 0.5 * pi * pi + 0.75 * pi * b.p(yi, 0) - 0.25 * d * pi + 0.75 * pi * b.out_rate(i);
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += 3.0 * pi * b.p(yi, b.y(k)) + b.pxy(k) * b.p(b.y(k), yi);
        v += 0.25 * s;
      } else {
        v = 0.5 * pi * pj - 0.5 * pi * b.p(yi, yj) - 0.5 * pj * b.p(yj, yi);
      }
      q(ix(i), ix(j)) = v - fold;
    }
  }
  return q;
}

MatrixXd q_schur(const GammaMatrices& gm) {
  if (gm.gamma2_s2s2.rows() == 0) return gm.gamma2_s1s1;
  const Eigen::LLT<MatrixXd> llt(gm.gamma2_s2s2);
  if (llt.info() != Eigen::Success) throw LinalgError("Gamma2 S2 block is not positive definite");
  return gm.gamma2_s1s1 - gm.gamma2_s1s2 * llt.solve(gm.gamma2_s1s2.transpose());
}

MatrixXd q_laplacian(const LocalBall& b) {
  const std::size_t m = b.m();
  const MatrixXd lap2 = laplacian(s1_weights(b)) + laplacian(s1_prime_weights(b));
  VectorXd delta(ix(m));
  VectorXd wv(ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double pi = b.pxy(i);
    delta(ix(i)) = pi;
    wv(ix(i)) = 0.75 * pi * b.in_rate(i) - 0.25 * pi * b.out_rate(i) + 0.25 * s1_flow(b, i);
  }
  MatrixXd q = -lap2 + 0.5 * delta * delta.transpose();
  q.diagonal() += -0.25 * b.degree_ratio * delta + wv;
  return q;
}

MatrixXd a_inf_laplacian(const LocalBall& b) {
  const std::size_t m = b.m();
  const MatrixXd lap2 = laplacian(s1_weights(b)) + laplacian(s1_prime_weights(b));
  const VectorXd v0 = v0_of(b);
  const VectorXd inv = v0.cwiseInverse();
  MatrixXd a = -2.0 * inv.asDiagonal() * lap2 * inv.asDiagonal();
  a += v0 * v0.transpose();
  for (std::size_t i = 0; i < m; ++i) {
    a(ix(i), ix(i)) += -0.5 * b.degree_ratio +
                       0.5 * (3.0 * b.in_rate(i) - b.out_rate(i) + s1_flow(b, i) / b.pxy(i));
  }
  return a;
}

std::optional<MatrixXd> a_inf_non_weighted(const LocalBall& b) {
  if (!b.is_non_weighted()) return std::nullopt;
  const std::size_t m = b.m();
  const std::size_t n = b.n();

  // Induced S1 adjacency and S1' weights sum_z w_yiz w_yjz / d^-_z.
  MatrixXd adj = MatrixXd::Zero(ix(m), ix(m));
  MatrixXd sp = MatrixXd::Zero(ix(m), ix(m));
  std::vector<double> in_degree(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) in_degree[k] += b.p(b.y(i), b.z(k));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      adj(ix(i), ix(j)) = b.p(b.y(i), b.y(j));
      for (std::size_t k = 0; k < n; ++k) {
        sp(ix(i), ix(j)) += b.p(b.y(i), b.z(k)) * b.p(b.y(j), b.z(k)) / in_degree[k];
      }
    }
  }
  const auto d = static_cast<double>(m);
  MatrixXd a = -2.0 * laplacian(adj) - 2.0 * laplacian(sp) + MatrixXd::Ones(ix(m), ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    double out_degree = 0.0;
    for (std::size_t k = 0; k < n; ++k) out_degree += b.p(b.y(i), b.z(k));
    a(ix(i), ix(i)) += (3.0 - d) / 2.0 - 0.5 * out_degree;
  }
  return a;
}

CurvatureMatrix curvature_matrix(const LocalBall& ball) {
  const MatrixXd q = q_direct(ball);
  const VectorXd v0 = v0_of(ball);
  const VectorXd inv = v0.cwiseInverse();
  const MatrixXd a = 2.0 * inv.asDiagonal() * q * inv.asDiagonal();
  return CurvatureMatrix{SymMatrix(q), SymMatrix(a), v0, ball};
}

SymMatrix a_n(const CurvatureMatrix& cm, Dimension n) {
  if (n.is_infinite()) return cm.a_inf;
  return SymMatrix(cm.a_inf.matrix() - 2.0 * n.reciprocal() * cm.v0 * cm.v0.transpose());
}

double k0_infinity(const LocalBall& b) {
  const double d = b.degree_ratio;
  double pxx = 0.0;
  for (std::size_t i = 0; i < b.m(); ++i) pxx += b.pxy(i) * b.in_rate(i);
  const double p2_sum = b.p2.sum();
  return 0.5 * (d + 3.0 * pxx / d - p2_sum / d);
}

double scalar_curvature(const LocalBall& b, Dimension n) {
  const std::size_t m = b.m();
  const double d = b.degree_ratio;
  double s = (1.0 - static_cast<double>(m) / 2.0) * d;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t yi = b.y(i);
    s += 1.5 * b.in_rate(i) + 1.5 * b.out_rate(i);
    for (std::size_t k = 0; k < m; ++k) {
      s += 0.5 * (3.0 * b.p(yi, b.y(k)) + b.pxy(k) * b.p(b.y(k), yi) / b.pxy(i));
    }
    for (std::size_t k = 0; k < b.n(); ++k) {
      const double pyz = b.p(yi, b.z(k));
      s -= 2.0 * b.pxy(i) * pyz * pyz / b.p2(ix(k));
    }
  }
  return s - 2.0 * n.reciprocal() * d;
}

std::optional<double> scalar_curvature_non_weighted(const LocalBall& b, Dimension n) {
  if (!b.is_non_weighted()) return std::nullopt;
  const auto d = static_cast<double>(b.m());
  double degree_sum = 0.0;
  double triangles = 0.0;
  for (std::size_t i = 0; i < b.m(); ++i) {
    degree_sum += b.row_rate(b.y(i));
    for (std::size_t j = i + 1; j < b.m(); ++j) triangles += b.p(b.y(i), b.y(j));
  }
  return d - d * d / 2.0 + 1.5 * degree_sum + triangles - 2.0 * static_cast<double>(b.n()) -
         2.0 * n.reciprocal() * d;
}

double DecompositionReport::max_discrepancy() const {
  double m = std::max({schur, laplacian_q, laplacian_a});
  if (non_weighted) m = std::max(m, *non_weighted);
  return m;
}

DecompositionReport verify_decomposition(const LocalBall& ball, double tolerance) {
  const CurvatureMatrix cm = curvature_matrix(ball);
  DecompositionReport r;
  r.tolerance = tolerance;
  r.schur = max_abs_diff(cm.q.matrix(), q_schur(gamma_matrices(ball)));
  r.laplacian_q = max_abs_diff(cm.q.matrix(), q_laplacian(ball));
  r.laplacian_a = max_abs_diff(cm.a_inf.matrix(), a_inf_laplacian(ball));
  if (const auto nw = a_inf_non_weighted(ball)) r.non_weighted = max_abs_diff(cm.a_inf.matrix(), *nw);
  return r;
}

}  // namespace becurv
