#include "becurv/linalg.hpp"

#include "becurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace becurv {

namespace {

constexpr int kMaxSweeps = 100;

bool all_finite(const Eigen::MatrixXd& a) { return a.allFinite(); }

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) s += a(i, j) * a(i, j);
  }
  return std::sqrt(2.0 * s);
}

// One Jacobi rotation zeroing a(p, q); accumulates into v.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 0.0;
  if (std::abs(tau) > 1e150) {
    t = 0.5 / tau;
  } else {
    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& a, double symmetry_tol) {
  if (a.rows() != a.cols()) throw LinalgError("symmetric matrix must be square");
  if (!all_finite(a)) throw LinalgError("matrix has non-finite entries");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > symmetry_tol * std::max(1.0, std::abs(a(i, j)))) {
        throw LinalgError("matrix is not symmetric");
      }
    }
  }
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index order) {
  return SymMatrix(Eigen::MatrixXd::Identity(order, order));
}

double SymMatrix::scale() const { return std::max(1.0, a_.norm()); }

Eigen::Index Spectrum::min_multiplicity(double eps) const {
  Eigen::Index k = 1;
  while (k < values.size() && values(k) - values(0) <= eps) ++k;
  return k;
}

Eigen::MatrixXd Spectrum::min_eigenspace(double eps) const {
  return vectors.leftCols(min_multiplicity(eps));
}

Spectrum eig_sym(const SymMatrix& sym) {
  Eigen::MatrixXd a = sym.matrix();
  if (!all_finite(a)) throw LinalgError("matrix has non-finite entries");
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double norm = a.norm();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off == 0.0 || off <= 1e-18 * norm) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  Spectrum out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    Eigen::VectorXd col = v.col(src);
    col.normalize();
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0.0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

bool is_psd(const SymMatrix& a, double tol) { return eig_sym(a).min() >= -tol; }

bool is_psd_cholesky(const SymMatrix& sym, double tol) {
  Eigen::MatrixXd a = sym.matrix();
  const Eigen::Index n = a.rows();
  a.diagonal().array() += tol;
  // Rounding allowance for pivots that are zero in exact arithmetic.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, a.norm()) *
                       static_cast<double>(std::max<Eigen::Index>(n, 1));

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    a.diagonal().tail(n - k).maxCoeff(&piv);
    piv += k;
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      a.col(k).swap(a.col(piv));
    }
    const double d = a(k, k);
    if (d < -slack) return false;
    if (d <= slack) {
      // Largest remaining diagonal is ~0: a PSD remainder must vanish.
      return a.bottomRightCorner(n - k, n - k).cwiseAbs().maxCoeff() <= 8.0 * slack;
    }
    const double l = std::sqrt(d);
    a.col(k).tail(n - k - 1) /= l;
    a.row(k).tail(n - k - 1) = a.col(k).tail(n - k - 1).transpose();
    a(k, k) = l;
    a.bottomRightCorner(n - k - 1, n - k - 1).noalias() -=
        a.col(k).tail(n - k - 1) * a.col(k).tail(n - k - 1).transpose();
  }
  return true;
}

Eigen::VectorXd solve_spd(const SymMatrix& a, const Eigen::VectorXd& b) {
  if (b.size() != a.order()) throw LinalgError("dimension mismatch in solve_spd");
  const Spectrum s = eig_sym(a);
  if (!(s.min() > 1e-12 * a.frobenius_norm())) throw LinalgError("singular system");
  const Eigen::LLT<Eigen::MatrixXd> llt(a.matrix());
  if (llt.info() != Eigen::Success) throw LinalgError("singular system");
  Eigen::VectorXd x = llt.solve(b);
  x += llt.solve(b - a.matrix() * x);
  return x;
}

Eigen::MatrixXd direct_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace becurv
