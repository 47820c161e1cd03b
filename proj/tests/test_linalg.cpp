#include <doctest.h>

#include "becurv/errors.hpp"
#include "becurv/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace becurv;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  }
  return a;
}

void check_spectrum_invariants(const SymMatrix& a, const Spectrum& s) {
  const double scale = a.scale();
  const auto n = a.order();
  for (Eigen::Index i = 0; i + 1 < n; ++i) CHECK(s.values(i) <= s.values(i + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd r = a.matrix() * s.vectors.col(i) - s.values(i) * s.vectors.col(i);
    CHECK(r.norm() <= 1e-10 * scale);
  }
  const MatrixXd gram = s.vectors.transpose() * s.vectors;
  CHECK((gram - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
}

// Roots of the characteristic polynomial of a symmetric 3x3 matrix by the
// trigonometric formula, ascending.
std::array<double, 3> cubic_roots(const MatrixXd& a) {
  const double q = a.trace() / 3.0;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const MatrixXd b = (a - q * MatrixXd::Identity(3, 3)) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return {e3, e2, e1};
}

}  // namespace

TEST_CASE("SymMatrix enforces symmetry") {
  MatrixXd a(2, 2);
  a << 1.0, 2.0, 2.0 + 1e-13, 1.0;
  const SymMatrix s(a);
  CHECK(s(0, 1) == s(1, 0));
  a(1, 0) = 2.1;
  CHECK_THROWS_AS(SymMatrix{a}, LinalgError);
  CHECK_THROWS_AS(SymMatrix{MatrixXd(2, 3)}, LinalgError);
}

TEST_CASE("eig_sym examples") {
  const Spectrum id = eig_sym(SymMatrix::identity(3));
  CHECK(id.values.isApprox(VectorXd::Ones(3)));

  // Q3: A_3 = 2 Id - (2/3) J.
  const SymMatrix a3(2.0 * MatrixXd::Identity(3, 3) - (2.0 / 3.0) * MatrixXd::Ones(3, 3));
  const Spectrum s3 = eig_sym(a3);
  CHECK(s3.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(s3.values(0)) <= 1e-12);
  CHECK(s3.values(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s3.values(2) == doctest::Approx(2.0).epsilon(1e-12));
  check_spectrum_invariants(a3, s3);

  MatrixXd b(2, 2);
  b << 1.5, 1.0, 1.0, 1.5;
  const Spectrum s2 = eig_sym(SymMatrix(b));
  CHECK(s2.values(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s2.values(1) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("eig_sym rejects non-finite input") {
  MatrixXd a = MatrixXd::Identity(2, 2);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(SymMatrix{a}, LinalgError);
}

TEST_CASE("eig_sym is deterministic") {
  std::mt19937_64 rng(5);
  const SymMatrix a(random_symmetric(rng, 12));
  const Spectrum s = eig_sym(a);
  const Spectrum t = eig_sym(a);
  CHECK((s.values - t.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s.vectors - t.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eig_sym reconstruction on random matrices up to order 50") {
  std::mt19937_64 rng(17);
  for (int n : {1, 2, 3, 5, 8, 13, 20, 35, 50}) {
    const SymMatrix a(random_symmetric(rng, n));
    const Spectrum s = eig_sym(a);
    const MatrixXd r = s.vectors * s.values.asDiagonal() * s.vectors.transpose();
    CHECK((r - a.matrix()).norm() <= 1e-9 * a.scale());
    check_spectrum_invariants(a, s);
  }
}

TEST_CASE("eig_sym matches closed-form roots for 2x2 and 3x3") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const MatrixXd a2 = random_symmetric(rng, 2);
    const double m = 0.5 * (a2(0, 0) + a2(1, 1));
    const double r = std::hypot(0.5 * (a2(0, 0) - a2(1, 1)), a2(0, 1));
    const Spectrum s2 = eig_sym(SymMatrix(a2));
    CHECK(std::abs(s2.values(0) - (m - r)) <= 1e-9);
    CHECK(std::abs(s2.values(1) - (m + r)) <= 1e-9);

    const MatrixXd a3 = random_symmetric(rng, 3);
    const auto roots = cubic_roots(a3);
    const Spectrum s3 = eig_sym(SymMatrix(a3));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(s3.values(i) - roots[static_cast<std::size_t>(i)]) <= 1e-9);
  }
}

TEST_CASE("minimal eigenspace clustering") {
  const SymMatrix a(VectorXd::Map(std::array<double, 4>{1.0, 1.0 + 1e-10, 2.0, 3.0}.data(), 4)
                        .asDiagonal()
                        .toDenseMatrix());
  const Spectrum s = eig_sym(a);
  CHECK(s.min_multiplicity(1e-8) == 2);
  CHECK(s.min_eigenspace(1e-8).cols() == 2);
  CHECK(s.min_multiplicity(1e-12) == 1);
}

TEST_CASE("is_psd examples") {
  CHECK(is_psd(SymMatrix(MatrixXd::Zero(3, 3)), 0.0));
  CHECK(is_psd_cholesky(SymMatrix(MatrixXd::Zero(3, 3)), 0.0));
  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1e-6;
  CHECK_FALSE(is_psd(SymMatrix(d), 1e-9));
  CHECK_FALSE(is_psd_cholesky(SymMatrix(d), 1e-9));
  const SymMatrix half(0.5 * MatrixXd::Identity(3, 3));
  CHECK(is_psd(half, 0.0));
  CHECK(is_psd_cholesky(half, 0.0));
  // Singular PSD: rank one, zero eigenvalues only up to rounding.
  const SymMatrix j(MatrixXd::Ones(4, 4));
  CHECK(is_psd(j, 1e-12));
  CHECK(is_psd_cholesky(j, 1e-12));
}

TEST_CASE("is_psd and the Cholesky test agree on random matrices") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> order(1, 8);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  int agree = 0;
  int positive = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = order(rng);
    const MatrixXd b = random_symmetric(rng, n);
    MatrixXd a = b * b.transpose() / static_cast<double>(n);
    // Rank-deficient cases every few draws.
    if (t % 4 == 0 && n > 1) {
      const VectorXd v = b.col(0);
      a = v * v.transpose();
    }
    a.diagonal().array() += shift(rng) * 0.3;
    const SymMatrix s(a);
    const bool e = is_psd(s, 1e-10);
    const bool c = is_psd_cholesky(s, 1e-10);
    if (e == c) ++agree;
    if (e) ++positive;
  }
  CHECK(agree == 1000);
  CHECK(positive > 100);
  CHECK(positive < 900);
}

TEST_CASE("solve_spd") {
  const VectorXd b = (VectorXd(3) << 1.0, 2.0, 3.0).finished();
  CHECK(solve_spd(SymMatrix::identity(3), b).isApprox(b));
  const VectorXd x = solve_spd(SymMatrix(2.0 * MatrixXd::Identity(3, 3)), VectorXd::Ones(3));
  CHECK((x - VectorXd::Constant(3, 0.5)).cwiseAbs().maxCoeff() <= 1e-15);

  // K33 curvature matrix: 8/3 on the diagonal, -1/3 elsewhere; row sums 2.
  const MatrixXd k = (3.0 * MatrixXd::Identity(3, 3) - MatrixXd::Ones(3, 3) / 3.0);
  const SymMatrix ks(k);
  const VectorXd y = solve_spd(ks, VectorXd::Ones(3));
  CHECK((k * y - VectorXd::Ones(3)).norm() <= 1e-9);
  CHECK((y - VectorXd::Constant(3, 0.5)).cwiseAbs().maxCoeff() <= 1e-14);

  CHECK_THROWS_AS(solve_spd(SymMatrix(MatrixXd::Ones(2, 2)), VectorXd::Ones(2)), LinalgError);
  CHECK_THROWS_AS(solve_spd(SymMatrix::identity(2), VectorXd::Ones(3)), LinalgError);
}

TEST_CASE("solve_spd residual on random positive definite systems") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const MatrixXd b = random_symmetric(rng, 6);
    const SymMatrix a(b * b.transpose() + 0.1 * MatrixXd::Identity(6, 6));
    const VectorXd rhs = random_symmetric(rng, 6).col(0);
    const VectorXd x = solve_spd(a, rhs);
    CHECK((a.matrix() * x - rhs).norm() <= 1e-9 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("direct_sum") {
  const MatrixXd s = direct_sum(MatrixXd::Constant(1, 1, 2.0), MatrixXd::Constant(2, 2, 3.0));
  CHECK(s.rows() == 3);
  CHECK(s(0, 0) == 2.0);
  CHECK(s(0, 1) == 0.0);
  CHECK(s(2, 1) == 3.0);
}
