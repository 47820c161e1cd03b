#include <doctest.h>

#include "becurv/errors.hpp"
#include "becurv/grid.hpp"
#include "becurv/products.hpp"
#include "support/graphs.hpp"
#include "support/matrix_util.hpp"

#include <cmath>
#include <random>

using namespace becurv;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Dimension fin(double n) { return Dimension::finite(n); }

MonotoneFunction affine(double a, double b) {
  return {[a, b](double n) { return a - b / n; }, a};
}

MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  }
  return a;
}

double p3xp2_closed_form(double n) {
  if (n >= 10.0 / 3.0) return 0.5;
  return 9.0 / 4.0 - 3.0 / n - std::sqrt(1.0 / 16.0 - 1.0 / (2.0 * n) + 9.0 / (n * n));
}

}  // namespace

TEST_CASE("K2 x K2 is the 4-cycle") {
  const auto c4 = cartesian_product({testgraphs::k2(), testgraphs::k2(), 1.0, 1.0});
  CHECK(c4.size() == 4);
  CHECK(c4.edge_count() == 4);
  CHECK(c4.is_non_weighted());
  for (std::size_t i = 0; i < 4; ++i) CHECK(c4.degree(i) == 2.0);
  CHECK(c4.weight(*c4.index_of("a|a"), *c4.index_of("b|a")) == 1.0);
  CHECK(c4.weight(*c4.index_of("a|a"), *c4.index_of("b|b")) == 0.0);
}

TEST_CASE("weighted K2 x K2") {
  const auto g = cartesian_product({testgraphs::k2(), testgraphs::k2(), 2.0, 3.0});
  CHECK(g.weight(*g.index_of("a|a"), *g.index_of("b|a")) == 2.0);
  CHECK(g.weight(*g.index_of("a|b"), *g.index_of("b|b")) == 2.0);
  CHECK(g.weight(*g.index_of("a|a"), *g.index_of("a|b")) == 3.0);
  CHECK(g.mu(0) == 1.0);
}

TEST_CASE("P3 x P2 matches the hand-built graph") {
  const auto g = cartesian_product({testgraphs::path({"l", "m", "r"}), testgraphs::path({"a", "b"}), 1.0, 1.0});
  CHECK(dump_graph(g) == dump_graph(testgraphs::p3xp2()));
}

TEST_CASE("product transition rates and degree ratios") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    const auto g = testgraphs::random_graph(rng, 4, 0.4, true);
    const auto gp = testgraphs::random_graph(rng, 3, 0.5, true);
    const double alpha = testgraphs::rational(rng);
    const double beta = testgraphs::rational(rng);
    const auto prod = cartesian_product({g, gp, alpha, beta});
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < gp.size(); ++j) {
        const auto u = *prod.index_of(product_id(g.id(i), gp.id(j)));
        const double ratio = prod.degree(u) / prod.mu(u);
        CHECK(ratio == doctest::Approx(alpha * g.degree(i) / g.mu(i) + beta * gp.degree(j) / gp.mu(j)));
        for (const auto& nb : g.neighbors(i)) {
          const auto v = *prod.index_of(product_id(g.id(nb.index), gp.id(j)));
          CHECK(prod.transition_rate(u, v) == doctest::Approx(alpha * g.transition_rate(i, nb.index)));
        }
      }
    }
  }
}

TEST_CASE("cartesian_product rejects bad input") {
  const auto bad = testgraphs::unit_graph({"a|b", "c"}, {{"a|b", "c"}});
  CHECK_THROWS_AS(cartesian_product({bad, testgraphs::k2(), 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(cartesian_product({testgraphs::k2(), bad, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(cartesian_product({testgraphs::k2(), testgraphs::k2(), 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(cartesian_product({testgraphs::k2(), testgraphs::k2(), 1.0, -2.0}), DomainError);
}

TEST_CASE("direct-sum law") {
  SUBCASE("K2 x K2") {
    const auto r = product_curvature_matrix_check({testgraphs::k2(), testgraphs::k2(), 1.0, 1.0}, "a", "b");
    CHECK(r.max_discrepancy <= 1e-12);
    CHECK((r.product - 2.0 * MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(r.s1 == std::vector<std::string>{"b|b", "a|a"});
  }
  SUBCASE("P3 x P2") {
    const auto r = product_curvature_matrix_check(
        {testgraphs::path({"l", "m", "r"}), testgraphs::path({"a", "b"}), 1.0, 1.0}, "m", "a");
    CHECK(r.max_discrepancy <= 1e-12);
    MatrixXd reference(3, 3);
    reference << 2.0, 0.0, 0.0, 0.0, 1.5, 1.0, 0.0, 1.0, 1.5;
    CHECK(testutil::permuted_discrepancy(r.product, reference) <= 1e-10);
  }
  SUBCASE("random weighted factors") {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 30; ++t) {
      const auto g = testgraphs::random_graph(rng, 5, 0.4, true);
      const auto gp = testgraphs::random_graph(rng, 6, 0.3, true);
      for (std::size_t i = 0; i < g.size(); i += 2) {
        const auto r = product_curvature_matrix_check({g, gp, 1.0 / 3.0, 2.0 / 3.0}, g.id(i), gp.id(t % 6));
        CHECK(r.max_discrepancy <= 1e-9);
      }
    }
  }
}

TEST_CASE("eigenvalue sandwich") {
  SUBCASE("K2 pair") {
    const SymMatrix a(MatrixXd::Constant(1, 1, 2.0));
    const VectorXd v = VectorXd::Ones(1);
    const auto r = eigen_sandwich_check(a, v, a, v, 1.0, 1.0, fin(1.0), fin(1.0));
    CHECK(std::abs(r.lambda1) <= 1e-12);
    CHECK(std::abs(r.lambda2) <= 1e-12);
    CHECK(std::abs(r.lambda) <= 1e-12);
    CHECK(r.ok());
  }
  SUBCASE("Q3 pair") {
    const SymMatrix a(2.0 * MatrixXd::Identity(3, 3));
    const VectorXd v = VectorXd::Ones(3);
    const auto r = eigen_sandwich_check(a, v, a, v, 1.0, 1.0, fin(3.0), fin(3.0));
    CHECK(std::abs(r.lambda1) <= 1e-12);
    CHECK(std::abs(r.lambda) <= 1e-12);
    CHECK(r.ok());
  }
  SUBCASE("random instances") {
    std::mt19937_64 rng(79);
    std::uniform_int_distribution<int> order(3, 4);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      const int m1 = order(rng);
      const int m2 = order(rng);
      const SymMatrix a1(random_symmetric(rng, m1));
      const SymMatrix a2(random_symmetric(rng, m2));
      VectorXd v1(m1), v2(m2);
      for (int i = 0; i < m1; ++i) v1(i) = g(rng);
      for (int i = 0; i < m2; ++i) v2(i) = g(rng);
      const Dimension n1 = (t % 10 == 0) ? Dimension::infinity() : fin(u(rng));
      const Dimension n2 = fin(u(rng));
      const auto r = eigen_sandwich_check(a1, v1, a2, v2, u(rng), u(rng), n1, n2);
      CHECK(r.ok());
    }
  }
  CHECK_THROWS_AS(eigen_sandwich_check(SymMatrix::identity(2), VectorXd::Ones(3), SymMatrix::identity(1),
                                       VectorXd::Ones(1), 1.0, 1.0, fin(1.0), fin(1.0)),
                  LinalgError);
}

TEST_CASE("star product of explicit functions") {
  const auto k2 = affine(2.0, 2.0);
  CHECK(std::abs(star_product(k2, k2, fin(2.0))) <= 1e-10);
  for (double t : {0.3, 1.0, 5.0, 40.0}) CHECK(std::abs(star_product(k2, k2, fin(t)) - (2.0 - 4.0 / t)) <= 1e-9);
  const auto q3 = affine(2.0, 6.0);
  CHECK(std::abs(star_product(q3, q3, fin(6.0))) <= 1e-10);
  CHECK(star_product(affine(1.0, 1.0), affine(3.0, 1.0), Dimension::infinity()) == 1.0);

  // Commutativity for asymmetric factors.
  const auto f = affine(1.0, 3.0);
  const auto g = affine(4.0, 0.5);
  for (double t : {0.1, 1.0, 10.0, 1000.0}) {
    CHECK(std::abs(star_product(f, g, fin(t)) - star_product(g, f, fin(t))) <= 1e-9);
  }
}

TEST_CASE("star product detects non-monotone factors") {
  const MonotoneFunction wavy{[](double n) { return -1.0 / n + 5.0 * std::sin(n); }, 0.0};
  CHECK_THROWS_AS(
      {
        for (double t : {2.0, 4.0, 7.0, 11.0}) star_product(wavy, affine(1.0, 1.0), fin(t));
      },
      ContractViolation);
}

TEST_CASE("star product of curvature functions") {
  SUBCASE("Q3 * Q3 equals the curvature function of Q6") {
    const auto q3 = scaled_curvature(curvature_function(testgraphs::hypercube(3), "000"));
    const auto q6 = curvature_function(testgraphs::hypercube(6), "000000");
    for (double t : {1.0, 6.0, 12.0, 50.0}) {
      CHECK(std::abs(star_product(q3, q3, fin(t)) - (2.0 - 12.0 / t)) <= 1e-9);
      CHECK(std::abs(star_product(q3, q3, fin(t)) - q6(fin(t))) <= 1e-9);
    }
  }
  SUBCASE("P3 * P2 equals the closed form of P3 x P2") {
    const ProductSpec spec{testgraphs::path({"l", "m", "r"}), testgraphs::path({"a", "b"}), 1.0, 1.0};
    auto grid = log_grid(0.1, 100.0, 50);
    grid.push_back(Dimension::infinity());
    const auto r = star_product_check(spec, "m", "a", grid);
    CHECK(r.max_deviation <= 1e-7);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      CHECK(std::abs(r.star[i] - p3xp2_closed_form(grid[i].value())) <= 1e-7);
    }
    CHECK(std::abs(r.star.back() - 0.5) <= 1e-12);
  }
  SUBCASE("random weighted products, commutativity and associativity") {
    std::mt19937_64 rng(83);
    const auto grid = std::vector<Dimension>{fin(0.05), fin(0.5), fin(2.0), fin(9.0), fin(60.0),
                                             Dimension::infinity()};
    for (int t = 0; t < 10; ++t) {
      const auto g = testgraphs::random_graph(rng, 4, 0.4, true);
      const auto gp = testgraphs::random_graph(rng, 4, 0.4, true);
      const auto gq = testgraphs::random_graph(rng, 4, 0.4, true);
      const double alpha = testgraphs::rational(rng);
      const double beta = testgraphs::rational(rng);
      const auto r = star_product_check({g, gp, alpha, beta}, g.id(0), gp.id(1), grid);
      CHECK(r.max_deviation <= 1e-7);

      const auto f1 = scaled_curvature(curvature_function(g, g.id(0)), alpha);
      const auto f2 = scaled_curvature(curvature_function(gp, gp.id(1)), beta);
      const auto f3 = scaled_curvature(curvature_function(gq, gq.id(2)));
      const MonotoneFunction f12{[&](double n) { return star_product(f1, f2, fin(n)); },
                                 std::min(f1.limit, f2.limit)};
      const MonotoneFunction f23{[&](double n) { return star_product(f2, f3, fin(n)); },
                                 std::min(f2.limit, f3.limit)};
      for (const auto& n : grid) {
        CHECK(std::abs(star_product(f1, f2, n) - star_product(f2, f1, n)) <= 1e-9);
        CHECK(std::abs(star_product(f12, f3, n) - star_product(f1, f23, n)) <= 1e-7);
      }
    }
  }
}
