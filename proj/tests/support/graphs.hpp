#pragma once

// Graph families and random instances shared by the unit and acceptance tests.

#include "becurv/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testgraphs {

using becurv::EdgeSpec;
using becurv::VertexSpec;
using becurv::WeightedGraph;

inline WeightedGraph unit_graph(const std::vector<std::string>& ids,
                                const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<VertexSpec> v;
  for (const auto& id : ids) v.push_back({id, 1.0});
  std::vector<EdgeSpec> e;
  for (const auto& [a, b] : edges) e.push_back({a, b, 1.0});
  return WeightedGraph(v, e);
}

inline WeightedGraph k2() { return unit_graph({"a", "b"}, {{"a", "b"}}); }

inline WeightedGraph path(const std::vector<std::string>& ids) {
  std::vector<std::pair<std::string, std::string>> e;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) e.emplace_back(ids[i], ids[i + 1]);
  return unit_graph(ids, e);
}

inline std::string bits(unsigned v, int d) {
  std::string s(static_cast<std::size_t>(d), '0');
  for (int i = 0; i < d; ++i) {
    if (v & (1u << (d - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

inline WeightedGraph hypercube(int d) {
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> e;
  for (unsigned v = 0; v < (1u << d); ++v) {
    ids.push_back(bits(v, d));
    for (int i = 0; i < d; ++i) {
      const unsigned u = v ^ (1u << i);
      if (v < u) e.emplace_back(bits(v, d), bits(u, d));
    }
  }
  return unit_graph(ids, e);
}

inline WeightedGraph complete_bipartite(int a, int b) {
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < a; ++i) ids.push_back("a" + std::to_string(i));
  for (int j = 0; j < b; ++j) ids.push_back("b" + std::to_string(j));
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) e.emplace_back("a" + std::to_string(i), "b" + std::to_string(j));
  }
  return unit_graph(ids, e);
}

inline WeightedGraph star(int leaves) {
  std::vector<std::string> ids{"x"};
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 0; i < leaves; ++i) {
    ids.push_back("y" + std::to_string(i));
    e.emplace_back("x", "y" + std::to_string(i));
  }
  return unit_graph(ids, e);
}

// d-regular tree truncated at the given depth; root "r", children append digits.
inline WeightedGraph regular_tree(int d, int depth) {
  std::vector<std::string> ids{"r"};
  std::vector<std::pair<std::string, std::string>> e;
  std::vector<std::string> frontier{"r"};
  for (int level = 0; level < depth; ++level) {
    std::vector<std::string> next;
    for (const auto& p : frontier) {
      const int kids = (p == "r") ? d : d - 1;
      for (int k = 0; k < kids; ++k) {
        const std::string c = p + std::to_string(k);
        ids.push_back(c);
        e.emplace_back(p, c);
        next.push_back(c);
      }
    }
    frontier = std::move(next);
  }
  return unit_graph(ids, e);
}

// P3 x P2 with P3 = l - m - r and P2 = a - b; "m|a" has degree 3.
inline WeightedGraph p3xp2() {
  return unit_graph({"l|a", "l|b", "m|a", "m|b", "r|a", "r|b"},
                    {{"l|a", "m|a"}, {"m|a", "r|a"}, {"l|b", "m|b"}, {"m|b", "r|b"},
                     {"l|a", "l|b"}, {"m|a", "m|b"}, {"r|a", "r|b"}});
}

// Q^4 two-ball around 0000.
inline WeightedGraph figure_g1() { return hypercube(4); }

// x with S1 = {y0..y3}; b and c see every y, each y has one private S2 vertex.
inline WeightedGraph figure_g2() {
  std::vector<std::pair<std::string, std::string>> e;
  const std::vector<std::string> ys{"y0", "y1", "y2", "y3"};
  const std::vector<std::string> priv{"a", "d", "e", "f"};
  for (std::size_t i = 0; i < ys.size(); ++i) {
    e.emplace_back("x", ys[i]);
    e.emplace_back(ys[i], "b");
    e.emplace_back(ys[i], "c");
    e.emplace_back(ys[i], priv[i]);
  }
  return unit_graph({"x", "y0", "y1", "y2", "y3", "a", "b", "c", "d", "e", "f"}, e);
}

// Random rational p/q with 1 <= p, q <= 6.
inline double rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(1, 6);
  const int p = d(rng);
  const int q = d(rng);
  return static_cast<double>(p) / static_cast<double>(q);
}

inline std::string vid(int i) {
  std::string s = "v";
  if (i < 10) s += "0";
  return s + std::to_string(i);
}

// Connected random graph on n vertices: a random spanning tree plus each
// remaining pair with probability `extra`. Weighted graphs get rational
// measures and weights.
inline WeightedGraph random_graph(std::mt19937_64& rng, int n, double extra, bool weighted) {
  std::vector<VertexSpec> v;
  for (int i = 0; i < n; ++i) v.push_back({vid(i), weighted ? rational(rng) : 1.0});
  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    pairs.emplace(parent(rng), i);
  }
  std::bernoulli_distribution coin(extra);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!pairs.count({i, j}) && coin(rng)) pairs.emplace(i, j);
    }
  }
  std::vector<EdgeSpec> e;
  for (const auto& [a, b] : pairs) e.push_back({vid(a), vid(b), weighted ? rational(rng) : 1.0});
  return WeightedGraph(v, e);
}

struct Instance {
  WeightedGraph g;
  std::string x;
};

// Center x that is S1-in regular (p_yx = c) and S1-out regular
// (sum_z p_yz = c'), with random S1-S1 edges and random S2 attachment.
inline Instance regular_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> msz(2, 5);
  std::uniform_int_distribution<int> nsz(1, 4);
  const int m = msz(rng);
  const int n = nsz(rng);
  const double c_in = rational(rng);
  const double c_out = rational(rng);

  std::vector<VertexSpec> v{{"x", rational(rng)}};
  std::vector<double> mu_y;
  for (int i = 0; i < m; ++i) {
    mu_y.push_back(rational(rng));
    v.push_back({"y" + std::to_string(i), mu_y.back()});
  }
  for (int j = 0; j < n; ++j) v.push_back({"z" + std::to_string(j), rational(rng)});

  std::vector<EdgeSpec> e;
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < m; ++i) {
    const std::string y = "y" + std::to_string(i);
    e.push_back({"x", y, c_in * mu_y[static_cast<std::size_t>(i)]});
    for (int k = i + 1; k < m; ++k) {
      if (coin(rng)) e.push_back({y, "y" + std::to_string(k), rational(rng)});
    }
    std::vector<std::pair<int, double>> out;
    std::uniform_int_distribution<int> pick(0, n - 1);
    out.emplace_back(pick(rng), 0.0);
    for (int j = 0; j < n; ++j) {
      if (j != out.front().first && coin(rng)) out.emplace_back(j, 0.0);
    }
    double total = 0.0;
    for (auto& [j, w] : out) {
      w = rational(rng);
      total += w;
    }
    const double scale = c_out * mu_y[static_cast<std::size_t>(i)] / total;
    for (const auto& [j, w] : out) e.push_back({y, "z" + std::to_string(j), w * scale});
  }
  // Drop z vertices nobody attached to.
  std::vector<VertexSpec> used{v.begin(), v.begin() + 1 + m};
  std::set<std::string> touched;
  for (const auto& ed : e) touched.insert(ed.v);
  for (int j = 0; j < n; ++j) {
    const std::string z = "z" + std::to_string(j);
    if (touched.count(z)) used.push_back(v[static_cast<std::size_t>(1 + m + j)]);
  }
  return {WeightedGraph(used, e), "x"};
}

// Random weighted graph whose center "x" has S1-in regular neighbours y, y'
// (p_yx = p_y'x), for the edge-increase operation.
struct PairInstance {
  WeightedGraph g;
  std::string x, y, yp;
};

inline PairInstance o1_instance(std::mt19937_64& rng) {
  for (;;) {
    WeightedGraph base = random_graph(rng, 7, 0.35, true);
    const std::size_t xi = 0;
    if (base.neighbors(xi).size() < 2) continue;
    const auto& nb = base.neighbors(xi);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (a == b) b = (a + 1) % nb.size();
    const std::string x = base.id(xi);
    const std::string y = base.id(nb[a].index);
    const std::string yp = base.id(nb[b].index);
    // Match p_{y'x} to p_{yx} by rescaling w_{xy'}.
    const double pyx = base.weight(nb[a].index, xi) / base.mu(nb[a].index);
    std::vector<EdgeSpec> e = base.edges();
    for (auto& ed : e) {
      if ((ed.u == x && ed.v == yp) || (ed.u == yp && ed.v == x)) ed.w = pyx * base.mu(nb[b].index);
    }
    return {WeightedGraph(base.vertices(), e), x, y, yp};
  }
}

struct VertexInstance {
  WeightedGraph g;
  std::string x, z0;
};

// Random weighted graph with z0 in S2(x) and p_yx constant over the
// neighbours y of z0 in S1(x), for the vertex-removal operation.
inline VertexInstance o2_instance(std::mt19937_64& rng) {
  for (;;) {
    WeightedGraph base = random_graph(rng, 8, 0.3, true);
    const std::size_t xi = 0;
    const std::string x = base.id(xi);
    std::set<std::size_t> s1;
    for (const auto& n : base.neighbors(xi)) s1.insert(n.index);
    std::set<std::size_t> s2;
    for (auto y : s1) {
      for (const auto& n : base.neighbors(y)) {
        if (n.index != xi && !s1.count(n.index)) s2.insert(n.index);
      }
    }
    if (s2.empty()) continue;
    std::vector<std::size_t> s2v(s2.begin(), s2.end());
    std::uniform_int_distribution<std::size_t> pick(0, s2v.size() - 1);
    const std::size_t zi = s2v[pick(rng)];
    const double c = rational(rng);
    std::vector<EdgeSpec> e = base.edges();
    for (auto& ed : e) {
      const auto u = *base.index_of(ed.u);
      const auto v = *base.index_of(ed.v);
      const std::size_t other = (u == xi) ? v : (v == xi ? u : xi);
      if (other == xi) continue;
      if (base.weight(other, zi) > 0.0) ed.w = c * base.mu(other);
    }
    return {WeightedGraph(base.vertices(), e), x, base.id(zi)};
  }
}

}  // namespace testgraphs
