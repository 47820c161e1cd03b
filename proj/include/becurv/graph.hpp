#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace becurv {

using VertexId = std::string;

struct VertexSpec {
  VertexId id;
  double mu = 1.0;
};

struct EdgeSpec {
  VertexId u;
  VertexId v;
  double w = 1.0;
};

struct Neighbor {
  std::size_t index;
  double weight;
};

/// Finite weighted graph G = (V, w, mu).
///
/// Vertices are stored in lexicographic id order, so vertex indices, neighbour
/// lists and every matrix built downstream share one deterministic ordering.
/// Immutable once constructed.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Validates and builds the graph. Each unordered pair may appear at most
  /// once in `edges`. Throws FormatError on duplicate ids, unknown endpoints,
  /// self-loops, or non-positive (or non-finite) mu / w.
  WeightedGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

  std::size_t size() const { return ids_.size(); }
  const VertexId& id(std::size_t i) const { return ids_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  /// Like index_of but throws DomainError for unknown ids.
  std::size_t require(std::string_view id) const;

  double mu(std::size_t i) const { return mu_[i]; }
  /// w_ij, zero when i and j are not adjacent.
  double weight(std::size_t i, std::size_t j) const;
  double transition_rate(std::size_t i, std::size_t j) const { return weight(i, j) / mu_[i]; }
  /// d_i = sum_j w_ij.
  double degree(std::size_t i) const;
  const std::vector<Neighbor>& neighbors(std::size_t i) const { return adj_[i]; }

  std::vector<VertexSpec> vertices() const;
  /// Each unordered pair once, with u < v lexicographically.
  std::vector<EdgeSpec> edges() const;
  std::size_t edge_count() const;

  /// mu == 1 everywhere and every stored weight equals 1.
  bool is_non_weighted() const;

 private:
  std::vector<VertexId> ids_;
  std::vector<double> mu_;
  std::vector<std::vector<Neighbor>> adj_;
  std::map<VertexId, std::size_t, std::less<>> index_;
};

/// Parses a decimal literal or a rational "p/q" into a double.
double parse_real(std::string_view text);

/// Reads the JSON graph format:
///   {"vertices":[{"id":"a","mu":1.0},...], "edges":[{"u":"a","v":"b","w":"1/2"},...]}
/// "mu" and "w" default to 1 and accept numbers or rational strings.
WeightedGraph load_graph(std::string_view document);
WeightedGraph load_graph_file(const std::string& path);

/// Serialises in the same format. Numbers are written with round-trip
/// precision, vertices in lexicographic order.
std::string dump_graph(const WeightedGraph& g);

/// The incomplete two-ball B2(x): the induced subgraph on {x} u S1 u S2 with
/// edges inside S2 dropped.
///
/// Local indexing: 0 is the center, 1..m are S1 (lexicographic), m+1..m+n
/// are S2 (lexicographic). `p(u, v)` is the transition rate w_uv / mu_u for
/// every recorded pair; S2-S2 entries are zero by construction.
struct LocalBall {
  VertexId center;
  std::vector<VertexId> s1;
  std::vector<VertexId> s2;
  Eigen::MatrixXd p;
  Eigen::VectorXd mu;
  /// p2(j) = sum_{y in S1} p_xy p_y z_j.
  Eigen::VectorXd p2;
  /// d_x / mu_x = sum_{y in S1} p_xy, summed in S1 order.
  double degree_ratio = 0.0;

  std::size_t m() const { return s1.size(); }
  std::size_t n() const { return s2.size(); }
  std::size_t size() const { return 1 + s1.size() + s2.size(); }
  std::size_t y(std::size_t i) const { return 1 + i; }
  std::size_t z(std::size_t j) const { return 1 + s1.size() + j; }

  /// p_{x y_i}.
  double pxy(std::size_t i) const { return p(0, y(i)); }
  /// w_uv = mu_u p_uv on local indices.
  double w(std::size_t u, std::size_t v) const { return mu(u) * p(u, v); }
  /// d_u / mu_u computed from the recorded row (complete for x and S1).
  double row_rate(std::size_t u) const { return p.row(u).sum(); }
  /// p^-(y_i) = p_{y_i x}.
  double in_rate(std::size_t i) const { return p(y(i), 0); }
  /// p^+(y_i) = sum_{z in S2} p_{y_i z}.
  double out_rate(std::size_t i) const;

  /// mu == 1 on the ball and every recorded rate is 0 or 1.
  bool is_non_weighted() const;
};

/// Extracts B2(x). Throws DomainError for unknown or isolated vertices.
LocalBall two_ball(const WeightedGraph& g, std::string_view x);

}  // namespace becurv
