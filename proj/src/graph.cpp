#include "becurv/graph.hpp"

#include "becurv/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace becurv {

namespace {

using nlohmann::json;

double parse_decimal(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw FormatError("not a number: \"" + std::string(whole) + "\"");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double json_real(const json& value, const json& element, const char* field) {
  double x = 0.0;
  if (value.is_number()) {
    x = value.get<double>();
  } else if (value.is_string()) {
    try {
      x = parse_real(value.get<std::string>());
    } catch (const FormatError& e) {
      throw FormatError(std::string(e.what()) + " in field \"" + field + "\" of " + element.dump());
    }
  } else {
    throw FormatError(std::string("field \"") + field + "\" must be a number or rational string in " +
                      element.dump());
  }
  return x;
}

}  // namespace

double parse_real(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  const auto slash = text.find('/');
  double value = 0.0;
  if (slash == std::string_view::npos) {
    value = parse_decimal(text, whole);
  } else {
    const double num = parse_decimal(trim(text.substr(0, slash)), whole);
    const double den = parse_decimal(trim(text.substr(slash + 1)), whole);
    if (den == 0.0) throw FormatError("zero denominator: \"" + std::string(whole) + "\"");
    value = num / den;
  }
  if (!std::isfinite(value)) throw FormatError("non-finite number: \"" + std::string(whole) + "\"");
  return value;
}

WeightedGraph::WeightedGraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges) {
  std::sort(vertices.begin(), vertices.end(),
            [](const VertexSpec& a, const VertexSpec& b) { return a.id < b.id; });
  ids_.reserve(vertices.size());
  mu_.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& v = vertices[i];
    if (i > 0 && vertices[i - 1].id == v.id) throw FormatError("duplicate vertex id \"" + v.id + "\"");
    if (!(v.mu > 0.0) || !std::isfinite(v.mu)) {
      throw FormatError("vertex \"" + v.id + "\" has non-positive measure");
    }
    index_.emplace(v.id, i);
    ids_.push_back(v.id);
    mu_.push_back(v.mu);
  }

  adj_.assign(ids_.size(), {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    const auto u = index_of(e.u);
    const auto v = index_of(e.v);
    const std::string where = "edge (\"" + e.u + "\", \"" + e.v + "\")";
    if (!u) throw FormatError(where + " references unknown vertex \"" + e.u + "\"");
    if (!v) throw FormatError(where + " references unknown vertex \"" + e.v + "\"");
    if (*u == *v) throw FormatError(where + " is a self-loop");
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw FormatError(where + " has non-positive weight");
    if (!seen.emplace(std::min(*u, *v), std::max(*u, *v)).second) {
      throw FormatError(where + " is listed twice");
    }
    adj_[*u].push_back({*v, e.w});
    adj_[*v].push_back({*u, e.w});
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }
}

std::optional<std::size_t> WeightedGraph::index_of(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t WeightedGraph::require(std::string_view id) const {
  const auto i = index_of(id);
  if (!i) throw DomainError("unknown vertex \"" + std::string(id) + "\"");
  return *i;
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
  const auto& list = adj_[i];
  const auto it = std::lower_bound(list.begin(), list.end(), j,
                                   [](const Neighbor& n, std::size_t k) { return n.index < k; });
  return (it != list.end() && it->index == j) ? it->weight : 0.0;
}

double WeightedGraph::degree(std::size_t i) const {
  double d = 0.0;
  for (const auto& n : adj_[i]) d += n.weight;
  return d;
}

std::vector<VertexSpec> WeightedGraph::vertices() const {
  std::vector<VertexSpec> out;
  out.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) out.push_back({ids_[i], mu_[i]});
  return out;
}

std::vector<EdgeSpec> WeightedGraph::edges() const {
  std::vector<EdgeSpec> out;
  for (std::size_t i = 0; i < adj_.size(); ++i) {
    for (const auto& n : adj_[i]) {
      if (i < n.index) out.push_back({ids_[i], ids_[n.index], n.weight});
    }
  }
  return out;
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : adj_) twice += list.size();
  return twice / 2;
}

bool WeightedGraph::is_non_weighted() const {
  for (double m : mu_) {
    if (m != 1.0) return false;
  }
  for (const auto& list : adj_) {
    for (const auto& n : list) {
      if (n.weight != 1.0) return false;
    }
  }
  return true;
}

WeightedGraph load_graph(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw FormatError("graph document needs a \"vertices\" array");
  }

  std::vector<VertexSpec> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_object() || !v.contains("id") || !v["id"].is_string()) {
      throw FormatError("vertex entry needs a string \"id\": " + v.dump());
    }
    VertexSpec spec{v["id"].get<std::string>(), 1.0};
    if (v.contains("mu")) spec.mu = json_real(v["mu"], v, "mu");
    if (!(spec.mu > 0.0)) throw FormatError("non-positive measure in " + v.dump());
    vertices.push_back(std::move(spec));
  }

  std::vector<EdgeSpec> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw FormatError("\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e["u"].is_string() ||
          !e["v"].is_string()) {
        throw FormatError("edge entry needs string \"u\" and \"v\": " + e.dump());
      }
      EdgeSpec spec{e["u"].get<std::string>(), e["v"].get<std::string>(), 1.0};
      if (e.contains("w")) spec.w = json_real(e["w"], e, "w");
      if (!(spec.w > 0.0)) throw FormatError("non-positive weight in " + e.dump());
      edges.push_back(std::move(spec));
    }
  }
  return WeightedGraph(std::move(vertices), std::move(edges));
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open graph file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str());
}

std::string dump_graph(const WeightedGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : g.vertices()) doc["vertices"].push_back({{"id", v.id}, {"mu", v.mu}});
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  return doc.dump(1) + "\n";
}

double LocalBall::out_rate(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < n(); ++j) s += p(y(i), z(j));
  return s;
}

bool LocalBall::is_non_weighted() const {
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu(i) != 1.0) return false;
  }
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) != 0.0 && p(i, j) != 1.0) return false;
    }
  }
  return true;
}

LocalBall two_ball(const WeightedGraph& g, std::string_view x) {
  const std::size_t cx = g.require(x);
  if (g.neighbors(cx).empty()) {
    throw DomainError("curvature undefined at isolated vertex \"" + std::string(x) + "\"");
  }

  // Index order is lexicographic, so collecting by index sorts by id.
  std::vector<std::size_t> s1;
  for (const auto& n : g.neighbors(cx)) s1.push_back(n.index);
  std::vector<char> in_b1(g.size(), 0);
  in_b1[cx] = 1;
  for (auto y : s1) in_b1[y] = 1;
  std::set<std::size_t> s2_set;
  for (auto y : s1) {
    for (const auto& n : g.neighbors(y)) {
      if (!in_b1[n.index]) s2_set.insert(n.index);
    }
  }
  const std::vector<std::size_t> s2(s2_set.begin(), s2_set.end());

  LocalBall ball;
  ball.center = g.id(cx);
  std::vector<std::size_t> order{cx};
  for (auto y : s1) {
    ball.s1.push_back(g.id(y));
    order.push_back(y);
  }
  for (auto z : s2) {
    ball.s2.push_back(g.id(z));
    order.push_back(z);
  }

  const auto size = static_cast<Eigen::Index>(order.size());
  const auto first_s2 = static_cast<Eigen::Index>(1 + s1.size());
  ball.p = Eigen::MatrixXd::Zero(size, size);
  ball.mu.resize(size);
  for (Eigen::Index a = 0; a < size; ++a) {
    ball.mu(a) = g.mu(order[a]);
    for (Eigen::Index b = 0; b < size; ++b) {
      if (a >= first_s2 && b >= first_s2) continue;
      ball.p(a, b) = g.transition_rate(order[a], order[b]);
    }
  }

  ball.degree_ratio = 0.0;
  for (std::size_t i = 0; i < ball.m(); ++i) ball.degree_ratio += ball.pxy(i);

  ball.p2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ball.n()));
  for (std::size_t j = 0; j < ball.n(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < ball.m(); ++i) s += ball.pxy(i) * ball.p(ball.y(i), ball.z(j));
    ball.p2(static_cast<Eigen::Index>(j)) = s;
  }
  return ball;
}

}  // namespace becurv
