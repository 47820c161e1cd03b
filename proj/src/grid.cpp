#include "becurv/grid.hpp"

#include "becurv/errors.hpp"
#include "becurv/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace becurv {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double positive(std::string_view text) {
  double v = 0.0;
  try {
    v = parse_real(text);
  } catch (const FormatError&) {
    throw UsageError("not a number: \"" + std::string(text) + "\"");
  }
  if (!(v > 0.0)) throw UsageError("dimension must be positive: \"" + std::string(text) + "\"");
  return v;
}

int count(std::string_view text) {
  int k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || ptr != text.data() + text.size() || k < 1) {
    throw UsageError("grid point count must be a positive integer: \"" + std::string(text) + "\"");
  }
  return k;
}

void normalise(std::vector<Dimension>& g) {
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
}

}  // namespace

Dimension parse_dimension(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Infinity") return Dimension::infinity();
  return Dimension::finite(positive(text));
}

std::vector<Dimension> lin_grid(double a, double b, int k) {
  std::vector<Dimension> g;
  if (k == 1) return {Dimension::finite(a)};
  for (int i = 0; i < k; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(k - 1);
    g.push_back(Dimension::finite(i == k - 1 ? b : a + (b - a) * t));
  }
  return g;
}

std::vector<Dimension> log_grid(double a, double b, int k) {
  std::vector<Dimension> g;
  if (k == 1) return {Dimension::finite(a)};
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < k; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(k - 1);
    g.push_back(Dimension::finite(i == 0 ? a : (i == k - 1 ? b : std::exp(la + (lb - la) * t))));
  }
  return g;
}

std::vector<Dimension> parse_grid(std::string_view text) {
  std::vector<Dimension> g;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw UsageError("empty entry in grid \"" + std::string(text) + "\"");
    if (item.starts_with("lin:") || item.starts_with("log:")) {
      const auto parts = split(item, ':');
      if (parts.size() != 4) throw UsageError("grid must look like lin:a:b:k or log:a:b:k");
      const double a = positive(parts[1]);
      const double b = positive(parts[2]);
      if (!(a < b)) throw UsageError("grid needs a < b");
      const int k = count(parts[3]);
      const auto r = parts[0] == "lin" ? lin_grid(a, b, k) : log_grid(a, b, k);
      g.insert(g.end(), r.begin(), r.end());
    } else {
      g.push_back(parse_dimension(item));
    }
  }
  normalise(g);
  return g;
}

}  // namespace becurv
