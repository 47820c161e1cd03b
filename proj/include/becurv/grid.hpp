#pragma once

#include "becurv/bakry_emery.hpp"

#include <string_view>
#include <vector>

namespace becurv {

/// Positive decimal, rational "p/q" or "inf". Throws UsageError otherwise.
Dimension parse_dimension(std::string_view text);

/// k points a, ..., b evenly spaced (k >= 2, or k == 1 giving {a}).
std::vector<Dimension> lin_grid(double a, double b, int k);
/// k points a, ..., b evenly spaced in log N.
std::vector<Dimension> log_grid(double a, double b, int k);

/// Comma list whose items are "lin:a:b:k", "log:a:b:k" or single dimensions
/// (including "inf"). Result is sorted ascending without duplicates.
std::vector<Dimension> parse_grid(std::string_view text);

}  // namespace becurv
