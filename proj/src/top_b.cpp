// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <functional>

#include "datascore/error.hpp"
#include "datascore/similarity.hpp"

namespace datascore {

namespace {

void check_fraction(double b) {
  if (!(b > 0.0 && b <= 1.0)) {
    throw ValidationError("top-b fraction must lie in (0, 1], got " +
                          std::to_string(b));
  }
}

// Moves the k largest values to the front, sorted descending, without
// sorting the remainder.
std::vector<double> select_top(std::span<const double> row, std::size_t k) {
  std::vector<double> work(row.begin(), row.end());
  if (k < work.size()) {
    std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k),
                     work.end(), std::greater<>());
  }
  std::sort(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k),
            std::greater<>());
  return work;
}

}  // namespace

std::size_t top_b_count(std::size_t n, double b) {
  check_fraction(b);
  if (n == 0) return 0;
  const double x = b * static_cast<double>(n);
  const double nearest = std::round(x);
  double k = std::ceil(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) k = nearest;
  const auto count = static_cast<std::size_t>(std::max(1.0, k));
  return std::min(n, count);
}

TopBStats top_b_stats(std::span<const double> row, double b,
                      std::string test_id) {
  if (row.empty()) throw ValidationError("top-b statistics of an empty row");
  const std::size_t k = top_b_count(row.size(), b);
  const auto top = select_top(row, k);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += top[i];
  return {std::move(test_id), k, sum, sum / static_cast<double>(k)};
}

std::vector<TopBStats> top_b_sweep(std::span<const double> row,
                                   std::span<const double> fractions,
                                   std::string_view test_id) {
  if (row.empty()) throw ValidationError("top-b statistics of an empty row");
  if (fractions.empty()) throw ValidationError("empty top-b sweep");
  std::vector<std::size_t> counts;
  counts.reserve(fractions.size());
  for (double b : fractions) counts.push_back(top_b_count(row.size(), b));
  const std::size_t k_max = *std::max_element(counts.begin(), counts.end());

  const auto top = select_top(row, k_max);
  std::vector<double> prefix(k_max + 1, 0.0);
  for (std::size_t i = 0; i < k_max; ++i) prefix[i + 1] = prefix[i] + top[i];

  std::vector<TopBStats> out;
  out.reserve(fractions.size());
  for (std::size_t k : counts) {
    out.push_back({std::string(test_id), k, prefix[k],
                   prefix[k] / static_cast<double>(k)});
  }
  return out;
}

}  // namespace datascore
