// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace datascore {

// 1-based ranks in ascending order; tied values share the mean of the
// positions they occupy.
std::vector<double> midranks(std::span<const double> values);

// Pearson correlation; 0 when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of midranks.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace datascore
