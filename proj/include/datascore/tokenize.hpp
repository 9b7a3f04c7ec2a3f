// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace datascore {

// Lower-cases every code point (Unicode simple case mapping), then splits on
// each maximal run of code points that are neither letters nor decimal
// digits. Empty tokens are dropped. Malformed UTF-8 bytes act as separators.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace datascore
