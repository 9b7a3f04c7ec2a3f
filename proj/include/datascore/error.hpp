// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace datascore {

// Raised for bad user input: malformed files, invariant violations in loaded
// data, inconsistent flags. The CLI maps it to exit status 2; anything else
// escaping a command is an internal failure (exit status 1).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace datascore
