// Copyright 2026 The datascore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace datascore {

// Runs one CLI invocation; args exclude the program name. Returns the exit
// status: 0 success, 2 input or validation error, 1 internal error.
// Data goes to out (or to --out files), diagnostics to err.
int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace datascore
