// SPDX-License-Identifier: Apache-2.0
//
// leris-sim: light-emitting RIS localization and mmWave link simulator
// Copyright (C) 2026 The leris-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end. Subcommands: localize, link-budget, figure, config.
//
// Exit codes:
//   0 ok              5 inconsistent ranges   10 quadrature
//   1 unknown         6 ambiguous solution    11 configuration
//   2 argument        7 ill conditioned       12 validation
//   3 degenerate      8 insufficient anchors  13 io
//   4 infeasible      9 noise dominated

#pragma once

#include "leris/errors.hpp"

#include <ostream>
#include <string>

namespace leris
{

inline constexpr const char *tool_version = "1.0.0";
inline constexpr const char *manifest_schema = "leris.manifest/1";

int exit_code(ErrorKind kind) noexcept;

// Runs one command line. Reports go to `out`, error JSON to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace leris
