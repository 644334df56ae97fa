// Copyright 2026 The pmfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace pmfix::cli {

/// Exit code conventions, shared by every subcommand: 0 on success, 1 when
/// the mathematics fails (a violated axiom, a failed check, an uncertified
/// or non-convergent run), 2 on unusable input (bad JSON, bad schema, bad
/// usage).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

struct CliOptions {
    bool force = false;                   ///< pass runs that converged uncertified
    std::optional<std::string> out_path;  ///< overrides output.path from the config
    std::optional<unsigned> seed;         ///< extra randomized probes where supported
};

/// A finished command: the formatted report (JSON or CSV, trailing
/// newline included) plus the exit code it wants the process to return.
struct CommandOutcome {
    int exit_code = kExitOk;
    std::string report;
};

/// Builds the space, checks the distance-table axioms exhaustively, the
/// t-norm axioms on a 1/16 grid and the triangle-operator axioms over the
/// distinct distances (plus seeded random samples when a seed is given).
CommandOutcome cmd_check_space(const nlohmann::json& config, const CliOptions& opts);

/// Runs the configured contraction check at a fixed k, or the minimal-k
/// search when the config says "k": "search".
CommandOutcome cmd_check_contraction(const nlohmann::json& config, const CliOptions& opts);

/// Runs the configured Picard mode and reports the full certified trace.
CommandOutcome cmd_solve(const nlohmann::json& config, const CliOptions& opts);

/// One document with the space, every axiom report and, when a map is
/// configured, all four contraction checks.
CommandOutcome cmd_report(const nlohmann::json& config, const CliOptions& opts);

/// Full pipeline: argument parsing, config loading, dispatch, output
/// writing and exception-to-exit-code mapping.
int run(int argc, const char* const* argv);

}  // namespace pmfix::cli
