// SPDX-License-Identifier: Apache-2.0
//
// nfma: near-field movable-antenna multiuser downlink simulator
// Copyright (C) 2026 The nfma authors
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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nfma/harness.hpp"

namespace nfma
{

inline constexpr std::string_view kResultsHeader = "scheme,axis,value,seed,power_dbm,evals,feasible,trace_file";
inline constexpr std::string_view kTraceHeader = "iteration,residual_particles,best_fitness_dbm,penalty,cum_evals";

// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file. Creates parent directories.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

std::string read_file(const std::filesystem::path &path);

std::string format_results_csv(std::span<const SweepRow> rows);
std::string format_result_line(const SweepRow &row);
std::vector<SweepRow> parse_results_csv(std::string_view text);

std::string format_trace_csv(std::span<const TraceRecord> trace);

/// JSON record of a drop: seed, user origins/rotations, gains, scatterers and
/// reflection coefficients. Doubles are written with round-trip precision.
std::string format_drop_json(const ScenarioDrop &drop);
ScenarioDrop parse_drop_json(std::string_view text);

} // namespace nfma
