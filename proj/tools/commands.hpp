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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nfma::cli
{

enum ExitCode : int
{
    kExitOk = 0,
    kExitFailure = 1, // infeasible optimisation, failed check, runtime error
    kExitInput = 2,   // malformed input; the message names the key
};

struct RunArgs
{
    std::string scenario; // empty: built-in default
    std::string scheme = "proposed";
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
};

struct SweepArgs
{
    std::string scenario;
    std::string axis;
    std::vector<double> values;
    std::vector<std::string> schemes;
    int seeds = 1;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
};

struct ValidateArgs
{
    std::string suite = "all";
    std::uint64_t seed = 1;
};

struct ReplayArgs
{
    std::string from;
    std::string out;
    unsigned threads = 1;
};

int run_command(const RunArgs &args, std::ostream &out, std::ostream &err);
int sweep_command(const SweepArgs &args, std::ostream &out, std::ostream &err);
int validate_command(const ValidateArgs &args, std::ostream &out, std::ostream &err);
int replay_command(const ReplayArgs &args, std::ostream &out, std::ostream &err);

// Parses argv and dispatches; never calls exit().
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace nfma::cli
