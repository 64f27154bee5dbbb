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
#include <string>
#include <vector>

namespace nfma::oracle
{

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport
{
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// Steering-vector modulus, Monte Carlo Rician power split, bit-exact rebuild
/// and JSON replay of a drop.
ValidationReport validate_channel(std::uint64_t seed = 1);

/// Closed-form MRT, duality solver against the conic oracle on random
/// instances, active SINR constraints, and the 2x2 direction grid search.
ValidationReport validate_beamforming(std::uint64_t seed = 1, int instances = 100);

/// Tiny-instance grid optimum, pruning against a sort oracle, and the
/// evaluation-count ratio of the pruned swarm with a stub fitness.
ValidationReport validate_optimizer(std::uint64_t seed = 1, int tiny_seeds = 10);

} // namespace nfma::oracle
