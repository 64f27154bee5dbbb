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
#include <stdexcept>
#include <string>
#include <string_view>

#include "nfma/harness.hpp"

namespace nfma
{

/// Malformed scenario input; `key()` names the offending entry (or is empty
/// for structural problems such as a missing '=').
class ScenarioError : public std::runtime_error
{
  public:
    ScenarioError(std::string key, const std::string &what) : std::runtime_error(what), key_(std::move(key)) {}
    const std::string &key() const { return key_; }

  private:
    std::string key_;
};

/// Parses `key = value` lines on top of the default scenario. '#' starts a
/// comment. Unknown keys, duplicate keys and unparsable values are errors.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path &path);

// Every key, in a stable order; parse_scenario(format_scenario(s)) == s.
std::string format_scenario(const Scenario &scenario);

} // namespace nfma
