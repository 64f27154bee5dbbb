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

#include "nfma/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nfma
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T> T parse_number(const std::string &key, std::string_view value)
{
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ScenarioError(key, "invalid value '" + std::string(value) + "' for key '" + key + "'");
    return out;
}

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

using Setter = std::function<void(Scenario &, const std::string &, std::string_view)>;
using Getter = std::function<std::string(const Scenario &)>;

struct Field
{
    const char *key;
    Setter set;
    Getter get;
};

template <class T, class M> Field numeric(const char *key, M Scenario::*member)
{
    return {key,
            [member](Scenario &s, const std::string &k, std::string_view v) { s.*member = parse_number<T>(k, v); },
            [member](const Scenario &s) {
                if constexpr (std::is_floating_point_v<T>)
                    return format_double(s.*member);
                else
                    return std::to_string(s.*member);
            }};
}

template <class T, class M> Field swarm_numeric(const char *key, M SwarmConfig::*member)
{
    return {key,
            [member](Scenario &s, const std::string &k, std::string_view v) {
                s.swarm.*member = parse_number<T>(k, v);
            },
            [member](const Scenario &s) {
                if constexpr (std::is_floating_point_v<T>)
                    return format_double(s.swarm.*member);
                else
                    return std::to_string(s.swarm.*member);
            }};
}

const std::vector<Field> &fields()
{
    static const std::vector<Field> table = {
        numeric<double>("carrier_frequency_hz", &Scenario::carrier_frequency_hz),
        numeric<int>("num_tx", &Scenario::num_tx),
        numeric<int>("num_users", &Scenario::num_users),
        numeric<int>("num_scatterers", &Scenario::num_scatterers),
        numeric<double>("tx_region_wavelengths", &Scenario::tx_region_wavelengths),
        numeric<double>("rx_region_wavelengths", &Scenario::rx_region_wavelengths),
        numeric<double>("distance_min_m", &Scenario::distance_min_m),
        numeric<double>("distance_max_m", &Scenario::distance_max_m),
        numeric<double>("rician_factor_db", &Scenario::rician_factor_db),
        numeric<double>("noise_power_dbm", &Scenario::noise_power_dbm),
        numeric<double>("rate_target_bps_hz", &Scenario::rate_target_bps_hz),
        numeric<double>("min_spacing_wavelengths", &Scenario::min_spacing_wavelengths),
        {"rotations",
         [](Scenario &s, const std::string &k, std::string_view v) {
             if (v == "identity")
                 s.rotations = RotationMode::Identity;
             else if (v == "random")
                 s.rotations = RotationMode::Random;
             else
                 throw ScenarioError(k, "invalid value '" + std::string(v) + "' for key 'rotations'"
                                        " (expected identity|random)");
         },
         [](const Scenario &s) { return std::string(s.rotations == RotationMode::Random ? "random" : "identity"); }},
        numeric<std::uint64_t>("seed", &Scenario::seed),
        swarm_numeric<int>("particles", &SwarmConfig::particles),
        swarm_numeric<int>("iterations", &SwarmConfig::iterations),
        swarm_numeric<double>("pruning_ratio", &SwarmConfig::pruning_ratio),
        swarm_numeric<double>("c1", &SwarmConfig::c1),
        swarm_numeric<double>("c2", &SwarmConfig::c2),
        swarm_numeric<double>("inertia_min", &SwarmConfig::inertia_min),
        swarm_numeric<double>("inertia_max", &SwarmConfig::inertia_max),
        swarm_numeric<double>("penalty_factor", &SwarmConfig::penalty_factor),
    };
    return table;
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ScenarioError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        const auto &table = fields();
        auto it = std::find_if(table.begin(), table.end(), [&](const Field &f) { return key == f.key; });
        if (it == table.end())
            throw ScenarioError(key, "unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ScenarioError(key, "duplicate key '" + key + "'");
        it->set(s, key, value);
    }
    try
    {
        s.validate();
    }
    catch (const std::invalid_argument &e)
    {
        std::string msg = e.what();
        std::string key;
        for (const auto &f : fields())
            if (msg.find(f.key) != std::string::npos)
            {
                key = f.key;
                break;
            }
        throw ScenarioError(key, msg);
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("", "cannot read scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string format_scenario(const Scenario &scenario)
{
    std::string out;
    for (const auto &f : fields())
        out += std::string(f.key) + " = " + f.get(scenario) + "\n";
    return out;
}

} // namespace nfma
