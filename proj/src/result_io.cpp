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

#include "nfma/result_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "nfma/units.hpp"

namespace nfma
{

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_result_line(const SweepRow &row)
{
    std::string s;
    s += to_string(row.scheme);
    s += ',' + row.axis + ',' + format_double(row.value) + ',' + std::to_string(row.seed) + ',' +
         format_double(row.power_dbm) + ',' + std::to_string(row.evals) + ',' + (row.feasible ? "1" : "0") + ',' +
         row.trace_file + '\n';
    return s;
}

std::string format_results_csv(std::span<const SweepRow> rows)
{
    std::string s(kResultsHeader);
    s += '\n';
    for (const auto &r : rows)
        s += format_result_line(r);
    return s;
}

namespace
{
std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <class T> T to_number(const std::string &s, const char *what)
{
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("results CSV: bad ") + what + " '" + s + "'");
    return v;
}
} // namespace

std::vector<SweepRow> parse_results_csv(std::string_view text)
{
    std::vector<SweepRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader)
        throw std::runtime_error("results CSV: unexpected header");
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 8)
            throw std::runtime_error("results CSV: expected 8 columns in '" + line + "'");
        SweepRow r;
        r.scheme = parse_scheme(f[0]);
        r.axis = f[1];
        r.value = to_number<double>(f[2], "value");
        r.seed = to_number<std::uint64_t>(f[3], "seed");
        r.power_dbm = to_number<double>(f[4], "power_dbm");
        r.evals = to_number<long long>(f[5], "evals");
        r.feasible = f[6] == "1";
        r.trace_file = f[7];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_trace_csv(std::span<const TraceRecord> trace)
{
    std::string s(kTraceHeader);
    s += '\n';
    for (const auto &t : trace)
        s += std::to_string(t.iteration) + ',' + std::to_string(t.residual_particles) + ',' +
             format_double(watts_to_dbm(t.best_fitness)) + ',' + format_double(t.penalty) + ',' +
             std::to_string(t.cumulative_evaluations) + '\n';
    return s;
}

namespace
{
using nlohmann::json;

json vec_json(const Vec3 &v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Vec3 json_vec(const json &j)
{
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}
} // namespace

std::string format_drop_json(const ScenarioDrop &drop)
{
    json j;
    j["seed"] = drop.seed;
    j["rician_factor"] = drop.channel.rician_factor;
    j["rayleigh_distance_m"] = drop.rayleigh_distance_m;
    j["all_users_in_near_field"] = drop.all_users_in_near_field;
    j["users"] = json::array();
    for (const auto &u : drop.channel.users)
    {
        json ju;
        ju["origin"] = vec_json(u.origin);
        json rot = json::array();
        for (int r = 0; r < 3; ++r)
            rot.push_back(json::array({u.rotation.matrix()(r, 0), u.rotation.matrix()(r, 1), u.rotation.matrix()(r, 2)}));
        ju["rotation"] = rot;
        ju["los_gain"] = u.los_gain;
        ju["scatterers"] = json::array();
        for (const auto &s : u.scatterers)
            ju["scatterers"].push_back({{"position", vec_json(s.position)},
                                        {"reflection", json::array({s.reflection.real(), s.reflection.imag()})},
                                        {"gain_bs", s.gain_bs},
                                        {"gain_user", s.gain_user}});
        j["users"].push_back(ju);
    }
    return j.dump(2) + "\n";
}

ScenarioDrop parse_drop_json(std::string_view text)
{
    const json j = json::parse(text);
    ScenarioDrop d;
    d.seed = j.at("seed").get<std::uint64_t>();
    d.channel.rician_factor = j.at("rician_factor").get<double>();
    d.rayleigh_distance_m = j.at("rayleigh_distance_m").get<double>();
    d.all_users_in_near_field = j.at("all_users_in_near_field").get<bool>();
    for (const auto &ju : j.at("users"))
    {
        UserDrop u;
        u.origin = json_vec(ju.at("origin"));
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m(r, c) = ju.at("rotation").at(r).at(c).get<double>();
        u.rotation = Rotation(m);
        u.los_gain = ju.at("los_gain").get<double>();
        for (const auto &js : ju.at("scatterers"))
        {
            ScattererPath s;
            s.position = json_vec(js.at("position"));
            s.reflection = {js.at("reflection").at(0).get<double>(), js.at("reflection").at(1).get<double>()};
            s.gain_bs = js.at("gain_bs").get<double>();
            s.gain_user = js.at("gain_user").get<double>();
            u.scatterers.push_back(s);
        }
        d.channel.users.push_back(std::move(u));
    }
    return d;
}

} // namespace nfma
