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

#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "nfma/result_io.hpp"

using namespace nfma;
namespace fs = std::filesystem;

namespace
{
struct CliRun
{
    int code = -1;
    std::string out;
    std::string err;
};

CliRun invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "nfma");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = nfma::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path fresh_dir(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("nfma_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path small_scenario(const fs::path &dir)
{
    const fs::path f = dir / "small.txt";
    write_file_atomic(f, "num_tx = 3\nnum_users = 2\nnum_scatterers = 2\nrate_target_bps_hz = 1\n"
                         "particles = 6\niterations = 5\n");
    return f;
}

std::vector<double> trace_column(const std::string &text, std::size_t col)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<double> out;
    while (std::getline(in, line))
    {
        std::size_t start = 0;
        for (std::size_t c = 0; c < col; ++c)
            start = line.find(',', start) + 1;
        out.push_back(std::stod(line.substr(start, line.find(',', start) - start)));
    }
    return out;
}
} // namespace

TEST_CASE("run writes a monotone trace and a result row")
{
    const auto dir = fresh_dir("run");
    const auto scen = small_scenario(dir);
    const auto r = invoke({"run", "--scenario", scen.string(), "--scheme", "proposed", "--seed", "3", "--out",
                        (dir / "o").string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("status=ok") != std::string::npos);
    const auto rows = parse_results_csv(read_file(dir / "o" / "result.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].feasible);
    const auto best = trace_column(read_file(dir / "o" / rows[0].trace_file), 2);
    REQUIRE(best.size() == 6);
    for (std::size_t i = 1; i < best.size(); ++i)
        CHECK(best[i] <= best[i - 1]);
    CHECK(best.back() == doctest::Approx(rows[0].power_dbm).epsilon(1e-12));
    CHECK(fs::exists(dir / "o" / "drop.json"));
    CHECK(fs::exists(dir / "o" / "manifest.json"));
}

TEST_CASE("fixed-position baseline costs one evaluation")
{
    const auto dir = fresh_dir("fpa");
    const auto r =
        invoke({"run", "--scenario", small_scenario(dir).string(), "--scheme", "fpa", "--out", (dir / "o").string()});
    REQUIRE(r.code == 0);
    const auto rows = parse_results_csv(read_file(dir / "o" / "result.csv"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].evals == 1);
}

TEST_CASE("malformed input exits 2 and names the key")
{
    const auto dir = fresh_dir("bad");
    write_file_atomic(dir / "bad.txt", "num_tx = 3\nnum_tx_antennas = 4\n");
    const auto r = invoke({"run", "--scenario", (dir / "bad.txt").string(), "--out", (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("num_tx_antennas") != std::string::npos);

    const auto scheme = invoke({"run", "--scenario", small_scenario(dir).string(), "--scheme", "nope", "--out",
                             (dir / "o").string()});
    CHECK(scheme.code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({"validate", "--suite", "everything"}).code == 2);
    CHECK(invoke({"sweep", "--scenario", small_scenario(dir).string(), "--axis", "snr", "--values", "1", "--out",
               (dir / "s").string()})
              .code == 2);
}

TEST_CASE("replay reproduces a run byte for byte")
{
    const auto dir = fresh_dir("replay");
    const auto scen = small_scenario(dir);
    REQUIRE(invoke({"run", "--scenario", scen.string(), "--seed", "5", "--out", (dir / "a").string()}).code == 0);
    const auto r = invoke({"replay", "--from", (dir / "a").string(), "--out", (dir / "b").string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(read_file(dir / "a" / "result.csv") == read_file(dir / "b" / "result.csv"));
    const auto rows = parse_results_csv(read_file(dir / "a" / "result.csv"));
    CHECK(read_file(dir / "a" / rows[0].trace_file) == read_file(dir / "b" / rows[0].trace_file));
    CHECK(read_file(dir / "a" / "drop.json") == read_file(dir / "b" / "drop.json"));
    CHECK(invoke({"replay", "--from", (dir / "a").string(), "--out", (dir / "a").string()}).code == 2);
}

TEST_CASE("sweep output, resume and replay")
{
    const auto dir = fresh_dir("sweep");
    const auto scen = small_scenario(dir);
    const auto out = dir / "s";
    const std::vector<std::string> args{"sweep",  "--scenario", scen.string(),      "--axis", "rate_target",
                                        "--values", "1,3,5",    "--schemes",        "proposed,fpa",
                                        "--seeds", "2",         "--out",            out.string()};
    const auto first = invoke(args);
    INFO(first.err);
    REQUIRE(first.code == 0);
    const std::string results = read_file(out / "results.csv");
    CHECK(parse_results_csv(results).size() == 3 * 2 * 2);
    const std::string summary = read_file(out / "summary.csv");
    CHECK(summary.rfind("scheme,axis,value,mean_power_dbm,ci95_dbm,samples", 0) == 0);

    fs::remove(out / "results.csv");
    const auto again = invoke(args);
    REQUIRE(again.code == 0);
    CHECK(read_file(out / "results.csv") == results);
    CHECK(read_file(out / "summary.csv") == summary);

    // A different scenario must not reuse these cells.
    write_file_atomic(dir / "other.txt", "num_tx = 3\nnum_users = 2\nnum_scatterers = 3\nrate_target_bps_hz = 1\n"
                                         "particles = 6\niterations = 5\n");
    auto other = args;
    other[2] = (dir / "other.txt").string();
    CHECK(invoke(other).code == 2);

    const auto rep = invoke({"replay", "--from", out.string(), "--out", (dir / "r").string()});
    REQUIRE(rep.code == 0);
    CHECK(read_file(dir / "r" / "results.csv") == results);
}

TEST_CASE("validate runs a single suite")
{
    const auto r = invoke({"validate", "--suite", "channel"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS channel") != std::string::npos);
    CHECK(r.out.find("status=ok") != std::string::npos);
}
