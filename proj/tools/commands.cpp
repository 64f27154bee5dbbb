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

#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "nfma/harness.hpp"
#include "nfma/oracle/validation.hpp"
#include "nfma/result_io.hpp"
#include "nfma/scenario_io.hpp"

namespace nfma::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

// Input problems that are not scenario keys (flags, manifests).
struct InputError : std::runtime_error
{
    InputError(const std::string &key, const std::string &msg) : std::runtime_error(msg), key(key) {}
    std::string key;
};

std::string default_out()
{
    if (const char *env = std::getenv("NFMA_OUT_DIR"); env && *env)
        return env;
    return "nfma_out";
}

Scenario load(const std::string &path, std::optional<std::uint64_t> seed)
{
    Scenario s = path.empty() ? Scenario{} : load_scenario(path);
    if (seed)
        s.seed = *seed;
    return s;
}

SchemeKind scheme_arg(const std::string &name)
{
    try
    {
        return parse_scheme(name);
    }
    catch (const std::invalid_argument &e)
    {
        throw InputError("scheme", e.what());
    }
}

void write_trace(const fs::path &dir, const SweepRow &row, const ExperimentResult &result)
{
    write_file_atomic(dir / row.trace_file, format_trace_csv(result.trace));
}

std::string cell_file(const SweepCell &c, std::string_view axis)
{
    // Same stem as the trace file, under cells/.
    auto name = trace_file_name(c.scheme, axis, c.value, c.seed);
    return "cells/" + name.substr(name.find('/') + 1);
}

// Runs `body` and maps exceptions onto the exit-code contract.
template <class Fn> int guarded(std::ostream &err, Fn &&body)
{
    try
    {
        return body();
    }
    catch (const ScenarioError &e)
    {
        err << "error: scenario key '" << e.key() << "': " << e.what() << "\n";
        return kExitInput;
    }
    catch (const InputError &e)
    {
        err << "error: " << e.key << ": " << e.what() << "\n";
        return kExitInput;
    }
    catch (const std::invalid_argument &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

int do_run(const Scenario &scenario, SchemeKind scheme, unsigned threads, const fs::path &dir, std::ostream &out)
{
    const ScenarioDrop drop = drop_scenario(scenario, scenario.seed);
    SwarmConfig cfg = scenario.swarm;
    cfg.threads = threads;
    const ExperimentResult r = run_scheme(scheme, scenario, cfg, drop);
    const SweepRow row = make_row(r, "none", 0.0);

    write_file_atomic(dir / "scenario.txt", format_scenario(scenario));
    write_file_atomic(dir / "drop.json", format_drop_json(drop));
    write_trace(dir, row, r);
    write_file_atomic(dir / "result.csv", format_results_csv(std::span(&row, 1)));
    write_file_atomic(dir / "manifest.json",
                      json{{"command", "run"}, {"scheme", to_string(scheme)}, {"seed", scenario.seed}}.dump(2) + "\n");

    out << "status=" << (r.feasible ? "ok" : "infeasible") << " scheme=" << to_string(scheme)
        << " seed=" << scenario.seed << " power_dbm=" << format_double(r.power_dbm) << " evals=" << r.evaluations
        << " out=" << dir.string();
    if (!r.feasible)
        out << " reason=\"" << r.diagnostic << "\"";
    out << "\n";
    return r.feasible ? kExitOk : kExitFailure;
}

int do_sweep(const Scenario &scenario, SweepAxis axis, const std::vector<double> &values,
             const std::vector<SchemeKind> &schemes, int seeds, unsigned threads, const fs::path &dir,
             std::ostream &out, std::ostream &err)
{
    const std::string axis_name(to_string(axis));
    json manifest{{"command", "sweep"}, {"axis", axis_name}, {"values", values}, {"seeds", seeds}};
    manifest["schemes"] = json::array();
    for (auto s : schemes)
        manifest["schemes"].push_back(to_string(s));
    const std::string scenario_text = format_scenario(scenario);
    // Completed cells are only reusable for the scenario that produced them.
    if (fs::exists(dir / "scenario.txt") && read_file(dir / "scenario.txt") != scenario_text)
        throw InputError("out", dir.string() + " holds a sweep of a different scenario");
    write_file_atomic(dir / "scenario.txt", scenario_text);
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

    const std::size_t total = values.size() * schemes.size() * static_cast<std::size_t>(seeds);
    std::size_t done = 0;
    std::mutex progress_mutex;

    SweepOptions opts;
    opts.threads = threads;
    opts.lookup = [&](const SweepCell &c) -> std::optional<SweepRow> {
        const fs::path cell = dir / cell_file(c, axis_name);
        if (!fs::exists(cell))
            return std::nullopt;
        const auto rows = parse_results_csv(read_file(cell));
        if (rows.size() != 1 || !fs::exists(dir / rows.front().trace_file))
            return std::nullopt;
        std::lock_guard lock(progress_mutex);
        ++done;
        err << "[" << done << "/" << total << "] " << to_string(c.scheme) << " " << axis_name << "="
            << format_double(c.value) << " seed=" << c.seed << " (resumed)\n";
        return rows.front();
    };
    opts.on_complete = [&](const SweepRow &row, const ExperimentResult &r) {
        write_trace(dir, row, r);
        write_file_atomic(dir / cell_file({row.scheme, row.value, row.seed}, axis_name),
                          format_results_csv(std::span(&row, 1)));
        std::lock_guard lock(progress_mutex);
        ++done;
        err << "[" << done << "/" << total << "] " << to_string(row.scheme) << " " << axis_name << "="
            << format_double(row.value) << " seed=" << row.seed << " power_dbm=" << format_double(row.power_dbm)
            << (row.feasible ? "" : " infeasible") << "\n";
    };

    const auto rows = sweep(scenario, axis, values, schemes, seeds, opts);
    write_file_atomic(dir / "results.csv", format_results_csv(rows));

    std::string summary = "scheme,axis,value,mean_power_dbm,ci95_dbm,samples\n";
    for (const auto &[key, m] : paired_means(rows))
        summary += std::string(to_string(key.first)) + ',' + axis_name + ',' + format_double(key.second) + ',' +
                   format_double(m.mean_dbm) + ',' + format_double(m.ci95_dbm) + ',' + std::to_string(m.samples) +
                   '\n';
    write_file_atomic(dir / "summary.csv", summary);

    std::size_t infeasible = 0;
    for (const auto &r : rows)
        infeasible += r.feasible ? 0 : 1;
    out << "status=ok axis=" << axis_name << " rows=" << rows.size() << " infeasible=" << infeasible
        << " out=" << dir.string() << "\n";
    return kExitOk;
}

std::vector<SchemeKind> schemes_arg(const std::vector<std::string> &names)
{
    if (names.empty())
        return all_schemes();
    std::vector<SchemeKind> out;
    for (const auto &n : names)
        out.push_back(scheme_arg(n));
    return out;
}

} // namespace

int run_command(const RunArgs &args, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const Scenario scenario = load(args.scenario, args.seed);
        const SchemeKind scheme = scheme_arg(args.scheme);
        return do_run(scenario, scheme, args.threads, args.out.empty() ? default_out() : args.out, out);
    });
}

int sweep_command(const SweepArgs &args, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const Scenario scenario = load(args.scenario, args.seed);
        SweepAxis axis;
        try
        {
            axis = parse_axis(args.axis);
        }
        catch (const std::invalid_argument &e)
        {
            throw InputError("axis", e.what());
        }
        if (args.values.empty())
            throw InputError("values", "at least one value is required");
        if (args.seeds < 1)
            throw InputError("seeds", "must be >= 1");
        for (double v : args.values)
        {
            try
            {
                (void)apply_axis(scenario, axis, v);
            }
            catch (const std::invalid_argument &e)
            {
                throw InputError("values", e.what());
            }
        }
        return do_sweep(scenario, axis, args.values, schemes_arg(args.schemes), args.seeds, args.threads,
                        args.out.empty() ? default_out() : args.out, out, err);
    });
}

int validate_command(const ValidateArgs &args, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        std::vector<oracle::ValidationReport> reports;
        const auto &s = args.suite;
        if (s != "all" && s != "channel" && s != "beamforming" && s != "optimizer")
            throw InputError("suite", "unknown suite '" + s + "' (channel|beamforming|optimizer|all)");
        if (s == "all" || s == "channel")
            reports.push_back(oracle::validate_channel(args.seed));
        if (s == "all" || s == "beamforming")
            reports.push_back(oracle::validate_beamforming(args.seed));
        if (s == "all" || s == "optimizer")
            reports.push_back(oracle::validate_optimizer(args.seed));

        bool ok = true;
        for (const auto &r : reports)
            for (const auto &c : r.checks)
            {
                out << (c.passed ? "PASS " : "FAIL ") << r.suite << ": " << c.name << " (" << c.detail << ")\n";
                ok = ok && c.passed;
            }
        out << "status=" << (ok ? "ok" : "failed") << " suite=" << s << "\n";
        return ok ? kExitOk : kExitFailure;
    });
}

int replay_command(const ReplayArgs &args, std::ostream &out, std::ostream &err)
{
    return guarded(err, [&] {
        const fs::path from = args.from;
        const fs::path dir = args.out.empty() ? default_out() : args.out;
        if (fs::weakly_canonical(from) == fs::weakly_canonical(dir))
            throw InputError("out", "replay target must differ from the source directory");
        json manifest;
        try
        {
            manifest = json::parse(read_file(from / "manifest.json"));
        }
        catch (const std::exception &e)
        {
            throw InputError("from", std::string("unreadable manifest: ") + e.what());
        }
        const Scenario scenario = load_scenario(from / "scenario.txt");
        const std::string command = manifest.value("command", "");

        if (command == "run")
        {
            const SchemeKind scheme = scheme_arg(manifest.at("scheme").get<std::string>());
            Scenario s = scenario;
            s.seed = manifest.at("seed").get<std::uint64_t>();
            const std::string stored = read_file(from / "drop.json");
            if (stored != format_drop_json(drop_scenario(s, s.seed)))
            {
                err << "error: regenerated drop differs from " << (from / "drop.json").string() << "\n";
                return static_cast<int>(kExitFailure);
            }
            return do_run(s, scheme, args.threads, dir, out);
        }
        if (command == "sweep")
        {
            std::vector<std::string> names = manifest.at("schemes").get<std::vector<std::string>>();
            return do_sweep(scenario, parse_axis(manifest.at("axis").get<std::string>()),
                            manifest.at("values").get<std::vector<double>>(), schemes_arg(names),
                            manifest.at("seeds").get<int>(), args.threads, dir, out, err);
        }
        throw InputError("from", "manifest has unknown command '" + command + "'");
    });
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Movable-antenna placement and beamforming simulator", "nfma"};
    app.require_subcommand(1);

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Optimise one scenario with one scheme");
    run_cmd->add_option("--scenario", run.scenario, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
    run_cmd->add_option("--scheme", run.scheme, "proposed | ma-pso | ma-bs | fpa")->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "Drop seed (overrides the scenario)");
    run_cmd->add_option("--out", run.out, "Output directory (default $NFMA_OUT_DIR or ./nfma_out)");
    run_cmd->add_option("--threads", run.threads, "Fitness workers, 0 = all cores")->capture_default_str();

    SweepArgs sw;
    auto *sweep_cmd = app.add_subcommand("sweep", "Sweep one scenario axis over schemes and seeds");
    sweep_cmd->add_option("--scenario", sw.scenario, "Scenario file")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--axis", sw.axis, "region_size | user_count | rate_target | distance")->required();
    sweep_cmd->add_option("--values", sw.values, "Comma-separated axis values")->required()->delimiter(',');
    sweep_cmd->add_option("--schemes", sw.schemes, "Comma-separated schemes (default: all)")->delimiter(',');
    sweep_cmd->add_option("--seeds", sw.seeds, "Number of drops per value")->capture_default_str();
    sweep_cmd->add_option("--seed", sw.seed, "First drop seed (overrides the scenario)");
    sweep_cmd->add_option("--out", sw.out, "Output directory");
    sweep_cmd->add_option("--threads", sw.threads, "Concurrent cells, 0 = all cores")->capture_default_str();

    ValidateArgs val;
    auto *val_cmd = app.add_subcommand("validate", "Run the oracle and invariant suites");
    val_cmd->add_option("--suite", val.suite, "channel | beamforming | optimizer | all")->capture_default_str();
    val_cmd->add_option("--seed", val.seed, "Seed for the random instances")->capture_default_str();

    ReplayArgs rep;
    auto *rep_cmd = app.add_subcommand("replay", "Re-run a stored run or sweep from its seed record");
    rep_cmd->add_option("--from", rep.from, "Directory written by run or sweep")->required()->check(
        CLI::ExistingDirectory);
    rep_cmd->add_option("--out", rep.out, "Output directory");
    rep_cmd->add_option("--threads", rep.threads, "Workers, 0 = all cores")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (*run_cmd)
        return run_command(run, out, err);
    if (*sweep_cmd)
        return sweep_command(sw, out, err);
    if (*val_cmd)
        return validate_command(val, out, err);
    return replay_command(rep, out, err);
}

} // namespace nfma::cli
