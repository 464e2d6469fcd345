// SPDX-License-Identifier: Apache-2.0
/*
Copyright (C) 2025 The Patrol Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patrol/config.hpp"
#include "patrol/errors.hpp"
#include "patrol/pipeline.hpp"
#include "patrol/report.hpp"
#include "patrol/scenario.hpp"
#include "patrol/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2; // policy, config, or trace contents
constexpr int kExitAborted = 3;  // pipeline gave up mid-run
constexpr int kExitIo = 4;       // file system trouble

struct common_options {
    std::string config_path;
    std::vector<std::string> policies;
    std::string mode;
    std::string sink;
};

void add_common(CLI::App* cmd, common_options& opts) {
    cmd->add_option("--config", opts.config_path,
                    "Engine config file (default: $PATROL_CONFIG if set)");
    cmd->add_option("--policies", opts.policies,
                    "Policy file, repeatable; overrides the config's list");
    cmd->add_option("--mode", opts.mode, "Pipeline mode: observe or inline")
        ->check(CLI::IsMember({"observe", "inline"}));
    cmd->add_option("--sink", opts.sink, "Alert sink JSONL path");
}

patrol::engine_config resolve_config(const common_options& opts) {
    patrol::engine_config cfg;
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(patrol::kConfigEnvVar)) {
            path = env;
        }
    }
    if (!path.empty()) {
        cfg = patrol::parse_config_file(path);
    }
    if (!opts.policies.empty()) {
        cfg.policy_paths = opts.policies;
    }
    if (!opts.mode.empty()) {
        cfg.mode = *patrol::pipeline_mode_from(opts.mode);
    }
    if (!opts.sink.empty()) {
        cfg.sink_path = opts.sink;
    }
    patrol::validate_config(cfg);
    return cfg;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw patrol::trace_error(patrol::trace_error::kind::io, 0,
                                  "cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << '\n';
}

patrol::alert_sinks make_sinks(const patrol::engine_config& cfg) {
    patrol::alert_sinks sinks;
    if (!cfg.sink_path.empty()) {
        sinks.add(std::make_shared<patrol::file_sink>(cfg.sink_path));
    }
    return sinks;
}

int run_replay(const common_options& common, const std::string& trace_path,
               bool timestamped, const std::string& out_path) {
    patrol::engine_config cfg = resolve_config(common);
    patrol::trace_data trace = patrol::load_trace_file(trace_path);
    std::vector<patrol::policy_rule> rules =
        patrol::parse_policy_files(cfg.policy_paths);
    patrol::policy_handle handle(patrol::compile_policy(std::move(rules), 1));
    patrol::alert_sinks sinks = make_sinks(cfg);

    patrol::run_options opts;
    opts.pace.timestamped = timestamped;
    patrol::run_result result =
        patrol::run_pipeline(trace, cfg, handle, opts, sinks);

    std::cout << patrol::render_summary_text(result.summary);
    if (!out_path.empty()) {
        write_json_file(patrol::summary_to_json(result.summary, true), out_path);
    }
    return result.summary.aborted ? kExitAborted : kExitOk;
}

int run_bench(const common_options& common, const std::string& trace_path,
              std::size_t events, std::uint64_t seed,
              const std::string& out_path) {
    patrol::engine_config cfg = resolve_config(common);
    patrol::trace_data trace = trace_path.empty()
                                   ? patrol::generate_bench_trace(events, seed)
                                   : patrol::load_trace_file(trace_path);
    std::vector<patrol::policy_rule> rules =
        patrol::parse_policy_files(cfg.policy_paths);
    patrol::policy_handle handle(patrol::compile_policy(std::move(rules), 1));
    patrol::alert_sinks sinks = make_sinks(cfg);

    patrol::run_result result =
        patrol::run_pipeline(trace, cfg, handle, patrol::run_options{}, sinks);

    const patrol::run_summary& s = result.summary;
    std::cout << "events:      " << s.events_processed << " processed, "
              << s.drop_count << " dropped\n";
    std::cout << "wall time:   " << s.wall_time_ns / 1000000 << " ms\n";
    std::cout << "throughput:  " << static_cast<std::uint64_t>(s.events_per_sec)
              << " events/sec\n";
    std::cout << "latency ns:  p50=" << s.latency.p50_ns
              << " p90=" << s.latency.p90_ns << " p99=" << s.latency.p99_ns
              << " max=" << s.latency.max_ns << "\n";
    if (!out_path.empty()) {
        write_json_file(patrol::summary_to_json(s, true), out_path);
    }
    return s.aborted ? kExitAborted : kExitOk;
}

int run_lint(const std::vector<std::string>& paths, const std::string& out_path) {
    std::vector<patrol::policy_rule> rules = patrol::parse_policy_files(paths);
    std::vector<patrol::lint_finding> findings = patrol::lint_rules(rules);

    bool has_error = false;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& f : findings) {
        has_error = has_error || f.severity == patrol::lint_severity::error;
        std::cout << patrol::to_string(f.severity) << " [" << f.code << "] "
                  << f.rule << ": " << f.message << " (line " << f.line
                  << ")\n";
        rows.push_back({{"severity", patrol::to_string(f.severity)},
                        {"code", f.code},
                        {"rule", f.rule},
                        {"message", f.message},
                        {"line", f.line}});
    }
    if (findings.empty()) {
        std::cout << "no findings across " << rules.size() << " rules\n";
    }
    if (!out_path.empty()) {
        nlohmann::json j;
        j["findings"] = std::move(rows);
        j["rule_count"] = rules.size();
        write_json_file(j, out_path);
    }
    return has_error ? kExitBadInput : kExitOk;
}

int run_gen(const std::string& scenario, std::size_t bench_events,
            std::uint64_t seed, const std::string& out_path) {
    patrol::trace_data trace;
    if (!scenario.empty()) {
        auto kind = patrol::scenario_from(scenario);
        if (!kind) {
            std::cerr << "unknown scenario '" << scenario << "'\n";
            return kExitBadInput;
        }
        trace = patrol::generate_scenario(*kind, seed);
    } else {
        trace = patrol::generate_bench_trace(bench_events, seed);
    }
    patrol::save_trace_file(trace, out_path);
    std::cout << "wrote " << trace.events.size() << " events ("
              << trace.labels.size() << " labeled) to " << out_path << "\n";
    return kExitOk;
}

int run_report(const common_options& common, std::uint64_t seed,
               const std::string& out_path) {
    patrol::engine_config cfg = resolve_config(common);
    std::vector<patrol::policy_rule> rules =
        patrol::parse_policy_files(cfg.policy_paths);
    patrol::detection_matrix matrix =
        patrol::run_matrix(cfg, std::move(rules), seed);
    std::cout << patrol::render_matrix_text(matrix);
    if (!out_path.empty()) {
        write_json_file(patrol::matrix_to_json(matrix), out_path);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"patrol: syscall policy replay and analysis"};
    app.require_subcommand(1);

    common_options replay_common, bench_common, report_common;
    std::string replay_trace, replay_out;
    bool replay_timestamped = false;
    CLI::App* replay = app.add_subcommand("replay", "Run a trace through the pipeline");
    add_common(replay, replay_common);
    replay->add_option("--trace", replay_trace, "Trace JSONL file")->required();
    replay->add_flag("--timestamped", replay_timestamped,
                     "Pace pushes by recorded timestamps");
    replay->add_option("--out", replay_out, "Write the run summary JSON here");

    std::string bench_trace, bench_out;
    std::size_t bench_events = 100000;
    std::uint64_t bench_seed = 42;
    CLI::App* bench = app.add_subcommand("bench", "Measure pipeline throughput");
    add_common(bench, bench_common);
    bench->add_option("--trace", bench_trace, "Trace file (default: generated)");
    bench->add_option("--events", bench_events, "Generated trace size");
    bench->add_option("--seed", bench_seed, "Generator seed");
    bench->add_option("--out", bench_out, "Write the bench summary JSON here");

    std::vector<std::string> lint_policies;
    std::string lint_out;
    CLI::App* lint = app.add_subcommand("lint", "Check policy files");
    lint->add_option("--policies", lint_policies, "Policy file, repeatable")
        ->required();
    lint->add_option("--out", lint_out, "Write findings JSON here");

    std::string gen_scenario, gen_out;
    std::size_t gen_events = 100000;
    std::uint64_t gen_seed = 42;
    CLI::App* gen = app.add_subcommand("gen", "Generate a trace file");
    gen->add_option("--scenario", gen_scenario,
                    "Scenario name (omit for a bench trace)");
    gen->add_option("--bench-events", gen_events, "Bench trace size");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("-o,--out", gen_out, "Output trace path")->required();

    std::uint64_t report_seed = 42;
    std::string report_out;
    CLI::App* report = app.add_subcommand("report", "Run the evaluation matrix");
    add_common(report, report_common);
    report->add_option("--seed", report_seed, "Scenario seed");
    report->add_option("--out", report_out, "Write the matrix JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the usage message
        return kExitBadInput;
    }

    try {
        if (replay->parsed()) {
            return run_replay(replay_common, replay_trace, replay_timestamped,
                              replay_out);
        }
        if (bench->parsed()) {
            return run_bench(bench_common, bench_trace, bench_events,
                             bench_seed, bench_out);
        }
        if (lint->parsed()) {
            return run_lint(lint_policies, lint_out);
        }
        if (gen->parsed()) {
            return run_gen(gen_scenario, gen_events, gen_seed, gen_out);
        }
        if (report->parsed()) {
            return run_report(report_common, report_seed, report_out);
        }
    } catch (const patrol::policy_error& e) {
        if (e.error_kind() == patrol::policy_error::kind::io) {
            std::cerr << "i/o error: " << e.what() << "\n";
            return kExitIo;
        }
        std::cerr << "policy error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const patrol::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const patrol::trace_error& e) {
        if (e.error_kind() == patrol::trace_error::kind::io) {
            std::cerr << "i/o error: " << e.what() << "\n";
            return kExitIo;
        }
        std::cerr << "trace error (line " << e.line() << "): " << e.what()
                  << "\n";
        return kExitBadInput;
    } catch (const patrol::pipeline_error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return kExitAborted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
