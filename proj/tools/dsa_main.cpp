// dsa_main.cpp — command-line front end: simulate, serve, replay, analyze,
// print-strategy.
//
// Config precedence everywhere: built-in defaults < --config file (one
// canonical config line) < environment (DSA_BIND) < flags. Standard output
// carries only the requested artifact; diagnostics go to standard error.
// Exit codes: 0 success, 2 usage/config error, 1 runtime failure.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dsa/codec.hpp"
#include "dsa/evaluation.hpp"
#include "dsa/server.hpp"
#include "dsa/strategy.hpp"
#include "dsa/telemetry.hpp"
#include "dsa/user_sim.hpp"
#include "dsa/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

// Session-config flags shared by simulate and serve.
struct ConfigFlags {
    std::string config_path;
    dsa::SessionConfig values;  // flag targets; only *set* flags override
    CLI::Option* window_ms = nullptr;
    CLI::Option* threshold = nullptr;
    CLI::Option* duration_ms = nullptr;
    CLI::Option* strategy = nullptr;
    CLI::Option* initial_color = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* base_attention = nullptr;
    CLI::Option* red_drift = nullptr;
    CLI::Option* red_noise_sd = nullptr;
    CLI::Option* blue_reversion = nullptr;
    CLI::Option* blue_noise_sd = nullptr;
    CLI::Option* fatigue_drift = nullptr;
    CLI::Option* skill_slope = nullptr;
    CLI::Option* skill_offset = nullptr;
    CLI::Option* notes_per_window = nullptr;
    CLI::Option* points_per_note = nullptr;
    std::string initial_color_text = "Blue";
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.config_path,
                    "config file holding one canonical session-config line");
    f.window_ms = cmd->add_option("--window-ms", f.values.window_ms, "window size in ms");
    f.threshold = cmd->add_option("--attention-threshold", f.values.attention_threshold,
                                  "High/Low attention threshold in (0,1)");
    f.duration_ms =
        cmd->add_option("--duration-ms", f.values.duration_ms, "session length in ms");
    f.strategy = cmd->add_option("--strategy", f.values.strategy_id,
                                 "strategy id (table1, control-fixed)");
    f.initial_color = cmd->add_option("--initial-color", f.initial_color_text,
                                      "starting scene color (Red or Blue)");
    f.seed = cmd->add_option("--seed", f.values.seed, "simulation seed");
    f.base_attention =
        cmd->add_option("--base-attention", f.values.user_model.base_attention, "");
    f.red_drift = cmd->add_option("--red-drift", f.values.user_model.red_drift, "");
    f.red_noise_sd = cmd->add_option("--red-noise-sd", f.values.user_model.red_noise_sd, "");
    f.blue_reversion =
        cmd->add_option("--blue-reversion", f.values.user_model.blue_reversion, "");
    f.blue_noise_sd =
        cmd->add_option("--blue-noise-sd", f.values.user_model.blue_noise_sd, "");
    f.fatigue_drift =
        cmd->add_option("--fatigue-drift", f.values.user_model.fatigue_drift, "");
    f.skill_slope = cmd->add_option("--skill-slope", f.values.user_model.skill_slope, "");
    f.skill_offset = cmd->add_option("--skill-offset", f.values.user_model.skill_offset, "");
    f.notes_per_window =
        cmd->add_option("--notes-per-window", f.values.user_model.notes_per_window, "");
    f.points_per_note =
        cmd->add_option("--points-per-note", f.values.user_model.points_per_note, "");
}

dsa::SessionConfig effective_config(const ConfigFlags& f) {
    dsa::SessionConfig config;  // built-in defaults
    if (!f.config_path.empty())
        config = dsa::codec::decode_session_config(dsa::codec::read_file(f.config_path));

    auto set = [](CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
    if (set(f.window_ms)) config.window_ms = f.values.window_ms;
    if (set(f.threshold)) config.attention_threshold = f.values.attention_threshold;
    if (set(f.duration_ms)) config.duration_ms = f.values.duration_ms;
    if (set(f.strategy)) config.strategy_id = f.values.strategy_id;
    if (set(f.initial_color)) {
        const auto color = dsa::color_from_string(f.initial_color_text);
        if (!color)
            throw dsa::Error(dsa::Errc::InvalidConfig,
                             "--initial-color must be Red or Blue");
        config.initial_color = *color;
    }
    if (set(f.seed)) config.seed = f.values.seed;
    if (set(f.base_attention)) config.user_model.base_attention = f.values.user_model.base_attention;
    if (set(f.red_drift)) config.user_model.red_drift = f.values.user_model.red_drift;
    if (set(f.red_noise_sd)) config.user_model.red_noise_sd = f.values.user_model.red_noise_sd;
    if (set(f.blue_reversion)) config.user_model.blue_reversion = f.values.user_model.blue_reversion;
    if (set(f.blue_noise_sd)) config.user_model.blue_noise_sd = f.values.user_model.blue_noise_sd;
    if (set(f.fatigue_drift)) config.user_model.fatigue_drift = f.values.user_model.fatigue_drift;
    if (set(f.skill_slope)) config.user_model.skill_slope = f.values.user_model.skill_slope;
    if (set(f.skill_offset)) config.user_model.skill_offset = f.values.user_model.skill_offset;
    if (set(f.notes_per_window))
        config.user_model.notes_per_window = f.values.user_model.notes_per_window;
    if (set(f.points_per_note))
        config.user_model.points_per_note = f.values.user_model.points_per_note;
    return config;
}

int report_config_issues(const std::vector<dsa::ConfigIssue>& issues) {
    for (const dsa::ConfigIssue& issue : issues)
        std::cerr << "dsa: " << dsa::to_string(issue.code) << ": " << issue.message << '\n';
    return kExitUsage;
}

int cmd_simulate(const ConfigFlags& flags, std::string out_path) {
    const dsa::SessionConfig config = effective_config(flags);
    const auto issues = dsa::validate_config(config);
    if (!issues.empty()) return report_config_issues(issues);

    const dsa::SessionLog log = dsa::run_session(config);
    if (out_path.empty()) {
        out_path = "dsa-session-" + std::to_string(config.seed) + "-" +
                   config.strategy_id + ".jsonl";
    }
    dsa::codec::write_file(out_path, dsa::codec::encode(log));
    std::cerr << "dsa: wrote " << out_path << '\n';
    std::cout << dsa::codec::encode(log.summary) << '\n';
    return kExitOk;
}

int cmd_replay(const std::string& log_path, const std::string& strategy_id) {
    const dsa::Transcript transcript =
        dsa::decode_transcript_text(dsa::codec::read_file(log_path));
    const std::string strategy =
        strategy_id.empty() ? transcript.config.strategy_id : strategy_id;
    if (!dsa::StrategyRegistry::builtins().contains(strategy))
        throw dsa::Error(dsa::Errc::UnknownStrategy,
                         "no strategy registered under id \"" + strategy + "\"");

    dsa::SessionConfig echoed = transcript.config;
    echoed.strategy_id = strategy;
    std::cout << dsa::make_start(echoed, transcript.rng_family).encode() << '\n';
    for (const dsa::SceneCommand& command :
         dsa::replay(transcript.attention_events, transcript.score_events,
                     transcript.config, strategy)) {
        std::cout << dsa::make_command(command).encode() << '\n';
    }
    return kExitOk;
}

void print_report_table(const dsa::PairedReport& r, std::ostream& out) {
    char line[160];
    out << "+----------+------------+------------+\n"
        << "| arm      |       mean |         sd |\n"
        << "+----------+------------+------------+\n";
    std::snprintf(line, sizeof(line), "| dsa-on   | %10.5f | %10.5f |\n", r.mean_on, r.sd_on);
    out << line;
    std::snprintf(line, sizeof(line), "| dsa-off  | %10.5f | %10.5f |\n", r.mean_off,
                  r.sd_off);
    out << line;
    out << "+----------+------------+------------+\n";
    std::snprintf(line, sizeof(line),
                  "n_pairs=%lld df=%lld mean_diff=%.5f t_stat=%.5f improved_fraction=%.3f\n",
                  static_cast<long long>(r.n_pairs), static_cast<long long>(r.df),
                  r.mean_diff, r.t_stat, r.improved_fraction);
    out << line;
}

int cmd_analyze(std::vector<std::string> on_paths, std::vector<std::string> off_paths,
                const std::string& manifest_path, bool json_stdout,
                const std::string& out_path) {
    if (!manifest_path.empty()) {
        // Manifest lines: {"on":"path","off":"path"}
        on_paths.clear();
        off_paths.clear();
        std::istringstream in{dsa::codec::read_file(manifest_path)};
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const dsa::codec::Json j = dsa::codec::parse_object(line);
            if (!j.contains("on") || !j.contains("off"))
                throw dsa::Error(dsa::Errc::MalformedLine,
                                 "manifest lines need \"on\" and \"off\" fields");
            on_paths.push_back(j["on"].get<std::string>());
            off_paths.push_back(j["off"].get<std::string>());
        }
    } else {
        // Pairing is by sorted filename order.
        std::sort(on_paths.begin(), on_paths.end());
        std::sort(off_paths.begin(), off_paths.end());
    }
    if (on_paths.size() != off_paths.size())
        throw dsa::Error(dsa::Errc::LengthMismatch,
                         std::to_string(on_paths.size()) + " on-logs vs " +
                             std::to_string(off_paths.size()) + " off-logs");

    std::vector<double> on_scores, off_scores;
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < on_paths.size(); ++i) {
        const dsa::SessionLog on_log =
            dsa::codec::decode_session_log_text(dsa::codec::read_file(on_paths[i]));
        const dsa::SessionLog off_log =
            dsa::codec::decode_session_log_text(dsa::codec::read_file(off_paths[i]));
        on_scores.push_back(dsa::overall_performance(on_log));
        off_scores.push_back(dsa::overall_performance(off_log));
        seeds.push_back(on_log.config.seed);
    }

    const dsa::PairedReport report = dsa::paired_stats(on_scores, off_scores, seeds);
    if (json_stdout)
        std::cout << dsa::codec::encode(report) << '\n';
    else
        print_report_table(report, std::cout);
    if (!out_path.empty())
        dsa::codec::write_file(out_path, dsa::codec::encode(report) + "\n");
    return kExitOk;
}

int cmd_print_strategy(const std::string& id) {
    if (id == "table1") {
        for (const dsa::StrategyTableRow& row : dsa::table1_rows()) {
            dsa::codec::Json j;
            j["row"] = row.row;
            j["performance"] = row.performance;
            j["attention"] = row.attention;
            j["color"] = row.color;
            j["reason"] = dsa::to_string(row.reason);
            std::cout << j.dump() << '\n';
        }
        return kExitOk;
    }
    if (id == "control-fixed") {
        dsa::codec::Json j;
        j["row"] = 1;
        j["performance"] = "any";
        j["attention"] = "any";
        j["color"] = "Initial";
        j["reason"] = dsa::to_string(dsa::CommandReason::ControlFixed);
        std::cout << j.dump() << '\n';
        return kExitOk;
    }
    std::cerr << "dsa: " << dsa::to_string(dsa::Errc::UnknownStrategy)
              << ": no printable table for \"" << id << "\"\n";
    return kExitUsage;
}

int cmd_serve(const ConfigFlags& flags, std::string bind_flag, bool bind_flag_set,
              const std::string& log_dir) {
    dsa::ServerConfig server_config;
    server_config.session_defaults = effective_config(flags);
    const auto issues = dsa::validate_config(server_config.session_defaults);
    if (!issues.empty()) return report_config_issues(issues);

    // Flag beats DSA_BIND beats the built-in default.
    if (const char* env = std::getenv("DSA_BIND"); env != nullptr && *env != '\0')
        server_config.bind_address = env;
    if (bind_flag_set) server_config.bind_address = std::move(bind_flag);
    server_config.log_dir = log_dir;

    dsa::TelemetryServer server(server_config);
    server.start();
    std::cerr << "dsa: listening on "
              << dsa::parse_bind_address(server_config.bind_address).first << ':'
              << server.port() << ", logs in "
              << (log_dir.empty() ? "(disabled)" : log_dir) << '\n';

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop)
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::cerr << "dsa: shutting down\n";
    server.stop();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic scene adjustment engine: closed-loop simulation, "
                 "telemetry server, and paired evaluation"};
    app.require_subcommand(1);

    ConfigFlags sim_flags;
    std::string sim_out;
    CLI::App* simulate = app.add_subcommand("simulate", "run one simulated session");
    add_config_flags(simulate, sim_flags);
    simulate->add_option("--out", sim_out, "log file path");

    std::string replay_path, replay_strategy;
    CLI::App* replay_cmd =
        app.add_subcommand("replay", "re-run a recorded event stream through a strategy");
    replay_cmd->add_option("log", replay_path, "session log or transcript file")->required();
    replay_cmd->add_option("--strategy", replay_strategy,
                           "strategy override (default: the one recorded in the log)");

    std::vector<std::string> analyze_on, analyze_off;
    std::string analyze_manifest, analyze_out;
    bool analyze_json = false;
    CLI::App* analyze = app.add_subcommand("analyze", "paired statistics over log files");
    analyze->add_option("--on", analyze_on, "DSA-on log files");
    analyze->add_option("--off", analyze_off, "DSA-off log files");
    analyze->add_option("--manifest", analyze_manifest,
                        "pairing manifest (lines of {\"on\":...,\"off\":...})");
    analyze->add_flag("--json", analyze_json, "print the canonical report line, not the table");
    analyze->add_option("--out", analyze_out, "also write the canonical report line here");

    std::string print_id;
    CLI::App* print_strategy =
        app.add_subcommand("print-strategy", "emit a strategy's decision table");
    print_strategy->add_option("strategy", print_id, "strategy id")->required();

    ConfigFlags serve_flags;
    std::string serve_bind = "127.0.0.1:7070";
    std::string serve_log_dir = "dsa-logs";
    CLI::App* serve = app.add_subcommand("serve", "run the telemetry session server");
    add_config_flags(serve, serve_flags);
    CLI::Option* bind_opt =
        serve->add_option("--bind", serve_bind, "host:port (overrides DSA_BIND)");
    serve->add_option("--log-dir", serve_log_dir, "completed-session log directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags, sim_out);
        if (replay_cmd->parsed()) return cmd_replay(replay_path, replay_strategy);
        if (analyze->parsed())
            return cmd_analyze(analyze_on, analyze_off, analyze_manifest, analyze_json,
                               analyze_out);
        if (print_strategy->parsed()) return cmd_print_strategy(print_id);
        if (serve->parsed())
            return cmd_serve(serve_flags, serve_bind, bind_opt->count() > 0, serve_log_dir);
    } catch (const dsa::Error& e) {
        std::cerr << "dsa: " << e.what() << '\n';
        switch (e.code()) {
            case dsa::Errc::InvalidConfig:
            case dsa::Errc::UnknownStrategy:
            case dsa::Errc::LengthMismatch:
            case dsa::Errc::TooFewPairs:
                return kExitUsage;
            default:
                return kExitRuntime;
        }
    } catch (const std::exception& e) {
        std::cerr << "dsa: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
