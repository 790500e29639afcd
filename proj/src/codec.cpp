#include "dsa/codec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dsa::codec {

namespace {

[[noreturn]] void fail(const std::string& detail) {
    throw Error(Errc::MalformedLine, detail);
}

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) fail(std::string("missing field \"") + name + "\"");
    return *it;
}

std::int64_t get_int(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer()) fail(std::string("field \"") + name + "\" must be an integer");
    return v.get<std::int64_t>();
}

std::uint64_t get_uint(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const std::int64_t x = v.get<std::int64_t>();
        if (x < 0) fail(std::string("field \"") + name + "\" must be non-negative");
        return static_cast<std::uint64_t>(x);
    }
    fail(std::string("field \"") + name + "\" must be an integer");
}

double get_real(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number()) fail(std::string("field \"") + name + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(std::string("field \"") + name + "\" must be finite");
    return x;
}

std::string get_string(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_string()) fail(std::string("field \"") + name + "\" must be a string");
    return v.get<std::string>();
}

std::int64_t get_nonneg(const Json& j, const char* name) {
    const std::int64_t x = get_int(j, name);
    if (x < 0) fail(std::string("field \"") + name + "\" must be non-negative");
    return x;
}

double get_unit_interval(const Json& j, const char* name) {
    const double x = get_real(j, name);
    if (x < 0.0 || x > 1.0)
        fail(std::string("field \"") + name + "\" must lie in [0,1]");
    return x;
}

Color get_color(const Json& j, const char* name) {
    const auto c = color_from_string(get_string(j, name));
    if (!c) fail(std::string("field \"") + name + "\" must be \"Red\" or \"Blue\"");
    return *c;
}

}  // namespace

Json to_json(const SceneState& state) {
    Json j;
    j["color"] = to_string(state.color);
    j["active_since_window"] = state.active_since_window;
    return j;
}

SceneState scene_state_from_json(const Json& j) {
    SceneState s;
    s.color = get_color(j, "color");
    s.active_since_window = get_nonneg(j, "active_since_window");
    return s;
}

Json to_json(const AttentionSample& sample) {
    Json j;
    j["t_ms"] = sample.t_ms;
    j["value"] = sample.value;
    return j;
}

AttentionSample attention_sample_from_json(const Json& j) {
    AttentionSample s;
    s.t_ms = get_nonneg(j, "t_ms");
    s.value = get_unit_interval(j, "value");
    return s;
}

Json to_json(const ScoreEvent& event) {
    Json j;
    j["t_ms"] = event.t_ms;
    j["points"] = event.points;
    j["max_points"] = event.max_points;
    return j;
}

ScoreEvent score_event_from_json(const Json& j) {
    ScoreEvent e;
    e.t_ms = get_nonneg(j, "t_ms");
    e.points = get_nonneg(j, "points");
    e.max_points = get_int(j, "max_points");
    if (e.max_points < 1) fail("field \"max_points\" must be positive");
    if (e.points > e.max_points) fail("field \"points\" must not exceed max_points");
    return e;
}

Json to_json(const WindowSnapshot& snapshot) {
    Json j;
    j["index"] = snapshot.index;
    j["score_ratio"] = snapshot.score_ratio;
    j["mean_attention"] = snapshot.mean_attention;
    j["attention_level"] = to_string(snapshot.attention_level);
    if (snapshot.instant_performance)
        j["instant_performance"] = *snapshot.instant_performance;
    return j;
}

WindowSnapshot window_snapshot_from_json(const Json& j) {
    WindowSnapshot s;
    s.index = get_nonneg(j, "index");
    s.score_ratio = get_unit_interval(j, "score_ratio");
    s.mean_attention = get_unit_interval(j, "mean_attention");
    const auto level = attention_level_from_string(get_string(j, "attention_level"));
    if (!level) fail("field \"attention_level\" must be \"High\" or \"Low\"");
    s.attention_level = *level;
    if (j.contains("instant_performance")) {
        const double r = get_real(j, "instant_performance");
        if (r < -1.0 || r > 1.0) fail("field \"instant_performance\" must lie in [-1,1]");
        s.instant_performance = r;
    }
    return s;
}

Json to_json(const SceneCommand& command) {
    Json j;
    j["window_index"] = command.window_index;
    j["color"] = to_string(command.color);
    j["reason"] = to_string(command.reason);
    return j;
}

SceneCommand scene_command_from_json(const Json& j) {
    SceneCommand c;
    c.window_index = get_nonneg(j, "window_index");
    c.color = get_color(j, "color");
    const auto reason = command_reason_from_string(get_string(j, "reason"));
    if (!reason) fail("field \"reason\" is not a known reason code");
    c.reason = *reason;
    return c;
}

Json to_json(const UserModelParams& params) {
    Json j;
    j["base_attention"] = params.base_attention;
    j["red_drift"] = params.red_drift;
    j["red_noise_sd"] = params.red_noise_sd;
    j["blue_reversion"] = params.blue_reversion;
    j["blue_noise_sd"] = params.blue_noise_sd;
    j["fatigue_drift"] = params.fatigue_drift;
    j["skill_slope"] = params.skill_slope;
    j["skill_offset"] = params.skill_offset;
    j["notes_per_window"] = params.notes_per_window;
    j["points_per_note"] = params.points_per_note;
    return j;
}

UserModelParams user_model_params_from_json(const Json& j) {
    UserModelParams m;
    m.base_attention = get_unit_interval(j, "base_attention");
    m.red_drift = get_real(j, "red_drift");
    m.red_noise_sd = get_real(j, "red_noise_sd");
    m.blue_reversion = get_real(j, "blue_reversion");
    m.blue_noise_sd = get_real(j, "blue_noise_sd");
    m.fatigue_drift = get_real(j, "fatigue_drift");
    m.skill_slope = get_real(j, "skill_slope");
    m.skill_offset = get_real(j, "skill_offset");
    m.notes_per_window = get_int(j, "notes_per_window");
    m.points_per_note = get_int(j, "points_per_note");
    return m;
}

Json to_json(const SessionConfig& config) {
    Json j;
    j["window_ms"] = config.window_ms;
    j["attention_threshold"] = config.attention_threshold;
    j["duration_ms"] = config.duration_ms;
    j["strategy_id"] = config.strategy_id;
    j["initial_color"] = to_string(config.initial_color);
    j["seed"] = config.seed;
    j["user_model"] = to_json(config.user_model);
    return j;
}

SessionConfig session_config_from_json(const Json& j) {
    SessionConfig c;
    c.window_ms = get_int(j, "window_ms");
    c.attention_threshold = get_real(j, "attention_threshold");
    c.duration_ms = get_int(j, "duration_ms");
    c.strategy_id = get_string(j, "strategy_id");
    c.initial_color = get_color(j, "initial_color");
    c.seed = get_uint(j, "seed");
    const Json& m = field(j, "user_model");
    if (!m.is_object()) fail("field \"user_model\" must be an object");
    c.user_model = user_model_params_from_json(m);
    return c;
}

SessionConfig merge_config(SessionConfig base, const Json& j) {
    if (!j.is_object()) fail("config overrides must be an object");
    if (j.contains("window_ms")) base.window_ms = get_int(j, "window_ms");
    if (j.contains("attention_threshold"))
        base.attention_threshold = get_real(j, "attention_threshold");
    if (j.contains("duration_ms")) base.duration_ms = get_int(j, "duration_ms");
    if (j.contains("strategy_id")) base.strategy_id = get_string(j, "strategy_id");
    if (j.contains("initial_color")) base.initial_color = get_color(j, "initial_color");
    if (j.contains("seed")) base.seed = get_uint(j, "seed");
    if (j.contains("user_model")) {
        const Json& m = field(j, "user_model");
        if (!m.is_object()) fail("field \"user_model\" must be an object");
        UserModelParams& u = base.user_model;
        if (m.contains("base_attention")) u.base_attention = get_unit_interval(m, "base_attention");
        if (m.contains("red_drift")) u.red_drift = get_real(m, "red_drift");
        if (m.contains("red_noise_sd")) u.red_noise_sd = get_real(m, "red_noise_sd");
        if (m.contains("blue_reversion")) u.blue_reversion = get_real(m, "blue_reversion");
        if (m.contains("blue_noise_sd")) u.blue_noise_sd = get_real(m, "blue_noise_sd");
        if (m.contains("fatigue_drift")) u.fatigue_drift = get_real(m, "fatigue_drift");
        if (m.contains("skill_slope")) u.skill_slope = get_real(m, "skill_slope");
        if (m.contains("skill_offset")) u.skill_offset = get_real(m, "skill_offset");
        if (m.contains("notes_per_window")) u.notes_per_window = get_int(m, "notes_per_window");
        if (m.contains("points_per_note")) u.points_per_note = get_int(m, "points_per_note");
    }
    return base;
}

Json to_json(const SessionSummary& summary) {
    Json j;
    j["total_points"] = summary.total_points;
    j["total_max_points"] = summary.total_max_points;
    j["overall_score_ratio"] = summary.overall_score_ratio;
    j["r_star"] = summary.r_star;
    j["window_count"] = summary.window_count;
    return j;
}

SessionSummary session_summary_from_json(const Json& j) {
    SessionSummary s;
    s.total_points = get_nonneg(j, "total_points");
    s.total_max_points = get_nonneg(j, "total_max_points");
    s.overall_score_ratio = get_unit_interval(j, "overall_score_ratio");
    s.r_star = get_real(j, "r_star");
    s.window_count = get_nonneg(j, "window_count");
    return s;
}

Json to_json(const PairedReport& report) {
    Json j;
    j["n_pairs"] = report.n_pairs;
    j["mean_on"] = report.mean_on;
    j["sd_on"] = report.sd_on;
    j["mean_off"] = report.mean_off;
    j["sd_off"] = report.sd_off;
    j["mean_diff"] = report.mean_diff;
    j["t_stat"] = report.t_stat;
    j["df"] = report.df;
    j["improved_fraction"] = report.improved_fraction;
    Json rows = Json::array();
    for (const PairedSample& p : report.per_pair) {
        Json row;
        row["seed"] = p.seed;
        row["score_on"] = p.score_on;
        row["score_off"] = p.score_off;
        rows.push_back(std::move(row));
    }
    j["per_pair"] = std::move(rows);
    return j;
}

PairedReport paired_report_from_json(const Json& j) {
    PairedReport r;
    r.n_pairs = get_nonneg(j, "n_pairs");
    r.mean_on = get_real(j, "mean_on");
    r.sd_on = get_real(j, "sd_on");
    r.mean_off = get_real(j, "mean_off");
    r.sd_off = get_real(j, "sd_off");
    r.mean_diff = get_real(j, "mean_diff");
    r.t_stat = get_real(j, "t_stat");
    r.df = get_nonneg(j, "df");
    r.improved_fraction = get_unit_interval(j, "improved_fraction");
    const Json& rows = field(j, "per_pair");
    if (!rows.is_array()) fail("field \"per_pair\" must be an array");
    for (const Json& row : rows) {
        PairedSample p;
        p.seed = get_uint(row, "seed");
        p.score_on = get_real(row, "score_on");
        p.score_off = get_real(row, "score_off");
        r.per_pair.push_back(p);
    }
    return r;
}

Json parse_object(std::string_view line) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) fail("line is not valid JSON");
    if (!j.is_object()) fail("line must be a JSON object");
    return j;
}

SceneState decode_scene_state(std::string_view line) {
    return scene_state_from_json(parse_object(line));
}
AttentionSample decode_attention_sample(std::string_view line) {
    return attention_sample_from_json(parse_object(line));
}
ScoreEvent decode_score_event(std::string_view line) {
    return score_event_from_json(parse_object(line));
}
WindowSnapshot decode_window_snapshot(std::string_view line) {
    return window_snapshot_from_json(parse_object(line));
}
SceneCommand decode_scene_command(std::string_view line) {
    return scene_command_from_json(parse_object(line));
}
SessionConfig decode_session_config(std::string_view line) {
    return session_config_from_json(parse_object(line));
}
SessionSummary decode_session_summary(std::string_view line) {
    return session_summary_from_json(parse_object(line));
}
PairedReport decode_paired_report(std::string_view line) {
    return paired_report_from_json(parse_object(line));
}

namespace {

Json tagged(const char* type, Json body) {
    Json j;
    j["type"] = type;
    for (auto& [key, value] : body.items()) j[key] = std::move(value);
    return j;
}

}  // namespace

std::string encode(const SessionLog& log) {
    std::ostringstream out;
    Json start = tagged("start", to_json(log.config));
    if (!log.rng_family.empty()) start["rng_family"] = log.rng_family;
    out << start.dump() << '\n';

    // Merge the two event lists by t_ms; attention precedes score on ties.
    std::size_t ai = 0, si = 0;
    while (ai < log.attention_events.size() || si < log.score_events.size()) {
        const bool take_attention =
            ai < log.attention_events.size() &&
            (si >= log.score_events.size() ||
             log.attention_events[ai].t_ms <= log.score_events[si].t_ms);
        if (take_attention) {
            out << tagged("attention", to_json(log.attention_events[ai++])).dump() << '\n';
        } else {
            out << tagged("score", to_json(log.score_events[si++])).dump() << '\n';
        }
    }
    out << R"({"type":"end"})" << '\n';

    for (const WindowSnapshot& s : log.snapshots)
        out << tagged("snapshot", to_json(s)).dump() << '\n';
    for (const SceneCommand& c : log.commands)
        out << tagged("command", to_json(c)).dump() << '\n';
    out << tagged("summary", to_json(log.summary)).dump() << '\n';
    return out.str();
}

SessionLog decode_session_log(std::istream& in) {
    SessionLog log;
    bool saw_start = false;
    bool saw_summary = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j = parse_object(line);
        const std::string type = get_string(j, "type");
        if (type == "start") {
            if (saw_start) fail("duplicate start line");
            saw_start = true;
            log.config = session_config_from_json(j);
            if (j.contains("rng_family")) log.rng_family = get_string(j, "rng_family");
            continue;
        }
        if (!saw_start) fail("log must begin with a start line");
        if (type == "attention") {
            log.attention_events.push_back(attention_sample_from_json(j));
        } else if (type == "score") {
            log.score_events.push_back(score_event_from_json(j));
        } else if (type == "end") {
            // transcript/derived-section divider; nothing to record
        } else if (type == "snapshot") {
            log.snapshots.push_back(window_snapshot_from_json(j));
        } else if (type == "command") {
            log.commands.push_back(scene_command_from_json(j));
        } else if (type == "summary") {
            if (saw_summary) fail("duplicate summary line");
            saw_summary = true;
            log.summary = session_summary_from_json(j);
        } else {
            fail("unknown line type \"" + type + "\"");
        }
    }
    if (!saw_start) fail("log has no start line");
    if (!saw_summary) fail("log has no summary line");
    return log;
}

SessionLog decode_session_log_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return decode_session_log(in);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open " + path + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::IoError, "short write to " + path);
}

}  // namespace dsa::codec
