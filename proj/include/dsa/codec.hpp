// codec.hpp — canonical text encoding shared by log files and the wire.
//
// Every value is one JSON object per line, fields in a fixed order, so the
// same input always produces the same bytes. Log files and wire messages
// use the identical grammar: the type's canonical object plus a leading
// "type" tag. Decoders validate field presence, types, and ranges and
// throw Error(Errc::MalformedLine) on any violation; unknown extra fields
// are ignored.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dsa/errors.hpp"
#include "dsa/types.hpp"

namespace dsa::codec {

using Json = nlohmann::ordered_json;

// Canonical JSON objects (field order matches the type definitions).
Json to_json(const SceneState& state);
Json to_json(const AttentionSample& sample);
Json to_json(const ScoreEvent& event);
Json to_json(const WindowSnapshot& snapshot);
Json to_json(const SceneCommand& command);
Json to_json(const UserModelParams& params);
Json to_json(const SessionConfig& config);
Json to_json(const SessionSummary& summary);
Json to_json(const PairedReport& report);

// Single-line canonical encodings (no trailing newline).
template <typename T>
std::string encode(const T& value) {
    return to_json(value).dump();
}

// Typed decoders from a parsed JSON object.
SceneState scene_state_from_json(const Json& j);
AttentionSample attention_sample_from_json(const Json& j);
ScoreEvent score_event_from_json(const Json& j);
WindowSnapshot window_snapshot_from_json(const Json& j);
SceneCommand scene_command_from_json(const Json& j);
UserModelParams user_model_params_from_json(const Json& j);
SessionConfig session_config_from_json(const Json& j);
SessionSummary session_summary_from_json(const Json& j);
PairedReport paired_report_from_json(const Json& j);

// Applies only the fields present in j onto base (recursing into
// user_model). Lets wire clients send partial configs over defaults.
SessionConfig merge_config(SessionConfig base, const Json& j);

// Parses one line into a JSON object. Throws Error(MalformedLine) if the
// line is not a single JSON object.
Json parse_object(std::string_view line);

// Typed decoders from one canonical line.
SceneState decode_scene_state(std::string_view line);
AttentionSample decode_attention_sample(std::string_view line);
ScoreEvent decode_score_event(std::string_view line);
WindowSnapshot decode_window_snapshot(std::string_view line);
SceneCommand decode_scene_command(std::string_view line);
SessionConfig decode_session_config(std::string_view line);
SessionSummary decode_session_summary(std::string_view line);
PairedReport decode_paired_report(std::string_view line);

// SessionLog files are a recorded wire transcript plus derived sections:
//   {"type":"start", <config fields>, "rng_family":...}
//   {"type":"attention"|"score", ...}   events merged by t_ms
//                                       (attention before score on ties)
//   {"type":"end"}
//   {"type":"snapshot", ...} per window
//   {"type":"command", ...} per boundary
//   {"type":"summary", ...}
std::string encode(const SessionLog& log);
SessionLog decode_session_log(std::istream& in);
SessionLog decode_session_log_text(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace dsa::codec
