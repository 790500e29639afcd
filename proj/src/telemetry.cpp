#include "dsa/telemetry.hpp"

#include <sstream>

#include "dsa/evaluation.hpp"
#include "dsa/validation.hpp"

namespace dsa {

const char* to_string(MessageType type) {
    switch (type) {
        case MessageType::Start: return "start";
        case MessageType::Attention: return "attention";
        case MessageType::Score: return "score";
        case MessageType::End: return "end";
        case MessageType::Ack: return "ack";
        case MessageType::Command: return "command";
        case MessageType::Summary: return "summary";
        case MessageType::Error: return "error";
    }
    return "error";
}

namespace {

std::optional<MessageType> type_from_string(std::string_view s) {
    if (s == "start") return MessageType::Start;
    if (s == "attention") return MessageType::Attention;
    if (s == "score") return MessageType::Score;
    if (s == "end") return MessageType::End;
    if (s == "ack") return MessageType::Ack;
    if (s == "command") return MessageType::Command;
    if (s == "summary") return MessageType::Summary;
    if (s == "error") return MessageType::Error;
    return std::nullopt;
}

codec::Json tagged(MessageType type) {
    codec::Json j;
    j["type"] = to_string(type);
    return j;
}

codec::Json tagged(MessageType type, codec::Json body) {
    codec::Json j = tagged(type);
    for (auto& [key, value] : body.items()) j[key] = std::move(value);
    return j;
}

}  // namespace

WireMessage parse_wire_line(std::string_view line) {
    codec::Json j = codec::parse_object(line);
    auto it = j.find("type");
    if (it == j.end() || !it->is_string())
        throw Error(Errc::MalformedLine, "message has no string \"type\" field");
    const auto type = type_from_string(it->get<std::string>());
    if (!type)
        throw Error(Errc::MalformedLine,
                    "unknown message type \"" + it->get<std::string>() + "\"");
    return WireMessage{*type, std::move(j)};
}

WireMessage make_start(const SessionConfig& config, std::string_view rng_family) {
    codec::Json j = tagged(MessageType::Start, codec::to_json(config));
    if (!rng_family.empty()) j["rng_family"] = std::string(rng_family);
    return {MessageType::Start, std::move(j)};
}

WireMessage make_attention(const AttentionSample& sample) {
    return {MessageType::Attention, tagged(MessageType::Attention, codec::to_json(sample))};
}

WireMessage make_score(const ScoreEvent& event) {
    return {MessageType::Score, tagged(MessageType::Score, codec::to_json(event))};
}

WireMessage make_end() { return {MessageType::End, tagged(MessageType::End)}; }

WireMessage make_ack(std::string_view session_id, const SessionConfig& effective) {
    codec::Json j = tagged(MessageType::Ack);
    j["id"] = std::string(session_id);
    j["config"] = codec::to_json(effective);
    return {MessageType::Ack, std::move(j)};
}

WireMessage make_command(const SceneCommand& command) {
    return {MessageType::Command, tagged(MessageType::Command, codec::to_json(command))};
}

WireMessage make_summary(const SessionSummary& summary) {
    return {MessageType::Summary, tagged(MessageType::Summary, codec::to_json(summary))};
}

WireMessage make_error(Errc code, std::string_view detail) {
    codec::Json j = tagged(MessageType::Error);
    j["code"] = to_string(code);
    j["message"] = std::string(detail);
    return {MessageType::Error, std::move(j)};
}

SessionEngine::SessionEngine(SessionConfig defaults, std::string session_id,
                             const StrategyRegistry& registry)
    : session_id_(std::move(session_id)),
      defaults_(std::move(defaults)),
      registry_(registry) {}

std::vector<WireMessage> SessionEngine::handle_line(std::string_view line) {
    try {
        return handle(parse_wire_line(line));
    } catch (const Error& e) {
        if (e.code() == Errc::MalformedLine) return abort(Errc::MalformedLine, e.what());
        throw;
    }
}

std::vector<WireMessage> SessionEngine::abort(Errc code, const std::string& detail) {
    phase_ = Phase::Aborted;
    return {make_error(code, detail)};
}

void SessionEngine::apply_command(const SceneCommand& command) {
    if (command.color != scene_.color)
        scene_ = SceneState{command.color, command.window_index};
}

void SessionEngine::close_windows_through(std::int64_t last_index,
                                          std::vector<WireMessage>& out) {
    while (last_closed_window_ < last_index) {
        const std::int64_t index = last_closed_window_ + 1;
        WindowAccumulator acc;
        if (open_window_.index == index) {
            acc = open_window_;
        } else {
            acc.index = index;  // window with no events at all
        }
        WindowSnapshot snapshot = finalize_window(acc, prev_ratio_, have_prev_ratio_,
                                                  log_.config.attention_threshold);
        prev_ratio_ = snapshot.score_ratio;
        have_prev_ratio_ = true;

        SceneCommand command =
            registry_.decide(log_.config.strategy_id, snapshot, scene_);
        apply_command(command);

        log_.snapshots.push_back(std::move(snapshot));
        log_.commands.push_back(command);
        out.push_back(make_command(command));
        last_closed_window_ = index;
    }
    open_window_ = WindowAccumulator{};
    open_window_.index = last_closed_window_ + 1;
}

std::vector<WireMessage> SessionEngine::handle(const WireMessage& message) {
    if (phase_ == Phase::Aborted) return {};
    if (phase_ == Phase::Ended)
        return {make_error(Errc::ProtocolOrderViolation, "session already ended")};

    switch (message.type) {
        case MessageType::Start: {
            if (phase_ != Phase::AwaitStart)
                return abort(Errc::ProtocolOrderViolation, "duplicate start");
            SessionConfig config;
            try {
                config = codec::merge_config(defaults_, message.body);
            } catch (const Error& e) {
                return abort(Errc::MalformedLine, e.what());
            }
            const auto issues = validate_config(config);
            if (!issues.empty()) {
                std::ostringstream detail;
                detail << "invalid config:";
                for (const ConfigIssue& issue : issues)
                    detail << ' ' << to_string(issue.code);
                return abort(Errc::MalformedLine, detail.str());
            }
            log_.config = config;
            if (message.body.contains("rng_family") && message.body["rng_family"].is_string())
                log_.rng_family = message.body["rng_family"].get<std::string>();
            total_windows_ = window_count(config.duration_ms, config.window_ms);
            scene_ = SceneState{config.initial_color, 0};
            open_window_ = WindowAccumulator{};
            phase_ = Phase::Active;
            return {make_ack(session_id_, config)};
        }

        case MessageType::Attention:
        case MessageType::Score: {
            if (phase_ != Phase::Active)
                return abort(Errc::ProtocolOrderViolation,
                             std::string(to_string(message.type)) + " before start");
            std::int64_t t_ms = 0;
            AttentionSample sample;
            ScoreEvent event;
            try {
                if (message.type == MessageType::Attention) {
                    sample = codec::attention_sample_from_json(message.body);
                    t_ms = sample.t_ms;
                } else {
                    event = codec::score_event_from_json(message.body);
                    t_ms = event.t_ms;
                }
            } catch (const Error& e) {
                return abort(Errc::MalformedLine, e.what());
            }
            if (t_ms >= log_.config.duration_ms)
                return abort(Errc::MalformedLine,
                             "t_ms " + std::to_string(t_ms) + " is outside the session duration");

            const std::int64_t window = assign_window(t_ms, log_.config.window_ms);
            if (window <= last_closed_window_) {
                // Late sensor jitter: drop the event, warn, keep going.
                return {make_error(Errc::StaleEvent,
                                   "event at t_ms " + std::to_string(t_ms) +
                                       " falls in closed window " + std::to_string(window))};
            }

            std::vector<WireMessage> out;
            if (window > open_window_.index) close_windows_through(window - 1, out);
            if (message.type == MessageType::Attention) {
                open_window_.add(sample);
                log_.attention_events.push_back(sample);
            } else {
                open_window_.add(event);
                log_.score_events.push_back(event);
            }
            return out;
        }

        case MessageType::End: {
            if (phase_ != Phase::Active)
                return abort(Errc::ProtocolOrderViolation, "end before start");
            std::vector<WireMessage> out;
            close_windows_through(total_windows_ - 1, out);

            SessionSummary summary;
            summary.window_count = total_windows_;
            for (const ScoreEvent& e : log_.score_events) {
                summary.total_points += e.points;
                summary.total_max_points += e.max_points;
            }
            summary.overall_score_ratio =
                summary.total_max_points > 0
                    ? static_cast<double>(summary.total_points) /
                          static_cast<double>(summary.total_max_points)
                    : 0.0;
            summary.r_star =
                r_star_sum(log_.snapshots, log_.snapshots.front().score_ratio);
            log_.summary = summary;
            phase_ = Phase::Ended;
            out.push_back(make_summary(summary));
            return out;
        }

        case MessageType::Ack:
        case MessageType::Command:
        case MessageType::Summary:
        case MessageType::Error:
            return abort(Errc::ProtocolOrderViolation,
                         std::string("client sent server-side message type \"") +
                             to_string(message.type) + "\"");
    }
    return abort(Errc::MalformedLine, "unreachable message type");
}

std::vector<SceneCommand> replay(std::span<const AttentionSample> attention_events,
                                 std::span<const ScoreEvent> score_events,
                                 const SessionConfig& config, const std::string& strategy_id,
                                 const StrategyRegistry& registry) {
    const std::vector<WindowSnapshot> snapshots =
        fold_stream(attention_events, score_events, config);
    std::vector<SceneCommand> commands;
    commands.reserve(snapshots.size());
    SceneState scene{config.initial_color, 0};
    for (const WindowSnapshot& snapshot : snapshots) {
        SceneCommand command = registry.decide(strategy_id, snapshot, scene);
        if (command.color != scene.color)
            scene = SceneState{command.color, command.window_index};
        commands.push_back(command);
    }
    return commands;
}

std::vector<SceneCommand> replay(const SessionLog& log, const std::string& strategy_id) {
    return replay(log.attention_events, log.score_events, log.config,
                  strategy_id.empty() ? log.config.strategy_id : strategy_id);
}

Transcript decode_transcript_text(std::string_view text) {
    Transcript transcript;
    bool saw_start = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        codec::Json j = codec::parse_object(line);
        auto it = j.find("type");
        if (it == j.end() || !it->is_string())
            throw Error(Errc::MalformedLine, "line has no string \"type\" field");
        const std::string type = it->get<std::string>();
        if (type == "start") {
            if (saw_start) throw Error(Errc::MalformedLine, "duplicate start line");
            saw_start = true;
            transcript.config = codec::session_config_from_json(j);
            if (j.contains("rng_family") && j["rng_family"].is_string())
                transcript.rng_family = j["rng_family"].get<std::string>();
        } else if (type == "attention") {
            transcript.attention_events.push_back(codec::attention_sample_from_json(j));
        } else if (type == "score") {
            transcript.score_events.push_back(codec::score_event_from_json(j));
        } else if (type == "end" || type == "snapshot" || type == "command" ||
                   type == "summary" || type == "ack" || type == "error") {
            // derived or server-side lines carry no replayable events
        } else {
            throw Error(Errc::MalformedLine, "unknown line type \"" + type + "\"");
        }
    }
    if (!saw_start)
        throw Error(Errc::MalformedLine, "transcript has no start line");
    return transcript;
}

}  // namespace dsa
