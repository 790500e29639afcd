#include <doctest.h>

#include <filesystem>

#include "dsa/codec.hpp"
#include "dsa/server.hpp"
#include "dsa/telemetry.hpp"
#include "dsa/user_sim.hpp"
#include "generators.hpp"
#include "wire_client.hpp"

using namespace dsa;

namespace {

SessionConfig small_config() {
    SessionConfig config;
    config.window_ms = 2500;
    config.duration_ms = 10000;  // 4 windows
    config.strategy_id = "table1";
    return config;
}

std::vector<SceneCommand> commands_of(const std::vector<WireMessage>& messages) {
    std::vector<SceneCommand> out;
    for (const WireMessage& m : messages)
        if (m.type == MessageType::Command)
            out.push_back(codec::scene_command_from_json(m.body));
    return out;
}

bool has_error(const std::vector<WireMessage>& messages, Errc code) {
    for (const WireMessage& m : messages)
        if (m.type == MessageType::Error &&
            m.body.value("code", "") == std::string(to_string(code)))
            return true;
    return false;
}

}  // namespace

TEST_CASE("a window closes when the first event beyond it arrives") {
    SessionEngine engine(small_config());
    auto ack = engine.handle(make_start(small_config()));
    REQUIRE(ack.size() == 1);
    CHECK(ack[0].type == MessageType::Ack);
    CHECK(engine.phase() == SessionEngine::Phase::Active);

    CHECK(engine.handle(make_score({0, 100, 100})).empty());
    const auto replies = engine.handle(make_score({2600, 0, 100}));
    const auto cmds = commands_of(replies);
    REQUIRE(cmds.size() == 1);
    CHECK(cmds[0].window_index == 1);
    // window 0: S=1.0, one High window (no samples -> threshold), r absent -> row 1
    CHECK(cmds[0].color == Color::Blue);
    CHECK(cmds[0].reason == CommandReason::Row1);
}

TEST_CASE("skipping several windows closes each one in order") {
    SessionEngine engine(small_config());
    engine.handle(make_start(small_config()));
    engine.handle(make_score({0, 100, 100}));
    const auto replies = engine.handle(make_score({9000, 50, 100}));  // window 3
    const auto cmds = commands_of(replies);
    REQUIRE(cmds.size() == 3);
    CHECK(cmds[0].window_index == 1);
    CHECK(cmds[1].window_index == 2);
    CHECK(cmds[2].window_index == 3);
}

TEST_CASE("end closes the remaining windows and reports the summary") {
    SessionEngine engine(small_config());
    engine.handle(make_start(small_config()));
    engine.handle(make_score({0, 100, 100}));
    engine.handle(make_attention({100, 0.9}));
    const auto replies = engine.handle(make_end());
    REQUIRE(!replies.empty());
    CHECK(replies.back().type == MessageType::Summary);
    CHECK(commands_of(replies).size() == 4);  // all 4 windows closed at end
    CHECK(engine.completed());

    const SessionLog& log = engine.log();
    CHECK(log.snapshots.size() == 4);
    CHECK(log.commands.size() == 4);
    CHECK(log.summary.total_points == 100);
    CHECK(log.summary.total_max_points == 100);
    CHECK(log.summary.window_count == 4);
}

TEST_CASE("out-of-range values are malformed and abort the session") {
    SessionEngine engine(small_config());
    engine.handle(make_start(small_config()));
    const auto replies = engine.handle_line(R"({"type":"attention","t_ms":100,"value":1.2})");
    CHECK(has_error(replies, Errc::MalformedLine));
    CHECK(engine.phase() == SessionEngine::Phase::Aborted);
}

TEST_CASE("events beyond the configured duration abort as malformed") {
    SessionEngine engine(small_config());
    engine.handle(make_start(small_config()));
    const auto replies = engine.handle(make_score({10000, 1, 100}));
    CHECK(has_error(replies, Errc::MalformedLine));
    CHECK(engine.phase() == SessionEngine::Phase::Aborted);
}

TEST_CASE("unparsable and unknown-type lines abort as malformed") {
    SessionEngine engine(small_config());
    engine.handle(make_start(small_config()));

    SUBCASE("bad json") {
        CHECK(has_error(engine.handle_line("{oops"), Errc::MalformedLine));
    }
    SUBCASE("unknown type") {
        CHECK(has_error(engine.handle_line(R"({"type":"telemetry"})"), Errc::MalformedLine));
    }
    CHECK(engine.phase() == SessionEngine::Phase::Aborted);
}

TEST_CASE("stale events warn, drop, and never change emitted commands") {
    SessionEngine engine(small_config());
    engine.handle(make_start(small_config()));
    engine.handle(make_score({0, 100, 100}));
    const auto first = commands_of(engine.handle(make_score({2600, 100, 100})));
    REQUIRE(first.size() == 1);

    // window 0 is closed now; an event landing there is stale
    const auto replies = engine.handle(make_score({100, 0, 100}));
    CHECK(has_error(replies, Errc::StaleEvent));
    CHECK(engine.phase() == SessionEngine::Phase::Active);
    CHECK(commands_of(replies).empty());

    // the dropped event is not in the log and later commands are unaffected
    const auto final_replies = engine.handle(make_end());
    const SessionLog& log = engine.log();
    CHECK(log.score_events.size() == 2);
    CHECK(log.snapshots[0].score_ratio == doctest::Approx(1.0));
    CHECK(log.commands[0] == first[0]);
    CHECK(engine.completed());
    CHECK(final_replies.back().type == MessageType::Summary);
}

TEST_CASE("events before start violate protocol order") {
    SessionEngine engine(small_config());
    const auto replies = engine.handle(make_score({0, 100, 100}));
    CHECK(has_error(replies, Errc::ProtocolOrderViolation));
    CHECK(engine.phase() == SessionEngine::Phase::Aborted);

    SessionEngine engine2(small_config());
    engine2.handle(make_start(small_config()));
    CHECK(has_error(engine2.handle(make_start(small_config())), Errc::ProtocolOrderViolation));
}

TEST_CASE("start merges partial configs over the server defaults") {
    SessionConfig defaults = small_config();
    defaults.window_ms = 1000;
    SessionEngine engine(defaults);
    const auto replies = engine.handle_line(R"({"type":"start","duration_ms":3000})");
    REQUIRE(replies.size() == 1);
    REQUIRE(replies[0].type == MessageType::Ack);
    const SessionConfig effective =
        codec::session_config_from_json(replies[0].body.at("config"));
    CHECK(effective.window_ms == 1000);
    CHECK(effective.duration_ms == 3000);

    SessionEngine engine2(defaults);
    const auto bad = engine2.handle_line(R"({"type":"start","window_ms":0})");
    CHECK(has_error(bad, Errc::MalformedLine));
}

TEST_CASE("live engine and offline replay produce identical commands") {
    std::mt19937_64 g(31);
    for (int trial = 0; trial < 50; ++trial) {
        SessionConfig config;
        config.window_ms = testgen::integer(g, 300, 2500);
        config.duration_ms = config.window_ms * testgen::integer(g, 1, 12) +
                             testgen::integer(g, 0, config.window_ms - 1);
        config.strategy_id = (g() & 1) ? "table1" : "control-fixed";
        const auto attention = testgen::attention_stream(
            g, config.duration_ms, static_cast<std::size_t>(testgen::integer(g, 0, 40)));
        const auto scores = testgen::score_stream(
            g, config.duration_ms, static_cast<std::size_t>(testgen::integer(g, 0, 40)));

        // merge the two sorted streams the way a client would send them
        SessionEngine engine(config);
        engine.handle(make_start(config));
        std::vector<SceneCommand> live;
        std::size_t ai = 0, si = 0;
        while (ai < attention.size() || si < scores.size()) {
            std::vector<WireMessage> replies;
            const bool take_attention =
                ai < attention.size() &&
                (si >= scores.size() || attention[ai].t_ms <= scores[si].t_ms);
            if (take_attention)
                replies = engine.handle(make_attention(attention[ai++]));
            else
                replies = engine.handle(make_score(scores[si++]));
            for (const SceneCommand& c : commands_of(replies)) live.push_back(c);
        }
        for (const SceneCommand& c : commands_of(engine.handle(make_end())))
            live.push_back(c);

        const auto offline = replay(attention, scores, config, config.strategy_id);
        CHECK(live == offline);
        CHECK(engine.log().snapshots ==
              fold_stream(attention, scores, config));
    }
}

TEST_CASE("replaying a log under its own strategy reproduces its commands") {
    SessionConfig config;
    config.duration_ms = 30000;
    config.seed = 5;
    const SessionLog log = run_session(config, "table1", 5);
    CHECK(replay(log) == log.commands);
    CHECK(replay(log, "table1") == log.commands);
}

TEST_CASE("replaying a control log under table1 follows the decision table") {
    SessionConfig config;
    config.duration_ms = 30000;
    const SessionLog log = run_session(config, "control-fixed", 9);
    const auto counterfactual = replay(log, "table1");
    REQUIRE(counterfactual.size() == log.snapshots.size());

    SceneState scene{config.initial_color, 0};
    for (std::size_t k = 0; k < counterfactual.size(); ++k) {
        const SceneCommand expected = decide_for_snapshot("table1", log.snapshots[k], scene);
        CHECK(counterfactual[k] == expected);
        if (expected.color != scene.color)
            scene = SceneState{expected.color, expected.window_index};
    }
}

TEST_CASE("replaying an empty stream drives commands off carry-forward ratios") {
    SessionConfig config;
    config.window_ms = 2500;
    config.duration_ms = 5000;
    const auto commands = replay({}, {}, config, "table1");
    REQUIRE(commands.size() == 2);
    // S=1.0 carried, attention defaults High: row 1 both times
    CHECK(commands[0].color == Color::Blue);
    CHECK(commands[0].reason == CommandReason::Row1);
    CHECK(commands[1].reason == CommandReason::Row1);
}

TEST_CASE("transcripts decode from full log files") {
    SessionConfig config;
    config.duration_ms = 10000;
    const SessionLog log = run_session(config, "table1", 21);
    const Transcript t = decode_transcript_text(codec::encode(log));
    CHECK(t.config == log.config);
    CHECK(t.rng_family == log.rng_family);
    CHECK(t.attention_events == log.attention_events);
    CHECK(t.score_events == log.score_events);
}

TEST_CASE("server runs isolated sessions over TCP and records logs") {
    const auto log_dir =
        std::filesystem::temp_directory_path() / "dsa-test-server-logs";
    std::filesystem::remove_all(log_dir);

    ServerConfig server_config;
    server_config.bind_address = "127.0.0.1:0";
    server_config.log_dir = log_dir.string();
    server_config.session_defaults = small_config();

    TelemetryServer server(server_config);
    server.start();
    REQUIRE(server.port() != 0);

    {
        testwire::Client client("127.0.0.1", server.port());
        client.send_line(R"({"type":"start","duration_ms":5000})");
        const std::string ack = client.read_line();
        CHECK(ack.find("\"type\":\"ack\"") != std::string::npos);
        client.send_line(R"({"type":"score","t_ms":0,"points":100,"max_points":100})");
        client.send_line(R"({"type":"attention","t_ms":50,"value":0.9})");
        client.send_line(R"({"type":"end"})");
        const auto lines = client.read_until_close();
        REQUIRE(lines.size() == 3);  // two commands + summary
        CHECK(lines[0].find("\"type\":\"command\"") != std::string::npos);
        CHECK(lines[2].find("\"type\":\"summary\"") != std::string::npos);
    }

    // a second, concurrent-capable session; malformed input aborts it
    {
        testwire::Client client("127.0.0.1", server.port());
        client.send_line(R"({"type":"start"})");
        CHECK(client.read_line().find("ack") != std::string::npos);
        client.send_line(R"({"type":"attention","t_ms":1,"value":7})");
        const auto lines = client.read_until_close();
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].find("MalformedLine") != std::string::npos);
    }

    server.stop();

    // only the completed session left a log file
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(log_dir)) {
        ++files;
        const SessionLog log =
            codec::decode_session_log_text(codec::read_file(entry.path().string()));
        CHECK(log.summary.total_points == 100);
        CHECK(log.snapshots.size() == 2);
    }
    CHECK(files == 1);
    std::filesystem::remove_all(log_dir);
}

TEST_CASE("interleaved concurrent sessions stay isolated") {
    ServerConfig server_config;
    server_config.bind_address = "127.0.0.1:0";
    server_config.log_dir.clear();
    server_config.session_defaults = small_config();
    TelemetryServer server(server_config);
    server.start();

    testwire::Client a("127.0.0.1", server.port());
    testwire::Client b("127.0.0.1", server.port());
    a.send_line(R"({"type":"start","duration_ms":5000})");
    b.send_line(R"({"type":"start","duration_ms":5000})");
    CHECK(a.read_line().find("ack") != std::string::npos);
    CHECK(b.read_line().find("ack") != std::string::npos);

    // interleave events; each session only sees its own
    a.send_line(R"({"type":"score","t_ms":0,"points":100,"max_points":100})");
    b.send_line(R"({"type":"score","t_ms":0,"points":0,"max_points":100})");
    a.send_line(R"({"type":"end"})");
    b.send_line(R"({"type":"end"})");

    const auto a_lines = a.read_until_close();
    const auto b_lines = b.read_until_close();
    REQUIRE(a_lines.size() == 3);
    REQUIRE(b_lines.size() == 3);
    CHECK(a_lines.back().find("\"total_points\":100") != std::string::npos);
    CHECK(b_lines.back().find("\"total_points\":0") != std::string::npos);
    server.stop();
}

TEST_CASE("binding an occupied port fails with BindFailure") {
    ServerConfig first;
    first.bind_address = "127.0.0.1:0";
    first.log_dir.clear();
    TelemetryServer a(first);
    a.start();

    ServerConfig second;
    second.bind_address = "127.0.0.1:" + std::to_string(a.port());
    second.log_dir.clear();
    TelemetryServer b(second);
    try {
        b.start();
        FAIL("expected BindFailure");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BindFailure);
    }
    a.stop();
}
