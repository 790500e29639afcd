#include <doctest.h>

#include <cmath>
#include <random>

#include "dsa/errors.hpp"
#include "dsa/evaluation.hpp"
#include "dsa/user_sim.hpp"
#include "dsa/windowing.hpp"
#include "generators.hpp"

using namespace dsa;

TEST_CASE("overall_performance is the total percentage") {
    SessionLog log;
    log.summary.total_points = 8000;
    log.summary.total_max_points = 10000;
    CHECK(overall_performance(log) == doctest::Approx(80.0));

    log.summary.total_points = 10000;
    CHECK(overall_performance(log) == doctest::Approx(100.0));

    SessionLog empty;
    CHECK(overall_performance(empty) == 0.0);
}

TEST_CASE("r_star_sum adds r_0 and the defined instant performances") {
    std::vector<WindowSnapshot> snapshots(4);
    snapshots[0].score_ratio = 0.5;  // first window: no r
    snapshots[1].instant_performance = 0.1;
    snapshots[2].instant_performance = -0.05;
    snapshots[3].instant_performance = 0.15;
    CHECK(r_star_sum(snapshots, 0.5) == doctest::Approx(0.7));
    CHECK(r_star_sum({}, 0.25) == doctest::Approx(0.25));
}

TEST_CASE("r_star telescopes to the last ratio when seeded with the first") {
    std::mt19937_64 g(17);
    for (int trial = 0; trial < 200; ++trial) {
        SessionConfig config;
        config.window_ms = testgen::integer(g, 200, 2500);
        config.duration_ms = config.window_ms * testgen::integer(g, 2, 25);
        const auto attention = testgen::attention_stream(g, config.duration_ms, 30);
        const auto scores = testgen::score_stream(g, config.duration_ms, 30);
        const auto snapshots = fold_stream(attention, scores, config);

        const double r_star = r_star_sum(snapshots, snapshots.front().score_ratio);
        CHECK(std::abs(r_star - snapshots.back().score_ratio) < 1e-12);

        // independent recomputation: S_last - S_first + r_0
        const double brute = snapshots.back().score_ratio -
                             snapshots.front().score_ratio + 0.33;
        CHECK(r_star_sum(snapshots, 0.33) == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("paired_stats matches the hand-computed example") {
    const std::vector<double> on{3, 4, 5};
    const std::vector<double> off{2, 4, 4};
    const PairedReport r = paired_stats(on, off);
    CHECK(r.n_pairs == 3);
    CHECK(r.df == 2);
    CHECK(r.mean_diff == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(r.t_stat == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.mean_on == doctest::Approx(4.0));
    CHECK(r.mean_off == doctest::Approx(10.0 / 3.0));
    CHECK(r.sd_on == doctest::Approx(1.0));
    CHECK(r.improved_fraction == doctest::Approx(2.0 / 3.0));
    REQUIRE(r.per_pair.size() == 3);
    CHECK(r.per_pair[0].score_on == 3.0);
    CHECK(r.per_pair[0].score_off == 2.0);
}

TEST_CASE("paired_stats on identical arms gives t=0 and no improvements") {
    const std::vector<double> xs{5, 6, 7, 8};
    const PairedReport r = paired_stats(xs, xs);
    CHECK(r.t_stat == 0.0);
    CHECK(r.mean_diff == 0.0);
    CHECK(r.improved_fraction == 0.0);
}

TEST_CASE("paired_stats error paths") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{1, 2};
    CHECK_THROWS_AS(paired_stats(a, b), Error);

    const std::vector<double> one{1};
    CHECK_THROWS_AS(paired_stats(one, one), Error);

    // constant non-zero shift: zero variance with non-zero mean difference
    const std::vector<double> off{2, 3, 4};
    const std::vector<double> on{3, 4, 5};
    try {
        paired_stats(on, off);
        FAIL("expected DegenerateVariance");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateVariance);
    }
}

TEST_CASE("paired_stats properties: translation invariance and antisymmetry") {
    std::mt19937_64 g(23);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::integer(g, 2, 30));
        std::vector<double> on(n), off(n);
        for (std::size_t i = 0; i < n; ++i) {
            on[i] = testgen::uniform(g, 0.0, 100.0);
            off[i] = testgen::uniform(g, 0.0, 100.0);
        }

        PairedReport base;
        try {
            base = paired_stats(on, off);
        } catch (const Error&) {
            continue;  // degenerate draw
        }

        // adding the same constant to both arms changes nothing paired
        const double shift = testgen::uniform(g, -50.0, 50.0);
        std::vector<double> on_s(on), off_s(off);
        for (double& x : on_s) x += shift;
        for (double& x : off_s) x += shift;
        const PairedReport shifted = paired_stats(on_s, off_s);
        CHECK(shifted.t_stat == doctest::Approx(base.t_stat).epsilon(1e-9));
        CHECK(shifted.mean_diff == doctest::Approx(base.mean_diff).epsilon(1e-9));
        CHECK(shifted.df == base.df);

        // swapping arms negates t and mean_diff
        const PairedReport swapped = paired_stats(off, on);
        CHECK(swapped.t_stat == doctest::Approx(-base.t_stat).epsilon(1e-9));
        CHECK(swapped.mean_diff == doctest::Approx(-base.mean_diff).epsilon(1e-9));
        std::size_t strict_decreases = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (off[i] > on[i]) ++strict_decreases;
        CHECK(swapped.improved_fraction ==
              doctest::Approx(static_cast<double>(strict_decreases) / n));
    }
}

TEST_CASE("report aggregates are recomputable from the per-pair rows") {
    SessionConfig config;
    config.duration_ms = 20000;
    const PairedReport r = run_experiment(8, config, 100);
    REQUIRE(r.per_pair.size() == 8);

    double sum_on = 0, sum_off = 0;
    std::size_t improved = 0;
    for (const PairedSample& p : r.per_pair) {
        sum_on += p.score_on;
        sum_off += p.score_off;
        if (p.score_on > p.score_off) ++improved;
    }
    CHECK(r.mean_on == doctest::Approx(sum_on / 8).epsilon(1e-12));
    CHECK(r.mean_off == doctest::Approx(sum_off / 8).epsilon(1e-12));
    CHECK(r.improved_fraction == doctest::Approx(improved / 8.0));
    CHECK(r.per_pair.front().seed == 100);
    CHECK(r.per_pair.back().seed == 107);
}

TEST_CASE("run_experiment pairs arms on the same seed and is deterministic") {
    SessionConfig config;
    config.duration_ms = 25000;
    const PairedReport a = run_experiment(3, config, 7);
    const PairedReport b = run_experiment(3, config, 7);
    CHECK(a == b);
    CHECK(a.n_pairs == 3);
    CHECK(a.df == 2);

    // the two arms really are the strategies, run at the pair's seed
    const SessionLog on_log = run_session(config, "table1", 7);
    const SessionLog off_log = run_session(config, "control-fixed", 7);
    CHECK(a.per_pair[0].score_on == doctest::Approx(overall_performance(on_log)));
    CHECK(a.per_pair[0].score_off == doctest::Approx(overall_performance(off_log)));

    CHECK_THROWS_AS(run_experiment(1, config, 0), Error);
}
