#include "dsa/evaluation.hpp"

#include <cmath>
#include <numeric>

#include "dsa/errors.hpp"
#include "dsa/user_sim.hpp"

namespace dsa {

double overall_performance(const SessionLog& log) {
    if (log.summary.total_max_points <= 0) return 0.0;
    return 100.0 * static_cast<double>(log.summary.total_points) /
           static_cast<double>(log.summary.total_max_points);
}

double r_star_sum(std::span<const WindowSnapshot> snapshots, double r_0) {
    double sum = r_0;
    for (const WindowSnapshot& s : snapshots) {
        if (s.instant_performance) sum += *s.instant_performance;
    }
    return sum;
}

namespace {

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Sample standard deviation (n-1 denominator).
double sd_of(std::span<const double> xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

PairedReport paired_stats(std::span<const double> on, std::span<const double> off,
                          std::span<const std::uint64_t> seeds) {
    if (on.size() != off.size())
        throw Error(Errc::LengthMismatch,
                    "arms have " + std::to_string(on.size()) + " vs " +
                        std::to_string(off.size()) + " entries");
    const std::size_t n = on.size();
    if (n < 2)
        throw Error(Errc::TooFewPairs,
                    "need at least 2 pairs, got " + std::to_string(n));
    if (!seeds.empty() && seeds.size() != n)
        throw Error(Errc::LengthMismatch, "seed list does not match pair count");

    std::vector<double> diffs(n);
    for (std::size_t i = 0; i < n; ++i) diffs[i] = on[i] - off[i];

    PairedReport report;
    report.n_pairs = static_cast<std::int64_t>(n);
    report.df = report.n_pairs - 1;
    report.mean_on = mean_of(on);
    report.sd_on = sd_of(on, report.mean_on);
    report.mean_off = mean_of(off);
    report.sd_off = sd_of(off, report.mean_off);
    report.mean_diff = mean_of(diffs);

    const double sd_diff = sd_of(diffs, report.mean_diff);
    if (sd_diff == 0.0) {
        if (report.mean_diff != 0.0)
            throw Error(Errc::DegenerateVariance,
                        "all within-pair differences are identical and non-zero");
        report.t_stat = 0.0;
    } else {
        report.t_stat =
            report.mean_diff / (sd_diff / std::sqrt(static_cast<double>(n)));
    }

    std::int64_t improved = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (on[i] > off[i]) ++improved;
        PairedSample sample;
        sample.seed = seeds.empty() ? static_cast<std::uint64_t>(i) : seeds[i];
        sample.score_on = on[i];
        sample.score_off = off[i];
        report.per_pair.push_back(sample);
    }
    report.improved_fraction =
        static_cast<double>(improved) / static_cast<double>(n);
    return report;
}

PairedReport paired_stats(std::span<const double> on, std::span<const double> off) {
    return paired_stats(on, off, {});
}

PairedReport run_experiment(std::int64_t n_pairs, const SessionConfig& base_config,
                            std::uint64_t seed_start) {
    if (n_pairs < 2)
        throw Error(Errc::TooFewPairs,
                    "need at least 2 pairs, got " + std::to_string(n_pairs));
    std::vector<double> on, off;
    std::vector<std::uint64_t> seeds;
    on.reserve(static_cast<std::size_t>(n_pairs));
    off.reserve(static_cast<std::size_t>(n_pairs));
    for (std::int64_t k = 0; k < n_pairs; ++k) {
        const std::uint64_t seed = seed_start + static_cast<std::uint64_t>(k);
        on.push_back(overall_performance(run_session(base_config, "table1", seed)));
        off.push_back(overall_performance(run_session(base_config, "control-fixed", seed)));
        seeds.push_back(seed);
    }
    return paired_stats(on, off, seeds);
}

}  // namespace dsa
