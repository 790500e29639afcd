// evaluation.hpp — session scoring and the paired experimental protocol.

#pragma once

#include <span>

#include "dsa/types.hpp"

namespace dsa {

// Whole-session score on a 0..100 scale: 100 * points / max points
// (0 when the session had no scoring opportunities).
double overall_performance(const SessionLog& log);

// r_0 plus the sum of defined instant performances. With r_0 = S_first this
// telescopes to S_last.
double r_star_sum(std::span<const WindowSnapshot> snapshots, double r_0);

// Paired t statistics on within-pair differences d_i = on_i - off_i:
// t = mean(d) / (sd(d)/sqrt(n)), sample SD (n-1 denominator), df = n-1.
// t is defined as 0 when sd(d) = 0 and mean(d) = 0. improved_fraction
// counts strict on > off. per_pair seeds default to the pair index; the
// seeded overload records real seeds.
//
// Throws Error(LengthMismatch), Error(TooFewPairs) for n < 2, and
// Error(DegenerateVariance) when sd(d) = 0 with mean(d) != 0.
PairedReport paired_stats(std::span<const double> on, std::span<const double> off);
PairedReport paired_stats(std::span<const double> on, std::span<const double> off,
                          std::span<const std::uint64_t> seeds);

// Paired design: for k in 0..n_pairs-1 run the session at seed
// seed_start + k under "table1" (on) and "control-fixed" (off), score both
// with overall_performance, and aggregate. Deterministic in its arguments.
PairedReport run_experiment(std::int64_t n_pairs, const SessionConfig& base_config,
                            std::uint64_t seed_start);

}  // namespace dsa
