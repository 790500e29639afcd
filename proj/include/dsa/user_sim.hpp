// user_sim.hpp — deterministic simulated user and gameplay rules.
//
// Closes the adjustment loop without human subjects: attention evolves
// under the scene color (red drifts it up, blue mean-reverts it toward
// base), and note outcomes are Bernoulli draws whose probability is linear
// in attention.
//
// Per-window order of operations in run_session:
//   1. log one attention sample at the window start (value = current a)
//   2. gameplay_step: notes_per_window hit/miss draws, one per note
//   3. snapshot the window, decide the command for the next window
//   4. attention_step once, under the color in force during this window
// Draw order is notes first, then the attention noise (two uniforms).

#pragma once

#include <vector>

#include "dsa/rng.hpp"
#include "dsa/types.hpp"

namespace dsa {

// One attention update. Red: a + red_drift + fatigue_drift + noise.
// Blue: a + blue_reversion*(base - a) + fatigue_drift + noise.
// Result clamps to [0,1]. Always consumes one normal (two uniforms).
double attention_step(double a, Color color, const UserModelParams& params, SessionRng& rng);

// clamp(skill_offset + skill_slope * a, 0, 1).
double hit_probability(double a, const UserModelParams& params);

// Emits notes_per_window score events spaced uniformly inside window
// window_index: note j lands at k*W + floor(j*W/notes). Each note scores
// points_per_note with probability hit_probability(a), else 0.
std::vector<ScoreEvent> gameplay_step(double a, std::int64_t window_index,
                                      std::int64_t window_ms, const UserModelParams& params,
                                      SessionRng& rng);

// Runs the full closed loop for config.duration_ms using config.strategy_id
// and config.seed. Fully deterministic: identical configs produce
// byte-identical log encodings. Throws Error(InvalidConfig) or
// Error(UnknownStrategy).
SessionLog run_session(const SessionConfig& config);

// Same loop with the strategy and seed overridden (the overrides are echoed
// into the logged config). Used by the paired experiment runner.
SessionLog run_session(SessionConfig config, const std::string& strategy_id,
                       std::uint64_t seed);

}  // namespace dsa
