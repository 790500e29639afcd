#pragma once

#include <cstdint>
#include <random>

namespace dsa {

// Deterministic random source for simulated sessions. One instance drives
// all randomness of a session so logs reproduce bit-for-bit from the seed.
//
// Draw counts are fixed: bernoulli consumes one uniform, normal always
// consumes exactly two (Box-Muller, no caching, even when sd == 0). A
// simulated window therefore consumes notes_per_window + 2 uniforms
// regardless of scene color or strategy, which keeps paired experiment
// arms aligned on the same underlying stream.
class SessionRng {
public:
    // Identifies the generator family in logs so cross-implementation
    // comparisons know what they are comparing against.
    static constexpr const char* kFamily = "mt19937_64:u53:box-muller2";

    explicit SessionRng(std::uint64_t seed) : gen_(seed) {}

    // 53-bit uniform in [0,1).
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // N(0, sd) via Box-Muller; consumes two uniforms unconditionally.
    double normal(double sd);

private:
    std::mt19937_64 gen_;
};

}  // namespace dsa
