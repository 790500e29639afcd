#include "dsa/rng.hpp"

#include <cmath>
#include <numbers>

namespace dsa {

double SessionRng::normal(double sd) {
    // Box-Muller with a fixed draw count. u1 is shifted into (0,1] so the
    // log is always finite.
    const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return z * sd;
}

}  // namespace dsa
