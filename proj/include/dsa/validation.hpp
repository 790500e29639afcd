#pragma once

#include <vector>

#include "dsa/errors.hpp"
#include "dsa/types.hpp"

namespace dsa {

struct ConfigIssue {
    Errc code;
    std::string message;

    bool operator==(const ConfigIssue&) const = default;
};

// Checks every SessionConfig invariant and reports all violations, not just
// the first. An empty result means the config is valid as-is. Unknown
// strategy ids are rejected here too.
std::vector<ConfigIssue> validate_config(const SessionConfig& config);

// Throws Error(Errc::InvalidConfig) listing every violation; returns the
// config unchanged when it is valid.
const SessionConfig& require_valid(const SessionConfig& config);

}  // namespace dsa
