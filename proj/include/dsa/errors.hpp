#pragma once

#include <stdexcept>
#include <string>

namespace dsa {

// Error codes surfaced through exceptions, validation issues, and the wire
// protocol's error messages.
enum class Errc {
    NonPositiveWindow,
    ThresholdOutOfRange,
    DurationShorterThanWindow,
    InvalidUserModel,
    UnknownStrategy,
    InvalidConfig,
    UnsortedInput,
    LengthMismatch,
    TooFewPairs,
    DegenerateVariance,
    StaleEvent,
    MalformedLine,
    ProtocolOrderViolation,
    BindFailure,
    IoError,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace dsa
