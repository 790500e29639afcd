#include "dsa/types.hpp"

#include "dsa/errors.hpp"

namespace dsa {

const char* to_string(Color c) {
    return c == Color::Red ? "Red" : "Blue";
}

const char* to_string(AttentionLevel level) {
    return level == AttentionLevel::High ? "High" : "Low";
}

const char* to_string(CommandReason reason) {
    switch (reason) {
        case CommandReason::Row1: return "Row1";
        case CommandReason::Row2: return "Row2";
        case CommandReason::Row3: return "Row3";
        case CommandReason::Row4Maintain: return "Row4Maintain";
        case CommandReason::ControlFixed: return "ControlFixed";
    }
    return "ControlFixed";
}

std::optional<Color> color_from_string(std::string_view s) {
    if (s == "Red") return Color::Red;
    if (s == "Blue") return Color::Blue;
    return std::nullopt;
}

std::optional<AttentionLevel> attention_level_from_string(std::string_view s) {
    if (s == "High") return AttentionLevel::High;
    if (s == "Low") return AttentionLevel::Low;
    return std::nullopt;
}

std::optional<CommandReason> command_reason_from_string(std::string_view s) {
    if (s == "Row1") return CommandReason::Row1;
    if (s == "Row2") return CommandReason::Row2;
    if (s == "Row3") return CommandReason::Row3;
    if (s == "Row4Maintain") return CommandReason::Row4Maintain;
    if (s == "ControlFixed") return CommandReason::ControlFixed;
    return std::nullopt;
}

const char* to_string(Errc code) {
    switch (code) {
        case Errc::NonPositiveWindow: return "NonPositiveWindow";
        case Errc::ThresholdOutOfRange: return "ThresholdOutOfRange";
        case Errc::DurationShorterThanWindow: return "DurationShorterThanWindow";
        case Errc::InvalidUserModel: return "InvalidUserModel";
        case Errc::UnknownStrategy: return "UnknownStrategy";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::UnsortedInput: return "UnsortedInput";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::TooFewPairs: return "TooFewPairs";
        case Errc::DegenerateVariance: return "DegenerateVariance";
        case Errc::StaleEvent: return "StaleEvent";
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::ProtocolOrderViolation: return "ProtocolOrderViolation";
        case Errc::BindFailure: return "BindFailure";
        case Errc::IoError: return "IoError";
    }
    return "IoError";
}

}  // namespace dsa
