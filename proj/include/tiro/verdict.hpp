#pragma once

#include "tiro/timed_word.hpp"

namespace tiro {

enum class Verdict { robust, not_robust, unknown, resource_exceeded };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::robust: return "Robust";
        case Verdict::not_robust: return "NotRobust";
        case Verdict::unknown: return "Unknown";
        case Verdict::resource_exceeded: return "ResourceExceeded";
    }
    return "?";
}

/// CLI exit status for a verdict.
inline int verdict_exit_code(Verdict v) {
    switch (v) {
        case Verdict::robust: return 0;
        case Verdict::not_robust: return 1;
        case Verdict::unknown: return 2;
        case Verdict::resource_exceeded: return 4;
    }
    return 2;
}

/// Two inputs whose outputs are further apart than K times the inputs' distance.
struct DiscreteWitness {
    Word input_1, input_2, output_1, output_2;
    ExtendedValue input_distance, output_distance;
};

struct TimedWitness {
    TimedWord input_1, input_2, output_1, output_2;
    /// End of the observation window over which the distances were measured.
    Rational horizon;
    ExtendedValue input_distance, output_distance;
};

struct RobustnessResult {
    Verdict verdict = Verdict::unknown;
    Rational K;
    std::optional<TimedWitness> timed;
    std::optional<DiscreteWitness> discrete;
    /// What a Robust verdict rests on, or why the answer is Unknown.
    std::string note;
    std::size_t explored_states = 0;
};

}  // namespace tiro
