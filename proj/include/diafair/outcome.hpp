#pragma once

#include "diafair/manifest.hpp"
#include "diafair/rttm.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace diafair {

enum class OutcomeKind { Zero, One, Multi };

std::string_view to_string(OutcomeKind k);

/// The number of distinct speakers a diarizer reported on one utterance,
/// together with its class: Zero (no speech), One (correct) or Multi.
struct OutcomeClass {
    OutcomeKind kind = OutcomeKind::Zero;
    std::size_t speaker_count = 0;

    bool operator==(const OutcomeClass&) const = default;
};

/// What to do when an utterance has no hypothesis at all.
enum class MissingPolicy { Error, TreatAsZero };

std::string_view to_string(MissingPolicy p);

struct JoinedOutcome {
    UtteranceRecord record;
    OutcomeClass outcome;
};

/// Distinct speaker labels, compared byte-wise (case-sensitive).
std::size_t count_speakers(const Hypothesis& h);

OutcomeClass classify_outcome(std::size_t count);

/// One outcome per record, in record order.
std::vector<JoinedOutcome> join_outcomes(std::span<const UtteranceRecord> records,
                                         const HypothesisMap& hypotheses, MissingPolicy policy);

}  // namespace diafair
