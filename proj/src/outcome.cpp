#include "diafair/outcome.hpp"

#include "diafair/errors.hpp"

#include <set>
#include <string>

namespace diafair {

std::string_view to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Zero: return "p0";
        case OutcomeKind::One: return "p1";
        case OutcomeKind::Multi: return "pplus";
    }
    return "p0";
}

std::string_view to_string(MissingPolicy p) {
    return p == MissingPolicy::Error ? "error" : "zero";
}

std::size_t count_speakers(const Hypothesis& h) {
    std::set<std::string_view> labels;
    for (const auto& seg : h.segments) labels.insert(seg.speaker);
    return labels.size();
}

OutcomeClass classify_outcome(std::size_t count) {
    if (count == 0) return {OutcomeKind::Zero, 0};
    if (count == 1) return {OutcomeKind::One, 1};
    return {OutcomeKind::Multi, count};
}

std::vector<JoinedOutcome> join_outcomes(std::span<const UtteranceRecord> records,
                                         const HypothesisMap& hypotheses, MissingPolicy policy) {
    std::vector<JoinedOutcome> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        auto it = hypotheses.find(rec.utterance_id);
        if (it == hypotheses.end()) {
            if (policy == MissingPolicy::Error) throw MissingHypothesis(rec.utterance_id);
            out.push_back({rec, classify_outcome(0)});
            continue;
        }
        out.push_back({rec, classify_outcome(count_speakers(it->second))});
    }
    return out;
}

}  // namespace diafair
