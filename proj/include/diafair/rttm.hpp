#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace diafair {

struct SpeakerSegment {
    double onset = 0.0;     // seconds, >= 0
    double duration = 0.0;  // seconds, > 0
    std::string speaker;

    bool operator==(const SpeakerSegment&) const = default;
};

/// A diarizer's output for one utterance. No segments means no speech.
struct Hypothesis {
    std::string utterance_id;
    std::vector<SpeakerSegment> segments;

    bool operator==(const Hypothesis&) const = default;
};

using HypothesisMap = std::map<std::string, Hypothesis>;

/// Parses RTTM SPEAKER lines, grouping segments by file id (field 2).
/// Lines starting with ";;" and blank lines are skipped.
HypothesisMap parse_rttm(std::istream& source);
HypothesisMap parse_rttm_string(const std::string& text);

/// Canonical RTTM: file ids in lexicographic order, times with two decimals,
/// channel 1 and "<NA>" placeholders. Hypotheses without segments produce no
/// lines.
std::string serialize_rttm(const HypothesisMap& hypotheses);

/// Time rendered the way serialize_rttm writes it.
std::string format_time(double seconds);

}  // namespace diafair
