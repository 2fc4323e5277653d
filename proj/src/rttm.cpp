#include "diafair/rttm.hpp"

#include "diafair/errors.hpp"
#include "text_util.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace diafair {

namespace {

std::optional<double> parse_number(const std::string& s) {
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace

HypothesisMap parse_rttm(std::istream& source) {
    HypothesisMap out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        detail::strip_cr(line);
        const auto fields = detail::split_ws(line);
        if (fields.empty()) continue;
        if (fields.front().rfind(";;", 0) == 0) continue;
        if (fields.size() != 10) {
            throw MalformedLine(line_no, "expected 10 fields, found " + std::to_string(fields.size()));
        }
        if (fields[0] != "SPEAKER") throw UnsupportedType(line_no, fields[0]);

        const auto onset = parse_number(fields[3]);
        const auto duration = parse_number(fields[4]);
        if (!onset || !duration) throw MalformedLine(line_no, "onset and duration must be numeric");
        if (*onset < 0.0) throw MalformedLine(line_no, "onset must be non-negative");
        if (*duration <= 0.0) throw NonPositiveDuration(line_no);

        auto& hyp = out[fields[1]];
        hyp.utterance_id = fields[1];
        hyp.segments.push_back({*onset, *duration, fields[7]});
    }
    return out;
}

HypothesisMap parse_rttm_string(const std::string& text) {
    std::istringstream in(text);
    return parse_rttm(in);
}

std::string format_time(double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", seconds);
    return buf;
}

std::string serialize_rttm(const HypothesisMap& hypotheses) {
    std::string out;
    for (const auto& [id, hyp] : hypotheses) {
        for (const auto& seg : hyp.segments) {
            out += "SPEAKER ";
            out += id;
            out += " 1 ";
            out += format_time(seg.onset);
            out += ' ';
            out += format_time(seg.duration);
            out += " <NA> <NA> ";
            out += seg.speaker;
            out += " <NA> <NA>\n";
        }
    }
    return out;
}

}  // namespace diafair
