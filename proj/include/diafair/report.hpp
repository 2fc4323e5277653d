#pragma once

#include "diafair/stats.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace diafair {

struct CriterionReport {
    Criterion criterion = Criterion::Gender;
    std::vector<GroupStats> groups;

    bool operator==(const CriterionReport&) const = default;
};

struct ReportMetadata {
    double z_value = kDefaultZ;
    std::int64_t min_group_n = 10;
    std::int64_t total_utterances = 0;
    std::string missing_policy = "error";
    std::string tool_version;
    std::optional<std::string> timestamp;
    std::optional<std::string> diarizer_command;
    /// Pooled statistics over every utterance, labeled or not.
    GroupStats overall;
    /// True when no utterance got zero or several speakers. A system that
    /// always emits one speaker lands here with DFR 1.0 everywhere, so the
    /// rate says nothing about segmentation quality in that case.
    bool degenerate_single_speaker = false;
    std::vector<std::string> caveats;

    bool operator==(const ReportMetadata&) const = default;
};

struct FairnessReport {
    std::vector<CriterionReport> criteria;
    ReportMetadata metadata;

    const CriterionReport* find(Criterion c) const;
    bool operator==(const FairnessReport&) const = default;
};

/// Partitions the outcomes once per configured criterion (records whose label
/// is Unknown sit out that criterion only) and computes group statistics.
/// Throws EmptyEvaluation on an empty input.
FairnessReport build_report(std::span<const JoinedOutcome> outcomes, const EvaluationConfig& config);

enum class TableFormat { Markdown, Csv };

/// Outcome rates and margins in percent with two decimals. Margins of
/// exactly zero print as "-".
std::string render_table(const FairnessReport& report, TableFormat format);

/// Canonical JSON: object keys sorted, groups in report order, full precision.
std::string emit_json(const FairnessReport& report);
FairnessReport parse_report_json(const std::string& text);

/// A single group as the JSON object used inside reports.
std::string emit_group_json(const GroupStats& group);

/// Long-form CSV for grouped bar charts with error bars:
/// criterion,group,class,value,margin,n,excluded.
std::string emit_plot_data(const FairnessReport& report);

/// "12.34" for 0.1234.
std::string format_percent(double proportion);

/// One-line run summary for terminals.
std::string summary_line(const FairnessReport& report);

}  // namespace diafair
