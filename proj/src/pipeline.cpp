#include "diafair/pipeline.hpp"

#include "diafair/manifest.hpp"
#include "diafair/runner.hpp"

#include <set>

namespace diafair {

FairnessReport evaluate(const EvaluateRequest& request) {
    try {
        request.config.validate();
    } catch (const Error& e) {
        throw StageError("config", e.what());
    }

    std::vector<UtteranceRecord> records;
    HypothesisMap hypotheses;
    try {
        records = parse_manifest_file(request.manifest.string());
        std::set<std::string> ids;
        for (const auto& r : records) ids.insert(r.utterance_id);
        hypotheses = load_hypotheses(request.hypotheses, ids, request.config.missing_policy);
    } catch (const Error& e) {
        throw StageError("parse", e.what());
    }

    std::vector<JoinedOutcome> joined;
    try {
        joined = join_outcomes(records, hypotheses, request.config.missing_policy);
    } catch (const Error& e) {
        throw StageError("join", e.what());
    }

    try {
        FairnessReport report = build_report(joined, request.config);
        report.metadata.timestamp = request.timestamp;
        report.metadata.diarizer_command = request.diarizer_command;
        return report;
    } catch (const Error& e) {
        throw StageError("stats", e.what());
    }
}

}  // namespace diafair
