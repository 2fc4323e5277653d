#pragma once

#include "diafair/errors.hpp"
#include "diafair/report.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace diafair {

/// An Error raised inside one pipeline stage ("parse", "join" or "stats").
class StageError : public Error {
public:
    StageError(std::string stage_name, const std::string& what)
        : Error(stage_name + ": " + what), stage(std::move(stage_name)) {}
    std::string stage;
};

struct EvaluateRequest {
    std::filesystem::path manifest;
    std::filesystem::path hypotheses;
    EvaluationConfig config;
    std::optional<std::string> timestamp;
    std::optional<std::string> diarizer_command;
};

/// Manifest + hypotheses to report: parse, join, then statistics.
FairnessReport evaluate(const EvaluateRequest& request);

}  // namespace diafair
