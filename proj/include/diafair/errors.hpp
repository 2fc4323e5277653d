#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diafair {

/// Base of every data or usage error raised by the library. The CLI maps
/// these to exit status 1; anything else escaping is treated as internal.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- manifest ----

class MissingColumn : public Error {
public:
    explicit MissingColumn(std::string name)
        : Error("manifest is missing required column '" + name + "'"), column(std::move(name)) {}
    std::string column;
};

class DuplicateUtteranceId : public Error {
public:
    explicit DuplicateUtteranceId(std::string id)
        : Error("duplicate utterance id '" + id + "'"), utterance_id(std::move(id)) {}
    std::string utterance_id;
};

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& why)
        : Error("manifest line " + std::to_string(line) + ": " + why), line_no(line) {}
    std::size_t line_no;
};

// ---- rttm ----

class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line, const std::string& why)
        : Error("rttm line " + std::to_string(line) + ": " + why), line_no(line) {}
    std::size_t line_no;
};

class NonPositiveDuration : public Error {
public:
    explicit NonPositiveDuration(std::size_t line)
        : Error("rttm line " + std::to_string(line) + ": duration must be positive"), line_no(line) {}
    std::size_t line_no;
};

class UnsupportedType : public Error {
public:
    UnsupportedType(std::size_t line, const std::string& type)
        : Error("rttm line " + std::to_string(line) + ": unsupported record type '" + type + "'"),
          line_no(line) {}
    std::size_t line_no;
};

// ---- hypotheses / runner ----

class MissingHypothesis : public Error {
public:
    explicit MissingHypothesis(std::string id)
        : Error("no hypothesis for utterance '" + id + "'"), utterance_id(std::move(id)) {}
    std::string utterance_id;
};

class ConflictingHypothesis : public Error {
public:
    explicit ConflictingHypothesis(std::string id)
        : Error("utterance '" + id + "' has differing hypotheses in several rttm files"),
          utterance_id(std::move(id)) {}
    std::string utterance_id;
};

class DiarizerFailed : public Error {
public:
    DiarizerFailed(std::string id, int status)
        : Error("diarizer failed on '" + id + "' with exit status " + std::to_string(status)),
          utterance_id(std::move(id)), exit_status(status) {}
    std::string utterance_id;
    int exit_status;
};

class DiarizerTimeout : public Error {
public:
    explicit DiarizerTimeout(std::string id)
        : Error("diarizer timed out on '" + id + "'"), utterance_id(std::move(id)) {}
    std::string utterance_id;
};

class InvalidOutput : public Error {
public:
    InvalidOutput(std::string id, const std::string& why)
        : Error("diarizer output for '" + id + "' is invalid: " + why), utterance_id(std::move(id)) {}
    std::string utterance_id;
};

class MissingAudio : public Error {
public:
    MissingAudio(std::string id, const std::string& path)
        : Error("audio for '" + id + "' not found at " + path), utterance_id(std::move(id)) {}
    std::string utterance_id;
};

// ---- statistics ----

class EmptyGroup : public Error {
public:
    EmptyGroup() : Error("cannot estimate proportions of an empty group") {}
};

class EmptyEvaluation : public Error {
public:
    EmptyEvaluation() : Error("no outcomes to evaluate") {}
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class DegenerateP : public Error {
public:
    explicit DegenerateP(double p)
        : Error("cannot invert margin at p = " + std::to_string(p)) {}
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

}  // namespace diafair
