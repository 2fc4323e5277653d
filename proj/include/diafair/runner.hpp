#pragma once

#include "diafair/manifest.hpp"
#include "diafair/outcome.hpp"
#include "diafair/rttm.hpp"

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>

namespace diafair {

/// Reads hypotheses from one RTTM file or from every `*.rttm` file of a
/// directory (not recursive), keeping only `ids`.
///
/// File ids inside the RTTM decide which utterance a segment belongs to. The
/// one exception is an `<id>.rttm` file holding no SPEAKER line at all in
/// directory mode: it declares an empty hypothesis (no speech) for `<id>`.
/// Ids found nowhere map to an empty hypothesis under TreatAsZero and raise
/// MissingHypothesis under Error.
HypothesisMap load_hypotheses(const std::filesystem::path& location, const std::set<std::string>& ids,
                              MissingPolicy policy);

struct RunnerConfig {
    /// Shell command with `{audio}` and `{out}` placeholders. Substituted
    /// values are single-quoted for /bin/sh.
    std::string command_template;
    std::filesystem::path cache_dir;
    /// Directory that relative manifest audio paths are resolved against.
    std::filesystem::path audio_root;
    int timeout_seconds = 600;
    MissingPolicy missing_policy = MissingPolicy::Error;
    std::size_t workers = 1;

    /// Throws InvalidConfig when a placeholder is missing, the timeout is not
    /// positive or workers is zero.
    void validate() const;
};

struct RunStats {
    std::size_t executed = 0;
    std::size_t cache_hits = 0;
    std::size_t failures = 0;  // only non-zero under TreatAsZero
};

/// Returns one hypothesis per record. Cached entries
/// (`cache_dir/<id>.rttm` with a matching `<id>.sum` audio checksum) are
/// reused; everything else runs the command and is written back atomically.
/// Under TreatAsZero a failing utterance yields an empty hypothesis and is
/// not cached; under Error the failure of the first such record (in record
/// order) is thrown.
HypothesisMap run_diarizer(std::span<const UtteranceRecord> records, const RunnerConfig& config,
                           RunStats* stats = nullptr);

/// Replaces `{audio}` and `{out}` with shell-quoted paths.
std::string expand_command(const std::string& tmpl, const std::string& audio, const std::string& out);

/// Lower-case hex SHA-256 of a file's bytes.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace diafair
