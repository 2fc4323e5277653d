#pragma once

#include "diafair/outcome.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diafair {

/// Non-negative rational kept in lowest terms. Proportions stay exact until a
/// caller asks for a double.
class Ratio {
public:
    constexpr Ratio() = default;
    Ratio(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Ratio operator+(const Ratio& a, const Ratio& b);
    friend Ratio operator-(const Ratio& a, const Ratio& b);
    bool operator==(const Ratio&) const = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct OutcomeCounts {
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
    std::int64_t nplus = 0;

    std::int64_t total() const { return n0 + n1 + nplus; }
    bool operator==(const OutcomeCounts&) const = default;
};

struct Proportions {
    Ratio p0;
    Ratio p1;
    Ratio pplus;

    bool operator==(const Proportions&) const = default;
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;

    bool operator==(const ConfidenceInterval&) const = default;
};

struct Margins {
    double eps_p0 = 0.0;
    double eps_p1 = 0.0;
    double eps_pplus = 0.0;

    bool operator==(const Margins&) const = default;
};

struct Intervals {
    ConfidenceInterval p0;
    ConfidenceInterval p1;
    ConfidenceInterval pplus;

    bool operator==(const Intervals&) const = default;
};

struct GroupStats {
    std::string group_key;
    OutcomeCounts counts;
    Proportions proportions;
    std::optional<Margins> margins;      // absent when excluded
    std::optional<Intervals> intervals;  // absent when excluded
    double dfr = 0.0;
    bool excluded = false;

    bool operator==(const GroupStats&) const = default;
};

enum class Criterion { Gender, Age, Accent, Length };

inline constexpr Criterion kAllCriteria[] = {Criterion::Gender, Criterion::Age, Criterion::Accent,
                                             Criterion::Length};

std::string_view to_string(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view name);

/// Group key of a record under a criterion, or nullopt when its label is Unknown.
std::optional<std::string> group_key(const UtteranceRecord& rec, Criterion c);

/// Canonical presentation order of a criterion's group keys.
std::vector<std::string> canonical_keys(Criterion c);

inline constexpr double kDefaultZ = 2.58;

struct EvaluationConfig {
    double z_value = kDefaultZ;
    std::int64_t min_group_n = 10;
    MissingPolicy missing_policy = MissingPolicy::Error;
    std::vector<Criterion> criteria{std::begin(kAllCriteria), std::end(kAllCriteria)};

    /// Throws InvalidConfig on z <= 0, min_group_n < 1 or an empty or
    /// repeated criterion list.
    void validate() const;
};

OutcomeCounts tally(std::span<const OutcomeClass> outcomes);
OutcomeCounts tally(std::span<const JoinedOutcome> outcomes);

/// Exact n_k / N. Throws EmptyGroup when N = 0.
Proportions estimate_proportions(const OutcomeCounts& counts);

/// Normal-approximation half width z * sqrt(p (1 - p) / N).
double margin(double p, std::int64_t n, double z);

/// Same quantity evaluated from the class count k out of N, so that
/// complementary counts (k and N - k) give bit-identical margins.
double margin_from_count(std::int64_t k, std::int64_t n, double z);

/// [p - eps, p + eps] clamped to [0, 1].
ConfidenceInterval confidence_interval(double p, double eps);

/// Diarization fairness rate: the share of utterances given exactly one speaker.
Ratio dfr_exact(const Proportions& p);
double dfr(const Proportions& p);

/// Statistics for a single group. Groups below config.min_group_n are flagged
/// excluded and carry no margins or intervals.
GroupStats make_group_stats(std::string key, const OutcomeCounts& counts, const EvaluationConfig& config);

using GroupPartition = std::map<std::string, std::vector<JoinedOutcome>>;

/// One GroupStats per non-empty group, in the criterion's canonical order;
/// keys outside that order follow, sorted.
std::vector<GroupStats> group_stats(const GroupPartition& partition, const EvaluationConfig& config,
                                    Criterion criterion);

}  // namespace diafair
