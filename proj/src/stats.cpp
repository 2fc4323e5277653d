#include "diafair/stats.hpp"

#include "diafair/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace diafair {

Ratio::Ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("Ratio with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

namespace {

Ratio combine(const Ratio& a, const Ratio& b, int sign) {
    __extension__ typedef __int128 wide;
    const std::int64_t g = std::gcd(a.den(), b.den());
    const wide lhs = static_cast<wide>(a.num()) * (b.den() / g);
    const wide rhs = static_cast<wide>(b.num()) * (a.den() / g);
    const wide num = sign > 0 ? lhs + rhs : lhs - rhs;
    const wide den = static_cast<wide>(a.den()) * (b.den() / g);
    // Reduce in wide arithmetic before narrowing.
    wide x = num < 0 ? -num : num;
    wide y = den;
    while (y != 0) {
        const wide t = x % y;
        x = y;
        y = t;
    }
    const wide div = x == 0 ? 1 : x;
    return Ratio(static_cast<std::int64_t>(num / div), static_cast<std::int64_t>(den / div));
}

}  // namespace

Ratio operator+(const Ratio& a, const Ratio& b) { return combine(a, b, +1); }
Ratio operator-(const Ratio& a, const Ratio& b) { return combine(a, b, -1); }

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::Gender: return "gender";
        case Criterion::Age: return "age";
        case Criterion::Accent: return "accent";
        case Criterion::Length: return "length";
    }
    return "gender";
}

std::optional<Criterion> parse_criterion(std::string_view name) {
    for (Criterion c : kAllCriteria) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

std::optional<std::string> group_key(const UtteranceRecord& rec, Criterion c) {
    switch (c) {
        case Criterion::Gender:
            if (rec.gender == Gender::Unknown) return std::nullopt;
            return std::string(to_string(rec.gender));
        case Criterion::Age:
            if (rec.age == Age::Unknown) return std::nullopt;
            return std::string(to_string(rec.age));
        case Criterion::Accent:
            if (rec.accent == Accent::Unknown) return std::nullopt;
            return std::string(to_string(rec.accent));
        case Criterion::Length:
            return std::string(to_string(rec.length_bin));
    }
    return std::nullopt;
}

std::vector<std::string> canonical_keys(Criterion c) {
    std::vector<std::string> keys;
    const auto add = [&keys](const auto& order) {
        for (auto v : order) keys.emplace_back(to_string(v));
    };
    switch (c) {
        case Criterion::Gender: add(kGenderOrder); break;
        case Criterion::Age: add(kAgeOrder); break;
        case Criterion::Accent: add(kAccentOrder); break;
        case Criterion::Length: add(kLengthOrder); break;
    }
    return keys;
}

void EvaluationConfig::validate() const {
    if (!(z_value > 0.0) || !std::isfinite(z_value)) throw InvalidConfig("z value must be positive");
    if (min_group_n < 1) throw InvalidConfig("minimum group size must be at least 1");
    if (criteria.empty()) throw InvalidConfig("no criteria selected");
    std::set<Criterion> unique(criteria.begin(), criteria.end());
    if (unique.size() != criteria.size()) throw InvalidConfig("criterion listed twice");
}

OutcomeCounts tally(std::span<const OutcomeClass> outcomes) {
    OutcomeCounts c;
    for (const auto& o : outcomes) {
        switch (o.kind) {
            case OutcomeKind::Zero: ++c.n0; break;
            case OutcomeKind::One: ++c.n1; break;
            case OutcomeKind::Multi: ++c.nplus; break;
        }
    }
    return c;
}

OutcomeCounts tally(std::span<const JoinedOutcome> outcomes) {
    std::vector<OutcomeClass> classes;
    classes.reserve(outcomes.size());
    for (const auto& j : outcomes) classes.push_back(j.outcome);
    return tally(classes);
}

Proportions estimate_proportions(const OutcomeCounts& counts) {
    const std::int64_t n = counts.total();
    if (n == 0) throw EmptyGroup();
    return {Ratio(counts.n0, n), Ratio(counts.n1, n), Ratio(counts.nplus, n)};
}

double margin(double p, std::int64_t n, double z) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double margin_from_count(std::int64_t k, std::int64_t n, double z) {
    if (k <= 0 || k >= n) return 0.0;
    const double nd = static_cast<double>(n);
    const double spread = static_cast<double>(k) * static_cast<double>(n - k);
    return z * std::sqrt(spread / (nd * nd * nd));
}

ConfidenceInterval confidence_interval(double p, double eps) {
    return {std::max(0.0, p - eps), std::min(1.0, p + eps)};
}

Ratio dfr_exact(const Proportions& p) { return p.p1; }

double dfr(const Proportions& p) { return dfr_exact(p).value(); }

GroupStats make_group_stats(std::string key, const OutcomeCounts& counts, const EvaluationConfig& config) {
    GroupStats g;
    g.group_key = std::move(key);
    g.counts = counts;
    g.proportions = estimate_proportions(counts);
    g.dfr = dfr(g.proportions);
    g.excluded = counts.total() < config.min_group_n;
    if (g.excluded) return g;

    const std::int64_t n = counts.total();
    const double z = config.z_value;
    Margins m{margin_from_count(counts.n0, n, z), margin_from_count(counts.n1, n, z),
              margin_from_count(counts.nplus, n, z)};
    g.intervals = Intervals{confidence_interval(g.proportions.p0.value(), m.eps_p0),
                            confidence_interval(g.proportions.p1.value(), m.eps_p1),
                            confidence_interval(g.proportions.pplus.value(), m.eps_pplus)};
    g.margins = m;
    return g;
}

std::vector<GroupStats> group_stats(const GroupPartition& partition, const EvaluationConfig& config,
                                    Criterion criterion) {
    std::vector<GroupStats> out;
    std::set<std::string> done;
    const auto emit = [&](const std::string& key, const std::vector<JoinedOutcome>& members) {
        done.insert(key);
        if (members.empty()) return;
        out.push_back(make_group_stats(key, tally(members), config));
    };
    for (const auto& key : canonical_keys(criterion)) {
        if (auto it = partition.find(key); it != partition.end()) emit(key, it->second);
    }
    for (const auto& [key, members] : partition) {
        if (!done.contains(key)) emit(key, members);
    }
    return out;
}

}  // namespace diafair
