#include "diafair/oracle.hpp"

#include "diafair/errors.hpp"
#include "diafair/stats.hpp"

#include <cmath>

namespace diafair {

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

void SimulationSpec::validate() const {
    for (double p : {p0, p1, pplus}) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidSpec("probabilities must lie in [0, 1]");
    }
    if (std::abs(p0 + p1 + pplus - 1.0) > 1e-12) throw InvalidSpec("probabilities must sum to 1");
    if (n < 1) throw InvalidSpec("n must be at least 1");
}

std::vector<OutcomeClass> simulate_outcomes(const SimulationSpec& spec) {
    spec.validate();
    SeededUniform rng(spec.seed);
    const double cut_one = spec.p0 + spec.p1;
    std::vector<OutcomeClass> out;
    out.reserve(static_cast<std::size_t>(spec.n));
    for (std::int64_t i = 0; i < spec.n; ++i) {
        const double u = rng.next();
        if (u < spec.p0) {
            out.push_back(classify_outcome(0));
        } else if (u < cut_one) {
            out.push_back(classify_outcome(1));
        } else {
            out.push_back(classify_outcome(2));
        }
    }
    return out;
}

double coverage_experiment(double p_true, std::int64_t n, std::int64_t trials, double z, std::uint64_t seed) {
    if (!(p_true > 0.0 && p_true < 1.0)) throw InvalidSpec("p must lie strictly between 0 and 1");
    if (n < 1 || trials < 1) throw InvalidSpec("n and trials must be at least 1");
    if (!(z >= 0.0)) throw InvalidSpec("z must be non-negative");

    std::int64_t covered = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        SeededUniform rng(split_seed(seed, static_cast<std::uint64_t>(t)));
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < n; ++i) hits += rng.next() < p_true ? 1 : 0;
        const double p_hat = static_cast<double>(hits) / static_cast<double>(n);
        const double eps = margin(p_hat, n, z);
        if (p_hat - eps < p_true && p_true < p_hat + eps) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(trials);
}

double invert_margin(double p, double eps, double z) {
    if (!(p > 0.0 && p < 1.0)) throw DegenerateP(p);
    if (!(eps > 0.0)) throw InvalidSpec("margin must be positive");
    return z * z * p * (1.0 - p) / (eps * eps);
}

}  // namespace diafair
