#pragma once

#include "diafair/outcome.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace diafair {

/// Random source shared by the simulators.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform doubles are built directly from the top 53 bits
/// ((x >> 11) * 2^-53) rather than through std::uniform_real_distribution,
/// whose algorithm is implementation-defined, so the same seed gives the same
/// draws on every platform.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent sub-stream: mix64(seed + (index + 1) * 0x9E3779B97F4A7C15),
/// i.e. the (index + 1)-th output of a SplitMix64 generator started at `seed`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

struct SimulationSpec {
    double p0 = 0.0;
    double p1 = 1.0;
    double pplus = 0.0;
    std::int64_t n = 1;
    std::uint64_t seed = 0;

    /// Throws InvalidSpec unless every probability is in [0, 1], they sum to
    /// 1 within 1e-12 and n >= 1.
    void validate() const;
};

/// n independent categorical draws: Zero when u < p0, One when u < p0 + p1,
/// Multi otherwise (reported with two speakers).
std::vector<OutcomeClass> simulate_outcomes(const SimulationSpec& spec);

/// Fraction of `trials` simulated studies of n Bernoulli(p_true) draws whose
/// interval p_hat +- margin(p_hat, n, z) strictly contains p_true. Trial t
/// draws from split_seed(seed, t).
double coverage_experiment(double p_true, std::int64_t n, std::int64_t trials, double z, std::uint64_t seed);

/// Sample size implied by a margin: z^2 p (1 - p) / eps^2, unrounded.
/// Throws DegenerateP for p outside (0, 1) and InvalidSpec for eps <= 0.
double invert_margin(double p, double eps, double z);

}  // namespace diafair
