#pragma once

// Seeded Monte Carlo sequential-measurement sampler: the relative-frequency
// oracle for consecutive probabilities. Each trial walks the event sequence
// drawing YES with the conditional step probability ||E v||^2 / ||v||^2, so
// the empirical frequency estimates the analytic consecutive probability
// through the chain rule rather than a direct Bernoulli draw.

#include <cstdint>
#include <optional>
#include <vector>

#include "qprob/born.hpp"
#include "qprob/evolution.hpp"

namespace qprob {

struct SampleReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double frequency = 0.0;
    double analytic = 0.0;
    double z_score = 0.0;
    bool exact_match = false; // set instead of z when analytic is 0 or 1
    std::uint64_t seed = 0;
    // Per-step tallies: step k is attempted only by trials that passed the
    // first k events, so the product of step ratios is the frequency exactly.
    std::vector<std::uint64_t> step_attempts;
    std::vector<std::uint64_t> step_passes;
};

/// Runs `trials` independent trials of the sequence from the pure state psi,
/// optionally with unitary evolution between events (times must then cover
/// the sequence as in prob_with_evolution). Deterministic given the seed:
/// trial i uses a stream derived from (seed, i). Contractive evolution is
/// rejected with NonUnitaryEvolution.
SampleReport sample_sequence(const EventSequence& seq,
                             const std::optional<std::vector<double>>& times,
                             const std::optional<EvolutionFamily>& evo,
                             const PureState& psi, std::uint64_t trials,
                             std::uint64_t seed);

} // namespace qprob
