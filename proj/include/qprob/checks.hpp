#pragma once

// Self-check suites runnable from the CLI and reused by the test binaries:
// closed-form worked examples with known values, and randomized invariant
// checks (spectral round trips, model equivalence, monotonicity, the
// entanglement equivalence, sampler calibration). All randomness is seeded.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qprob/hilbert.hpp"
#include "qprob/linalg.hpp"

namespace qprob {

// Seeded generators for random test instances.
CVector random_unit_vector(Eigen::Index dim, std::mt19937_64& rng);
CMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);
CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);
/// A projector of uniformly chosen rank in [0, dim].
Event random_event(Eigen::Index dim, std::mt19937_64& rng);
DensityMatrix random_density(Eigen::Index dim, std::mt19937_64& rng);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // worst deviation, counts, or the failure reason
};

struct SuiteReport {
    std::vector<CheckResult> results;
    bool pass() const;
};

/// Closed-form worked examples: the two-particle spin table, the measuring
/// device table, operator identities of the three-event construction, order
/// dependence of consecutive probabilities, two-level oscillation, and the
/// intermediate-filter effect.
SuiteReport run_worked_examples_suite(std::uint64_t seed, int instances);

/// Randomized invariants: spectral round trips, pvm multiplicativity,
/// state-evolving vs operator-evolving model agreement, unitary model
/// isomorphism, probability conservation, sequence monotonicity, the
/// derivative identity, the entanglement equivalence, and a sampler z-check.
SuiteReport run_invariants_suite(std::uint64_t seed, int instances);

/// One line per check: "[PASS|FAIL] name  detail".
std::string format_suite(const SuiteReport& report);

} // namespace qprob
