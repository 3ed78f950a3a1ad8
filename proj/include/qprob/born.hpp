#pragma once

// The probability kernel: single-event, consecutive, conditional, no-state,
// time-evolving, independence, iid, interference decomposition, amplitudes,
// moments, expectations, entropy, and infinite-sequence limits.

#include <complex>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "qprob/evolution.hpp"
#include "qprob/hilbert.hpp"

namespace qprob {

struct NoState {};

/// A pure state, a density matrix, or no state at all (operator-norm mode).
using QState = std::variant<PureState, DensityMatrix, NoState>;

/// Time-ordered event sequence; index 0 is earliest. May be empty.
using EventSequence = std::vector<Event>;

struct ProbValue {
    double value = 0.0;            // clamped to [0, 1]
    bool zero_denominator = false; // the conditional 0-convention fired
};

double prob_value(const CMatrix& product, const QState& s);

/// P(E|psi) = ||E psi||^2, P(E|rho) = Tr(E rho), no state: ||E||_op^2.
ProbValue prob_event(const Event& e, const QState& s);

/// P(T in B | s) through the observable's pvm.
ProbValue prob_obs_in(const Observable& t, const BorelSet& b, const QState& s);

/// P(E_1, ..., E_n | s) = ||E_n ... E_1 psi||^2 (and density / no-state
/// forms). The empty sequence has probability 1.
ProbValue consecutive(const EventSequence& seq, const QState& s);

/// Generalized Born's rule: P(target | given, s) as the ratio of two
/// consecutive probabilities; 0 with zero_denominator set when the
/// denominator vanishes.
ProbValue conditional(const EventSequence& target, const EventSequence& given,
                      const QState& s);

/// Consecutive probability with evolution interspersed: event k applies at
/// times[k + 1], the state is given at times[0].
ProbValue prob_with_evolution(const EventSequence& seq, const std::vector<double>& times,
                              const EvolutionFamily& evo, const QState& s);

/// Conditional form over a shared time grid: times covers given ++ target.
ProbValue conditional_with_evolution(const EventSequence& target,
                                     const EventSequence& given,
                                     const std::vector<double>& times,
                                     const EvolutionFamily& evo, const QState& s);

/// (P(E1,E2|s) - P(E1|s)P(E2|s), same with order swapped). Both zero means
/// independent in both orders.
std::pair<double, double> independence_defect(const Event& e1, const Event& e2,
                                              const QState& s);

/// True iff every order-preserving subsequence factorizes into its singles.
/// Sequences longer than 12 are rejected (all subsets are enumerated).
bool sequence_independent(const EventSequence& seq, const QState& s, double tol = 1e-10);

/// Equal spectral distributions on the union of both eigenvalue sets.
bool identically_distributed(const Observable& s_obs, const Observable& t_obs,
                             const DensityMatrix& rho, double tol = 1e-10);

struct InterferenceTerms {
    double diagonal = 0.0; // sum over parts of P(F_j, E | psi)
    double cross = 0.0;    // the interference term
};

/// Splits P(F, E | psi), F = join of the mutually orthogonal parts, into its
/// diagonal sum and the quantum interference cross term.
InterferenceTerms interference_decomposition(const Event& e,
                                             const std::vector<Event>& f_parts,
                                             const PureState& psi);

/// A(phi, psi) = <phi, psi>.
Complex amplitude(const PureState& phi, const PureState& psi);

/// A(E, psi) = E psi.
CVector amplitude_event(const Event& e, const PureState& psi);

/// <psi, A psi> or Tr(A rho) for Hermitian A. No-state mode is unsupported.
double expected_value(const CMatrix& a, const QState& s);

/// m_k = sum over atoms of eigenvalue^k * p_atom, k >= 1.
double moment(const Observable& t, int k, const QState& s);

/// sigma_k = sum over atoms of (eigenvalue - m_1)^k * p_atom, k >= 2.
double central_moment(const Observable& t, int k, const QState& s);

double std_dev(const Observable& t, const QState& s);

/// Time-ordered integral E(A_1, ..., A_n | rho) = Tr(A_n ... A_1 rho).
Complex time_ordered_expectation(const std::vector<CMatrix>& ops,
                                 const DensityMatrix& rho);

struct ConditionalExpectation {
    Complex value{0.0, 0.0};
    bool zero_denominator = false;
};

/// E(A_1,...,A_n | E_1,...,E_k, rho). The denominator is the time-ordered
/// expectation of the conditioning events, not their consecutive probability.
ConditionalExpectation conditional_expectation(const std::vector<CMatrix>& ops,
                                               const EventSequence& cond,
                                               const DensityMatrix& rho);

/// Discrete Shannon entropy of the spectral distribution of T in state s,
/// with 0 log 0 := 0. base <= 0 selects the natural logarithm.
double entropy(const Observable& t, const QState& s, double base = 0.0);

struct SequenceLimit {
    double value = 0.0;
    bool converged = false;
    int steps = 0;
};

/// Partial consecutive probabilities p_n over the first n events of an
/// infinite sequence; non-increasing by construction, so the limit is the
/// infimum. Stops once |p_{n+1} - p_n| <= tol or n_max is reached.
SequenceLimit sequence_limit(const std::function<Event(int)>& event_at,
                             const DensityMatrix& rho, int n_max, double tol);

} // namespace qprob
