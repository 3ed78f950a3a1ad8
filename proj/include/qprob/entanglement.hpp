#pragma once

// Entanglement machinery: 2x2 spin operators, the 4x4 total spin and its
// singlet, the three-event EPR construction, entanglement defects and the
// tangled predicate, Schmidt decomposition, and witness-event construction.

#include <utility>
#include <vector>

#include "qprob/born.hpp"
#include "qprob/hilbert.hpp"

namespace qprob {

struct SpinMatrices {
    CMatrix s1, s2, s3;
};

/// The standard 2x2 spin matrices (hbar = 1 units); S3 = diag(1, -1) / 2.
SpinMatrices spin_matrices();

/// (S1 x I + I x S1)^2 + (S2 x I + I x S2)^2 + (S3 x I + I x S3)^2 on C2 x C2;
/// spectrum {0, 2} with multiplicities (1, 3).
CMatrix total_spin_sq();

/// The spin-0 state (e1 x e2 - e2 x e1) / sqrt(2).
PureState singlet();

struct EprTriple {
    Event e0; // |singlet><singlet|, earliest
    Event e1; // |e1><e1| x I
    Event e2; // I x |e2><e2|
};

EprTriple epr_triple();

/// Entanglement defects of Definition 3.0.1 using the no-state conditional
/// P(X|E0) = ||X E0||_op^2 / ||E0||_op^2. Returns (Delta_12, Delta_21) where
/// Delta_12 = P(E1 E2 | E0) - P(E1|E0) P(E2|E0) and Delta_21 swaps the
/// operator order in the joint term.
std::pair<double, double> delta(const Event& e1, const Event& e2, const Event& e0);

/// True iff either defect exceeds tol in magnitude.
bool is_tangled(const Event& e0, const Event& e1, const Event& e2, double tol = 1e-10);

struct Bipartition {
    Eigen::Index d1;
    Eigen::Index d2;
};

struct SchmidtForm {
    std::vector<double> coefficients;  // positive, descending
    std::vector<CVector> left_vectors; // orthonormal, dim d1
    std::vector<CVector> right_vectors;
    int rank = 0; // count of coefficients above rank_tol
};

/// psi = sum of lambda_j phi_j x chi_j, via SVD of the d1 x d2 coefficient
/// matrix (row index = first factor). Phases fixed by making the
/// largest-magnitude entry of each left vector real positive.
SchmidtForm schmidt(const PureState& psi, const Bipartition& bp, double rank_tol = 1e-9);

/// Schmidt rank >= 2.
bool is_entangled_state(const PureState& psi, const Bipartition& bp, double tol = 1e-9);

/// Witness pair (F1 x I, I x F2) with F1 the top left Schmidt vector and F2
/// the second right Schmidt vector. P(E1|psi) = lambda_1^2, P(E2|psi) =
/// lambda_2^2, P(E1 E2|psi) = 0, so the triple with E0 = |psi><psi| is
/// tangled. Throws NotEntangled for product states.
std::pair<Event, Event> witness_events(const PureState& psi, const Bipartition& bp);

struct Prop301Report {
    bool entangled_state = false;     // Schmidt rank >= 2
    bool witnesses_tangled = false;   // witness pair tangled w.r.t. |psi><psi|
    double delta12 = 0.0;             // defect of the witness pair (0 for product states)
    int product_trials_checked = 0;   // random F pairs checked on product states
    double max_product_delta = 0.0;
    bool equivalent = false;          // the equivalence held on this state
};

/// Checks the equivalence: entangled state <=> some tensor-factor event pair
/// is tangled with E0 = |psi><psi|. For product states, samples `trials`
/// random local event pairs and records the largest defect seen.
Prop301Report verify_prop_301(const PureState& psi, const Bipartition& bp, int trials,
                              double tol, unsigned long long seed = 1234);

} // namespace qprob
