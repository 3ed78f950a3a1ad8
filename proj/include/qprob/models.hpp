#pragma once

// Time-evolution models (Schrodinger, Heisenberg, interaction, and unitary
// conjugations of any of them), invariance and isomorphism checkers,
// conservation-of-probability verification, and the numerical check of the
// Heisenberg-equation derivative identity.

#include <memory>
#include <string>
#include <vector>

#include "qprob/born.hpp"
#include "qprob/evolution.hpp"

namespace qprob {

/// A model is a pair of one-parameter flows: E_t on events and S_t on
/// states, with the time-dependent Born's rule Tr(E_t(P) S_t(rho)) as the
/// invariant quantity. Models are immutable and freely copyable.
class Model {
public:
    enum class Kind { states_evolve, events_evolve, family_conjugation, conjugated };

    /// E_t = id, S_t rho = U_t rho U_t*.
    static Model schrodinger(const Observable& h, double hbar = 1.0);
    /// State-evolving model driven by an arbitrary evolution family,
    /// contractions included; probability conservation can fail for these.
    static Model states_evolve(EvolutionFamily evo);
    /// E_t P = U_t* P U_t, S_t = id.
    static Model heisenberg(const Observable& h, double hbar = 1.0);
    /// Both flows conjugate with an arbitrary unitary family W_t:
    /// psi -> W_t psi, P -> W_t P W_t*.
    static Model interaction(Eigen::Index dim, std::function<CMatrix(double)> family);
    /// The image of `base` under the isomorphism given by the family W_t:
    /// E'_t(P) = W_t E_t(W_t* P W_t) W_t*, and likewise for states.
    static Model conjugated(Model base, std::function<CMatrix(double)> family,
                            std::string label);

    /// E_t applied to an event (or any operator) matrix.
    CMatrix evolve_event(double t, const CMatrix& p) const;
    /// S_t applied to a density matrix.
    CMatrix evolve_state(double t, const CMatrix& rho) const;

    /// Tr(E_t(P_T(B)) S_t rho).
    ProbValue time_dependent_prob(const Observable& t_obs, const BorelSet& b,
                                  const DensityMatrix& rho, double t) const;

    /// The generalized Born's rule with evolution, composed the way this
    /// model prescribes (states carried by the propagator, events conjugated
    /// into place, or both). The state is given at times[0].
    ProbValue gbr(const EventSequence& seq, const std::vector<double>& times,
                  const QState& s) const;

    /// Ratio form of gbr over the shared time grid covering given ++ target.
    ProbValue gbr_conditional(const EventSequence& target, const EventSequence& given,
                              const std::vector<double>& times, const QState& s) const;

    Kind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    const std::string& label() const { return label_; }

private:
    Model() = default;

    CMatrix eff_event(double t0, double tk, const CMatrix& e) const;
    CMatrix eff_prop(double s, double t) const;
    CMatrix initial_conjugation(double t0) const; // W with state-at-t0 = W rho W*

    Kind kind_ = Kind::states_evolve;
    Eigen::Index dim_ = 0;
    std::string label_;
    std::shared_ptr<EvolutionFamily> evo_;        // states/events kinds
    std::function<CMatrix(double)> family_;       // conjugation kinds
    std::shared_ptr<Model> base_;                 // conjugated kind
};

struct BornInstance {
    Observable obs;
    BorelSet set;
    DensityMatrix rho;
    double t;
};

struct SequenceInstance {
    EventSequence target;
    EventSequence given; // may be empty
    std::vector<double> times;
    QState state;
};

struct CheckReport {
    double max_dev = 0.0;
    int checked = 0;
    int failed = 0;
    double tol = 0.0;
    std::vector<std::string> failures;

    bool pass() const { return failed == 0; }
};

/// Compares the time-dependent Born's rule and sequence probabilities of two
/// models on the same inputs. Failures are recorded, not thrown.
CheckReport check_invariance(const Model& a, const Model& b,
                             const std::vector<BornInstance>& singles,
                             const std::vector<SequenceInstance>& sequences,
                             double tol);

/// Verifies preservation of probability between two models under the
/// connecting unitary family: Tr(E_t(P_T(B)) S_t rho) in `a` against the
/// same expression in `b` with T and rho conjugated by U_t.
CheckReport check_isomorphism(const std::function<CMatrix(double)>& u_family,
                              const Model& a, const Model& b,
                              const std::vector<BornInstance>& instances, double tol);

/// The map B -> Tr(E_t(P_T(B)) S_t rho) over the atoms of T stays a
/// probability distribution: values in range and total mass 1 within tol.
bool check_conservation(const Model& model, const Observable& t_obs,
                        const DensityMatrix& rho, double t, double tol);

struct DerivativeCheck {
    double lhs = 0.0; // central finite difference of p(t) = ||E exp(-itH/hbar) psi||^2
    double rhs = 0.0; // <psi_t, (i/hbar)[H, E] psi_t>
};

DerivativeCheck heisenberg_derivative_check(const Observable& h, const Event& e,
                                            const PureState& psi, double t,
                                            double step = 1e-5, double hbar = 1.0);

} // namespace qprob
