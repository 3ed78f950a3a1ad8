#pragma once

// Evolution families: maps (s, t) -> U(s, t), the propagator from time s to
// time t. Hamiltonian-generated families are unitary groups; generic
// families only have to be contractions (||U||_op <= 1), which admits
// semigroup-style decay as an input.

#include <functional>

#include "qprob/hilbert.hpp"
#include "qprob/linalg.hpp"

namespace qprob {

class EvolutionFamily {
public:
    enum class Kind { schrodinger_hamiltonian, unitary_family, generic };

    static EvolutionFamily schrodinger(const Observable& h, double hbar = 1.0);
    /// U(s, t) := family(t) * family(s)^dagger for a family of unitaries U_t.
    static EvolutionFamily from_unitary_family(Eigen::Index dim,
                                               std::function<CMatrix(double)> family);
    /// Arbitrary contraction-valued propagator; each returned operator is
    /// checked to satisfy ||U||_op <= 1 + 1e-10.
    static EvolutionFamily generic(Eigen::Index dim,
                                   std::function<CMatrix(double, double)> propagator);

    /// The propagator from time s to time t.
    CMatrix at(double s, double t) const;

    Kind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    bool unitary() const { return kind_ != Kind::generic; }
    double hbar() const { return hbar_; }

private:
    EvolutionFamily(Kind k, Eigen::Index dim,
                    std::function<CMatrix(double, double)> fn, double hbar)
        : kind_(k), dim_(dim), fn_(std::move(fn)), hbar_(hbar) {}

    Kind kind_;
    Eigen::Index dim_;
    std::function<CMatrix(double, double)> fn_;
    double hbar_ = 1.0;
};

} // namespace qprob
