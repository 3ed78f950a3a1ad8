#include "qprob/evolution.hpp"

#include <cmath>

namespace qprob {

EvolutionFamily EvolutionFamily::schrodinger(const Observable& h, double hbar) {
    if (hbar <= 0.0) throw Error("EvolutionFamily: hbar must be positive");
    EigenDecomposition d = hermitian_eig(h.matrix());
    auto fn = [d, hbar](double s, double t) {
        CVector phases(d.dim());
        for (Eigen::Index k = 0; k < d.dim(); ++k)
            phases(k) = std::exp(Complex(0.0, -(t - s) * d.eigenvalues(k) / hbar));
        return CMatrix(d.eigenvectors * phases.asDiagonal() * d.eigenvectors.adjoint());
    };
    return EvolutionFamily(Kind::schrodinger_hamiltonian, h.dim(), fn, hbar);
}

EvolutionFamily EvolutionFamily::from_unitary_family(Eigen::Index dim,
                                                     std::function<CMatrix(double)> family) {
    auto fn = [family = std::move(family)](double s, double t) {
        CMatrix us = family(s);
        CMatrix ut = family(t);
        if (!is_unitary(us) || !is_unitary(ut))
            throw NotUnitary("EvolutionFamily: family member is not unitary");
        return CMatrix(ut * us.adjoint());
    };
    return EvolutionFamily(Kind::unitary_family, dim, fn, 1.0);
}

EvolutionFamily EvolutionFamily::generic(Eigen::Index dim,
                                         std::function<CMatrix(double, double)> propagator) {
    auto fn = [propagator = std::move(propagator)](double s, double t) {
        CMatrix u = propagator(s, t);
        if (operator_norm(u) > 1.0 + 1e-10)
            throw InvariantViolation("EvolutionFamily: propagator is not a contraction");
        return u;
    };
    return EvolutionFamily(Kind::generic, dim, fn, 1.0);
}

CMatrix EvolutionFamily::at(double s, double t) const {
    CMatrix u = fn_(s, t);
    if (u.rows() != dim_ || u.cols() != dim_)
        throw DimMismatch("EvolutionFamily: propagator has the wrong dimension");
    return u;
}

} // namespace qprob
