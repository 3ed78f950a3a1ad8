#include "qprob/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace qprob {

namespace {

constexpr double kEventRoundTol = 1e-6;

CMatrix projection_from_raw(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw InvariantViolation("Event: matrix not square");
    if (!all_finite(m))
        throw InvariantViolation("Event: non-finite entries");
    CMatrix sym = (m + m.adjoint()) / 2.0;
    if (operator_norm(m - sym) > kEventRoundTol * std::max(1.0, operator_norm(m)))
        throw InvariantViolation("Event: matrix not self-adjoint");
    EigenDecomposition d = hermitian_eig(sym);
    CVector rounded(d.dim());
    for (Eigen::Index k = 0; k < d.dim(); ++k) {
        double lam = d.eigenvalues(k);
        if (std::abs(lam) <= kEventRoundTol) {
            rounded(k) = 0.0;
        } else if (std::abs(lam - 1.0) <= kEventRoundTol) {
            rounded(k) = 1.0;
        } else {
            throw InvariantViolation("Event: eigenvalue " + std::to_string(lam) +
                                     " is neither 0 nor 1");
        }
    }
    return d.eigenvectors * rounded.asDiagonal() * d.eigenvectors.adjoint();
}

} // namespace

Event::Event(const CMatrix& m) : m_(projection_from_raw(m)) {}

Event Event::identity(Eigen::Index dim) {
    return Event(CMatrix::Identity(dim, dim), Trusted{});
}

Event Event::zero(Eigen::Index dim) {
    return Event(CMatrix::Zero(dim, dim), Trusted{});
}

Event Event::projector(const CVector& v) {
    double n = v.norm();
    if (n < 1e-14) throw InvariantViolation("Event::projector: zero vector");
    CVector u = v / n;
    return Event(CMatrix(u * u.adjoint()), Trusted{});
}

Eigen::Index Event::rank() const {
    return static_cast<Eigen::Index>(std::lround(trace(m_).real()));
}

PureState::PureState(CVector v) : v_(std::move(v)) {
    if (v_.size() < 1 || !all_finite(v_))
        throw InvariantViolation("PureState: empty or non-finite vector");
    if (std::abs(v_.norm() - 1.0) > 1e-10)
        throw InvariantViolation("PureState: vector is not a unit vector");
}

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (!all_finite(m_))
        throw InvariantViolation("DensityMatrix: non-finite entries");
    if (!is_hermitian(m_))
        throw InvariantViolation("DensityMatrix: not Hermitian");
    if (std::abs(trace(m_).real() - 1.0) > 1e-10 || std::abs(trace(m_).imag()) > 1e-10)
        throw InvariantViolation("DensityMatrix: trace is not 1");
    EigenDecomposition d = hermitian_eig(m_);
    if (d.eigenvalues.minCoeff() < -1e-10)
        throw InvariantViolation("DensityMatrix: negative eigenvalue " +
                                 std::to_string(d.eigenvalues.minCoeff()));
}

BorelSet::BorelSet(std::vector<Interval> intervals, std::vector<double> points)
    : intervals_(std::move(intervals)), points_(std::move(points)) {
    for (const auto& iv : intervals_) {
        if (!(iv.lo < iv.hi))
            throw InvariantViolation("BorelSet: interval needs lo < hi; "
                                     "use a point for lo == hi");
    }
}

BorelSet BorelSet::real_line() {
    return BorelSet({Interval{}}, {});
}

BorelSet BorelSet::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
    return BorelSet({Interval{lo, hi, lo_closed, hi_closed}}, {});
}

BorelSet BorelSet::point(double x) { return BorelSet({}, {x}); }

BorelSet BorelSet::points(std::vector<double> xs) { return BorelSet({}, std::move(xs)); }

bool BorelSet::contains(double x) const {
    for (double p : points_)
        if (x == p) return true;
    for (const auto& iv : intervals_) {
        bool above = iv.lo_closed ? x >= iv.lo : x > iv.lo;
        bool below = iv.hi_closed ? x <= iv.hi : x < iv.hi;
        if (above && below) return true;
    }
    return false;
}

void Pvm::validate() const {
    if (atoms.empty()) throw InvariantViolation("Pvm: no atoms");
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0 && !(atoms[i].value > atoms[i - 1].value))
            throw InvariantViolation("Pvm: eigenvalues not strictly increasing");
        sum += atoms[i].projector.matrix();
        for (std::size_t j = 0; j < i; ++j) {
            if (operator_norm(atoms[i].projector.matrix() * atoms[j].projector.matrix()) > 1e-9)
                throw InvariantViolation("Pvm: projectors not mutually orthogonal");
        }
    }
    if (operator_norm(sum - CMatrix::Identity(dim, dim)) > 1e-9)
        throw InvariantViolation("Pvm: atoms do not resolve the identity");
}

Observable::Observable(const CMatrix& m, double tol_cluster)
    : m_(m), pvm_(pvm_of(m, tol_cluster)) {}

Pvm pvm_of(const CMatrix& t, double tol_cluster) {
    EigenDecomposition d = hermitian_eig(t, tol_cluster);
    Pvm p;
    p.dim = d.dim();
    for (std::size_t c = 0; c < d.clusters.size(); ++c)
        p.atoms.push_back({d.cluster_value(c), Event(d.cluster_projector(c))});
    p.validate();
    return p;
}

Event pvm_eval(const Pvm& p, const BorelSet& b) {
    CMatrix sum = CMatrix::Zero(p.dim, p.dim);
    for (const auto& atom : p.atoms)
        if (b.contains(atom.value)) sum += atom.projector.matrix();
    return Event(sum);
}

CMatrix reconstruct(const Pvm& p) {
    CMatrix sum = CMatrix::Zero(p.dim, p.dim);
    for (const auto& atom : p.atoms) sum += atom.value * atom.projector.matrix();
    return sum;
}

CMatrix functional_calculus(const Pvm& p, const std::function<Complex(double)>& f) {
    CMatrix sum = CMatrix::Zero(p.dim, p.dim);
    for (const auto& atom : p.atoms) sum += f(atom.value) * atom.projector.matrix();
    return sum;
}

Event complement(const Event& e) {
    return Event(CMatrix(CMatrix::Identity(e.dim(), e.dim()) - e.matrix()));
}

Event meet(const Event& e, const Event& f) {
    if (e.dim() != f.dim()) throw DimMismatch("meet: dimension mismatch");
    // Ran E intersect Ran F is exactly the eigenvalue-2 eigenspace of E + F.
    EigenDecomposition d = hermitian_eig(e.matrix() + f.matrix(), 1e-8);
    CMatrix proj = CMatrix::Zero(e.dim(), e.dim());
    for (std::size_t c = 0; c < d.clusters.size(); ++c)
        if (std::abs(d.cluster_value(c) - 2.0) <= 1e-6) proj += d.cluster_projector(c);
    return Event(proj);
}

Event join(const Event& e, const Event& f) {
    return complement(meet(complement(e), complement(f)));
}

bool orthogonal(const Event& e, const Event& f, double tol) {
    if (e.dim() != f.dim()) throw DimMismatch("orthogonal: dimension mismatch");
    return operator_norm(e.matrix() * f.matrix()) <= tol;
}

DensityMatrix density_from_pure(const PureState& psi) {
    const CVector& v = psi.vector();
    return DensityMatrix(CMatrix(v * v.adjoint()));
}

DensityMatrix mixture(const std::vector<double>& weights,
                      const std::vector<DensityMatrix>& states) {
    if (weights.size() != states.size() || weights.empty())
        throw BadWeights("mixture: weights and states must pair up");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw BadWeights("mixture: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw BadWeights("mixture: weights sum to " + std::to_string(total));
    Eigen::Index dim = states.front().dim();
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].dim() != dim) throw DimMismatch("mixture: dimension mismatch");
        sum += weights[k] * states[k].matrix();
    }
    return DensityMatrix(sum);
}

} // namespace qprob
