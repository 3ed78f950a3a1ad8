#pragma once

// The event/state/pvm data model: projections, pure and mixed states, Borel
// sets on the real line, the spectral theorem forward and converse,
// functional calculus, and lattice operations on events.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qprob/linalg.hpp"

namespace qprob {

/// A quantum event: a projection operator (idempotent and self-adjoint).
/// Construction symmetrizes the input and rounds eigenvalues to {0, 1};
/// eigenvalues further than 1e-6 from both are rejected, so file-input
/// rounding is tolerated without admitting non-events.
class Event {
public:
    explicit Event(const CMatrix& m);

    static Event identity(Eigen::Index dim);
    static Event zero(Eigen::Index dim);
    /// |v><v| / <v,v> for a nonzero vector v.
    static Event projector(const CVector& v);

    const CMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    /// Number of eigenvalue-1 directions.
    Eigen::Index rank() const;

private:
    struct Trusted {};
    Event(CMatrix m, Trusted) : m_(std::move(m)) {}
    CMatrix m_;
};

class PureState {
public:
    explicit PureState(CVector v);
    const CVector& vector() const { return v_; }
    Eigen::Index dim() const { return v_.size(); }

private:
    CVector v_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix m);
    const CMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    CMatrix m_;
};

/// Finite union of real intervals plus a finite point set. Sufficient for
/// finite-dimensional spectra, which are finite; membership is a pure
/// predicate. Unbounded endpoints use +/-infinity.
class BorelSet {
public:
    struct Interval {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        bool lo_closed = false;
        bool hi_closed = false;
    };

    BorelSet() = default; // empty set
    BorelSet(std::vector<Interval> intervals, std::vector<double> points);

    static BorelSet empty() { return {}; }
    static BorelSet real_line();
    static BorelSet interval(double lo, double hi, bool lo_closed = true,
                             bool hi_closed = false);
    static BorelSet point(double x);
    static BorelSet points(std::vector<double> xs);

    bool contains(double x) const;
    const std::vector<Interval>& intervals() const { return intervals_; }
    const std::vector<double>& point_set() const { return points_; }

private:
    std::vector<Interval> intervals_;
    std::vector<double> points_;
};

/// Projection-valued measure of an observable: (eigenvalue, projector) atoms
/// with strictly increasing eigenvalues, mutually orthogonal projectors, and
/// a resolution of the identity.
struct Pvm {
    struct Atom {
        double value;
        Event projector;
    };

    Eigen::Index dim = 0;
    std::vector<Atom> atoms;

    void validate() const; // throws InvariantViolation
};

class Observable {
public:
    explicit Observable(const CMatrix& m, double tol_cluster = -1.0);
    const CMatrix& matrix() const { return m_; }
    const Pvm& pvm() const { return pvm_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    CMatrix m_;
    Pvm pvm_;
};

/// Spectral theorem, forward direction. Throws NotHermitian.
Pvm pvm_of(const CMatrix& t, double tol_cluster = -1.0);

/// Sum of the projectors whose eigenvalues lie in B. Zero matrix when none
/// do, identity when all do.
Event pvm_eval(const Pvm& p, const BorelSet& b);

/// Spectral theorem, converse: sum of eigenvalue * projector.
CMatrix reconstruct(const Pvm& p);

/// Functional calculus: sum of f(eigenvalue) * projector.
CMatrix functional_calculus(const Pvm& p, const std::function<Complex(double)>& f);

/// I - E.
Event complement(const Event& e);

/// Projector onto Ran E intersect Ran F, computed as the eigenvalue-2
/// eigenspace projector of E + F. Exact for commuting pairs.
Event meet(const Event& e, const Event& f);

/// complement(meet(complement E, complement F)).
Event join(const Event& e, const Event& f);

/// True iff ||E F||_op <= tol.
bool orthogonal(const Event& e, const Event& f, double tol = 1e-10);

DensityMatrix density_from_pure(const PureState& psi);

/// Convex combination of density matrices; weights must be nonnegative and
/// sum to 1 within 1e-10.
DensityMatrix mixture(const std::vector<double>& weights,
                      const std::vector<DensityMatrix>& states);

} // namespace qprob
