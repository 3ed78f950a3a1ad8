#include "qprob/entanglement.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace qprob {

SpinMatrices spin_matrices() {
    const Complex i{0.0, 1.0};
    CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0.0, 0.5, 0.5, 0.0;
    s2 << 0.0, -0.5 * i, 0.5 * i, 0.0;
    s3 << 0.5, 0.0, 0.0, -0.5;
    return {s1, s2, s3};
}

CMatrix total_spin_sq() {
    SpinMatrices s = spin_matrices();
    CMatrix id = CMatrix::Identity(2, 2);
    CMatrix out = CMatrix::Zero(4, 4);
    for (const CMatrix* comp : {&s.s1, &s.s2, &s.s3}) {
        CMatrix total = kron(*comp, id) + kron(id, *comp);
        out += total * total;
    }
    return out;
}

PureState singlet() {
    CVector v = CVector::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);  // e1 x e2
    v(2) = -1.0 / std::sqrt(2.0); // e2 x e1
    return PureState(v);
}

EprTriple epr_triple() {
    CMatrix id = CMatrix::Identity(2, 2);
    CVector e1 = CVector::Zero(2), e2 = CVector::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    return EprTriple{
        Event::projector(singlet().vector()),
        Event(kron(e1 * e1.adjoint(), id)),
        Event(kron(id, e2 * e2.adjoint())),
    };
}

namespace {

// No-state conditional P(X | E0) = ||X E0||_op^2 / ||E0||_op^2.
double nostate_conditional(const CMatrix& x, const CMatrix& e0, double e0_norm_sq) {
    double n = operator_norm(x * e0);
    return n * n / e0_norm_sq;
}

} // namespace

std::pair<double, double> delta(const Event& e1, const Event& e2, const Event& e0) {
    if (e1.dim() != e0.dim() || e2.dim() != e0.dim())
        throw DimMismatch("delta: dimension mismatch");
    double e0_norm = operator_norm(e0.matrix());
    if (e0_norm < 1e-12) throw ZeroConditioningEvent("delta: E0 is the zero event");
    double e0_norm_sq = e0_norm * e0_norm;

    double p1 = nostate_conditional(e1.matrix(), e0.matrix(), e0_norm_sq);
    double p2 = nostate_conditional(e2.matrix(), e0.matrix(), e0_norm_sq);
    double joint12 = nostate_conditional(e1.matrix() * e2.matrix(), e0.matrix(), e0_norm_sq);
    double joint21 = nostate_conditional(e2.matrix() * e1.matrix(), e0.matrix(), e0_norm_sq);
    return {joint12 - p1 * p2, joint21 - p1 * p2};
}

bool is_tangled(const Event& e0, const Event& e1, const Event& e2, double tol) {
    auto [d12, d21] = delta(e1, e2, e0);
    return std::max(std::abs(d12), std::abs(d21)) > tol;
}

SchmidtForm schmidt(const PureState& psi, const Bipartition& bp, double rank_tol) {
    if (bp.d1 < 2 || bp.d2 < 2 || psi.dim() != bp.d1 * bp.d2)
        throw DimMismatch("schmidt: state dim must equal d1 * d2 with both >= 2");

    CMatrix coeff(bp.d1, bp.d2);
    for (Eigen::Index i = 0; i < bp.d1; ++i)
        for (Eigen::Index j = 0; j < bp.d2; ++j) coeff(i, j) = psi.vector()(i * bp.d2 + j);

    Eigen::JacobiSVD<CMatrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NoConvergence("schmidt: SVD did not converge");

    SchmidtForm out;
    Eigen::Index n = svd.singularValues().size();
    for (Eigen::Index k = 0; k < n; ++k) {
        CVector left = svd.matrixU().col(k);
        CVector right = svd.matrixV().col(k).conjugate(); // psi = sum s_k u_k x conj(v_k)

        Eigen::Index pivot;
        left.cwiseAbs().maxCoeff(&pivot);
        Complex phase = left(pivot) / std::abs(left(pivot));
        left /= phase;
        right *= phase;

        out.coefficients.push_back(svd.singularValues()(k));
        out.left_vectors.push_back(left);
        out.right_vectors.push_back(right);
        if (svd.singularValues()(k) > rank_tol) out.rank += 1;
    }
    return out;
}

bool is_entangled_state(const PureState& psi, const Bipartition& bp, double tol) {
    return schmidt(psi, bp, tol).rank >= 2;
}

std::pair<Event, Event> witness_events(const PureState& psi, const Bipartition& bp) {
    SchmidtForm sf = schmidt(psi, bp);
    if (sf.rank < 2) throw NotEntangled("witness_events: state has Schmidt rank 1");
    CMatrix f1 = sf.left_vectors[0] * sf.left_vectors[0].adjoint();
    CMatrix f2 = sf.right_vectors[1] * sf.right_vectors[1].adjoint();
    return {Event(kron(f1, CMatrix::Identity(bp.d2, bp.d2))),
            Event(kron(CMatrix::Identity(bp.d1, bp.d1), f2))};
}

Prop301Report verify_prop_301(const PureState& psi, const Bipartition& bp, int trials,
                              double tol, unsigned long long seed) {
    Prop301Report report;
    SchmidtForm sf = schmidt(psi, bp);
    report.entangled_state = sf.rank >= 2;
    Event e0 = Event::projector(psi.vector());

    if (report.entangled_state) {
        auto [e1, e2] = witness_events(psi, bp);
        report.delta12 = delta(e1, e2, e0).first;
        report.witnesses_tangled = is_tangled(e0, e1, e2, tol);
        report.equivalent = report.witnesses_tangled;
        return report;
    }

    // Product state: every tensor-factor event pair must come out independent.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_projector = [&](Eigen::Index d) {
        CVector v(d);
        for (Eigen::Index k = 0; k < d; ++k) v(k) = Complex(gauss(rng), gauss(rng));
        return CMatrix(v * v.adjoint() / v.squaredNorm());
    };
    for (int trial = 0; trial < trials; ++trial) {
        Event e1(kron(random_projector(bp.d1), CMatrix::Identity(bp.d2, bp.d2)));
        Event e2(kron(CMatrix::Identity(bp.d1, bp.d1), random_projector(bp.d2)));
        auto [d12, d21] = delta(e1, e2, e0);
        report.max_product_delta =
            std::max({report.max_product_delta, std::abs(d12), std::abs(d21)});
        report.product_trials_checked += 1;
    }
    report.equivalent = report.max_product_delta <= tol;
    return report;
}

} // namespace qprob
