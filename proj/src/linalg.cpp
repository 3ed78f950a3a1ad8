#include "qprob/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace qprob {

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Complex trace(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw NonSquare("trace: matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    return m.trace();
}

double operator_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    if (svd.info() != Eigen::Success)
        throw NoConvergence("operator_norm: SVD did not converge");
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double norm(const CVector& v) { return v.norm(); }

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return operator_norm(m - m.adjoint()) <= tol * std::max(1.0, operator_norm(m));
}

bool is_unitary(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    CMatrix id = CMatrix::Identity(m.rows(), m.cols());
    return operator_norm(m.adjoint() * m - id) <= tol;
}

bool all_finite(const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        Complex z = m(i);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

bool all_finite(const CVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        Complex z = v(i);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

CMatrix EigenDecomposition::cluster_projector(std::size_t c) const {
    CMatrix p = CMatrix::Zero(dim(), dim());
    for (Eigen::Index k : clusters.at(c)) {
        CVector v = eigenvectors.col(k);
        p += v * v.adjoint();
    }
    return p;
}

double EigenDecomposition::cluster_value(std::size_t c) const {
    double s = 0.0;
    for (Eigen::Index k : clusters.at(c)) s += eigenvalues(k);
    return s / static_cast<double>(clusters.at(c).size());
}

namespace {

// Re-orthonormalize the eigenvector columns of one cluster in place
// (modified Gram-Schmidt). The solver already returns orthonormal columns;
// this pins the degenerate-subspace basis after any downstream rounding.
void orthonormalize_cluster(CMatrix& vecs, const std::vector<Eigen::Index>& cluster) {
    for (std::size_t a = 0; a < cluster.size(); ++a) {
        CVector v = vecs.col(cluster[a]);
        for (std::size_t b = 0; b < a; ++b) {
            CVector u = vecs.col(cluster[b]);
            v -= u.dot(v) * u;
        }
        double n = v.norm();
        if (n < 1e-14)
            throw NoConvergence("hermitian_eig: degenerate cluster lost rank");
        vecs.col(cluster[a]) = v / n;
    }
}

} // namespace

EigenDecomposition hermitian_eig(const CMatrix& m, double tol_cluster) {
    if (m.rows() != m.cols())
        throw NonSquare("hermitian_eig: matrix not square");
    double scale = std::max(1.0, operator_norm(m));
    if (operator_norm(m - m.adjoint()) > kTolHerm * scale)
        throw NotHermitian("hermitian_eig: input not Hermitian within tolerance");
    if (tol_cluster < 0.0) tol_cluster = 1e-8 * scale;

    Eigen::SelfAdjointEigenSolver<CMatrix> solver((m + m.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("hermitian_eig: eigensolver did not converge");

    EigenDecomposition d;
    d.eigenvalues = solver.eigenvalues();
    d.eigenvectors = solver.eigenvectors();

    std::vector<Eigen::Index> current{0};
    for (Eigen::Index k = 1; k < d.eigenvalues.size(); ++k) {
        if (d.eigenvalues(k) - d.eigenvalues(current.front()) <= tol_cluster) {
            current.push_back(k);
        } else {
            d.clusters.push_back(current);
            current = {k};
        }
    }
    d.clusters.push_back(current);

    for (const auto& c : d.clusters)
        if (c.size() > 1) orthonormalize_cluster(d.eigenvectors, c);
    return d;
}

CMatrix exp_unitary(const CMatrix& h, double t, double hbar) {
    if (hbar <= 0.0) throw Error("exp_unitary: hbar must be positive");
    EigenDecomposition d = hermitian_eig(h);
    CVector phases(d.dim());
    for (Eigen::Index k = 0; k < d.dim(); ++k)
        phases(k) = std::exp(Complex(0.0, -t * d.eigenvalues(k) / hbar));
    return d.eigenvectors * phases.asDiagonal() * d.eigenvectors.adjoint();
}

} // namespace qprob
