#pragma once

// Dense complex linear algebra kernel: adjoints, tensor products, traces,
// operator norms, Hermitian eigendecomposition, unitary exponentials.
// Everything here is a pure function of its arguments; matrices are dense
// double-precision complex and target dimensions are small (a few qubits).

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "qprob/errors.hpp"

namespace qprob {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTolHerm = 1e-10; // relative Hermiticity tolerance

/// Conjugate transpose.
CMatrix adjoint(const CMatrix& m);

/// Kronecker (tensor) product; dims multiply.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Sum of diagonal entries. Throws NonSquare.
Complex trace(const CMatrix& m);

/// Largest singular value. Zero-size input is rejected upstream.
double operator_norm(const CMatrix& m);

double norm(const CVector& v);

/// True iff ||M - M*||_op <= tol * max(1, ||M||_op).
bool is_hermitian(const CMatrix& m, double tol = kTolHerm);

bool is_unitary(const CMatrix& m, double tol = 1e-10);

bool all_finite(const CMatrix& m);
bool all_finite(const CVector& v);

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;  // ascending
    CMatrix eigenvectors;         // orthonormal columns, same order
    std::vector<std::vector<Eigen::Index>> clusters; // groups of equal eigenvalues

    Eigen::Index dim() const { return eigenvalues.size(); }
    /// Sum of |v><v| over the cluster's eigenvectors.
    CMatrix cluster_projector(std::size_t c) const;
    /// Arithmetic mean of the cluster's eigenvalues.
    double cluster_value(std::size_t c) const;
};

/// Eigendecomposition of a Hermitian matrix with eigenvalue clustering.
/// tol_cluster < 0 selects the default 1e-8 * max(1, ||M||_op). Eigenvectors
/// within a cluster are re-orthonormalized so spectral projectors are
/// basis-independent up to tolerance. Throws NotHermitian, NoConvergence.
EigenDecomposition hermitian_eig(const CMatrix& m, double tol_cluster = -1.0);

/// U = exp(-i t H / hbar) via the eigendecomposition of Hermitian H.
CMatrix exp_unitary(const CMatrix& h, double t, double hbar = 1.0);

} // namespace qprob
