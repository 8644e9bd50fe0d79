#pragma once

#include <Eigen/Dense>

#include <vector>

namespace frrqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Column permutation stored as the list of source column indices:
/// column k of A*Pi is column order[k] of A.
struct Permutation {
    std::vector<Index> order;

    static Permutation identity(Index n);

    Index size() const { return static_cast<Index>(order.size()); }
    bool is_bijection() const;
    bool is_identity() const;
    void swap(Index i, Index j);

    /// Returns A*Pi.
    Matrix apply(const Matrix& a) const;

    bool operator==(const Permutation&) const = default;
};

/// Eigen-pairs of a symmetric matrix, sorted by descending eigenvalue.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};

/// Symmetric eigendecomposition with descending order, eigenvalues within
/// -1e-10*lambda_1 of zero clamped to zero, and each eigenvector signed so
/// its largest-magnitude entry is positive.
SymmetricEigen symmetric_eigen(const Matrix& s);

/// Singular values, descending, via the eigenvalues of the smaller Gram
/// matrix. Accurate to roughly 1e-8 relative to sigma_1.
Vector singular_values(const Matrix& a);

/// Largest singular value; 0 for an empty matrix.
double spectral_norm(const Matrix& a);

/// Smallest of the min(rows, cols) singular values; 0 for an empty matrix.
double min_singular_value(const Matrix& a);

}  // namespace frrqr
