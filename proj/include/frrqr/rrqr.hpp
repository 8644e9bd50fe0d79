#pragma once

#include "frrqr/linalg.hpp"

namespace frrqr {

/// A = Q R with Q square (K x K) orthonormal and R upper-trapezoidal (K x n).
struct QrFactors {
    Matrix q;
    Matrix r;
    Vector diag;  // |R(i,i)|, i < min(K, n)
};

struct RrqrResult {
    Permutation perm;
    QrFactors factors;             // factors of A * perm
    Index assumed_rank = 0;        // p used for the R11 / R22 split
    double r11_min_sv = 0.0;       // sigma_min(R[0:p, 0:p])
    double r22_max_sv = 0.0;       // sigma_max(R[p:, p:])
    Index swaps = 0;               // column interchanges performed
    Index passes = 0;              // sweeps of the outer loop
};

/// Modified Gram-Schmidt QR with one reorthogonalization pass.
///
/// A column whose residual vanishes relative to its own norm is deflated:
/// its diagonal entry is set to 0 and its Q column is filled with the
/// lowest-index standard basis vector not yet in the span, orthogonalized
/// against the previous columns. Columns past K are expressed in the
/// completed basis as Q^T a_j. Diagonal entries are non-negative.
QrFactors gs_qr(const Matrix& a);

/// Greedy column pivoting for max_steps steps: step s moves the column of
/// the trailing block R22^(s) with the largest 2-norm to position s.
/// Ties keep the incumbent; a challenger must win by a relative 1e-12.
/// Requires 1 <= max_steps <= min(K, n).
RrqrResult qr_cp(const Matrix& a, Index max_steps);

/// Stewart's type-II pivoting of a square upper-triangular r: repeatedly
/// moves the weakest column (largest row norm of the leading block's
/// inverse) to the end of the leading block, shrinking it until it has
/// target_rank columns. Returns the permutation of r's columns.
/// Throws InvalidArgument if r is not square or is numerically singular.
Permutation stewart2(const Matrix& r, Index target_rank);

/// Hybrid-I RRQR: alternates a QR-CP step on the trailing block split at
/// p-1 with a Stewart-II step on the leading p x p block until a full pass
/// leaves the permutation unchanged. Requires 1 <= p <= min(K, n).
/// On exit sigma_min(R11) >= sigma_p(A)/sqrt(p(n-p+1)) and
/// sigma_max(R22) <= sigma_min(R11) sqrt(p(n-p+1)).
RrqrResult hybrid1(const Matrix& a, Index p, const Permutation& init);

/// Hybrid-II RRQR: Hybrid-I moved one column right (pivot split at p,
/// Stewart block of size p+1). Requires 1 <= p <= min(K, n) - 1. The
/// reported R11/R22 split is at p.
RrqrResult hybrid2(const Matrix& a, Index p, const Permutation& init);

/// Hybrid-III: Hybrid-I followed by Hybrid-II, repeated until neither
/// moves a column. Seeds from qr_cp(a, min(K, n)) unless init is given.
/// Requires 1 <= p <= min(K, n) - 1.
RrqrResult hybrid3(const Matrix& a, Index p);
RrqrResult hybrid3(const Matrix& a, Index p, const Permutation& init);

/// Row 2-norms of the inverse of the upper-triangular square block,
/// computed by back-substitution against each standard basis vector.
Vector inverse_row_norms(const Matrix& upper);

/// ||A Pi - Q R||_F / ||A||_F (0 for a zero matrix).
double reconstruction_error(const Matrix& a, const RrqrResult& result);

/// Pass budget for every hybrid loop: 10 * n sweeps.
Index hybrid_pass_cap(Index n);

}  // namespace frrqr
