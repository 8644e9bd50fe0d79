#include "frrqr/rrqr.hpp"

#include "frrqr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace frrqr {

namespace {

// A challenger replaces the incumbent only when larger by this relative margin.
constexpr double kSwapTolerance = 1e-12;
// A residual this small relative to its column norm is treated as zero.
constexpr double kDeflateTolerance = 1e-13;
// Diagonal entries below this fraction of the largest are singular for Stewart steps.
constexpr double kSingularTolerance = 1e-13;
// Column norms below this fraction of the largest input column are rounding
// noise; swapping among them would never settle.
constexpr double kNegligibleNorm = 1e-13;

// Two MGS sweeps of v against the first `count` columns of q. Projection
// coefficients are accumulated into coeffs when given.
void orthogonalize(Eigen::Ref<Vector> v, const Matrix& q, Index count, Vector* coeffs) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < count; ++i) {
            const double c = q.col(i).dot(v);
            if (coeffs) (*coeffs)(i) += c;
            v.noalias() -= c * q.col(i);
        }
    }
}

// Fills q.col(j) with the first standard basis vector not in the span of
// q.col(0..j-1), orthogonalized against those columns.
void complete_column(Matrix& q, Index j) {
    const Index k = q.rows();
    for (Index b = 0; b < k; ++b) {
        // Cheap screen: the residual of e_b has squared norm 1 - |row b|^2.
        if (1.0 - q.row(b).head(j).squaredNorm() <= 1e-12) continue;
        Vector v = Vector::Unit(k, b);
        orthogonalize(v, q, j, nullptr);
        const double nrm = v.norm();
        if (nrm > 1e-6) {
            q.col(j) = v / nrm;
            return;
        }
    }
    throw Error("orthonormal completion failed");  // unreachable for j < K
}

// Lowest index attaining the maximum, unless it fails to beat the
// incumbent by the swap tolerance plus an absolute floor.
Index argmax_keep_incumbent(const Vector& values, Index incumbent, double floor = 0.0) {
    Index best = 0;
    const double top = values.maxCoeff(&best);
    if (best == incumbent) return incumbent;
    return top > values(incumbent) * (1.0 + kSwapTolerance) + floor ? best : incumbent;
}

double negligible_norm(const Matrix& a) {
    return a.size() == 0 ? 0.0 : kNegligibleNorm * a.colwise().norm().maxCoeff();
}

// Column of the leading b x b block of r that is closest to the span of the
// others, i.e. the row of the block's inverse with the largest 2-norm.
// The incumbent is column b-1.
Index weakest_column(const Matrix& r, Index b, double floor) {
    const Index last = b - 1;
    const Vector d = r.topLeftCorner(b, b).diagonal().cwiseAbs();
    const double dmax = d.maxCoeff();
    const double tiny = std::max(kSingularTolerance * dmax, floor);
    if (dmax == 0.0 || d(last) <= tiny) return last;
    for (Index i = 0; i < last; ++i) {
        if (d(i) <= tiny) return i;
    }
    return argmax_keep_incumbent(inverse_row_norms(r.topLeftCorner(b, b)), last);
}

// A * Pi together with its current Gram-Schmidt factors.
struct PivotState {
    const Matrix& a;
    Permutation perm;
    QrFactors f;
    Index swaps = 0;
    double floor;

    PivotState(const Matrix& source, Permutation init)
        : a(source), perm(std::move(init)), floor(negligible_norm(source)) {
        refactor();
    }

    void refactor() { f = gs_qr(perm.apply(a)); }

    void swap(Index i, Index j) {
        perm.swap(i, j);
        refactor();
        ++swaps;
    }
};

// One hybrid loop: QR-CP step on the trailing block starting at column
// `pivot`, Stewart-II step on the leading `block` x `block` corner, repeated
// until a pass moves nothing. Returns the number of passes.
Index run_hybrid(PivotState& st, Index pivot, Index block) {
    const Index k = st.a.rows();
    const Index n = st.a.cols();
    const Index cap = hybrid_pass_cap(n);
    for (Index passes = 1;; ++passes) {
        bool permuted = false;
        {
            const Vector norms = st.f.r.block(pivot, pivot, k - pivot, n - pivot).colwise().norm().transpose();
            const Index j = argmax_keep_incumbent(norms, 0, st.floor);
            if (j != 0) {
                st.swap(pivot, pivot + j);
                permuted = true;
            }
        }
        {
            const Index w = weakest_column(st.f.r, block, st.floor);
            if (w != block - 1) {
                st.swap(w, block - 1);
                permuted = true;
            }
        }
        if (!permuted) return passes;
        if (passes >= cap) {
            throw IterationLimitError(
                fmt::format("hybrid pivoting did not settle within {} passes (split {})", cap, pivot));
        }
    }
}

void fill_split(RrqrResult& out, Index p) {
    const Matrix& r = out.factors.r;
    out.assumed_rank = p;
    out.r11_min_sv = min_singular_value(r.topLeftCorner(p, p));
    out.r22_max_sv = spectral_norm(r.bottomRightCorner(r.rows() - p, r.cols() - p));
}

RrqrResult finish(PivotState& st, Index p, Index passes) {
    RrqrResult out;
    out.perm = st.perm;
    out.factors = st.f;
    out.swaps = st.swaps;
    out.passes = passes;
    fill_split(out, p);
    return out;
}

void check_init(const Matrix& a, const Permutation& init) {
    if (init.size() != a.cols() || !init.is_bijection()) {
        throw InvalidArgument("initial permutation is not a bijection on the columns");
    }
}

void check_rank(const Matrix& a, Index p, Index hi, const char* who) {
    if (p < 1 || p > hi) {
        throw InvalidArgument(fmt::format("{}: rank {} outside [1, {}] for a {}x{} matrix", who, p, hi,
                                          a.rows(), a.cols()));
    }
}

}  // namespace

Index hybrid_pass_cap(Index n) { return 10 * n; }

QrFactors gs_qr(const Matrix& a) {
    const Index k = a.rows();
    const Index n = a.cols();
    if (k < 1 || n < 1) throw InvalidArgument("gs_qr: empty matrix");
    const Index lead = std::min(k, n);
    QrFactors out;
    out.q = Matrix::Zero(k, k);
    out.r = Matrix::Zero(k, n);
    for (Index j = 0; j < lead; ++j) {
        Vector v = a.col(j);
        const double column_norm = v.norm();
        Vector coeffs = Vector::Zero(j);
        orthogonalize(v, out.q, j, &coeffs);
        out.r.col(j).head(j) = coeffs;
        const double nrm = v.norm();
        if (column_norm == 0.0 || nrm <= kDeflateTolerance * column_norm) {
            out.r(j, j) = 0.0;
            complete_column(out.q, j);
        } else {
            out.q.col(j) = v / nrm;
            out.r(j, j) = nrm;
        }
    }
    for (Index j = lead; j < k; ++j) complete_column(out.q, j);
    if (n > k) out.r.rightCols(n - k).noalias() = out.q.transpose() * a.rightCols(n - k);
    out.diag = out.r.diagonal().head(lead).cwiseAbs();
    return out;
}

RrqrResult qr_cp(const Matrix& a, Index max_steps) {
    const Index k = a.rows();
    const Index n = a.cols();
    check_rank(a, max_steps, std::min(k, n), "qr_cp");
    // Greedy selection on Gram-Schmidt residuals: the residual of a column
    // after removing the first s pivots has the norm of its R22^(s) column.
    Permutation perm = Permutation::identity(n);
    Matrix w = a;
    Matrix basis = Matrix::Zero(k, k);
    Index swaps = 0;
    const double floor = negligible_norm(a);
    for (Index s = 0; s < max_steps; ++s) {
        const Vector norms = w.rightCols(n - s).colwise().norm().transpose();
        const Index j = argmax_keep_incumbent(norms, 0, floor);
        if (j != 0) {
            perm.swap(s, s + j);
            w.col(s).swap(w.col(s + j));
            ++swaps;
        }
        Vector v = w.col(s);
        orthogonalize(v, basis, s, nullptr);
        const double nrm = v.norm();
        const double column_norm = a.col(perm.order[static_cast<std::size_t>(s)]).norm();
        if (column_norm == 0.0 || nrm <= kDeflateTolerance * column_norm) {
            complete_column(basis, s);
        } else {
            basis.col(s) = v / nrm;
        }
        if (s + 1 < n) {
            auto rest = w.rightCols(n - s - 1);
            const Vector c = rest.transpose() * basis.col(s);
            rest.noalias() -= basis.col(s) * c.transpose();
        }
    }
    PivotState st(a, perm);
    st.swaps = swaps;
    return finish(st, max_steps, max_steps);
}

Vector inverse_row_norms(const Matrix& upper) {
    const Index b = upper.rows();
    if (upper.cols() != b) throw InvalidArgument("inverse_row_norms: block must be square");
    Vector sq = Vector::Zero(b);
    Vector x(b);
    for (Index j = 0; j < b; ++j) {
        // Column j of the inverse: solve U x = e_j by back-substitution.
        x.setZero();
        x(j) = 1.0 / upper(j, j);
        for (Index i = j; i-- > 0;) {
            const double s = upper.row(i).segment(i + 1, j - i).dot(x.segment(i + 1, j - i));
            x(i) = -s / upper(i, i);
        }
        sq.head(j + 1) += x.head(j + 1).cwiseAbs2();
    }
    return sq.cwiseSqrt();
}

Permutation stewart2(const Matrix& r, Index target_rank) {
    const Index n = r.rows();
    if (r.cols() != n || n < 1) throw InvalidArgument("stewart2: leading block must be square");
    if (target_rank < 1 || target_rank > n) {
        throw InvalidArgument(fmt::format("stewart2: target size {} outside [1, {}]", target_rank, n));
    }
    const double scale = r.norm();
    for (Index j = 0; j < n; ++j) {
        for (Index i = j + 1; i < n; ++i) {
            if (std::abs(r(i, j)) > 1e-12 * scale) throw InvalidArgument("stewart2: matrix is not upper triangular");
        }
    }
    const Vector sv = singular_values(r);
    if (!(sv(n - 1) > 1e-13 * sv(0))) throw InvalidArgument("stewart2: leading block is singular");

    Permutation perm = Permutation::identity(n);
    Matrix current = r.triangularView<Eigen::Upper>();
    const Matrix base = current;
    for (Index b = n; b > target_rank; --b) {
        const Index w = argmax_keep_incumbent(inverse_row_norms(current.topLeftCorner(b, b)), b - 1);
        if (w != b - 1) {
            perm.swap(w, b - 1);
            current = gs_qr(perm.apply(base)).r;
        }
    }
    return perm;
}

RrqrResult hybrid1(const Matrix& a, Index p, const Permutation& init) {
    check_rank(a, p, std::min(a.rows(), a.cols()), "hybrid1");
    check_init(a, init);
    PivotState st(a, init);
    const Index passes = run_hybrid(st, p - 1, p);
    return finish(st, p, passes);
}

RrqrResult hybrid2(const Matrix& a, Index p, const Permutation& init) {
    check_rank(a, p, std::min(a.rows(), a.cols()) - 1, "hybrid2");
    check_init(a, init);
    PivotState st(a, init);
    const Index passes = run_hybrid(st, p, p + 1);
    return finish(st, p, passes);
}

RrqrResult hybrid3(const Matrix& a, Index p) {
    check_rank(a, p, std::min(a.rows(), a.cols()) - 1, "hybrid3");
    return hybrid3(a, p, qr_cp(a, std::min(a.rows(), a.cols())).perm);
}

RrqrResult hybrid3(const Matrix& a, Index p, const Permutation& init) {
    check_rank(a, p, std::min(a.rows(), a.cols()) - 1, "hybrid3");
    check_init(a, init);
    PivotState st(a, init);
    const Index cap = hybrid_pass_cap(a.cols());
    Index passes = 0;
    for (Index round = 1;; ++round) {
        const Index before = st.swaps;
        passes += run_hybrid(st, p - 1, p);
        passes += run_hybrid(st, p, p + 1);
        if (st.swaps == before) break;
        if (round >= cap) {
            throw IterationLimitError(fmt::format("hybrid3 did not settle within {} rounds", cap));
        }
    }
    return finish(st, p, passes);
}

double reconstruction_error(const Matrix& a, const RrqrResult& result) {
    const double scale = a.norm();
    const double resid = (result.perm.apply(a) - result.factors.q * result.factors.r).norm();
    return scale == 0.0 ? resid : resid / scale;
}

}  // namespace frrqr
