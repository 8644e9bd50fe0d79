#include "frrqr/linalg.hpp"

#include "frrqr/error.hpp"

#include <algorithm>
#include <numeric>

namespace frrqr {

Permutation Permutation::identity(Index n) {
    Permutation p;
    p.order.resize(static_cast<std::size_t>(n));
    std::iota(p.order.begin(), p.order.end(), Index{0});
    return p;
}

bool Permutation::is_bijection() const {
    std::vector<bool> seen(order.size(), false);
    for (Index v : order) {
        if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

bool Permutation::is_identity() const {
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k] != static_cast<Index>(k)) return false;
    }
    return true;
}

void Permutation::swap(Index i, Index j) {
    std::swap(order.at(static_cast<std::size_t>(i)), order.at(static_cast<std::size_t>(j)));
}

Matrix Permutation::apply(const Matrix& a) const {
    if (a.cols() != size()) throw InvalidArgument("permutation size does not match column count");
    Matrix out(a.rows(), a.cols());
    for (Index k = 0; k < size(); ++k) out.col(k) = a.col(order[static_cast<std::size_t>(k)]);
    return out;
}

SymmetricEigen symmetric_eigen(const Matrix& s) {
    if (s.rows() != s.cols()) throw InvalidArgument("symmetric_eigen: matrix must be square");
    SymmetricEigen out;
    if (s.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
    const Index n = s.rows();
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    const double top = std::max(out.values(0), 0.0);
    for (Index i = 0; i < n; ++i) {
        if (out.values(i) < 0.0 && out.values(i) >= -1e-10 * top) out.values(i) = 0.0;
    }
    for (Index j = 0; j < n; ++j) {
        Index arg = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
        if (out.vectors(arg, j) < 0.0) out.vectors.col(j) *= -1.0;
    }
    return out;
}

Vector singular_values(const Matrix& a) {
    const Index k = std::min(a.rows(), a.cols());
    if (k == 0) return Vector();
    const Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    Vector sv = solver.eigenvalues().reverse();
    for (Index i = 0; i < k; ++i) sv(i) = std::sqrt(std::max(sv(i), 0.0));
    return sv;
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return singular_values(a)(0);
}

double min_singular_value(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    const Vector sv = singular_values(a);
    return sv(sv.size() - 1);
}

}  // namespace frrqr
