#pragma once

#include "frrqr/rrqr.hpp"
#include "oracles.hpp"

#include <cmath>

namespace bounds {

using frrqr::Index;
using frrqr::Matrix;
using frrqr::RrqrResult;
using frrqr::Vector;

inline double sigma(const Vector& s, Index i) { return i >= 1 && i <= s.size() ? s(i - 1) : 0.0; }

// sigma_min(R11) >= sigma_p / sqrt(p(n-p+1)) and sigma_max(R22) <= sigma_min(R11) sqrt(p(n-p+1)).
inline bool hybrid1_holds(const Matrix& a, const RrqrResult& r, double rel_slack = 1e-9) {
    const Vector s = oracle::jacobi_sv(a);
    const Index p = r.assumed_rank;
    const Index n = a.cols();
    const double slack = rel_slack * s(0);
    const double h = std::sqrt(static_cast<double>(p * (n - p + 1)));
    return r.r11_min_sv >= sigma(s, p) / h - slack && r.r22_max_sv <= r.r11_min_sv * h + slack;
}

// sigma_max(R22) <= sigma_{p+1} sqrt((p+1)(n-p)) and sigma_min(R11) >= sigma_max(R22) / sqrt((p+1)(n-p)).
inline bool hybrid2_holds(const Matrix& a, const RrqrResult& r, double rel_slack = 1e-9) {
    const Vector s = oracle::jacobi_sv(a);
    const Index p = r.assumed_rank;
    const Index n = a.cols();
    const double slack = rel_slack * s(0);
    const double h = std::sqrt(static_cast<double>((p + 1) * (n - p)));
    return r.r22_max_sv <= sigma(s, p + 1) * h + slack && r.r11_min_sv >= r.r22_max_sv / h - slack;
}

// Both outer bounds of Hybrid-III.
inline bool hybrid3_holds(const Matrix& a, const RrqrResult& r, double rel_slack = 1e-9) {
    const Vector s = oracle::jacobi_sv(a);
    const Index p = r.assumed_rank;
    const Index n = a.cols();
    const double slack = rel_slack * s(0);
    const double h1 = std::sqrt(static_cast<double>(p * (n - p + 1)));
    const double h2 = std::sqrt(static_cast<double>((p + 1) * (n - p)));
    return r.r11_min_sv >= sigma(s, p) / h1 - slack && r.r22_max_sv <= sigma(s, p + 1) * h2 + slack;
}

// Independent check of the reported split values.
inline bool split_consistent(const RrqrResult& r) {
    const Index p = r.assumed_rank;
    const Matrix& R = r.factors.r;
    const Vector s11 = oracle::jacobi_sv(R.topLeftCorner(p, p));
    const Matrix r22 = R.bottomRightCorner(R.rows() - p, R.cols() - p);
    const double s22 = r22.size() ? oracle::jacobi_sv(r22)(0) : 0.0;
    const double scale = std::max(1.0, oracle::jacobi_sv(R)(0));
    return std::abs(s11(p - 1) - r.r11_min_sv) <= 1e-8 * scale && std::abs(s22 - r.r22_max_sv) <= 1e-8 * scale;
}

}  // namespace bounds
