#pragma once

#include "frrqr/factor_rrqr.hpp"
#include "frrqr/linalg.hpp"
#include "frrqr/tsdata.hpp"

#include <optional>

namespace frrqr {

struct EvdSpectrum {
    Vector eigenvalues;   // descending, clamped at 0
    Matrix eigenvectors;  // K x K
    Vector ratios;        // lambda_i / lambda_{i+1}, i = 1..p_cap
};

/// S = sum over lags of S(l) S(l)^T.
Matrix evd_s_matrix(const TimeSeries& ts, Index lag_lo, Index lag_hi);

/// Eigen-ratio spectrum of S. A vanishing denominator yields +inf when the
/// numerator is positive and 1 otherwise.
EvdSpectrum evd_spectrum(const Matrix& s, Index p_cap);

struct EvdFitOptions {
    Index lag_lo = 1;
    Index lag_hi = 5;
    std::optional<Index> p_override;
    Index p_cap = 0;  // 0 selects default_p_cap(K)
};

FactorModelFit fit_evd(const TimeSeries& ts, const EvdFitOptions& options = {});

/// Bai-Ng information criterion
///   IC_p = ln V(p) + p (K+N)/(KN) ln(KN/(K+N))
/// with V(p) the mean squared residual of the rank-p principal-component
/// fit. A perfect fit (V = 0) returns -infinity.
double ic_p(const TimeSeries& ts, Index p);

/// The penalty term p (K+N)/(KN) ln(KN/(K+N)).
double ic_penalty(Index p, Index series_count, Index sample_length);

struct PcaFitOptions {
    Index p_max = 0;  // 0 selects default_pca_p_max(K, N)
    std::optional<Index> p_override;
};

/// max(1, min(K, N) / 2).
Index default_pca_p_max(Index series_count, Index sample_length);

/// Principal components of S(0); p_hat minimizes IC_p over 1..p_max.
/// Diagnostics include "sigma2_hat" = sum of the eigenvalues past p_hat
/// (a sum, not an average).
FactorModelFit fit_pca(const TimeSeries& ts, const PcaFitOptions& options = {});

}  // namespace frrqr
