#pragma once

#include "frrqr/linalg.hpp"
#include "frrqr/tsdata.hpp"

namespace frrqr {

struct LagCovariance {
    Index lag = 0;
    Matrix matrix;  // K x K
};

/// Horizontal stack [S(lag_lo) S(lag_lo+1) ... S(lag_hi)] of sample
/// lag-autocovariances; K x (lag_hi - lag_lo + 1) K.
struct AugmentedCov {
    Index lag_lo = 1;
    Index lag_hi = 1;
    Matrix matrix;
    Index series_count = 0;  // K
    Index sample_length = 0;  // N

    Index lag_count() const { return lag_hi - lag_lo + 1; }
    /// K x K block holding S(lag_lo + j).
    Matrix block(Index j) const;
};

/// S(l) = 1/(N-l) * sum_{n} (y_{n+l} - ybar)(y_n - ybar)^T with ybar the
/// full-sample mean. Requires 0 <= lag <= N-2.
LagCovariance sample_autocov(const TimeSeries& ts, Index lag);

/// Requires 1 <= lag_lo <= lag_hi <= N-2.
AugmentedCov build_augmented(const TimeSeries& ts, Index lag_lo, Index lag_hi);

}  // namespace frrqr
