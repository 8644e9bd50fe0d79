#include "frrqr/covariance.hpp"

#include "frrqr/error.hpp"

#include <fmt/format.h>

namespace frrqr {

namespace {

Matrix centered_values(const TimeSeries& ts) { return ts.values().colwise() - series_mean(ts); }

Matrix autocov_of_centered(const Matrix& yc, Index lag) {
    const Index n = yc.cols();
    const double norm = 1.0 / static_cast<double>(n - lag);
    return norm * (yc.rightCols(n - lag) * yc.leftCols(n - lag).transpose());
}

void check_lag(Index lag, Index n) {
    if (lag < 0 || lag > n - 2) {
        throw InvalidArgument(fmt::format("lag {} outside [0, {}] for series of length {}", lag, n - 2, n));
    }
}

}  // namespace

Matrix AugmentedCov::block(Index j) const {
    return matrix.middleCols(j * series_count, series_count);
}

LagCovariance sample_autocov(const TimeSeries& ts, Index lag) {
    check_lag(lag, ts.length());
    return {lag, autocov_of_centered(centered_values(ts), lag)};
}

AugmentedCov build_augmented(const TimeSeries& ts, Index lag_lo, Index lag_hi) {
    if (lag_lo < 1 || lag_hi < lag_lo) {
        throw InvalidArgument(fmt::format("invalid lag range [{}, {}]", lag_lo, lag_hi));
    }
    check_lag(lag_hi, ts.length());
    const Index k = ts.series_count();
    const Matrix yc = centered_values(ts);
    AugmentedCov out;
    out.lag_lo = lag_lo;
    out.lag_hi = lag_hi;
    out.series_count = k;
    out.sample_length = ts.length();
    out.matrix.resize(k, (lag_hi - lag_lo + 1) * k);
    for (Index l = lag_lo; l <= lag_hi; ++l) {
        out.matrix.middleCols((l - lag_lo) * k, k) = autocov_of_centered(yc, l);
    }
    return out;
}

}  // namespace frrqr
