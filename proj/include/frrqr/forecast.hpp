#pragma once

#include "frrqr/factor_rrqr.hpp"
#include "frrqr/linalg.hpp"
#include "frrqr/tsdata.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frrqr {

/// x_t = sum_i coeffs[i] x_{t-1-i} + e_t with Var(e_t) = noise_var.
struct ArModel {
    Index order = 0;
    std::vector<double> coeffs;
    double noise_var = 0.0;

    /// One-step prediction from a history whose last entry is x_{t-1}.
    double predict(std::span<const double> history) const;
};

/// Yule-Walker fit from the biased sample autocovariances of the demeaned
/// series, solved with the Levinson-Durbin recursion.
/// Requires 1 <= order <= N/2 and a non-constant series.
ArModel yule_walker(std::span<const double> series, Index order);

struct OneStepForecast {
    Vector y;                           // K-vector
    Vector factors;                     // p_hat-vector
    std::vector<std::string> warnings;  // non-fatal diagnostics
};

/// Forecasts each factor with its own AR model from history (p_hat x L,
/// most recent column last) and maps back through q_hat. The fit's mean is
/// not added back. A model with p_hat = 0 yields a zero forecast and a
/// warning.
OneStepForecast forecast_one_step(const FactorModelFit& fit, const std::vector<ArModel>& ar,
                                  const Matrix& history);

/// (sum_n ||Qhat fhat_n - H x_n||_2 / (K N))^0.5, norms unsquared.
double rmse(const FactorModelFit& fit, const Matrix& truth_loading, const Matrix& truth_factors);

/// (sum_n ||Qhat fhat_n - H x_n||_2^2 / (K N))^0.5.
double conventional_rmse(const FactorModelFit& fit, const Matrix& truth_loading,
                         const Matrix& truth_factors);

/// 1/T sum_t K^{-1/2} ||yhat_t - y_t||_2. Requires equal shapes and T >= 1.
double forecast_error(const Matrix& predictions, const Matrix& actuals);

/// Fits one AR model per factor row.
std::vector<ArModel> fit_factor_ar(const Matrix& factors, Index order);

struct RollingConfig {
    Method method = Method::Rrqr;
    Index window = 500;
    Index refit_stride = 10;
    Index ar_order = 10;
    Index eval_len = 400;
    Index lag_lo = 1;
    Index lag_hi = 5;
    Index p_cap = 0;  // 0 selects the method default
    Index p_max = 0;  // PCA only; 0 selects the default
};

struct WindowRecord {
    Index start = 0;          // first column of the fitting window
    Index p_hat = 0;
    double recon_rmse = 0.0;  // (1/(K W) sum ||ytilde - Qhat fhat||^2)^0.5
    std::optional<double> truth_rmse;  // unsquared-norm RMSE against H x
};

struct ForecastReport {
    RollingConfig config;
    double p_hat_mean = 0.0;
    double rmse_mean = 0.0;  // mean of recon_rmse
    std::optional<double> truth_rmse_mean;
    double fe = 0.0;
    std::vector<WindowRecord> per_window;
    Matrix predictions;  // K x eval_len
    Matrix actuals;      // K x eval_len
};

struct GroundTruth {
    Matrix loading;  // K x p
    Matrix factors;  // p x N
};

/// Fits a factor model FactorModelFit at the method named in config over
/// each window, forecasts the following refit_stride steps one at a time
/// using observed values as they arrive, then advances the window. The
/// input is first demeaned over the full sample. Forecast targets are the
/// last eval_len columns. Requires N >= window + eval_len.
ForecastReport rolling_eval(const TimeSeries& ts, const RollingConfig& config,
                            const GroundTruth* truth = nullptr);

/// Dispatches to fit_rrqr / fit_evd / fit_pca with the shared options.
FactorModelFit fit_method(const TimeSeries& ts, Method method, Index lag_lo, Index lag_hi,
                          Index p_cap, Index p_max, std::optional<Index> p_override = {});

}  // namespace frrqr
