#include "frrqr/forecast.hpp"

#include "frrqr/baselines.hpp"
#include "frrqr/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace frrqr {

double ArModel::predict(std::span<const double> history) const {
    if (static_cast<Index>(history.size()) < order) {
        throw InvalidArgument(fmt::format("history of length {} shorter than AR order {}", history.size(), order));
    }
    double acc = 0.0;
    const std::size_t last = history.size() - 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * history[last - i];
    return acc;
}

ArModel yule_walker(std::span<const double> series, Index order) {
    const Index n = static_cast<Index>(series.size());
    if (order < 1 || order > n / 2) {
        throw InvalidArgument(fmt::format("AR order {} outside [1, {}]", order, n / 2));
    }
    const Eigen::Map<const Vector> x(series.data(), n);
    const double mu = x.mean();
    const Vector xc = x.array() - mu;
    const double scale = x.cwiseAbs().maxCoeff();

    Vector acov(order + 1);
    for (Index k = 0; k <= order; ++k) {
        acov(k) = xc.tail(n - k).dot(xc.head(n - k)) / static_cast<double>(n);
    }
    if (!(acov(0) > 1e-24 * scale * scale) || acov(0) == 0.0) {
        throw InvalidArgument("Yule-Walker: series has zero variance");
    }

    // Levinson-Durbin.
    std::vector<double> phi(static_cast<std::size_t>(order), 0.0);
    std::vector<double> prev(phi);
    double err = acov(0);
    for (Index m = 1; m <= order; ++m) {
        double acc = acov(m);
        for (Index j = 1; j < m; ++j) acc -= prev[static_cast<std::size_t>(j - 1)] * acov(m - j);
        const double kappa = acc / err;
        for (Index j = 1; j < m; ++j) {
            phi[static_cast<std::size_t>(j - 1)] =
                prev[static_cast<std::size_t>(j - 1)] - kappa * prev[static_cast<std::size_t>(m - j - 1)];
        }
        phi[static_cast<std::size_t>(m - 1)] = kappa;
        err *= (1.0 - kappa * kappa);
        prev = phi;
    }
    return ArModel{order, std::move(phi), std::max(err, 0.0)};
}

std::vector<ArModel> fit_factor_ar(const Matrix& factors, Index order) {
    std::vector<ArModel> out;
    out.reserve(static_cast<std::size_t>(factors.rows()));
    for (Index i = 0; i < factors.rows(); ++i) {
        const Vector row = factors.row(i).transpose();
        out.push_back(yule_walker(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())), order));
    }
    return out;
}

OneStepForecast forecast_one_step(const FactorModelFit& fit, const std::vector<ArModel>& ar,
                                  const Matrix& history) {
    OneStepForecast out;
    const Index k = fit.q_hat.rows();
    if (fit.p_hat == 0) {
        out.y = Vector::Zero(k);
        out.factors = Vector();
        out.warnings.push_back("model has no factors; forecast is zero");
        return out;
    }
    if (static_cast<Index>(ar.size()) != fit.p_hat) {
        throw InvalidArgument(fmt::format("{} AR models for {} factors", ar.size(), fit.p_hat));
    }
    if (history.rows() != fit.p_hat) {
        throw InvalidArgument(fmt::format("history has {} rows, expected {}", history.rows(), fit.p_hat));
    }
    out.factors.resize(fit.p_hat);
    for (Index i = 0; i < fit.p_hat; ++i) {
        const auto& model = ar[static_cast<std::size_t>(i)];
        if (history.cols() < model.order) {
            throw InvalidArgument(
                fmt::format("history length {} shorter than AR order {}", history.cols(), model.order));
        }
        const Vector row = history.row(i).transpose();
        out.factors(i) = model.predict(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
    }
    out.y = fit.q_hat * out.factors;
    return out;
}

namespace {

Matrix truth_residual(const FactorModelFit& fit, const Matrix& h, const Matrix& x) {
    const Matrix recon = fit.reconstruction();
    if (h.rows() != recon.rows() || x.cols() != recon.cols() || h.cols() != x.rows()) {
        throw InvalidArgument(fmt::format("shape mismatch: fit {}x{}, truth {}x{} * {}x{}", recon.rows(),
                                          recon.cols(), h.rows(), h.cols(), x.rows(), x.cols()));
    }
    return recon - h * x;
}

}  // namespace

double rmse(const FactorModelFit& fit, const Matrix& truth_loading, const Matrix& truth_factors) {
    const Matrix d = truth_residual(fit, truth_loading, truth_factors);
    const double sum = d.colwise().norm().sum();
    return std::sqrt(sum / static_cast<double>(d.rows() * d.cols()));
}

double conventional_rmse(const FactorModelFit& fit, const Matrix& truth_loading, const Matrix& truth_factors) {
    const Matrix d = truth_residual(fit, truth_loading, truth_factors);
    return std::sqrt(d.squaredNorm() / static_cast<double>(d.rows() * d.cols()));
}

double forecast_error(const Matrix& predictions, const Matrix& actuals) {
    if (predictions.rows() != actuals.rows() || predictions.cols() != actuals.cols()) {
        throw InvalidArgument("forecast_error: shape mismatch");
    }
    if (predictions.cols() == 0 || predictions.rows() == 0) throw InvalidArgument("forecast_error: empty evaluation window");
    const double k = static_cast<double>(predictions.rows());
    return (predictions - actuals).colwise().norm().sum() / std::sqrt(k) / static_cast<double>(predictions.cols());
}

FactorModelFit fit_method(const TimeSeries& ts, Method method, Index lag_lo, Index lag_hi, Index p_cap,
                          Index p_max, std::optional<Index> p_override) {
    switch (method) {
        case Method::Rrqr: return fit_rrqr(ts, {lag_lo, lag_hi, p_override, p_cap});
        case Method::Evd: return fit_evd(ts, {lag_lo, lag_hi, p_override, p_cap});
        case Method::Pca: return fit_pca(ts, {p_max, p_override});
    }
    throw InvalidArgument("unknown method");
}

ForecastReport rolling_eval(const TimeSeries& ts, const RollingConfig& config, const GroundTruth* truth) {
    const Index k = ts.series_count();
    const Index n = ts.length();
    if (config.window < 2 || config.refit_stride < 1 || config.eval_len < 1 || config.ar_order < 1) {
        throw InvalidArgument("rolling_eval: window, stride, eval length and AR order must be positive");
    }
    if (n < config.window + config.eval_len) {
        throw InvalidArgument(fmt::format("rolling_eval: need at least {} samples (window {} + eval {}), got {}",
                                          config.window + config.eval_len, config.window, config.eval_len, n));
    }
    if (truth && (truth->loading.rows() != k || truth->factors.cols() != n)) {
        throw InvalidArgument("rolling_eval: ground truth shape mismatch");
    }
    const TimeSeries data = demean(ts);
    const Matrix& y = data.values();

    ForecastReport report;
    report.config = config;
    report.predictions.resize(k, config.eval_len);
    report.actuals = y.rightCols(config.eval_len);

    const Index first_target = n - config.eval_len;
    double truth_sum = 0.0;
    for (Index t0 = first_target; t0 < n; t0 += config.refit_stride) {
        const Index start = t0 - config.window;
        const TimeSeries win = data.slice(start, config.window);
        const FactorModelFit fit =
            fit_method(win, config.method, config.lag_lo, config.lag_hi, config.p_cap, config.p_max);
        const std::vector<ArModel> ar = fit_factor_ar(fit.factors, config.ar_order);

        WindowRecord rec;
        rec.start = start;
        rec.p_hat = fit.p_hat;
        const Matrix resid = (win.values().colwise() - fit.mean) - fit.reconstruction();
        rec.recon_rmse = std::sqrt(resid.squaredNorm() / static_cast<double>(k * config.window));
        if (truth) {
            rec.truth_rmse = rmse(fit, truth->loading, truth->factors.middleCols(start, config.window));
            truth_sum += *rec.truth_rmse;
        }
        report.per_window.push_back(rec);

        const Index stop = std::min(n, t0 + config.refit_stride);
        for (Index t = t0; t < stop; ++t) {
            const Matrix hist = fit.q_hat.transpose() *
                                (y.middleCols(t - config.ar_order, config.ar_order).colwise() - fit.mean);
            const OneStepForecast f = forecast_one_step(fit, ar, hist);
            report.predictions.col(t - first_target) = f.y + fit.mean;
        }
    }

    const double windows = static_cast<double>(report.per_window.size());
    Index p_sum = 0;
    for (const auto& w : report.per_window) {
        p_sum += w.p_hat;
        report.rmse_mean += w.recon_rmse / windows;
    }
    report.p_hat_mean = static_cast<double>(p_sum) / windows;
    if (truth) report.truth_rmse_mean = truth_sum / windows;
    report.fe = forecast_error(report.predictions, report.actuals);
    return report;
}

}  // namespace frrqr
