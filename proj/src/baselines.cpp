#include "frrqr/baselines.hpp"

#include "frrqr/covariance.hpp"
#include "frrqr/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace frrqr {

namespace {

Matrix centered(const TimeSeries& ts, const Vector& mean) { return ts.values().colwise() - mean; }

// lambda_i / lambda_{i+1}; a vanishing denominator gives +inf over a
// positive numerator and 1 otherwise.
double eigen_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

Index first_argmax(const Vector& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i) {
        if (v(i) > v(best)) best = i;
    }
    return best;
}

// Mean squared residual of the rank-p principal-component fit: the trailing
// eigenvalue sum of S(0) divided by K.
double pca_residual(const Vector& eigenvalues, Index p) {
    const Index k = eigenvalues.size();
    return eigenvalues.tail(k - p).sum() / static_cast<double>(k);
}

double ic_from_spectrum(const Vector& eigenvalues, Index p, Index k, Index n) {
    const double v = pca_residual(eigenvalues, p);
    const double total = pca_residual(eigenvalues, 0);
    if (v <= 1e-13 * total) return -std::numeric_limits<double>::infinity();
    return std::log(v) + ic_penalty(p, k, n);
}

}  // namespace

Matrix evd_s_matrix(const TimeSeries& ts, Index lag_lo, Index lag_hi) {
    const AugmentedCov m = build_augmented(ts, lag_lo, lag_hi);
    const Index k = m.series_count;
    Matrix s = Matrix::Zero(k, k);
    for (Index j = 0; j < m.lag_count(); ++j) {
        const Matrix b = m.block(j);
        s.noalias() += b * b.transpose();
    }
    return s;
}

EvdSpectrum evd_spectrum(const Matrix& s, Index p_cap) {
    const Index k = s.rows();
    if (p_cap < 1 || p_cap > k - 1) throw InvalidArgument(fmt::format("p_cap {} outside [1, {}]", p_cap, k - 1));
    const SymmetricEigen eig = symmetric_eigen(s);
    EvdSpectrum out;
    out.eigenvalues = eig.values;
    out.eigenvectors = eig.vectors;
    out.ratios.resize(p_cap);
    for (Index i = 0; i < p_cap; ++i) out.ratios(i) = eigen_ratio(eig.values(i), eig.values(i + 1));
    return out;
}

FactorModelFit fit_evd(const TimeSeries& ts, const EvdFitOptions& options) {
    const Index k = ts.series_count();
    const Index cap = options.p_cap > 0 ? options.p_cap : default_p_cap(k);
    const EvdSpectrum spec = evd_spectrum(evd_s_matrix(ts, options.lag_lo, options.lag_hi), cap);

    FactorModelFit fit;
    fit.method = Method::Evd;
    if (options.p_override) {
        fit.p_hat = *options.p_override;
        if (fit.p_hat < 1 || fit.p_hat > k) throw InvalidArgument(fmt::format("p override {} outside [1, {}]", fit.p_hat, k));
    } else {
        fit.p_hat = first_argmax(spec.ratios) + 1;
    }
    fit.q_hat = spec.eigenvectors.leftCols(fit.p_hat);
    fit.mean = series_mean(ts);
    fit.factors = fit.q_hat.transpose() * centered(ts, fit.mean);
    for (Index i = 0; i < std::min<Index>(spec.eigenvalues.size(), cap + 1); ++i) {
        fit.diagnostics[fmt::format("lambda_{}", i + 1)] = spec.eigenvalues(i);
    }
    for (Index i = 0; i < spec.ratios.size(); ++i) {
        fit.diagnostics[fmt::format("ratio_{}", i + 1)] = spec.ratios(i);
    }
    return fit;
}

double ic_penalty(Index p, Index series_count, Index sample_length) {
    const double k = static_cast<double>(series_count);
    const double n = static_cast<double>(sample_length);
    return static_cast<double>(p) * ((k + n) / (k * n)) * std::log(k * n / (k + n));
}

double ic_p(const TimeSeries& ts, Index p) {
    const Index k = ts.series_count();
    const Index n = ts.length();
    if (p < 1 || p > std::min(k, n)) throw InvalidArgument(fmt::format("p {} outside [1, {}]", p, std::min(k, n)));
    const SymmetricEigen eig = symmetric_eigen(sample_autocov(ts, 0).matrix);
    return ic_from_spectrum(eig.values, p, k, n);
}

Index default_pca_p_max(Index series_count, Index sample_length) {
    return std::max<Index>(1, std::min(series_count, sample_length) / 2);
}

FactorModelFit fit_pca(const TimeSeries& ts, const PcaFitOptions& options) {
    const Index k = ts.series_count();
    const Index n = ts.length();
    const Index p_max = options.p_max > 0 ? options.p_max : default_pca_p_max(k, n);
    if (p_max > std::min(k, n)) throw InvalidArgument(fmt::format("p_max {} outside [1, {}]", p_max, std::min(k, n)));
    const SymmetricEigen eig = symmetric_eigen(sample_autocov(ts, 0).matrix);

    FactorModelFit fit;
    fit.method = Method::Pca;
    if (options.p_override) {
        fit.p_hat = *options.p_override;
        if (fit.p_hat < 1 || fit.p_hat > k) throw InvalidArgument(fmt::format("p override {} outside [1, {}]", fit.p_hat, k));
    } else {
        Index best = 1;
        double best_ic = ic_from_spectrum(eig.values, 1, k, n);
        for (Index p = 2; p <= p_max; ++p) {
            const double ic = ic_from_spectrum(eig.values, p, k, n);
            if (ic < best_ic) {
                best = p;
                best_ic = ic;
            }
        }
        fit.p_hat = best;
        fit.diagnostics["ic_min"] = best_ic;
    }
    fit.q_hat = eig.vectors.leftCols(fit.p_hat);
    fit.mean = series_mean(ts);
    fit.factors = fit.q_hat.transpose() * centered(ts, fit.mean);
    fit.diagnostics["sigma2_hat"] = eig.values.tail(k - fit.p_hat).sum();
    fit.diagnostics["p_max"] = static_cast<double>(p_max);
    return fit;
}

}  // namespace frrqr
