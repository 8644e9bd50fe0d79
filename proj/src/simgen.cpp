#include "frrqr/simgen.hpp"

#include "frrqr/baselines.hpp"
#include "frrqr/error.hpp"
#include "frrqr/forecast.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace frrqr {

double Rng::uniform() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double Rng::normal() {
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, uniform());
}

void SimConfig::validate() const {
    if (scenario == Scenario::Sim1) {
        if (K < 2 || N < 10) throw InvalidArgument(fmt::format("sim1 needs K >= 2 and N >= 10 (got K={}, N={})", K, N));
    } else {
        if (K < 4 || K % 2 != 0) throw InvalidArgument(fmt::format("sim2 needs an even K >= 4 (got {})", K));
        if (N < 10) throw InvalidArgument(fmt::format("sim2 needs N >= 10 (got {})", N));
        if (!(0.0 <= delta1 && delta1 < delta2 && delta2 <= 1.0)) {
            throw InvalidArgument(fmt::format("factor strengths need 0 <= delta1 < delta2 <= 1 (got {}, {})", delta1, delta2));
        }
        if (noise == NoiseKind::Hurst && !(hurst_w > 0.0 && hurst_w < 1.0)) {
            throw InvalidArgument(fmt::format("Hurst parameter {} outside (0, 1)", hurst_w));
        }
        if (noise_scale < 0.0) throw InvalidArgument("noise scale must be non-negative");
    }
    if (lag_lo < 1 || lag_hi < lag_lo || lag_hi > N - 2) {
        throw InvalidArgument(fmt::format("lag range [{}, {}] invalid for N={}", lag_lo, lag_hi, N));
    }
    if (ar_order < 1) throw InvalidArgument("AR order must be positive");
}

SimDataset gen_sim1(Index K, Index N, std::uint64_t seed, bool half_support) {
    if (K < 2 || N < 10) throw InvalidArgument(fmt::format("sim1 needs K >= 2 and N >= 10 (got K={}, N={})", K, N));
    constexpr Index kBurnIn = 1000;
    constexpr double kSd = 2.0;  // variance 4
    Rng rng(seed);

    Matrix h(K, 1);
    for (Index k = 0; k < K; ++k) {
        h(k, 0) = 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(K));
    }
    if (half_support) h.bottomRows(K - K / 2).setZero();

    Matrix x(1, N);
    double state = 0.0;
    for (Index n = -kBurnIn; n < N; ++n) {
        state = 0.9 * state + kSd * rng.normal();
        if (n >= 0) x(0, n) = state;
    }
    Matrix y = h * x;
    for (Index n = 0; n < N; ++n) {
        for (Index k = 0; k < K; ++k) y(k, n) += kSd * rng.normal();
    }
    return SimDataset{TimeSeries(std::move(y)), std::move(h), std::move(x), 1};
}

Matrix hurst_cov(Index K, double w) {
    if (!(w > 0.0 && w < 1.0)) throw InvalidArgument(fmt::format("Hurst parameter {} outside (0, 1)", w));
    if (K < 1) throw InvalidArgument("hurst_cov: K must be positive");
    const double e = 2.0 * w;
    Matrix s(K, K);
    for (Index i = 1; i <= K; ++i) {
        for (Index j = 1; j <= i; ++j) {
            const double d = static_cast<double>(i - j);
            s(i - 1, j - 1) = 0.5 * (std::pow(static_cast<double>(i), e) - (d == 0.0 ? 0.0 : std::pow(d, e)) +
                                     std::pow(static_cast<double>(j), e));
            s(j - 1, i - 1) = s(i - 1, j - 1);
        }
    }
    return s;
}

SimDataset gen_sim2(const SimConfig& config) {
    SimConfig c = config;
    c.scenario = Scenario::Sim2;
    c.validate();
    const Index K = c.K;
    const Index N = c.N;
    Rng rng(c.seed);

    // Loadings: a strength delta > 0 keeps only the first K/2 entries.
    Matrix h = Matrix::Zero(K, 2);
    const Index support1 = c.delta1 > 0.0 ? K / 2 : K;
    const Index support2 = c.delta2 > 0.0 ? K / 2 : K;
    for (Index k = 0; k < support1; ++k) h(k, 0) = rng.uniform(-4.0, 4.0);
    for (Index k = 0; k < support2; ++k) h(k, 1) = rng.uniform(-4.0, 4.0);

    Vector e1(N + 1);
    Vector e2(N + 2);
    for (Index i = 0; i < e1.size(); ++i) e1(i) = rng.normal();
    for (Index i = 0; i < e2.size(); ++i) e2(i) = rng.normal();
    Matrix x(2, N);
    for (Index n = 0; n < N; ++n) {
        x(0, n) = e1(n + 1) + c.alpha1 * e1(n);
        x(1, n) = e2(n + 2) + c.alpha2 * e2(n);
    }

    Matrix z(K, N);
    for (Index n = 0; n < N; ++n) {
        for (Index k = 0; k < K; ++k) z(k, n) = rng.normal();
    }
    Matrix y = h * x;
    if (c.noise == NoiseKind::IidIdentity) {
        y += z;
    } else {
        const SymmetricEigen eig = symmetric_eigen(c.noise_scale * hurst_cov(K, c.hurst_w));
        const Vector root = eig.values.cwiseMax(0.0).cwiseSqrt();
        const Matrix sqrt_cov = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
        y.noalias() += sqrt_cov * z;
    }
    return SimDataset{TimeSeries(std::move(y)), std::move(h), std::move(x), 2};
}

SimDataset generate(const SimConfig& config) {
    config.validate();
    if (config.scenario == Scenario::Sim1) return gen_sim1(config.K, config.N, config.seed, config.half_support);
    return gen_sim2(config);
}

Matrix orthonormal_basis(const Matrix& h) {
    Eigen::HouseholderQR<Matrix> qr(h);
    return qr.householderQ() * Matrix::Identity(h.rows(), h.cols());
}

double subspace_error(const Matrix& q_hat, const Matrix& q_true, SubspaceMetric metric) {
    if (q_hat.rows() != q_true.rows() || q_hat.cols() != q_true.cols()) {
        throw InvalidArgument(fmt::format("subspace_error: shapes {}x{} and {}x{} differ", q_hat.rows(), q_hat.cols(),
                                          q_true.rows(), q_true.cols()));
    }
    switch (metric) {
        case SubspaceMetric::AlignedDirect: {
            if (q_hat.cols() != 1) throw InvalidArgument("aligned-direct subspace error needs p = 1");
            return std::min((q_hat - q_true).norm(), (q_hat + q_true).norm());
        }
        case SubspaceMetric::Projector:
            return spectral_norm(q_hat * q_hat.transpose() - q_true * q_true.transpose());
        case SubspaceMetric::ProjectorFrobenius:
            return (q_hat * q_hat.transpose() - q_true * q_true.transpose()).norm();
    }
    throw InvalidArgument("unknown subspace metric");
}

namespace {

SummaryStat summarize(const std::vector<double>& v) {
    SummaryStat s;
    s.count = static_cast<Index>(v.size());
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

struct MethodTrial {
    bool ok = false;
    std::string error;
    std::optional<double> loading_error;
    std::optional<Index> p_hat;
    std::optional<double> truth_rmse;
    std::optional<double> fe;
    std::optional<std::vector<double>> ratios;
};

std::vector<double> ratio_curve_of(const FactorModelFit& fit) {
    std::vector<double> out;
    if (fit.scan) {
        for (const auto& c : fit.scan->candidates) out.push_back(c.ratio);
    } else {
        for (Index i = 1;; ++i) {
            const auto it = fit.diagnostics.find(fmt::format("ratio_{}", i));
            if (it == fit.diagnostics.end()) break;
            out.push_back(it->second);
        }
    }
    return out;
}

MethodTrial run_method(const SimConfig& cfg, const SimDataset& data, const Matrix& q_true, Method method,
                       const std::set<McOutput>& outputs, SubspaceMetric metric) {
    MethodTrial r;
    const bool scan = outputs.contains(McOutput::ModelOrder) || outputs.contains(McOutput::RatioCurves) ||
                      outputs.contains(McOutput::Forecast);
    const auto fit_at = [&](std::optional<Index> p) {
        return fit_method(data.y, method, cfg.lag_lo, cfg.lag_hi, cfg.p_cap, cfg.pca_p_max, p);
    };
    const FactorModelFit fit = scan ? fit_at(std::nullopt) : fit_at(data.p);
    if (outputs.contains(McOutput::ModelOrder)) r.p_hat = fit.p_hat;
    if (outputs.contains(McOutput::RatioCurves) && method != Method::Pca) r.ratios = ratio_curve_of(fit);
    if (outputs.contains(McOutput::LoadingError)) {
        const FactorModelFit at_truth = fit.p_hat == data.p ? fit : fit_at(data.p);
        r.loading_error = subspace_error(at_truth.q_hat, q_true, metric);
    }
    if (outputs.contains(McOutput::Forecast)) {
        r.truth_rmse = rmse(fit, data.h, data.x);
        const auto ar = fit_factor_ar(fit.factors, cfg.ar_order);
        const Index n = data.y.length();
        const Index q = cfg.ar_order;
        Matrix pred(data.y.series_count(), n - q);
        for (Index t = q; t < n; ++t) {
            pred.col(t - q) = forecast_one_step(fit, ar, fit.factors.middleCols(t - q, q)).y + fit.mean;
        }
        r.fe = forecast_error(pred, data.y.values().rightCols(n - q));
    }
    r.ok = true;
    return r;
}

}  // namespace

SummaryStat MethodSummary::loading_error() const { return summarize(loading_errors); }
SummaryStat MethodSummary::rmse_stat() const { return summarize(truth_rmse); }
SummaryStat MethodSummary::fe_stat() const { return summarize(fe); }

std::map<Index, Index> MethodSummary::p_hat_histogram() const {
    std::map<Index, Index> h;
    for (Index p : p_hats) ++h[p];
    return h;
}

double MethodSummary::p_hat_fraction(Index p) const {
    if (p_hats.empty()) return 0.0;
    return static_cast<double>(std::count(p_hats.begin(), p_hats.end(), p)) / static_cast<double>(p_hats.size());
}

double MethodSummary::p_hat_median() const {
    if (p_hats.empty()) return 0.0;
    std::vector<Index> v = p_hats;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    if (v.size() % 2 == 1) return static_cast<double>(v[m]);
    return 0.5 * static_cast<double>(v[m - 1] + v[m]);
}

std::vector<SummaryStat> MethodSummary::ratio_curve() const {
    std::vector<SummaryStat> out;
    std::size_t len = 0;
    for (const auto& c : ratio_curves) len = std::max(len, c.size());
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<double> col;
        for (const auto& c : ratio_curves) {
            if (i < c.size()) col.push_back(c[i]);
        }
        out.push_back(summarize(col));
    }
    return out;
}

const MethodSummary& MonteCarloReport::summary(Method m) const {
    for (const auto& s : methods) {
        if (s.method == m) return s;
    }
    throw InvalidArgument(fmt::format("method {} not part of this report", method_name(m)));
}

MonteCarloReport monte_carlo(const SimConfig& config, Index trials, const std::vector<Method>& methods,
                             const std::set<McOutput>& outputs, unsigned threads) {
    config.validate();
    if (trials < 1) throw InvalidArgument("monte_carlo needs at least one trial");
    if (methods.empty()) throw InvalidArgument("monte_carlo needs at least one method");

    const Index p_true = config.scenario == Scenario::Sim1 ? 1 : 2;
    MonteCarloReport report;
    report.config = config;
    report.trials = trials;
    report.outputs = outputs;
    report.metric = p_true == 1 ? SubspaceMetric::AlignedDirect : SubspaceMetric::Projector;

    std::vector<std::vector<MethodTrial>> results(static_cast<std::size_t>(trials));
    std::atomic<Index> next{0};
    const auto worker = [&] {
        for (Index t = next++; t < trials; t = next++) {
            auto& row = results[static_cast<std::size_t>(t)];
            SimConfig cfg = config;
            cfg.seed = config.seed + static_cast<std::uint64_t>(t);
            try {
                const SimDataset data = generate(cfg);
                const Matrix q_true = orthonormal_basis(data.h);
                for (Method m : methods) {
                    try {
                        row.push_back(run_method(cfg, data, q_true, m, outputs, report.metric));
                    } catch (const std::exception& e) {
                        MethodTrial failed;
                        failed.error = e.what();
                        row.push_back(std::move(failed));
                    }
                }
            } catch (const std::exception& e) {
                row.assign(methods.size(), MethodTrial{false, e.what(), {}, {}, {}, {}, {}});
            }
        }
    };
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<Index>(workers, trials));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MethodSummary s;
        s.method = methods[mi];
        for (Index t = 0; t < trials; ++t) {
            const MethodTrial& r = results[static_cast<std::size_t>(t)][mi];
            if (!r.ok) {
                report.failures.push_back({t, methods[mi], r.error});
                continue;
            }
            if (r.loading_error) s.loading_errors.push_back(*r.loading_error);
            if (r.p_hat) s.p_hats.push_back(*r.p_hat);
            if (r.truth_rmse) s.truth_rmse.push_back(*r.truth_rmse);
            if (r.fe) s.fe.push_back(*r.fe);
            if (r.ratios) s.ratio_curves.push_back(*r.ratios);
        }
        report.methods.push_back(std::move(s));
    }
    return report;
}

}  // namespace frrqr
