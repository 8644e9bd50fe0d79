#pragma once

#include "frrqr/factor_rrqr.hpp"
#include "frrqr/linalg.hpp"
#include "frrqr/tsdata.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace frrqr {

/// Portable random source: std::mt19937_64 (fully specified by the C++
/// standard) for uniforms, and the inverse normal CDF for Gaussians.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Phi^{-1}(u).
    double normal();

private:
    std::mt19937_64 engine_;
};

enum class Scenario { Sim1, Sim2 };
enum class NoiseKind { IidIdentity, Hurst };

struct SimConfig {
    Scenario scenario = Scenario::Sim1;
    Index K = 20;
    Index N = 200;
    std::uint64_t seed = 1;
    Index lag_lo = 1;
    Index lag_hi = 5;
    // Sim-1: zero the second half of the loading vector.
    bool half_support = false;
    // Sim-2.
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double delta1 = 0.0;
    double delta2 = 0.5;
    NoiseKind noise = NoiseKind::IidIdentity;
    double hurst_w = 0.6;
    double noise_scale = 0.1;
    // Fitting knobs used by monte_carlo.
    Index p_cap = 0;      // 0 selects default_p_cap(K)
    Index pca_p_max = 0;  // 0 selects default_pca_p_max(K, N)
    Index ar_order = 10;

    /// Throws InvalidArgument on inconsistent fields.
    void validate() const;
};

struct SimDataset {
    TimeSeries y;
    Matrix h;  // K x p
    Matrix x;  // p x N
    Index p = 0;
};

/// y_n = H x_n + e_n with H_k = 2 cos(2 pi k / K), x_n = 0.9 x_{n-1} + eta_n,
/// eta and e Gaussian with variance 4, after a 1000-sample burn-in.
SimDataset gen_sim1(Index K, Index N, std::uint64_t seed, bool half_support = false);

/// Two MA factors x1_n = e_n + a1 e_{n-1}, x2_n = e_n + a2 e_{n-2} with
/// standard normal innovations; h1 ~ U(-4,4) on every entry and, for
/// delta2 > 0, h2 ~ U(-4,4) on the first K/2 entries and 0 elsewhere.
/// Noise is N(0, I) or N(0, scale * hurst_cov(K, w)). Requires even K >= 4.
SimDataset gen_sim2(const SimConfig& config);

SimDataset generate(const SimConfig& config);

/// sigma_ij = 1/2 (i^{2w} - |i-j|^{2w} + j^{2w}) with 1-based i, j.
Matrix hurst_cov(Index K, double w);

enum class SubspaceMetric { Projector, ProjectorFrobenius, AlignedDirect };

/// Projector: ||Qh Qh^T - Q Q^T||_2 (or Frobenius). AlignedDirect (p = 1):
/// ||s qh - q||_2 with the sign s chosen to minimize it.
double subspace_error(const Matrix& q_hat, const Matrix& q_true, SubspaceMetric metric);

/// Orthonormal basis of the column span of h (thin QR).
Matrix orthonormal_basis(const Matrix& h);

enum class McOutput { LoadingError, ModelOrder, RatioCurves, Forecast };

struct SummaryStat {
    double mean = 0.0;
    std::optional<double> std;  // absent for a single sample
    Index count = 0;
};

struct MethodSummary {
    Method method = Method::Rrqr;
    std::vector<double> loading_errors;  // per successful trial
    std::vector<Index> p_hats;
    std::vector<double> truth_rmse;      // unsquared norms
    std::vector<double> fe;
    std::vector<std::vector<double>> ratio_curves;  // per trial, i = 1..p_cap

    SummaryStat loading_error() const;
    std::map<Index, Index> p_hat_histogram() const;
    double p_hat_fraction(Index p) const;
    double p_hat_median() const;
    std::vector<SummaryStat> ratio_curve() const;
    SummaryStat rmse_stat() const;
    SummaryStat fe_stat() const;
};

struct TrialFailure {
    Index trial = 0;
    Method method = Method::Rrqr;
    std::string message;
};

struct MonteCarloReport {
    SimConfig config;
    Index trials = 0;
    std::set<McOutput> outputs;
    SubspaceMetric metric = SubspaceMetric::AlignedDirect;
    std::vector<MethodSummary> methods;
    std::vector<TrialFailure> failures;

    const MethodSummary& summary(Method m) const;
};

/// Trial t uses seed config.seed + t. Loading errors are always measured
/// at the true p (aligned-direct for p = 1, projector otherwise). Trials run
/// on up to `threads` workers (0 = hardware concurrency); results do not
/// depend on the thread count.
MonteCarloReport monte_carlo(const SimConfig& config, Index trials,
                             const std::vector<Method>& methods,
                             const std::set<McOutput>& outputs, unsigned threads = 0);

}  // namespace frrqr
