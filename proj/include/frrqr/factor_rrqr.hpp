#pragma once

#include "frrqr/covariance.hpp"
#include "frrqr/linalg.hpp"
#include "frrqr/rrqr.hpp"
#include "frrqr/tsdata.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frrqr {

enum class Method { Rrqr, Evd, Pca };

std::string_view method_name(Method m);
/// Accepts "rrqr", "evd", "pca" (case-sensitive); throws InvalidArgument.
Method parse_method(std::string_view name);

struct OrderCandidate {
    Index rank = 0;            // i
    double gamma = 0.0;        // gamma_i
    double gamma_next = 0.0;   // gamma_{i+1}
    double ratio = 0.0;        // (gamma_i + eps) / (gamma_{i+1} + eps)
};

struct ModelOrderScan {
    std::vector<OrderCandidate> candidates;
    double epsilon = 0.0;
    Index p_hat = 0;
    Index p_cap = 0;
};

/// Result shared by every fitting method.
struct FactorModelFit {
    Method method = Method::Rrqr;
    Index p_hat = 0;
    Matrix q_hat;      // K x p_hat, orthonormal columns
    Matrix factors;    // p_hat x N, q_hat^T * (y - mean)
    Vector mean;       // per-series sample mean removed before fitting
    std::optional<ModelOrderScan> scan;
    std::map<std::string, double> diagnostics;

    /// q_hat * factors.
    Matrix reconstruction() const { return q_hat * factors; }
};

/// Default upper bound for rank scans: min(K - 1, 15).
Index default_p_cap(Index series_count);

/// Ratio scan over assumed ranks 1..p_cap. Each rank runs Hybrid-III on the
/// augmented matrix; eps = gamma_1 / sqrt(K N) is taken once from the rank-1
/// decomposition. p_hat is the first maximizer of the ratio.
/// Requires 1 <= p_cap <= min(K, cols) - 1.
ModelOrderScan scan_model_order(const Matrix& m_tilde, Index p_cap, Index sample_length,
                                Index series_count);
ModelOrderScan scan_model_order(const AugmentedCov& m_tilde, Index p_cap);

struct RrqrFitOptions {
    Index lag_lo = 1;
    Index lag_hi = 5;
    std::optional<Index> p_override;
    Index p_cap = 0;  // 0 selects default_p_cap(K)
};

/// Full RRQR factor pipeline: demean, augmented autocovariance, rank scan
/// (unless overridden), Hybrid-I seeded by QR-CP, Q-hat from the first p_hat
/// Gram-Schmidt columns, factors by projection.
FactorModelFit fit_rrqr(const TimeSeries& ts, const RrqrFitOptions& options = {});

}  // namespace frrqr
