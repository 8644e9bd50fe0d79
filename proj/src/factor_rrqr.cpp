#include "frrqr/factor_rrqr.hpp"

#include "frrqr/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace frrqr {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Rrqr: return "rrqr";
        case Method::Evd: return "evd";
        case Method::Pca: return "pca";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "rrqr") return Method::Rrqr;
    if (name == "evd") return Method::Evd;
    if (name == "pca") return Method::Pca;
    throw InvalidArgument(fmt::format("unknown method '{}'", name));
}

Index default_p_cap(Index series_count) { return std::min<Index>(series_count - 1, 15); }

ModelOrderScan scan_model_order(const Matrix& m_tilde, Index p_cap, Index sample_length,
                                Index series_count) {
    const Index hi = std::min(m_tilde.rows(), m_tilde.cols()) - 1;
    if (p_cap < 1 || p_cap > hi) {
        throw InvalidArgument(fmt::format("p_cap {} outside [1, {}]", p_cap, hi));
    }
    if (sample_length < 1 || series_count < 1) throw InvalidArgument("scan_model_order: K and N must be positive");
    const Permutation seed = qr_cp(m_tilde, std::min(m_tilde.rows(), m_tilde.cols())).perm;

    ModelOrderScan scan;
    scan.p_cap = p_cap;
    for (Index i = 1; i <= p_cap; ++i) {
        const RrqrResult h = hybrid3(m_tilde, i, seed);
        if (i == 1) {
            scan.epsilon = h.factors.diag(0) / std::sqrt(static_cast<double>(series_count) *
                                                          static_cast<double>(sample_length));
        }
        OrderCandidate c;
        c.rank = i;
        c.gamma = h.factors.diag(i - 1);
        c.gamma_next = h.factors.diag(i);
        const double num = c.gamma + scan.epsilon;
        const double den = c.gamma_next + scan.epsilon;
        c.ratio = den > 0.0 ? num / den : (num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
        scan.candidates.push_back(c);
    }
    Index best = 0;
    for (Index j = 1; j < p_cap; ++j) {
        const auto& cand = scan.candidates[static_cast<std::size_t>(j)];
        if (cand.ratio > scan.candidates[static_cast<std::size_t>(best)].ratio) best = j;
    }
    scan.p_hat = best + 1;
    return scan;
}

ModelOrderScan scan_model_order(const AugmentedCov& m_tilde, Index p_cap) {
    return scan_model_order(m_tilde.matrix, p_cap, m_tilde.sample_length, m_tilde.series_count);
}

FactorModelFit fit_rrqr(const TimeSeries& ts, const RrqrFitOptions& options) {
    const Index k = ts.series_count();
    const AugmentedCov m = build_augmented(ts, options.lag_lo, options.lag_hi);
    const Index full = std::min(m.matrix.rows(), m.matrix.cols());

    FactorModelFit fit;
    fit.method = Method::Rrqr;
    if (options.p_override) {
        fit.p_hat = *options.p_override;
        if (fit.p_hat < 1 || fit.p_hat > full) {
            throw InvalidArgument(fmt::format("p override {} outside [1, {}]", fit.p_hat, full));
        }
    } else {
        const Index cap = options.p_cap > 0 ? options.p_cap : default_p_cap(k);
        fit.scan = scan_model_order(m, cap);
        fit.p_hat = fit.scan->p_hat;
        fit.diagnostics["epsilon"] = fit.scan->epsilon;
    }

    const RrqrResult init = qr_cp(m.matrix, full);
    const RrqrResult h = hybrid1(m.matrix, fit.p_hat, init.perm);
    fit.q_hat = h.factors.q.leftCols(fit.p_hat);
    fit.mean = series_mean(ts);
    fit.factors = fit.q_hat.transpose() * (ts.values().colwise() - fit.mean);
    fit.diagnostics["r11_min_sv"] = h.r11_min_sv;
    fit.diagnostics["r22_max_sv"] = h.r22_max_sv;
    fit.diagnostics["hybrid_swaps"] = static_cast<double>(h.swaps);
    return fit;
}

}  // namespace frrqr
