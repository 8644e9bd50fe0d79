// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "frrqr/baselines.hpp"
#include "frrqr/covariance.hpp"
#include "frrqr/factor_rrqr.hpp"
#include "frrqr/forecast.hpp"
#include "frrqr/rrqr.hpp"
#include "frrqr/simgen.hpp"
#include "bounds.hpp"
#include "oracles.hpp"

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <iostream>

using namespace frrqr;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

MonteCarloReport sim1(Index k, Index n, Index trials, std::vector<Method> methods, std::set<McOutput> outputs) {
    SimConfig c;
    c.scenario = Scenario::Sim1;
    c.K = k;
    c.N = n;
    c.seed = 1;
    return monte_carlo(c, trials, methods, outputs);
}

Outcome loading_error_table() {
    struct Cell {
        Index k, n;
        double reference;
    };
    const std::vector<Cell> cells{{20, 200, 11.8e-3}, {180, 200, 12.3e-3}, {20, 500, 10.9e-3}, {180, 500, 11.3e-3}};
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& c : cells) {
        const MonteCarloReport r = sim1(c.k, c.n, 100, {Method::Rrqr, Method::Evd}, {McOutput::LoadingError});
        const double rr = r.summary(Method::Rrqr).loading_error().mean;
        const double ev = r.summary(Method::Evd).loading_error().mean;
        const bool order = rr < ev;
        const bool band = rr >= 0.5 * c.reference && rr <= 2.0 * c.reference;
        ok = ok && order && band && r.failures.empty();
        detail += fmt::format(" (K={},N={}: rrqr={:.4f} evd={:.4f} ref={:.4f} ratio={:.2f}{}{})", c.k, c.n, rr, ev,
                              c.reference, rr / c.reference, order ? "" : " ORDER", band ? "" : " BAND");
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 600.0;
    return {ok, fmt::format("{:.0f}s;{}", secs, detail)};
}

Outcome model_order_accuracy() {
    const auto t0 = Clock::now();
    SimConfig c;
    c.scenario = Scenario::Sim2;
    c.K = 100;
    c.N = 200;
    c.lag_hi = 2;
    c.seed = 1;
    const std::vector<Method> all{Method::Rrqr, Method::Evd, Method::Pca};
    const MonteCarloReport one = monte_carlo(c, 100, all, {McOutput::ModelOrder});
    c.noise = NoiseKind::Hurst;
    c.hurst_w = 0.6;
    c.noise_scale = 0.1;
    const MonteCarloReport two = monte_carlo(c, 100, all, {McOutput::ModelOrder});
    bool ok = one.failures.empty() && two.failures.empty();
    std::string detail = " noise I:";
    for (Method m : all) {
        const double f = one.summary(m).p_hat_fraction(2);
        ok = ok && f >= 0.95;
        detail += fmt::format(" {}={:.2f}", method_name(m), f);
    }
    detail += "; noise II:";
    for (Method m : {Method::Rrqr, Method::Evd}) {
        const double f = two.summary(m).p_hat_fraction(2);
        ok = ok && f >= 0.90;
        detail += fmt::format(" {}={:.2f} (median {})", method_name(m), f, two.summary(m).p_hat_median());
    }
    const double pca_median = two.summary(Method::Pca).p_hat_median();
    ok = ok && pca_median >= 10.0;
    detail += fmt::format(" pca median={}", pca_median);
    const double secs = seconds_since(t0);
    ok = ok && secs < 900.0;
    return {ok, fmt::format("{:.0f}s;{}", secs, detail)};
}

Outcome ratio_curve_shape() {
    const MonteCarloReport r =
        sim1(180, 100, 100, {Method::Rrqr, Method::Evd}, {McOutput::RatioCurves, McOutput::ModelOrder});
    const auto peak = [](const std::vector<SummaryStat>& curve) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            if (curve[i].mean > curve[best].mean) best = i;
        }
        return best;
    };
    const auto rc = r.summary(Method::Rrqr).ratio_curve();
    const auto ec = r.summary(Method::Evd).ratio_curve();
    const std::size_t pr = peak(rc);
    const std::size_t pe = peak(ec);
    const double rel_r = rc[pr].std.value_or(0.0) / rc[pr].mean;
    const double rel_e = ec[pe].std.value_or(0.0) / ec[pe].mean;
    const bool ok = r.failures.empty() && pr == 0 && pe == 0 && rel_r <= rel_e;
    return {ok, fmt::format("rrqr peak i={} rel.std={:.3f}; evd peak i={} rel.std={:.3f}; rrqr p_hat=1 in {:.0f}%",
                            pr + 1, rel_r, pe + 1, rel_e, 100.0 * r.summary(Method::Rrqr).p_hat_fraction(1))};
}

Outcome hybrid_bound_suite() {
    std::mt19937_64 rng(4);
    const std::vector<std::pair<Index, Index>> shapes{{4, 8}, {6, 12}, {8, 40}};
    int failures = 0;
    for (int i = 0; i < 500; ++i) {
        const auto [k, n] = shapes[static_cast<std::size_t>(i % 3)];
        const Index p = 1 + (i / 3) % 3;
        const Matrix a = oracle::random_matrix(rng, k, n);
        const Permutation seed = qr_cp(a, std::min(k, n)).perm;
        const RrqrResult h1 = hybrid1(a, p, seed);
        const RrqrResult h2 = hybrid2(a, p, seed);
        const RrqrResult h3 = hybrid3(a, p, seed);
        const bool ok = bounds::hybrid1_holds(a, h1) && bounds::hybrid2_holds(a, h2) &&
                        bounds::hybrid1_holds(a, h3) && bounds::hybrid2_holds(a, h3) &&
                        bounds::hybrid3_holds(a, h3) && bounds::split_consistent(h1) &&
                        bounds::split_consistent(h2) && bounds::split_consistent(h3);
        if (!ok) ++failures;
    }
    return {failures == 0, fmt::format("{} of 500 matrices violated a bound", failures)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(5);
    double worst_cov = 0.0;
    for (Index k = 1; k <= 4; ++k) {
        for (Index n = 2; n <= 12; ++n) {
            const Matrix y = oracle::random_matrix(rng, k, n);
            const TimeSeries ts(y);
            for (Index l = 0; l <= n - 2; ++l) {
                worst_cov = std::max(worst_cov,
                                     (sample_autocov(ts, l).matrix - oracle::brute_autocov(y, l)).cwiseAbs().maxCoeff());
            }
        }
    }
    double worst_s = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index k = 1 + static_cast<Index>(rng() % 6);
        const TimeSeries ts(oracle::random_matrix(rng, k, 30));
        const Matrix s = evd_s_matrix(ts, 1, 5);
        const Matrix m = build_augmented(ts, 1, 5).matrix;
        worst_s = std::max(worst_s, (s - m * m.transpose()).norm() / std::max(1e-300, s.norm()));
    }
    int interlace_fail = 0;
    const std::vector<std::pair<Index, Index>> shapes{{3, 6}, {5, 8}, {8, 8}};
    for (int i = 0; i < 300; ++i) {
        const auto [r, c] = shapes[static_cast<std::size_t>(i % 3)];
        const Matrix a = oracle::random_matrix(rng, r, c);
        const Vector s = singular_values(a);
        const Index kc = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(c));
        const Vector b = singular_values(a.leftCols(kc));
        bool ok = true;
        for (Index j = 0; j < b.size(); ++j) {
            ok = ok && b(j) <= s(j) * (1 + 1e-10) + 1e-12;
            const Index lower = j + (c - kc);
            if (lower < s.size()) ok = ok && b(j) >= s(lower) * (1 - 1e-10) - 1e-12;
        }
        if (!ok) ++interlace_fail;
    }
    const bool ok = worst_cov <= 1e-12 && worst_s <= 1e-10 && interlace_fail == 0;
    return {ok, fmt::format("autocov max diff={:.2e}; S vs MM^T rel={:.2e}; interlacing failures={}/300", worst_cov,
                            worst_s, interlace_fail)};
}

Outcome numerical_invariants() {
    std::mt19937_64 rng(6);
    double worst_q = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SimDataset d = gen_sim1(20 + static_cast<Index>(seed), 150, seed);
        for (Method m : {Method::Rrqr, Method::Evd, Method::Pca}) {
            worst_q = std::max(worst_q, oracle::orthonormality_defect(fit_method(d.y, m, 1, 5, 0, 0).q_hat));
        }
        const TimeSeries noise(oracle::random_matrix(rng, 9, 40));
        for (Method m : {Method::Rrqr, Method::Evd, Method::Pca}) {
            worst_q = std::max(worst_q, oracle::orthonormality_defect(fit_method(noise, m, 1, 3, 0, 0).q_hat));
        }
    }
    double worst_recon = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index k = 2 + static_cast<Index>(rng() % 7);
        const Index n = 2 + static_cast<Index>(rng() % 15);
        const Matrix a = trial % 4 == 0 ? oracle::low_rank(rng, k, n, 1) : oracle::random_matrix(rng, k, n);
        const QrFactors f = gs_qr(a);
        worst_recon = std::max(worst_recon, (a - f.q * f.r).norm() / a.norm());
        const Index full = std::min(k, n);
        worst_recon = std::max(worst_recon, reconstruction_error(a, qr_cp(a, full)));
        const Index p = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(full - 1));
        worst_recon = std::max(worst_recon, reconstruction_error(a, hybrid1(a, p, Permutation::identity(n))));
        worst_recon = std::max(worst_recon, reconstruction_error(a, hybrid3(a, p)));
    }
    double worst_sv = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const Matrix a = oracle::random_matrix(rng, 2, 2);
        const auto [s1, s2] = oracle::svd2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
        const Vector sv = singular_values(a);
        worst_sv = std::max({worst_sv, std::abs(sv(0) - s1) / s1, std::abs(sv(1) - s2) / s1});
    }
    const bool ok = worst_q <= 1e-10 && worst_recon <= 1e-10 && worst_sv <= 1e-10;
    return {ok, fmt::format("max ||Q^T Q - I||_F={:.2e}; max QR residual={:.2e}; max 2x2 sv diff={:.2e}", worst_q,
                            worst_recon, worst_sv)};
}

Outcome numerical_rank_example() {
    Matrix m = Matrix::Zero(3, 6);
    m(0, 0) = 18.0;
    m(1, 1) = 5.0;
    m(2, 2) = 0.8;
    const ModelOrderScan s = scan_model_order(m, 2, 10000, 3);
    const double eps = 18.0 / std::sqrt(30000.0);
    const bool ok = s.p_hat == 2 && std::abs(s.epsilon - eps) <= 1e-12 * eps;
    return {ok, fmt::format("p_hat={} eps={:.4f} r=({:.3f}, {:.3f})", s.p_hat, s.epsilon, s.candidates[0].ratio,
                            s.candidates[1].ratio)};
}

Outcome rolling_parity() {
    const SimDataset d = gen_sim1(50, 1000, 2024);
    RollingConfig c;
    c.method = Method::Rrqr;
    const ForecastReport r = rolling_eval(d.y, c);
    c.method = Method::Evd;
    const ForecastReport e = rolling_eval(d.y, c);
    const double gap = std::abs(r.fe - e.fe) / std::max(r.fe, e.fe);
    const bool ok = r.p_hat_mean == 1.0 && e.p_hat_mean == 1.0 && gap <= 0.05;
    return {ok, fmt::format("p_hat mean rrqr={} evd={}; FE rrqr={:.5f} evd={:.5f} (gap {:.2f}%)", r.p_hat_mean,
                            e.p_hat_mean, r.fe, e.fe, 100.0 * gap)};
}

Outcome convergence_trend() {
    std::vector<SummaryStat> stats;
    for (Index n : {200, 500, 2000}) {
        stats.push_back(sim1(60, n, 50, {Method::Rrqr}, {McOutput::LoadingError}).summary(Method::Rrqr).loading_error());
    }
    bool ok = true;
    std::string detail;
    const std::vector<Index> ns{200, 500, 2000};
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const double se = stats[i].std.value_or(0.0) / std::sqrt(static_cast<double>(stats[i].count));
        detail += fmt::format(" N={}: {:.4f}±{:.4f}", ns[i], stats[i].mean, se);
        if (i > 0) ok = ok && stats[i].mean < stats[i - 1].mean;
    }
    return {ok, detail.substr(1)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"loading-error table (Sim-1, 4 cells x 100 trials)", loading_error_table},
        {"model-order accuracy (Sim-2, noise I and II)", model_order_accuracy},
        {"ratio-curve shape (Sim-1, K=180, N=100)", ratio_curve_shape},
        {"hybrid bound suite (500 matrices)", hybrid_bound_suite},
        {"oracle equivalence on small instances", oracle_equivalence},
        {"numerical invariants", numerical_invariants},
        {"numerical-rank example diag(18, 5, 0.8)", numerical_rank_example},
        {"rolling-forecast parity (1000-day single-factor market)", rolling_parity},
        {"convergence trend (Sim-1, K=60)", convergence_trend},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << fmt::format("{} {}: {} -- {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
                  << std::endl;
    }
    std::cout << fmt::format("{} of {} acceptance criteria passed", criteria.size() - failed, criteria.size())
              << std::endl;
    return failed == 0 ? 0 : 1;
}
