#include "frrqr/cli.hpp"

#include "frrqr/baselines.hpp"
#include "frrqr/error.hpp"
#include "frrqr/factor_rrqr.hpp"
#include "frrqr/forecast.hpp"
#include "frrqr/report.hpp"
#include "frrqr/rrqr.hpp"
#include "frrqr/simgen.hpp"
#include "frrqr/tsdata.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace frrqr::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string out_dir;
};

struct SimArgs {
    std::string scenario = "sim1";
    Index k = 0;
    Index n = 0;
    Index trials = 100;
    std::uint64_t seed = 1;
    std::vector<std::string> methods{"rrqr", "evd"};
    std::vector<std::string> outputs{"error", "order", "ratios"};
    Index lag_lo = 1;
    Index m = 5;
    Index p_cap = 0;
    Index p_max = 0;
    Index ar_order = 10;
    std::string noise = "iid";
    double w = 0.6;
    double noise_scale = 0.1;
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double delta1 = 0.0;
    double delta2 = 0.5;
    bool half_support = false;
    unsigned threads = 0;
};

struct FitArgs {
    std::string input;
    std::string orientation = "rows";
    bool header = false;
    std::string method = "rrqr";
    Index lag_lo = 1;
    Index m = 5;
    std::optional<Index> p;
    Index p_cap = 0;
    Index p_max = 0;
};

struct ScanArgs {
    std::string input;
    Index n = 0;
    Index p_cap = 0;
};

struct RrqrArgs {
    std::string input;
    std::string alg = "hybrid1";
    Index rank = 1;
};

struct RollArgs {
    std::string input;
    std::string orientation = "rows";
    bool header = false;
    bool prices = false;
    std::string method = "rrqr";
    Index window = 500;
    Index stride = 10;
    Index ar = 10;
    Index eval = 400;
    Index lag_lo = 1;
    Index m = 5;
    Index p_cap = 0;
    Index p_max = 0;
};

Orientation parse_orientation(const std::string& s) {
    return s == "cols" ? Orientation::ColumnsAreSeries : Orientation::RowsAreSeries;
}

fs::path out_path(const Common& c, const std::string& name) { return fs::path(c.out_dir) / name; }

RunManifest manifest(const std::string& sub, json config, std::uint64_t seed, const std::string& started) {
    RunManifest m;
    m.subcommand = sub;
    m.config = std::move(config);
    m.seed = seed;
    m.started_at = started;
    m.finished_at = utc_timestamp();
    return m;
}

int cmd_sim(const SimArgs& a, const Common& c, std::ostream& out) {
    const std::string started = utc_timestamp();
    SimConfig cfg;
    cfg.scenario = a.scenario == "sim2" ? Scenario::Sim2 : Scenario::Sim1;
    cfg.K = a.k;
    cfg.N = a.n;
    cfg.seed = a.seed;
    cfg.lag_lo = a.lag_lo;
    cfg.lag_hi = a.m;
    cfg.half_support = a.half_support;
    cfg.alpha1 = a.alpha1;
    cfg.alpha2 = a.alpha2;
    cfg.delta1 = a.delta1;
    cfg.delta2 = a.delta2;
    cfg.noise = a.noise == "hurst" ? NoiseKind::Hurst : NoiseKind::IidIdentity;
    cfg.hurst_w = a.w;
    cfg.noise_scale = a.noise_scale;
    cfg.p_cap = a.p_cap;
    cfg.pca_p_max = a.p_max;
    cfg.ar_order = a.ar_order;

    std::vector<Method> methods;
    for (const auto& m : a.methods) methods.push_back(parse_method(m));
    std::set<McOutput> outputs;
    for (const auto& o : a.outputs) {
        if (o == "error") outputs.insert(McOutput::LoadingError);
        else if (o == "order") outputs.insert(McOutput::ModelOrder);
        else if (o == "ratios") outputs.insert(McOutput::RatioCurves);
        else if (o == "forecast") outputs.insert(McOutput::Forecast);
    }
    const MonteCarloReport report = monte_carlo(cfg, a.trials, methods, outputs, a.threads);

    json body = to_json(report);
    json config = body["config"];
    config["trials"] = a.trials;
    config["methods"] = a.methods;
    config["outputs"] = a.outputs;
    json doc;
    doc["manifest"] = to_json(manifest("sim", config, a.seed, started));
    doc["report"] = std::move(body);
    write_json(out_path(c, "sim_report.json"), doc);
    write_ratio_curves_csv(out_path(c, "ratio_curves.csv"), report);

    for (const auto& s : report.methods) {
        out << method_name(s.method);
        if (outputs.contains(McOutput::LoadingError)) out << fmt::format(" loading_error_mean={:.6g}", s.loading_error().mean);
        if (outputs.contains(McOutput::ModelOrder)) out << fmt::format(" p_hat_median={}", s.p_hat_median());
        out << '\n';
    }
    if (!report.failures.empty()) out << report.failures.size() << " trial failures recorded\n";
    return kExitOk;
}

int cmd_fit(const FitArgs& a, const Common& c, std::ostream& out) {
    const std::string started = utc_timestamp();
    const TimeSeries ts = load_csv(a.input, parse_orientation(a.orientation), a.header);
    const Method method = parse_method(a.method);
    const FactorModelFit fit = fit_method(ts, method, a.lag_lo, a.m, a.p_cap, a.p_max, a.p);

    json config{{"input", a.input}, {"orientation", a.orientation}, {"header", a.header},
                {"method", a.method}, {"lag_lo", a.lag_lo},        {"lag_hi", a.m},
                {"p", a.p ? json(*a.p) : json(nullptr)},           {"p_cap", a.p_cap},
                {"p_max", a.p_max}};
    json doc;
    doc["manifest"] = to_json(manifest("fit", config, 0, started));
    doc["fit"] = to_json(fit);
    write_json(out_path(c, "fit.json"), doc);
    write_matrix_csv(out_path(c, "q_hat.csv"), fit.q_hat);
    write_matrix_csv(out_path(c, "factors.csv"), fit.factors);
    if (fit.scan) write_scan_csv(out_path(c, "scan.csv"), *fit.scan);
    out << fmt::format("method={} p_hat={}\n", a.method, fit.p_hat);
    return kExitOk;
}

int cmd_rankscan(const ScanArgs& a, const Common& c, std::ostream& out) {
    const std::string started = utc_timestamp();
    const Matrix m = load_matrix_csv(a.input);
    const Index cap = a.p_cap > 0 ? a.p_cap : std::min<Index>(std::min(m.rows(), m.cols()) - 1, 15);
    const ModelOrderScan scan = scan_model_order(m, cap, a.n, m.rows());

    json config{{"input", a.input}, {"N", a.n}, {"K", m.rows()}, {"p_cap", cap}};
    json doc;
    doc["manifest"] = to_json(manifest("rankscan", config, 0, started));
    doc["scan"] = to_json(scan);
    write_json(out_path(c, "rankscan.json"), doc);
    write_scan_csv(out_path(c, "rankscan.csv"), scan);
    for (const auto& cand : scan.candidates) {
        out << fmt::format("{:>3} gamma={:.6g} r={:.6g}{}\n", cand.rank, cand.gamma, cand.ratio,
                           cand.rank == scan.p_hat ? "  <- p_hat" : "");
    }
    return kExitOk;
}

int cmd_rrqr(const RrqrArgs& a, const Common& c, std::ostream& out) {
    const std::string started = utc_timestamp();
    const Matrix m = load_matrix_csv(a.input);
    const Index full = std::min(m.rows(), m.cols());
    RrqrResult r;
    if (a.alg == "gs") {
        r.perm = Permutation::identity(m.cols());
        r.factors = gs_qr(m);
        r.assumed_rank = std::min(a.rank, full);
        r.r11_min_sv = min_singular_value(r.factors.r.topLeftCorner(r.assumed_rank, r.assumed_rank));
        r.r22_max_sv = spectral_norm(r.factors.r.bottomRightCorner(m.rows() - r.assumed_rank, m.cols() - r.assumed_rank));
    } else if (a.alg == "qrcp") {
        r = qr_cp(m, a.rank);
    } else {
        const Permutation seed = qr_cp(m, full).perm;
        if (a.alg == "hybrid1") r = hybrid1(m, a.rank, seed);
        else if (a.alg == "hybrid2") r = hybrid2(m, a.rank, seed);
        else r = hybrid3(m, a.rank, seed);
    }

    const Index p = r.assumed_rank;
    const Index n = m.cols();
    const Vector sv = singular_values(m);
    const auto sigma = [&](Index i) { return i >= 1 && i <= sv.size() ? sv(i - 1) : 0.0; };
    const double h1 = std::sqrt(static_cast<double>(p * (n - p + 1)));
    const double h2 = std::sqrt(static_cast<double>((p + 1) * (n - p)));
    const Matrix r22 = r.factors.r.bottomRightCorner(m.rows() - p, n - p);

    json summary = to_json(r);
    summary["algorithm"] = a.alg;
    summary["sigma_1"] = sv.size() ? sv(0) : 0.0;
    summary["r22_max_abs_entry"] = r22.size() ? r22.cwiseAbs().maxCoeff() : 0.0;
    summary["reconstruction_error"] = reconstruction_error(m, r);
    summary["bounds"] = {
        {"r11_lower", sigma(p) / h1},
        {"r11_lower_slack", r.r11_min_sv - sigma(p) / h1},
        {"r22_upper_hybrid1", r.r11_min_sv * h1},
        {"r22_upper_hybrid1_slack", r.r11_min_sv * h1 - r.r22_max_sv},
        {"r22_upper_hybrid2", sigma(p + 1) * h2},
        {"r22_upper_hybrid2_slack", sigma(p + 1) * h2 - r.r22_max_sv},
    };
    json config{{"input", a.input}, {"algorithm", a.alg}, {"rank", a.rank}};
    json doc;
    doc["manifest"] = to_json(manifest("rrqr", config, 0, started));
    doc["summary"] = std::move(summary);
    write_json(out_path(c, "rrqr_summary.json"), doc);
    {
        Matrix perm(1, n);
        for (Index i = 0; i < n; ++i) perm(0, i) = static_cast<double>(r.perm.order[static_cast<std::size_t>(i)]);
        write_matrix_csv(out_path(c, "perm.csv"), perm);
    }
    write_matrix_csv(out_path(c, "r.csv"), r.factors.r);
    write_matrix_csv(out_path(c, "q.csv"), r.factors.q);
    out << fmt::format("alg={} rank={} sigma_min(R11)={:.6g} sigma_max(R22)={:.6g}\n", a.alg, p, r.r11_min_sv,
                       r.r22_max_sv);
    return kExitOk;
}

int cmd_roll(const RollArgs& a, const Common& c, std::ostream& out) {
    const std::string started = utc_timestamp();
    TimeSeries ts = load_csv(a.input, parse_orientation(a.orientation), a.header);
    if (a.prices) ts = log_returns(ts);
    RollingConfig cfg;
    cfg.method = parse_method(a.method);
    cfg.window = a.window;
    cfg.refit_stride = a.stride;
    cfg.ar_order = a.ar;
    cfg.eval_len = a.eval;
    cfg.lag_lo = a.lag_lo;
    cfg.lag_hi = a.m;
    cfg.p_cap = a.p_cap;
    cfg.p_max = a.p_max;
    const ForecastReport report = rolling_eval(ts, cfg);

    json config{{"input", a.input}, {"orientation", a.orientation}, {"header", a.header}, {"prices", a.prices}};
    json doc;
    doc["manifest"] = to_json(manifest("roll", config, 0, started));
    doc["report"] = to_json(report);
    write_json(out_path(c, "roll_report.json"), doc);
    write_windows_csv(out_path(c, "roll_windows.csv"), report);
    out << fmt::format("method={} p_hat_mean={:.6g} recon_rmse_mean={:.6g} fe={:.6g}\n", a.method, report.p_hat_mean,
                       report.rmse_mean, report.fe);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Factor modeling of multivariate time series via rank-revealing QR", "frrqr"};
    app.require_subcommand(1);

    Common common;
    const char* env_out = std::getenv(kOutDirEnv);
    common.out_dir = env_out ? env_out : ".";
    app.add_option("--out", common.out_dir, "Output directory (default: $" + std::string(kOutDirEnv) + " or .)");

    const std::vector<std::string> method_names{"rrqr", "evd", "pca"};
    const auto positive = CLI::PositiveNumber;

    SimArgs sim;
    auto* s = app.add_subcommand("sim", "Monte-Carlo simulation study");
    s->add_option("--scenario", sim.scenario)->check(CLI::IsMember({"sim1", "sim2"}));
    s->add_option("--k", sim.k, "Number of series K")->required()->check(positive);
    s->add_option("--n", sim.n, "Sample length N")->required()->check(positive);
    s->add_option("--trials", sim.trials)->check(positive);
    s->add_option("--seed", sim.seed);
    s->add_option("--methods", sim.methods)->delimiter(',')->check(CLI::IsMember(method_names));
    s->add_option("--outputs", sim.outputs)->delimiter(',')->check(CLI::IsMember({"error", "order", "ratios", "forecast"}));
    s->add_option("--lag-lo", sim.lag_lo)->check(positive);
    s->add_option("--m", sim.m, "Highest lag")->check(positive);
    s->add_option("--p-cap", sim.p_cap)->check(positive);
    s->add_option("--p-max", sim.p_max, "PCA order cap")->check(positive);
    s->add_option("--ar-order", sim.ar_order)->check(positive);
    s->add_option("--noise", sim.noise)->check(CLI::IsMember({"iid", "hurst"}));
    s->add_option("--w", sim.w, "Hurst parameter");
    s->add_option("--noise-scale", sim.noise_scale);
    s->add_option("--alpha1", sim.alpha1);
    s->add_option("--alpha2", sim.alpha2);
    s->add_option("--delta1", sim.delta1);
    s->add_option("--delta2", sim.delta2);
    s->add_flag("--half-support", sim.half_support, "Sim-1 loading with the second half zeroed");
    s->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "Fit a factor model to a CSV time series");
    f->add_option("input", fit.input)->required();
    f->add_option("--orientation", fit.orientation)->check(CLI::IsMember({"rows", "cols"}));
    f->add_flag("--header", fit.header);
    f->add_option("--method", fit.method)->check(CLI::IsMember(method_names));
    f->add_option("--lag-lo", fit.lag_lo)->check(positive);
    f->add_option("--m", fit.m)->check(positive);
    f->add_option("--p", fit.p, "Fix the number of factors")->check(positive);
    f->add_option("--p-cap", fit.p_cap)->check(positive);
    f->add_option("--p-max", fit.p_max)->check(positive);

    ScanArgs scan;
    auto* r = app.add_subcommand("rankscan", "Numerical-rank ratio scan of an augmented matrix");
    r->add_option("input", scan.input)->required();
    r->add_option("--n", scan.n, "Sample length N behind the matrix")->required()->check(positive);
    r->add_option("--p-cap", scan.p_cap)->check(positive);

    RrqrArgs rr;
    auto* q = app.add_subcommand("rrqr", "Decompose a matrix with one of the QR kernels");
    q->add_option("input", rr.input)->required();
    q->add_option("--alg", rr.alg)->check(CLI::IsMember({"gs", "qrcp", "hybrid1", "hybrid2", "hybrid3"}));
    q->add_option("--rank", rr.rank)->check(positive);

    RollArgs roll;
    auto* o = app.add_subcommand("roll", "Rolling-window one-step forecast evaluation");
    o->add_option("input", roll.input)->required();
    o->add_option("--orientation", roll.orientation)->check(CLI::IsMember({"rows", "cols"}));
    o->add_flag("--header", roll.header);
    o->add_flag("--prices", roll.prices, "Input holds prices; convert to log returns");
    o->add_option("--method", roll.method)->check(CLI::IsMember(method_names));
    o->add_option("--window", roll.window)->check(positive);
    o->add_option("--stride", roll.stride)->check(positive);
    o->add_option("--ar", roll.ar)->check(positive);
    o->add_option("--eval", roll.eval)->check(positive);
    o->add_option("--lag-lo", roll.lag_lo)->check(positive);
    o->add_option("--m", roll.m)->check(positive);
    o->add_option("--p-cap", roll.p_cap)->check(positive);
    o->add_option("--p-max", roll.p_max)->check(positive);

    std::vector<char*> argv;
    std::vector<std::string> owned = args.empty() ? std::vector<std::string>{"frrqr"} : args;
    for (auto& a : owned) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const CLI::App* sub = nullptr;
        for (const auto* candidate : app.get_subcommands()) sub = candidate;
        err << (sub ? sub->help() : app.help());
        return kExitUsage;
    }

    try {
        if (s->parsed()) return cmd_sim(sim, common, out);
        if (f->parsed()) return cmd_fit(fit, common, out);
        if (r->parsed()) return cmd_rankscan(scan, common, out);
        if (q->parsed()) return cmd_rrqr(rr, common, out);
        if (o->parsed()) return cmd_roll(roll, common, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace frrqr::cli
