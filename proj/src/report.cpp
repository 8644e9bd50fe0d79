#include "frrqr/report.hpp"

#include "frrqr/error.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

namespace frrqr {

using json = nlohmann::ordered_json;

namespace {

// Non-finite reals have no JSON literal; they are written as strings.
json real(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json stat_json(const SummaryStat& s) {
    json j;
    j["mean"] = s.count > 0 ? real(s.mean) : json(nullptr);
    j["std"] = s.std ? real(*s.std) : json(nullptr);
    j["count"] = s.count;
    return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    return out;
}

std::string_view scenario_name(Scenario s) { return s == Scenario::Sim1 ? "sim1" : "sim2"; }

std::string_view output_name(McOutput o) {
    switch (o) {
        case McOutput::LoadingError: return "error";
        case McOutput::ModelOrder: return "order";
        case McOutput::RatioCurves: return "ratios";
        case McOutput::Forecast: return "forecast";
    }
    return "unknown";
}

std::string_view metric_name(SubspaceMetric m) {
    switch (m) {
        case SubspaceMetric::Projector: return "projector";
        case SubspaceMetric::ProjectorFrobenius: return "projector-frobenius";
        case SubspaceMetric::AlignedDirect: return "aligned-direct";
    }
    return "unknown";
}

}  // namespace

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

json to_json(const RunManifest& m) {
    json j;
    j["subcommand"] = m.subcommand;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["config"] = m.config;
    j["timestamps"] = {{"started", m.started_at}, {"finished", m.finished_at}};
    return j;
}

json to_json(const ModelOrderScan& scan) {
    json j;
    j["p_hat"] = scan.p_hat;
    j["p_cap"] = scan.p_cap;
    j["epsilon"] = real(scan.epsilon);
    json rows = json::array();
    for (const auto& c : scan.candidates) {
        rows.push_back({{"i", c.rank},
                        {"gamma_i", real(c.gamma)},
                        {"gamma_next", real(c.gamma_next)},
                        {"r_i", real(c.ratio)}});
    }
    j["candidates"] = std::move(rows);
    return j;
}

json to_json(const FactorModelFit& fit) {
    json j;
    j["method"] = method_name(fit.method);
    j["p_hat"] = fit.p_hat;
    j["K"] = fit.q_hat.rows();
    j["N"] = fit.factors.cols();
    if (fit.scan) j["scan"] = to_json(*fit.scan);
    json diag = json::object();
    for (const auto& [k, v] : fit.diagnostics) diag[k] = real(v);
    j["diagnostics"] = std::move(diag);
    return j;
}

json to_json(const RrqrResult& r) {
    json j;
    j["assumed_rank"] = r.assumed_rank;
    j["perm"] = r.perm.order;
    j["diag"] = std::vector<double>(r.factors.diag.data(), r.factors.diag.data() + r.factors.diag.size());
    j["r11_min_sv"] = real(r.r11_min_sv);
    j["r22_max_sv"] = real(r.r22_max_sv);
    j["swaps"] = r.swaps;
    j["passes"] = r.passes;
    return j;
}

json to_json(const ForecastReport& r) {
    json j;
    j["config"] = {{"method", method_name(r.config.method)},
                   {"window", r.config.window},
                   {"refit_stride", r.config.refit_stride},
                   {"ar_order", r.config.ar_order},
                   {"eval_len", r.config.eval_len},
                   {"lag_lo", r.config.lag_lo},
                   {"lag_hi", r.config.lag_hi},
                   {"p_cap", r.config.p_cap},
                   {"p_max", r.config.p_max}};
    j["p_hat_mean"] = real(r.p_hat_mean);
    j["recon_rmse_mean"] = real(r.rmse_mean);
    j["truth_rmse_mean"] = r.truth_rmse_mean ? real(*r.truth_rmse_mean) : json(nullptr);
    j["fe"] = real(r.fe);
    json rows = json::array();
    for (const auto& w : r.per_window) {
        rows.push_back({{"start", w.start},
                        {"p_hat", w.p_hat},
                        {"recon_rmse", real(w.recon_rmse)},
                        {"truth_rmse", w.truth_rmse ? real(*w.truth_rmse) : json(nullptr)}});
    }
    j["per_window"] = std::move(rows);
    return j;
}

json to_json(const SimConfig& c) {
    json j;
    j["scenario"] = scenario_name(c.scenario);
    j["K"] = c.K;
    j["N"] = c.N;
    j["seed"] = c.seed;
    j["lag_lo"] = c.lag_lo;
    j["lag_hi"] = c.lag_hi;
    j["p_cap"] = c.p_cap;
    j["pca_p_max"] = c.pca_p_max;
    j["ar_order"] = c.ar_order;
    if (c.scenario == Scenario::Sim1) {
        j["half_support"] = c.half_support;
    } else {
        j["alpha1"] = c.alpha1;
        j["alpha2"] = c.alpha2;
        j["delta1"] = c.delta1;
        j["delta2"] = c.delta2;
        j["noise"] = c.noise == NoiseKind::IidIdentity ? "iid" : "hurst";
        j["hurst_w"] = c.hurst_w;
        j["noise_scale"] = c.noise_scale;
    }
    return j;
}

json to_json(const MonteCarloReport& r) {
    json j;
    j["config"] = to_json(r.config);
    j["trials"] = r.trials;
    json outs = json::array();
    for (auto o : r.outputs) outs.push_back(output_name(o));
    j["outputs"] = std::move(outs);
    j["loading_metric"] = metric_name(r.metric);
    json methods = json::object();
    for (const auto& s : r.methods) {
        json m;
        if (r.outputs.contains(McOutput::LoadingError)) m["loading_error"] = stat_json(s.loading_error());
        if (r.outputs.contains(McOutput::ModelOrder)) {
            json hist = json::object();
            for (const auto& [p, count] : s.p_hat_histogram()) hist[std::to_string(p)] = count;
            m["p_hat_histogram"] = std::move(hist);
            m["p_hat_median"] = s.p_hat_median();
        }
        if (r.outputs.contains(McOutput::RatioCurves) && !s.ratio_curves.empty()) {
            json curve = json::array();
            Index i = 1;
            for (const auto& st : s.ratio_curve()) {
                curve.push_back({{"i", i++}, {"mean", real(st.mean)}, {"std", st.std ? real(*st.std) : json(nullptr)}});
            }
            m["ratio_curve"] = std::move(curve);
        }
        if (r.outputs.contains(McOutput::Forecast)) {
            m["rmse"] = stat_json(s.rmse_stat());
            m["fe"] = stat_json(s.fe_stat());
        }
        methods[std::string(method_name(s.method))] = std::move(m);
    }
    j["methods"] = std::move(methods);
    json fails = json::array();
    for (const auto& f : r.failures) {
        fails.push_back({{"trial", f.trial}, {"method", method_name(f.method)}, {"message", f.message}});
    }
    j["failed"] = !r.failures.empty();
    j["failures"] = std::move(fails);
    return j;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    auto out = open_out(path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_real(m(i, j));
        }
        out << '\n';
    }
}

void write_scan_csv(const std::filesystem::path& path, const ModelOrderScan& scan) {
    auto out = open_out(path);
    out << "i,gamma_i,gamma_next,r_i,is_p_hat\n";
    for (const auto& c : scan.candidates) {
        out << c.rank << ',' << format_real(c.gamma) << ',' << format_real(c.gamma_next) << ','
            << format_real(c.ratio) << ',' << (c.rank == scan.p_hat ? 1 : 0) << '\n';
    }
}

void write_windows_csv(const std::filesystem::path& path, const ForecastReport& report) {
    auto out = open_out(path);
    out << "window_start,p_hat,recon_rmse,truth_rmse\n";
    for (const auto& w : report.per_window) {
        out << w.start << ',' << w.p_hat << ',' << format_real(w.recon_rmse) << ','
            << (w.truth_rmse ? format_real(*w.truth_rmse) : std::string()) << '\n';
    }
}

void write_ratio_curves_csv(const std::filesystem::path& path, const MonteCarloReport& report) {
    auto out = open_out(path);
    out << "i,mean_r,std_r,method\n";
    for (const auto& s : report.methods) {
        Index i = 1;
        for (const auto& st : s.ratio_curve()) {
            out << i++ << ',' << format_real(st.mean) << ',' << (st.std ? format_real(*st.std) : std::string())
                << ',' << method_name(s.method) << '\n';
        }
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace frrqr
