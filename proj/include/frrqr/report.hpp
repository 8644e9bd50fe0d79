#pragma once

#include "frrqr/factor_rrqr.hpp"
#include "frrqr/forecast.hpp"
#include "frrqr/rrqr.hpp"
#include "frrqr/simgen.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace frrqr {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducibility header embedded in every emitted report.
struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    std::string started_at;   // ISO-8601 UTC
    std::string finished_at;  // ISO-8601 UTC
};

std::string utc_timestamp();

nlohmann::ordered_json to_json(const RunManifest& m);
nlohmann::ordered_json to_json(const ModelOrderScan& scan);
nlohmann::ordered_json to_json(const FactorModelFit& fit);
nlohmann::ordered_json to_json(const RrqrResult& result);
nlohmann::ordered_json to_json(const ForecastReport& report);
nlohmann::ordered_json to_json(const MonteCarloReport& report);
nlohmann::ordered_json to_json(const SimConfig& config);

/// Formats with 17 significant digits.
std::string format_real(double v);

/// Writes a numeric matrix as CSV (rows = matrix rows, 17 significant digits).
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Columns: i, gamma_i, gamma_next, r_i, is_p_hat.
void write_scan_csv(const std::filesystem::path& path, const ModelOrderScan& scan);

/// Columns: window_start, p_hat, recon_rmse, truth_rmse.
void write_windows_csv(const std::filesystem::path& path, const ForecastReport& report);

/// Columns: i, mean_r, std_r, method.
void write_ratio_curves_csv(const std::filesystem::path& path, const MonteCarloReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace frrqr
