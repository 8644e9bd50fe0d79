#pragma once

#include "frrqr/linalg.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace frrqr {

/// K series observed over N time steps; values are stored K x N.
class TimeSeries {
public:
    /// Throws InvalidArgument unless K >= 1, N >= 2, every entry is finite and
    /// labels are either empty or exactly K long.
    explicit TimeSeries(Matrix values, std::vector<std::string> labels = {});

    const Matrix& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }

    Index series_count() const { return values_.rows(); }
    Index length() const { return values_.cols(); }

    /// Columns [first, first + count) as a new series carrying the same labels.
    TimeSeries slice(Index first, Index count) const;

private:
    Matrix values_;
    std::vector<std::string> labels_;
};

enum class Orientation { RowsAreSeries, ColumnsAreSeries };

/// Reads a comma-separated numeric table. Cells are whitespace-trimmed.
/// With RowsAreSeries a leading non-numeric column is taken as series labels;
/// with ColumnsAreSeries a leading non-numeric column (e.g. dates) is
/// dropped and the header row (if any) provides the labels.
/// Parse errors name the 1-based (row, column) of the offending cell among
/// the data rows and data columns.
TimeSeries load_csv(const std::filesystem::path& path, Orientation orientation, bool has_header);

/// Plain numeric matrix from CSV (rows = matrix rows), no header.
Matrix load_matrix_csv(const std::filesystem::path& path);

/// Subtracts the full-sample mean of each series.
TimeSeries demean(const TimeSeries& ts);

/// Row means of the series (the ybar used by demean).
Vector series_mean(const TimeSeries& ts);

/// log P(n+1) - log P(n) for every series; output has N-1 columns.
/// Throws InvalidArgument on any non-positive price.
TimeSeries log_returns(const TimeSeries& prices);

}  // namespace frrqr
