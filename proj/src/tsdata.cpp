#include "frrqr/tsdata.hpp"

#include "frrqr/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

namespace frrqr {

TimeSeries::TimeSeries(Matrix values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 1) throw InvalidArgument("time series needs at least one series (K >= 1)");
    if (values_.cols() < 2) throw InvalidArgument("time series needs at least two samples (N >= 2)");
    if (!values_.allFinite()) throw InvalidArgument("time series contains NaN or infinite values");
    if (!labels_.empty() && static_cast<Index>(labels_.size()) != values_.rows()) {
        throw InvalidArgument(fmt::format("{} labels given for {} series", labels_.size(), values_.rows()));
    }
}

TimeSeries TimeSeries::slice(Index first, Index count) const {
    if (first < 0 || count < 0 || first + count > length()) {
        throw InvalidArgument(fmt::format("slice [{}, {}) outside series of length {}", first,
                                          first + count, length()));
    }
    return TimeSeries(values_.middleCols(first, count), labels_);
}

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_real(std::string_view cell, double& out) {
    if (cell.empty()) return false;
    if (cell.front() == '+') cell.remove_prefix(1);
    const auto* end = cell.data() + cell.size();
    const auto res = std::from_chars(cell.data(), end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
    RawTable t;
    std::string line;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        for (auto c : split(line)) cells.emplace_back(c);
        if (header_pending) {
            t.header = std::move(cells);
            header_pending = false;
            continue;
        }
        t.rows.push_back(std::move(cells));
    }
    if (t.rows.empty()) throw ParseError(fmt::format("'{}' contains no data rows", path.string()));
    return t;
}

Matrix parse_block(const RawTable& t, std::size_t first_col, const std::filesystem::path& path) {
    const std::size_t width = t.rows.front().size();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r].size() != width) {
            throw ParseError(fmt::format("{}: ragged row {} has {} cells, expected {}", path.string(),
                                         r + 1, t.rows[r].size(), width));
        }
    }
    if (width <= first_col) throw ParseError(fmt::format("{}: no numeric columns", path.string()));
    Matrix m(static_cast<Index>(t.rows.size()), static_cast<Index>(width - first_col));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t c = first_col; c < width; ++c) {
            double v = 0.0;
            if (!parse_real(t.rows[r][c], v)) {
                throw ParseError(fmt::format("{}: non-numeric or missing cell '{}' at ({},{})",
                                             path.string(), t.rows[r][c], r + 1, c + 1));
            }
            m(static_cast<Index>(r), static_cast<Index>(c - first_col)) = v;
        }
    }
    return m;
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path, Orientation orientation, bool has_header) {
    const RawTable t = read_table(path, has_header);
    if (orientation == Orientation::RowsAreSeries) {
        double probe = 0.0;
        const bool labelled = !t.rows.front().empty() && !parse_real(t.rows.front().front(), probe);
        Matrix m = parse_block(t, labelled ? 1 : 0, path);
        std::vector<std::string> labels;
        if (labelled) {
            for (const auto& row : t.rows) labels.push_back(row.front());
        }
        if (m.cols() < 2) throw ParseError(fmt::format("{}: need at least 2 samples per series", path.string()));
        return TimeSeries(std::move(m), std::move(labels));
    }
    // A non-numeric leading column (dates, say) is an index and is dropped.
    double probe = 0.0;
    const std::size_t skip = !t.rows.front().empty() && !parse_real(t.rows.front().front(), probe) ? 1 : 0;
    Matrix m = parse_block(t, skip, path);
    std::vector<std::string> labels;
    if (t.header.size() == static_cast<std::size_t>(m.cols()) + skip) {
        labels.assign(t.header.begin() + static_cast<std::ptrdiff_t>(skip), t.header.end());
    }
    if (m.rows() < 2) throw ParseError(fmt::format("{}: need at least 2 samples per series", path.string()));
    return TimeSeries(m.transpose(), std::move(labels));
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
    return parse_block(read_table(path, false), 0, path);
}

Vector series_mean(const TimeSeries& ts) { return ts.values().rowwise().mean(); }

TimeSeries demean(const TimeSeries& ts) {
    Matrix centered = ts.values().colwise() - series_mean(ts);
    return TimeSeries(std::move(centered), ts.labels());
}

TimeSeries log_returns(const TimeSeries& prices) {
    const Matrix& p = prices.values();
    for (Index k = 0; k < p.rows(); ++k) {
        for (Index n = 0; n < p.cols(); ++n) {
            if (!(p(k, n) > 0.0)) {
                throw InvalidArgument(
                    fmt::format("non-positive price {} at series {}, step {}", p(k, n), k + 1, n + 1));
            }
        }
    }
    if (p.cols() < 3) throw InvalidArgument("log returns need at least 3 prices per series");
    const Matrix logp = p.array().log().matrix();
    Matrix r = logp.rightCols(p.cols() - 1) - logp.leftCols(p.cols() - 1);
    return TimeSeries(std::move(r), prices.labels());
}

}  // namespace frrqr
