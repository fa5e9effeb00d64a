#include "minabro/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace minabro {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, delimiter)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delimiter) cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
    }
    return v;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.feature_names = data.feature_names;
    out.values.reserve(rows.size() * data.cols());
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        const auto row = data.row(r);
        out.values.insert(out.values.end(), row.begin(), row.end());
        out.labels.push_back(data.labels[r]);
    }
    return out;
}

}  // namespace

Dataset parse_dataset(const std::string& text, const CsvOptions& options) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) header = split_line(line, options.delimiter);
    }
    if (header.size() < 2) throw std::invalid_argument("dataset needs a header with at least two columns");

    std::size_t label_col = header.size() - 1;
    if (options.label_column) {
        const auto it = std::find(header.begin(), header.end(), *options.label_column);
        if (it != header.end()) {
            label_col = static_cast<std::size_t>(it - header.begin());
        } else {
            std::size_t idx = 0;
            const auto& name = *options.label_column;
            const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
            if (ec != std::errc() || ptr != name.data() + name.size() || idx >= header.size()) {
                throw std::invalid_argument("label column '" + name + "' not found");
            }
            label_col = idx;
        }
    }

    Dataset data;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col) data.feature_names.push_back(header[c]);
    }
    std::vector<double> raw_labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line, options.delimiter);
        if (cells.size() != header.size()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " cells, found " +
                                        std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double v = parse_number(cells[c], line_no);
            if (c == label_col) {
                raw_labels.push_back(v);
            } else {
                data.values.push_back(v);
            }
        }
    }

    const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
    const bool signed_labels = std::all_of(distinct.begin(), distinct.end(), [](double v) { return v == -1.0 || v == 1.0; });
    const bool binary_labels = std::all_of(distinct.begin(), distinct.end(), [](double v) { return v == 0.0 || v == 1.0; });
    if (!signed_labels && !binary_labels) {
        throw std::invalid_argument("label column must hold -1/+1 or 0/1 values only");
    }
    data.labels.reserve(raw_labels.size());
    for (double v : raw_labels) data.labels.push_back(v == 1.0 ? 1 : -1);
    return data;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open dataset " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), options);
}

MinMaxScaling MinMaxScaling::fit(const Dataset& data) {
    if (data.rows() == 0) throw std::invalid_argument("cannot fit scaling on an empty dataset");
    MinMaxScaling s;
    s.min.assign(data.cols(), 0.0);
    s.max.assign(data.cols(), 0.0);
    for (std::size_t c = 0; c < data.cols(); ++c) {
        s.min[c] = s.max[c] = data.row(0)[c];
    }
    for (std::size_t r = 1; r < data.rows(); ++r) {
        const auto row = data.row(r);
        for (std::size_t c = 0; c < data.cols(); ++c) {
            s.min[c] = std::min(s.min[c], row[c]);
            s.max[c] = std::max(s.max[c], row[c]);
        }
    }
    return s;
}

std::vector<double> MinMaxScaling::apply(std::span<const double> row) const {
    if (row.size() != min.size()) throw std::invalid_argument("row width does not match scaling");
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
        const double range = max[c] - min[c];
        out[c] = range > 0.0 ? (row[c] - min[c]) / range : 0.0;
    }
    return out;
}

Dataset MinMaxScaling::apply(const Dataset& data) const {
    Dataset out;
    out.feature_names = data.feature_names;
    out.labels = data.labels;
    out.values.reserve(data.values.size());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto scaled = apply(data.row(r));
        out.values.insert(out.values.end(), scaled.begin(), scaled.end());
    }
    return out;
}

std::vector<std::size_t> MinMaxScaling::constant_features() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < min.size(); ++c) {
        if (!(max[c] > min[c])) out.push_back(c);
    }
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (int cls : {-1, 1}) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < data.rows(); ++r) {
            if (data.labels[r] == cls) rows.push_back(r);
        }
        // Fisher-Yates with raw engine draws keeps the split identical
        // across standard library implementations.
        for (std::size_t i = rows.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(rows[i - 1], rows[j]);
        }
        const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(rows.size())));
        train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(cut));
        test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(cut), rows.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {subset(data, train), subset(data, test)};
}

}  // namespace minabro
