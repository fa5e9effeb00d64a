#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace minabro {

/// Row-major numeric features with labels in {-1, +1}.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<double> values;
    std::vector<int> labels;

    std::size_t rows() const noexcept { return labels.size(); }
    std::size_t cols() const noexcept { return feature_names.size(); }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(values).subspan(i * cols(), cols());
    }
};

struct CsvOptions {
    char delimiter = ',';
    /// Column name or zero-based index; the last column when unset.
    std::optional<std::string> label_column;
};

/// Reads a delimiter-separated file with a header row. Labels may be
/// encoded as -1/+1 or 0/1 (0 maps to -1); anything else is an error.
Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_dataset(const std::string& text, const CsvOptions& options = {});

/// Per-feature min-max transform to [0, 1], fitted on training rows.
struct MinMaxScaling {
    std::vector<double> min;
    std::vector<double> max;

    static MinMaxScaling fit(const Dataset& data);
    /// Constant features map to 0.
    std::vector<double> apply(std::span<const double> row) const;
    Dataset apply(const Dataset& data) const;
    /// Indices of features whose fitted range is empty.
    std::vector<std::size_t> constant_features() const;
};

/// Seeded per-class shuffle; round(fraction * class size) rows of each
/// class go to the first part. Returns (train, test).
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace minabro
