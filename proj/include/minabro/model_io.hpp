#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "minabro/dataset.hpp"
#include "minabro/model.hpp"

namespace minabro {

/// On-disk model: weights, bias, domains, optional thresholds (absent
/// until calibrated) and optional min-max scaling metadata.
struct ModelFile {
    LinearModel model;
    std::optional<double> t_minus;
    std::optional<double> t_plus;
    std::optional<MinMaxScaling> scaling;

    bool calibrated() const noexcept { return t_minus.has_value() && t_plus.has_value(); }
    /// Throws std::invalid_argument when thresholds are missing.
    RejectClassifier classifier(double epsilon = kDefaultEpsilon) const;
};

nlohmann::json model_to_json(const ModelFile& file);
ModelFile model_from_json(const nlohmann::json& doc);

ModelFile load_model(const std::filesystem::path& path);
void save_model(const ModelFile& file, const std::filesystem::path& path);

}  // namespace minabro
