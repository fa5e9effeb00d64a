#include "minabro/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace minabro {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* name) {
    const auto it = doc.find(name);
    if (it == doc.end()) throw std::invalid_argument(std::string("model file is missing field '") + name + "'");
    return *it;
}

std::vector<double> numbers(const json& node, const char* name) {
    if (!node.is_array()) throw std::invalid_argument(std::string("field '") + name + "' must be an array");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) throw std::invalid_argument(std::string("field '") + name + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

RejectClassifier ModelFile::classifier(double epsilon) const {
    if (!calibrated()) throw std::invalid_argument("model has no rejection thresholds; run calibrate first");
    return RejectClassifier(model, *t_minus, *t_plus, epsilon);
}

json model_to_json(const ModelFile& file) {
    json doc;
    doc["weights"] = std::vector<double>(file.model.weights().begin(), file.model.weights().end());
    doc["bias"] = file.model.bias();
    doc["t_minus"] = file.t_minus ? json(*file.t_minus) : json(nullptr);
    doc["t_plus"] = file.t_plus ? json(*file.t_plus) : json(nullptr);
    json domains = json::array();
    for (const auto& d : file.model.domains()) domains.push_back({d.lower, d.upper});
    doc["domains"] = std::move(domains);
    if (file.scaling) {
        doc["scaling"] = {{"min", file.scaling->min}, {"max", file.scaling->max}};
    } else {
        doc["scaling"] = nullptr;
    }
    return doc;
}

ModelFile model_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("model file must be a JSON object");
    std::vector<double> weights = numbers(field(doc, "weights"), "weights");
    const json& bias = field(doc, "bias");
    if (!bias.is_number()) throw std::invalid_argument("field 'bias' must be a number");

    const json& dom = field(doc, "domains");
    if (!dom.is_array()) throw std::invalid_argument("field 'domains' must be an array");
    std::vector<FeatureDomain> domains;
    for (const auto& d : dom) {
        const auto pair = numbers(d, "domains");
        if (pair.size() != 2) throw std::invalid_argument("each domain must be a [lower, upper] pair");
        domains.push_back({pair[0], pair[1]});
    }
    if (domains.size() != weights.size()) throw std::invalid_argument("weights and domains differ in length");

    ModelFile file{LinearModel(std::move(weights), bias.get<double>(), std::move(domains)), {}, {}, {}};
    const json& tm = field(doc, "t_minus");
    const json& tp = field(doc, "t_plus");
    if (tm.is_null() != tp.is_null()) throw std::invalid_argument("t_minus and t_plus must both be set or both null");
    if (!tm.is_null()) {
        if (!tm.is_number() || !tp.is_number()) throw std::invalid_argument("thresholds must be numbers");
        file.t_minus = tm.get<double>();
        file.t_plus = tp.get<double>();
        if (!(*file.t_minus < *file.t_plus)) throw std::invalid_argument("t_minus must be below t_plus");
    }

    const auto sc = doc.find("scaling");
    if (sc != doc.end() && !sc->is_null()) {
        MinMaxScaling s{numbers(field(*sc, "min"), "scaling.min"), numbers(field(*sc, "max"), "scaling.max")};
        if (s.min.size() != file.model.num_features() || s.max.size() != file.model.num_features()) {
            throw std::invalid_argument("scaling length does not match the number of features");
        }
        file.scaling = std::move(s);
    }
    return file;
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("model " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_from_json(doc);
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model " + path.string());
    out << model_to_json(file).dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing model " + path.string());
}

}  // namespace minabro
