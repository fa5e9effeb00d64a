#include "minabro/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minabro {

using nlohmann::json;

std::string_view to_string(Method method) noexcept {
    return method == Method::Minabro ? "minabro" : "baseline";
}

namespace {

struct Accumulator {
    std::vector<double> sizes;
    std::vector<double> times;
};

void mean_std(const std::vector<double>& v, double& mean, double& stddev) {
    mean = 0.0;
    stddev = 0.0;
    if (v.empty()) return;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    stddev = std::sqrt(ss / static_cast<double>(v.size()));
}

json group_json(const GroupStats& g, bool include_timing) {
    json j = {{"count", g.count}, {"size_mean", g.size_mean}, {"size_std", g.size_std}};
    if (include_timing) {
        j["time_mean_ms"] = g.time_mean_ms;
        j["time_std_ms"] = g.time_std_ms;
    }
    return j;
}

}  // namespace

ReportAggregate aggregate(std::span<const ExplanationRecord> records, std::size_t skipped_out_of_domain) {
    Accumulator acc[2][2];
    for (const auto& r : records) {
        auto& a = acc[static_cast<int>(r.method)][r.label == Label::Reject ? 1 : 0];
        a.sizes.push_back(static_cast<double>(r.explanation.size()));
        a.times.push_back(r.time_ms);
    }
    ReportAggregate agg;
    agg.skipped_out_of_domain = skipped_out_of_domain;
    for (int m = 0; m < 2; ++m) {
        for (int k = 0; k < 2; ++k) {
            GroupStats& g = agg.groups[m][k];
            g.count = acc[m][k].sizes.size();
            mean_std(acc[m][k].sizes, g.size_mean, g.size_std);
            mean_std(acc[m][k].times, g.time_mean_ms, g.time_std_ms);
        }
    }
    return agg;
}

json record_to_json(const ExplanationRecord& r, bool include_timing) {
    json j = {
        {"id", r.instance_id},
        {"label", std::string(to_string(r.label))},
        {"score", r.score},
        {"kind", std::string(to_string(r.explanation.kind))},
        {"indices", r.explanation.indices},
        {"size", r.explanation.size()},
        {"certified_minimum", r.explanation.certified_minimum},
        {"method", std::string(to_string(r.method))},
        {"touches_threshold", r.touches_threshold},
    };
    if (include_timing) j["time_ms"] = r.time_ms;
    j["nodes"] = r.nodes ? json(*r.nodes) : json(nullptr);
    return j;
}

json aggregate_to_json(const ReportAggregate& agg, bool include_timing) {
    json out;
    for (Method m : {Method::Minabro, Method::Baseline}) {
        out[std::string(to_string(m))] = {
            {"classified", group_json(agg.get(m, false), include_timing)},
            {"rejected", group_json(agg.get(m, true), include_timing)},
        };
    }
    out["skipped_out_of_domain"] = agg.skipped_out_of_domain;
    return out;
}

std::string format_report(std::span<const ExplanationRecord> records, const ReportOptions& options) {
    std::ostringstream out;
    for (const auto& r : records) out << record_to_json(r, options.include_timing).dump() << '\n';
    const json tail = {{"aggregate", aggregate_to_json(aggregate(records, options.skipped_out_of_domain),
                                                       options.include_timing)}};
    out << tail.dump() << '\n';
    return out.str();
}

void write_explanation_report(std::span<const ExplanationRecord> records, const std::filesystem::path& path,
                              const ReportOptions& options) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report " + path.string());
    out << format_report(records, options);
    if (!out) throw std::runtime_error("failed writing report " + path.string());
}

}  // namespace minabro
