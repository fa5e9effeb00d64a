#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "minabro/model.hpp"

namespace minabro {

enum class Method { Minabro, Baseline };

std::string_view to_string(Method method) noexcept;

struct ExplanationRecord {
    std::size_t instance_id = 0;
    Label label = Label::Reject;
    double score = 0.0;
    Explanation explanation;
    Method method = Method::Minabro;
    double time_ms = 0.0;
    std::optional<std::uint64_t> nodes;
    bool touches_threshold = false;
};

/// Mean and population standard deviation of explanation size and time.
struct GroupStats {
    std::size_t count = 0;
    double size_mean = 0.0;
    double size_std = 0.0;
    double time_mean_ms = 0.0;
    double time_std_ms = 0.0;
};

struct ReportAggregate {
    // [method][0 = classified, 1 = rejected]
    GroupStats groups[2][2];
    std::size_t skipped_out_of_domain = 0;

    const GroupStats& get(Method m, bool rejected) const noexcept {
        return groups[static_cast<int>(m)][rejected ? 1 : 0];
    }
};

ReportAggregate aggregate(std::span<const ExplanationRecord> records, std::size_t skipped_out_of_domain = 0);

struct ReportOptions {
    bool include_timing = true;
    std::size_t skipped_out_of_domain = 0;
};

nlohmann::json record_to_json(const ExplanationRecord& record, bool include_timing = true);
nlohmann::json aggregate_to_json(const ReportAggregate& agg, bool include_timing = true);

/// JSON Lines: one object per record, then {"aggregate": {...}} as the final line.
std::string format_report(std::span<const ExplanationRecord> records, const ReportOptions& options = {});
void write_explanation_report(std::span<const ExplanationRecord> records, const std::filesystem::path& path,
                              const ReportOptions& options = {});

}  // namespace minabro
