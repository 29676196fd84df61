#pragma once

#include "edge_lca/estimator.hpp"
#include "edge_lca/model.hpp"
#include "edge_lca/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edge_lca {

enum class ReportFormat { Table, Csv, JsonLines };

inline std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept
{
    if (s == "table") return ReportFormat::Table;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "jsonl" || s == "json-lines") return ReportFormat::JsonLines;
    return std::nullopt;
}

namespace detail {

struct ReportRow {
    std::string_view profile;
    std::string_view block;
    const EmissionTriple* value;
};

inline std::vector<ReportRow> report_rows(std::span<const EvaluationReport> reports)
{
    std::vector<ReportRow> rows;
    for (const auto& r : reports) {
        const auto& est = r.estimate;
        for (auto block : kAllBlocks) {
            rows.push_back({est.profile_name(), block_id(block), &est.block(block)});
        }
        rows.push_back({est.profile_name(), "TOTAL", &est.total()});
    }
    return rows;
}

inline std::string render_table(std::span<const EvaluationReport> reports)
{
    std::string out;
    for (const auto& r : reports) {
        const auto& est = r.estimate;
        out += "Profile: " + est.profile_name() + "\n";
        out += "  block                 low  typical       up   (kgCO2-eq)\n";
        auto row = [&](std::string_view label, const EmissionTriple& v) {
            std::string line = "  " + std::string(label);
            line.resize(18, ' ');
            for (double x : {v.low(), v.typical(), v.up()}) {
                auto cell = text::fixed(x);
                line += std::string(9 - std::min<std::size_t>(cell.size(), 8), ' ') + cell;
            }
            out += line + "\n";
        };
        for (auto block : kAllBlocks) {
            row(block_display_name(block), est.block(block));
        }
        row("TOTAL", est.total());
        for (const auto& ov : r.applied_overrides) {
            out += "  override " + std::string(block_id(ov.block)) + ": " +
                   std::string(override_kind_id(ov.override_spec.kind)) + " -> " + text::fixed(ov.result.typical()) +
                   "\n";
        }
        for (const auto& w : r.warnings) {
            out += "  warning: " + w + "\n";
        }
        out += "\n";
    }
    return out;
}

} // namespace detail

// csv and jsonl output is byte-stable: fixed column/key order, two decimals, '\n' endings.
inline std::string render_report(std::span<const EvaluationReport> reports, ReportFormat format)
{
    switch (format) {
    case ReportFormat::Table: return detail::render_table(reports);
    case ReportFormat::Csv: {
        std::string out = "profile,block,low,typical,up\n";
        for (const auto& row : detail::report_rows(reports)) {
            out += std::string(row.profile) + "," + std::string(row.block) + "," + text::fixed(row.value->low()) +
                   "," + text::fixed(row.value->typical()) + "," + text::fixed(row.value->up()) + "\n";
        }
        return out;
    }
    case ReportFormat::JsonLines: {
        std::string out;
        for (const auto& row : detail::report_rows(reports)) {
            out += "{\"profile\":" + nlohmann::json(std::string(row.profile)).dump() + ",\"block\":\"" +
                   std::string(row.block) + "\",\"low\":" + text::fixed(row.value->low()) +
                   ",\"typical\":" + text::fixed(row.value->typical()) + ",\"up\":" + text::fixed(row.value->up()) +
                   "}\n";
        }
        return out;
    }
    }
    return {};
}

inline std::string render_report(const EvaluationReport& report, ReportFormat format)
{
    return render_report(std::span<const EvaluationReport>(&report, 1), format);
}

} // namespace edge_lca
