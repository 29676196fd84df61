#pragma once

#include "edge_lca/defaults.hpp"
#include "edge_lca/error.hpp"
#include "edge_lca/estimator.hpp"
#include "edge_lca/factors.hpp"
#include "edge_lca/profiles_io.hpp"
#include "edge_lca/projection.hpp"
#include "edge_lca/report.hpp"
#include "edge_lca/sensitivity.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace edge_lca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

namespace detail {

// Pads CSV columns for human reading.
inline std::string align_csv(const std::string& csv)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> widths;
    for (const auto& line : text::split_lines(csv)) {
        std::vector<std::string> cells;
        for (const auto& f : text::split_fields(line.content)) {
            cells.emplace_back(f.value);
        }
        widths.resize(std::max(widths.size(), cells.size()), 0);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            widths[i] = std::max(widths[i], cells[i].size());
        }
        rows.push_back(std::move(cells));
    }
    std::string out;
    for (const auto& cells : rows) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::string cell = cells[i];
            if (i + 1 < cells.size()) {
                cell.resize(widths[i] + 2, ' ');
            }
            line += cell;
        }
        out += line + "\n";
    }
    return out;
}

// One JSON object per CSV data row; numeric-looking cells stay numbers.
inline std::string csv_to_jsonl(const std::string& csv)
{
    auto lines = text::split_lines(csv);
    if (lines.empty()) {
        return {};
    }
    std::vector<std::string> keys;
    for (const auto& f : text::split_fields(lines.front().content)) {
        keys.emplace_back(f.value);
    }
    std::string out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto fields = text::split_fields(lines[r].content);
        out += "{";
        for (std::size_t i = 0; i < fields.size() && i < keys.size(); ++i) {
            out += i == 0 ? "" : ",";
            out += nlohmann::json(keys[i]).dump() + ":";
            const auto v = fields[i].value;
            if (v.empty()) {
                out += "null";
            } else if (text::parse_double(v)) {
                out += std::string(v);
            } else {
                out += nlohmann::json(std::string(v)).dump();
            }
        }
        out += "}\n";
    }
    return out;
}

inline std::string render_tabular(const std::string& csv, ReportFormat format)
{
    switch (format) {
    case ReportFormat::Table: return align_csv(csv);
    case ReportFormat::Csv: return csv;
    case ReportFormat::JsonLines: return csv_to_jsonl(csv);
    }
    return csv;
}

inline void emit(const std::string& content, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty() || out_path == "-") {
        out << content;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error(ErrorCode::IoError, "cannot write '" + out_path + "'");
    }
    file << content;
    if (!file) {
        throw Error(ErrorCode::IoError, "failed writing '" + out_path + "'");
    }
}

inline std::string profile_summary(const HardwareProfile& p)
{
    std::string out;
    for (auto block : kAllBlocks) {
        out += out.empty() ? "" : " ";
        out += std::string(block_id(block)) + "=" + std::string(level_id(p.level(block)));
    }
    return out;
}

} // namespace detail

struct Options {
    std::string factors_path;
    std::string units_path;
    std::string trends_path;
    std::string scenarios_path;
    std::string format = "table";
    std::string out_path;
    std::vector<std::string> inputs;
    std::vector<std::string> scenario_names;
    std::vector<std::string> trend_sources;
    std::optional<double> psi;
    std::optional<double> alpha;
    int horizon = kLastTrendYear;
    double start_low = 281.0;
    double start_high = 543.0;
    int end_year = 2030;
};

inline EmissionFactorTable load_table(const Options& o)
{
    return o.factors_path.empty() ? defaults::factor_table() : load_factor_table(o.factors_path);
}

inline UnitFactorRegistry load_units(const Options& o)
{
    return o.units_path.empty() ? defaults::unit_registry() : load_unit_registry(o.units_path);
}

inline ReportFormat require_format(const Options& o)
{
    auto f = parse_report_format(o.format);
    if (!f) {
        throw CLI::ValidationError("--format", "must be one of table, csv, jsonl");
    }
    return *f;
}

// Parses every input file, reporting all diagnostics. Returns nullopt on any error.
inline std::optional<std::vector<HardwareProfile>> read_profiles(const std::vector<std::string>& inputs,
                                                                 std::ostream& err)
{
    std::vector<HardwareProfile> profiles;
    bool failed = false;
    if (inputs.empty()) {
        auto doc = defaults::use_cases();
        return std::move(doc.profiles);
    }
    for (const auto& path : inputs) {
        std::string content;
        try {
            content = edge_lca::detail::read_file(path);
        } catch (const Error& e) {
            err << e.what() << "\n";
            failed = true;
            continue;
        }
        auto parsed = parse_profiles_collect(content);
        for (const auto& d : parsed.diagnostics) {
            err << format_diagnostic(d, path) << "\n";
        }
        failed = failed || !parsed.ok();
        for (auto& p : parsed.document.profiles) {
            profiles.push_back(std::move(p));
        }
    }
    if (failed) {
        return std::nullopt;
    }
    return profiles;
}

inline int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto format = require_format(o);
    auto profiles = read_profiles(o.inputs, err);
    if (!profiles) {
        return kExitDomainError;
    }
    const auto table = load_table(o);
    const auto units = load_units(o);
    auto reports = batch_evaluate(*profiles, table, units);
    detail::emit(render_report(reports, format), o.out_path, out);
    return kExitOk;
}

inline int cmd_validate(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.inputs.empty()) {
        throw CLI::ValidationError("validate", "needs at least one profile file");
    }
    const auto table = load_table(o);
    const auto units = load_units(o);
    bool failed = false;
    for (const auto& path : o.inputs) {
        auto profiles = read_profiles({path}, err);
        if (!profiles) {
            failed = true;
            continue;
        }
        bool file_ok = true;
        for (const auto& p : *profiles) {
            try {
                auto report = evaluate_profile(p, table, units);
                for (const auto& w : report.warnings) {
                    err << path << ": warning: profile '" << p.name() << "': " << w << "\n";
                }
            } catch (const Error& e) {
                err << path << ": error[" << to_string(e.code()) << "]: profile '" << p.name() << "': " << e.detail()
                    << "\n";
                file_ok = false;
            }
        }
        if (file_ok) {
            out << path << ": ok (" << profiles->size() << " profile" << (profiles->size() == 1 ? "" : "s") << ")\n";
        }
        failed = failed || !file_ok;
    }
    return failed ? kExitDomainError : kExitOk;
}

inline int cmd_sensitivity(const Options& o, std::ostream& out, std::ostream&)
{
    const auto format = require_format(o);
    const auto table = load_table(o);
    const auto result = scan_extrema(table);
    const double rounded_min = std::round(result.min_low() * 10.0) / 10.0;

    std::string content;
    switch (format) {
    case ReportFormat::Table:
        content += "max sum of up:   " + text::fixed(result.max_up()) + " kgCO2-eq\n";
        content += "  profile:       " + detail::profile_summary(result.max_profile) + "\n";
        content += "min sum of low:  " + text::fixed(result.min_low()) + " kgCO2-eq (exact), " +
                   text::fixed(rounded_min) + " (rounded to 0.1)\n";
        content += "  profile:       " + detail::profile_summary(result.min_profile) + "\n";
        content += "spread ratio:    " + text::fixed(result.spread_ratio) + " (exact), " +
                   text::fixed(result.rounded_spread_ratio) + " (rounded minimum)\n";
        break;
    case ReportFormat::Csv: content = render_level_series_csv(level_series(table)); break;
    case ReportFormat::JsonLines:
        content = "{\"max_up\":" + text::fixed(result.max_up()) + ",\"min_low\":" + text::fixed(result.min_low()) +
                  ",\"min_low_rounded\":" + text::fixed(rounded_min) +
                  ",\"spread_ratio\":" + text::fixed(result.spread_ratio) +
                  ",\"spread_ratio_rounded\":" + text::fixed(result.rounded_spread_ratio) + ",\"max_profile\":" +
                  nlohmann::json(detail::profile_summary(result.max_profile)).dump() + ",\"min_profile\":" +
                  nlohmann::json(detail::profile_summary(result.min_profile)).dump() + "}\n";
        break;
    }
    detail::emit(content, o.out_path, out);
    return kExitOk;
}

inline std::vector<Scenario> select_scenarios(const Options& o)
{
    const auto all = o.scenarios_path.empty() ? defaults::scenarios() : load_scenarios(o.scenarios_path);
    std::vector<std::string> names = o.scenario_names;
    if (names.empty()) {
        for (const auto& s : all) {
            if (std::find(names.begin(), names.end(), s.name()) == names.end()) {
                names.push_back(s.name());
            }
        }
    }
    std::vector<Scenario> selected;
    for (const auto& name : names) {
        std::vector<Scenario> matches;
        for (const auto& s : all) {
            if (edge_lca::detail::iequals(s.name(), name)) {
                matches.push_back(s);
            }
        }
        if (matches.empty()) {
            throw Error(ErrorCode::InvalidScenario, "unknown scenario '" + name + "'");
        }
        if (o.psi) {
            auto it = std::find_if(matches.begin(), matches.end(), [&](const Scenario& s) { return s.psi() == *o.psi; });
            matches = {it != matches.end() ? *it : matches.front().with_psi(*o.psi)};
        }
        for (auto& s : matches) {
            selected.push_back(o.alpha ? s.with_alpha(*o.alpha) : s);
        }
    }
    return selected;
}

inline int cmd_project(const Options& o, std::ostream& out, std::ostream&)
{
    const auto format = require_format(o);
    const auto scenarios = select_scenarios(o);
    const auto trends = o.trends_path.empty() ? defaults::trends() : load_trends(o.trends_path);
    std::vector<std::string> sources = o.trend_sources;
    if (sources.empty()) {
        sources = {"CISCO", "Statista"};
    }
    std::vector<ProjectionSeries> series;
    for (const auto& source : sources) {
        const auto* trend = find_trend(trends, source, TrendKind::Cumulative);
        if (trend == nullptr) {
            trend = find_trend(trends, source, TrendKind::Annual);
        }
        if (trend == nullptr) {
            throw Error(ErrorCode::InvalidTrend, "unknown trend source '" + source + "'");
        }
        const auto annual = prepare_annual(*trend, o.horizon);
        for (const auto& s : scenarios) {
            series.push_back(project(s, annual));
        }
    }
    detail::emit(detail::render_tabular(render_projection_csv(std::move(series)), format), o.out_path, out);
    return kExitOk;
}

inline int cmd_pathway(const Options& o, std::ostream& out, std::ostream&)
{
    const auto format = require_format(o);
    const auto pathway = paris_pathway(o.start_low, o.start_high, o.end_year);
    detail::emit(detail::render_tabular(render_pathway_csv(pathway), format), o.out_path, out);
    return kExitOk;
}

// Exit 0 on success, 1 on domain errors, 2 on usage errors.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cradle-to-gate carbon footprint estimates for IoT edge devices", "edge_lca"};
    app.require_subcommand(1);
    Options o;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "Output format: table, csv, jsonl")
            ->check(CLI::IsMember({"table", "csv", "jsonl"}));
        cmd->add_option("--out", o.out_path, "Write output to this file instead of stdout");
    };
    auto add_db = [&](CLI::App* cmd) {
        cmd->add_option("--factors", o.factors_path, "Emission factor table (block,level,low,typical,up)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--units", o.units_path, "Unit factor registry (key,value,unit,note)")
            ->check(CLI::ExistingFile);
    };

    auto* estimate = app.add_subcommand("estimate", "Evaluate hardware profiles (.iotprof)");
    estimate->add_option("profiles", o.inputs, "Profile files; defaults to the bundled use cases");
    add_db(estimate);
    add_io(estimate);

    auto* validate = app.add_subcommand("validate", "Check profile files and report every diagnostic");
    validate->add_option("profiles", o.inputs, "Profile files")->required();
    add_db(validate);

    auto* sensitivity = app.add_subcommand("sensitivity", "Framework extrema and per-level series");
    add_db(sensitivity);
    add_io(sensitivity);

    auto* proj = app.add_subcommand("project", "Annual footprint of worldwide deployment per scenario");
    proj->add_option("--scenario", o.scenario_names, "Scenario name(s); default all");
    proj->add_option("--trend", o.trend_sources, "Trend source(s); default CISCO and Statista");
    proj->add_option("--psi", o.psi, "Truncation correction multiplier")->check(CLI::Range(1.0, 1e6));
    proj->add_option("--alpha", o.alpha, "Share of simple devices")->check(CLI::Range(0.0, 1.0));
    proj->add_option("--horizon", o.horizon, "Last cumulative year used for extrapolation")
        ->check(CLI::Range(kFirstTrendYear, kLastTrendYear));
    proj->add_option("--trends", o.trends_path, "Trend file (source,kind,year,value,extrapolated)")
        ->check(CLI::ExistingFile);
    proj->add_option("--scenarios", o.scenarios_path, "Scenario file")->check(CLI::ExistingFile);
    add_io(proj);

    auto* pathway = app.add_subcommand("pathway", "Emission pathway declining 7.6%/year from 2020");
    pathway->add_option("--start-low", o.start_low, "Low start value in 2020, MtCO2-eq");
    pathway->add_option("--start-high", o.start_high, "High start value in 2020, MtCO2-eq");
    pathway->add_option("--end-year", o.end_year, "Last year of the series");
    add_io(pathway);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    try {
        if (*estimate) return cmd_estimate(o, out, err);
        if (*validate) return cmd_validate(o, out, err);
        if (*sensitivity) return cmd_sensitivity(o, out, err);
        if (*proj) return cmd_project(o, out, err);
        if (*pathway) return cmd_pathway(o, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsageError;
    } catch (const ProfileParseError& e) {
        for (const auto& d : e.diagnostics()) {
            err << format_diagnostic(d) << "\n";
        }
        return kExitDomainError;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitUsageError;
}

} // namespace edge_lca::cli
