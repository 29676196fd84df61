#pragma once

#include "edge_lca/error.hpp"
#include "edge_lca/factors.hpp"
#include "edge_lca/model.hpp"
#include "edge_lca/text.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <system_error>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Reader and writer for `.iotprof` hardware-profile documents.
//
//   format_version = 1
//
//   [profile <name>]
//   description = free text
//   <block> = hsl0 | hsl1 | hsl2 | hsl3          (all 12 blocks, once each)
//   override.<block> = <kind>:<number><unit>@<factor_key>
//
//   [annotations]
//   <key> = free text
//
// Blank lines and lines starting with '#' are ignored. Override kinds are
// mass_scaled (g, kg), unit_count (units), memory_capacity.dram /
// memory_capacity.flash (MB, GB) and solder_from_ic_area (mm2).
namespace edge_lca {

inline constexpr long kProfileFormatVersion = 1;

struct Diagnostic {
    ErrorCode code = ErrorCode::SyntaxError;
    SourceLocation where;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::string format_diagnostic(const Diagnostic& d, std::string_view file = {})
{
    std::string out;
    if (!file.empty()) {
        out += std::string(file) + ":";
    }
    out += std::to_string(d.where.line) + ":" + std::to_string(d.where.column) + ": error[" +
           std::string(to_string(d.code)) + "]: " + d.message;
    return out;
}

struct ProfileDocument {
    long format_version = kProfileFormatVersion;
    std::vector<HardwareProfile> profiles;
    std::vector<std::pair<std::string, std::string>> annotations;

    friend bool operator==(const ProfileDocument&, const ProfileDocument&) = default;
};

struct ProfileParseResult {
    ProfileDocument document;
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept { return diagnostics.empty(); }
};

// Thrown by parse_profiles; carries every diagnostic from the pass.
class ProfileParseError : public Error {
public:
    explicit ProfileParseError(std::vector<Diagnostic> diagnostics)
        : Error(diagnostics.front().code, summary(diagnostics), diagnostics.front().where),
          diagnostics_(std::move(diagnostics))
    {
    }

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    static std::string summary(const std::vector<Diagnostic>& diagnostics)
    {
        std::string out = diagnostics.front().message;
        if (diagnostics.size() > 1) {
            out += " (and " + std::to_string(diagnostics.size() - 1) + " more)";
        }
        return out;
    }

    std::vector<Diagnostic> diagnostics_;
};

namespace detail {

using text::leading_blanks;
using text::trim;

constexpr bool is_name_char(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
}

constexpr bool is_name(std::string_view s) noexcept
{
    return !s.empty() && std::all_of(s.begin(), s.end(), is_name_char);
}

struct OverrideParse {
    std::optional<ComponentOverride> value;
    std::optional<Diagnostic> error;
};

// `<kind>:<number><unit>@<factor_key>`; `column` is the 1-based column of `text`.
inline OverrideParse parse_override_value(FunctionalBlock block, std::string_view text, std::size_t line,
                                          std::size_t column)
{
    auto fail = [&](ErrorCode code, std::size_t offset, std::string message) {
        return OverrideParse{std::nullopt, Diagnostic{code, {line, column + offset}, std::move(message)}};
    };
    const auto colon = text.find(':');
    const auto at = text.rfind('@');
    if (colon == std::string_view::npos || at == std::string_view::npos || at < colon) {
        return fail(ErrorCode::InvalidOverride, 0, "override must look like <kind>:<quantity><unit>@<factor_key>");
    }

    ComponentOverride ov;
    ov.block = block;
    const auto kind_text = trim(text.substr(0, colon));
    if (kind_text == "mass_scaled") {
        ov.kind = OverrideKind::MassScaled;
    } else if (kind_text == "unit_count") {
        ov.kind = OverrideKind::UnitCount;
    } else if (kind_text == "memory_capacity.dram" || kind_text == "memory_capacity.flash") {
        ov.kind = OverrideKind::MemoryCapacity;
        ov.memory_kind = kind_text.ends_with("dram") ? MemoryKind::DRAM : MemoryKind::Flash;
    } else if (kind_text == "solder_from_ic_area") {
        ov.kind = OverrideKind::SolderFromIcArea;
    } else if (kind_text == "memory_capacity") {
        return fail(ErrorCode::InvalidOverride, 0, "memory_capacity needs a .dram or .flash qualifier");
    } else {
        return fail(ErrorCode::InvalidOverride, 0, "unknown override kind '" + std::string(kind_text) + "'");
    }

    const auto qty_offset = colon + 1 + leading_blanks(text.substr(colon + 1));
    const auto qty_text = trim(text.substr(colon + 1, at - colon - 1));
    double number = 0.0;
    const auto [end, ec] = std::from_chars(qty_text.data(), qty_text.data() + qty_text.size(), number);
    if (ec != std::errc{} || end == qty_text.data()) {
        return fail(ErrorCode::InvalidOverride, qty_offset, "override quantity is not a number");
    }
    if (number < 0.0) {
        return fail(ErrorCode::InvalidOverride, qty_offset, "override quantity must be nonnegative");
    }
    const auto split = static_cast<std::size_t>(end - qty_text.data());
    const auto unit_text = trim(qty_text.substr(split));
    auto unit = parse_quantity_unit(unit_text);
    if (!unit) {
        return fail(ErrorCode::InvalidOverrideUnit, qty_offset + split,
                    "unknown quantity unit '" + std::string(unit_text) + "'");
    }
    if (!unit_fits_kind(ov.kind, *unit)) {
        return fail(ErrorCode::InvalidOverrideUnit, qty_offset + split,
                    "unit '" + std::string(unit_text) + "' does not fit " + std::string(kind_text));
    }
    ov.quantity = Quantity{number, *unit};

    const auto key = trim(text.substr(at + 1));
    if (!is_name(key)) {
        return fail(ErrorCode::InvalidOverride, at + 1, "override factor key is missing or malformed");
    }
    ov.factor_key = std::string(key);
    return OverrideParse{std::move(ov), std::nullopt};
}

} // namespace detail

// Collects every diagnostic; the document holds the profiles that validated.
inline ProfileParseResult parse_profiles_collect(std::string_view content)
{
    using detail::trim;

    ProfileParseResult result;
    auto& diags = result.diagnostics;
    auto report = [&](ErrorCode code, std::size_t line, std::size_t column, std::string message) {
        diags.push_back({code, {line, column}, std::move(message)});
    };

    struct Section {
        std::string name;
        std::size_t line = 0;
        std::size_t name_column = 0;
        std::array<std::optional<HardwareSpecLevel>, kBlockCount> levels{};
        std::vector<ComponentOverride> overrides;
        std::string description;
        bool broken = false;
    };

    // Skip swallows the body of a malformed or unknown section.
    enum class Where { Preamble, Profile, Annotations, Skip };
    Where where = Where::Preamble;
    bool version_seen = false;
    std::optional<Section> current;
    std::map<std::string, std::size_t, std::less<>> names_seen;
    std::set<std::string, std::less<>> annotation_keys;

    auto finish_section = [&]() {
        if (!current) {
            return;
        }
        std::string missing;
        for (auto block : kAllBlocks) {
            if (!current->levels[index_of(block)]) {
                missing += missing.empty() ? "" : ", ";
                missing += block_display_name(block);
            }
        }
        if (!missing.empty()) {
            report(ErrorCode::MissingBlock, current->line, 1, "profile '" + current->name + "' is missing: " + missing);
            current->broken = true;
        }
        if (!current->broken) {
            HardwareProfile::Assignments levels{};
            for (auto block : kAllBlocks) {
                levels[index_of(block)] = *current->levels[index_of(block)];
            }
            result.document.profiles.emplace_back(current->name, levels, std::move(current->overrides),
                                                  std::move(current->description));
        }
        current.reset();
    };

    for (const auto& line : text::split_lines(content)) {
        const auto raw = line.content;
        const auto body = trim(raw);
        const std::size_t indent = detail::leading_blanks(raw);
        if (body.empty() || body.front() == '#') {
            continue;
        }

        if (body.front() == '[') {
            finish_section();
            if (body.back() != ']') {
                report(ErrorCode::SyntaxError, line.number, indent + 1, "section header must end with ']'");
                where = Where::Skip;
                continue;
            }
            if (!version_seen) {
                report(ErrorCode::SyntaxError, line.number, indent + 1, "format_version must precede any section");
                version_seen = true;
            }
            const auto inner = trim(body.substr(1, body.size() - 2));
            if (inner == "annotations") {
                where = Where::Annotations;
                continue;
            }
            if (!inner.starts_with("profile") || (inner.size() > 7 && !text::is_space(inner[7]))) {
                report(ErrorCode::SyntaxError, line.number, indent + 2,
                       "unknown section '" + std::string(inner) + "'");
                where = Where::Skip;
                continue;
            }
            const auto name = trim(inner.substr(7));
            if (!detail::is_name(name)) {
                report(ErrorCode::SyntaxError, line.number, indent + 2, "profile section needs a name: [profile <name>]");
                where = Where::Skip;
                continue;
            }
            const std::size_t name_column = indent + 1 + body.find(name, 8);
            where = Where::Profile;
            current = Section{std::string(name), line.number, name_column};
            if (auto it = names_seen.find(name); it != names_seen.end()) {
                report(ErrorCode::DuplicateProfileName, line.number, name_column,
                       "profile name '" + std::string(name) + "' already used on line " + std::to_string(it->second));
                current->broken = true;
            } else {
                names_seen.emplace(std::string(name), line.number);
            }
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            report(ErrorCode::SyntaxError, line.number, indent + 1, "expected 'key = value'");
            if (current) {
                current->broken = true;
            }
            continue;
        }
        const auto key = trim(body.substr(0, eq));
        const auto value_raw = body.substr(eq + 1);
        const auto value = trim(value_raw);
        const std::size_t key_column = indent + 1;
        const std::size_t value_column = indent + eq + 2 + detail::leading_blanks(value_raw);
        if (key.empty()) {
            report(ErrorCode::SyntaxError, line.number, key_column, "missing key before '='");
            if (current) {
                current->broken = true;
            }
            continue;
        }

        if (where == Where::Preamble) {
            if (key != "format_version") {
                report(ErrorCode::SyntaxError, line.number, key_column,
                       "unexpected key '" + std::string(key) + "' before the first section");
                continue;
            }
            if (version_seen) {
                report(ErrorCode::SyntaxError, line.number, key_column, "format_version given twice");
                continue;
            }
            version_seen = true;
            auto v = text::parse_integer(value);
            if (!v) {
                report(ErrorCode::SyntaxError, line.number, value_column, "format_version must be an integer");
            } else if (*v != kProfileFormatVersion) {
                report(ErrorCode::UnsupportedVersion, line.number, value_column,
                       "unsupported format_version " + std::to_string(*v));
            } else {
                result.document.format_version = *v;
            }
            continue;
        }

        if (where == Where::Skip) {
            continue;
        }

        if (where == Where::Annotations) {
            if (!detail::is_name(key)) {
                report(ErrorCode::SyntaxError, line.number, key_column, "malformed annotation key");
                continue;
            }
            if (!annotation_keys.insert(std::string(key)).second) {
                report(ErrorCode::SyntaxError, line.number, key_column,
                       "annotation '" + std::string(key) + "' given twice");
                continue;
            }
            result.document.annotations.emplace_back(std::string(key), std::string(value));
            continue;
        }

        // Profile section.
        auto& section = *current;
        if (key == "description") {
            section.description = std::string(value);
            continue;
        }
        if (key.starts_with("override.")) {
            const auto block_text = key.substr(9);
            auto block = parse_block(block_text);
            if (!block) {
                report(ErrorCode::UnknownBlock, line.number, key_column + 9,
                       "unknown functional block '" + std::string(block_text) + "'");
                section.broken = true;
                continue;
            }
            auto parsed = detail::parse_override_value(*block, value, line.number, value_column);
            if (parsed.error) {
                diags.push_back(*parsed.error);
                section.broken = true;
                continue;
            }
            section.overrides.push_back(std::move(*parsed.value));
            continue;
        }

        auto block = parse_block(key);
        if (!block) {
            report(ErrorCode::UnknownBlock, line.number, key_column,
                   "unknown functional block '" + std::string(key) + "'");
            section.broken = true;
            continue;
        }
        auto& slot = section.levels[index_of(*block)];
        if (slot) {
            report(ErrorCode::DuplicateBlock, line.number, key_column,
                   std::string(block_display_name(*block)) + " assigned twice in profile '" + section.name + "'");
            section.broken = true;
            continue;
        }
        auto level = parse_level(value);
        if (!level) {
            report(ErrorCode::UnknownLevel, line.number, value_column,
                   "unknown hardware specification level '" + std::string(value) + "'");
            section.broken = true;
            slot = HardwareSpecLevel::HSL0; // counted as present for MissingBlock purposes
            continue;
        }
        if (!is_valid_combination(*block, *level)) {
            report(ErrorCode::ForbiddenCombination, line.number, value_column,
                   std::string(block_display_name(*block)) + " cannot be assigned " + std::string(level_id(*level)));
            section.broken = true;
            slot = *level;
            continue;
        }
        slot = *level;
    }
    finish_section();

    if (!version_seen) {
        report(ErrorCode::SyntaxError, 1, 1, "missing format_version");
    }
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::pair(a.where.line, a.where.column) < std::pair(b.where.line, b.where.column);
    });
    return result;
}

inline ProfileDocument parse_profiles(std::string_view content)
{
    auto result = parse_profiles_collect(content);
    if (!result.ok()) {
        throw ProfileParseError(std::move(result.diagnostics));
    }
    return std::move(result.document);
}

inline ProfileDocument load_profiles(const std::filesystem::path& path)
{
    return parse_profiles(detail::read_file(path));
}

inline std::string render_override(const ComponentOverride& ov)
{
    std::string kind(override_kind_id(ov.kind));
    if (ov.kind == OverrideKind::MemoryCapacity && ov.memory_kind) {
        kind += ".";
        kind += memory_kind_id(*ov.memory_kind);
    }
    return kind + ":" + text::shortest(ov.quantity.value) + std::string(quantity_unit_id(ov.quantity.unit)) + "@" +
           ov.factor_key;
}

// Canonical text form; parse_profiles(render_profiles(doc)) == doc.
inline std::string render_profiles(const ProfileDocument& doc)
{
    std::string out = "format_version = " + std::to_string(doc.format_version) + "\n";
    for (const auto& p : doc.profiles) {
        out += "\n[profile " + p.name() + "]\n";
        if (!p.description().empty()) {
            out += "description = " + p.description() + "\n";
        }
        for (auto block : kAllBlocks) {
            out += std::string(block_id(block)) + " = " + std::string(level_id(p.level(block))) + "\n";
        }
        for (const auto& ov : p.overrides()) {
            out += "override." + std::string(block_id(ov.block)) + " = " + render_override(ov) + "\n";
        }
    }
    if (!doc.annotations.empty()) {
        out += "\n[annotations]\n";
        for (const auto& [key, value] : doc.annotations) {
            out += key + " = " + value + "\n";
        }
    }
    return out;
}

} // namespace edge_lca
