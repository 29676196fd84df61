#pragma once

#include "edge_lca/error.hpp"
#include "edge_lca/model.hpp"
#include "edge_lca/text.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edge_lca {

inline constexpr std::size_t kValidCellCount = kBlockCount * kLevelCount - 2;

struct TableMetadata {
    std::string source;
    std::string version;
    std::string method = "ReCiPe 2016 v1.1 (H)";

    friend bool operator==(const TableMetadata&, const TableMetadata&) = default;
};

// (FunctionalBlock, HSL) -> EmissionTriple for all 46 valid cells.
class EmissionFactorTable {
public:
    using Cells = std::array<std::array<EmissionTriple, kLevelCount>, kBlockCount>;

    EmissionFactorTable(const Cells& cells, TableMetadata metadata = {})
        : cells_(cells), metadata_(std::move(metadata))
    {
        for (auto level : {HardwareSpecLevel::HSL2, HardwareSpecLevel::HSL3}) {
            cells_[index_of(FunctionalBlock::Security)][index_of(level)] = EmissionTriple{};
        }
    }

    const EmissionTriple& lookup(FunctionalBlock block, HardwareSpecLevel level) const
    {
        if (!is_valid_combination(block, level)) {
            throw Error(ErrorCode::ForbiddenCell, std::string(block_display_name(block)) + " has no " +
                                                      std::string(level_id(level)) + " cell");
        }
        return cells_[index_of(block)][index_of(level)];
    }

    std::optional<EmissionTriple> cell(FunctionalBlock block, HardwareSpecLevel level) const noexcept
    {
        if (!is_valid_combination(block, level)) {
            return std::nullopt;
        }
        return cells_[index_of(block)][index_of(level)];
    }

    const TableMetadata& metadata() const noexcept { return metadata_; }
    const Cells& cells() const noexcept { return cells_; }

    // Sum of every valid cell at `level` across blocks.
    EmissionTriple column_total(HardwareSpecLevel level) const
    {
        EmissionTriple total;
        for (auto block : kAllBlocks) {
            if (auto c = cell(block, level)) {
                total += *c;
            }
        }
        return total;
    }

    friend bool operator==(const EmissionFactorTable&, const EmissionFactorTable&) = default;

private:
    Cells cells_{};
    TableMetadata metadata_;
};

inline EmissionTriple lookup(const EmissionFactorTable& table, FunctionalBlock block, HardwareSpecLevel level)
{
    return table.lookup(block, level);
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void expect_header(const text::Line& line, std::string_view expected)
{
    std::string normalized;
    for (const auto& f : text::split_fields(line.content)) {
        normalized += normalized.empty() ? "" : ",";
        normalized += f.value;
    }
    if (normalized != expected) {
        throw Error(ErrorCode::ParseError, "expected header '" + std::string(expected) + "'", {line.number, 1});
    }
}

inline void expect_field_count(const std::vector<text::Field>& fields, std::size_t count, const text::Line& line)
{
    if (fields.size() != count) {
        throw Error(ErrorCode::ParseError,
                    "expected " + std::to_string(count) + " fields, found " + std::to_string(fields.size()),
                    {line.number, 1});
    }
}

} // namespace detail

// Parses the `block,level,low,typical,up` table format.
inline EmissionFactorTable parse_factor_table(std::string_view content)
{
    EmissionFactorTable::Cells cells{};
    std::array<std::array<bool, kLevelCount>, kBlockCount> seen{};
    TableMetadata metadata;
    bool header_seen = false;

    for (const auto& line : text::split_lines(content)) {
        auto trimmed = text::trim(line.content);
        if (trimmed.empty()) {
            continue;
        }
        if (trimmed.front() == '#') {
            auto directive = text::trim(trimmed.substr(1));
            if (directive.starts_with('@')) {
                auto colon = directive.find(':');
                if (colon == std::string_view::npos) {
                    throw Error(ErrorCode::ParseError, "metadata directive needs ':'",
                                {line.number, text::leading_blanks(line.content) + 1});
                }
                auto key = text::trim(directive.substr(1, colon - 1));
                auto value = std::string(text::trim(directive.substr(colon + 1)));
                if (key == "source") {
                    metadata.source = value;
                } else if (key == "version") {
                    metadata.version = value;
                } else if (key == "method") {
                    metadata.method = value;
                }
            }
            continue;
        }
        if (!header_seen) {
            detail::expect_header(line, "block,level,low,typical,up");
            header_seen = true;
            continue;
        }

        auto fields = text::split_fields(line.content);
        detail::expect_field_count(fields, 5, line);
        auto block = parse_block(fields[0].value);
        if (!block) {
            throw Error(ErrorCode::UnknownBlock, "unknown functional block '" + std::string(fields[0].value) + "'",
                        {line.number, fields[0].column});
        }
        auto level = parse_level(fields[1].value);
        if (!level) {
            throw Error(ErrorCode::UnknownLevel, "unknown level '" + std::string(fields[1].value) + "'",
                        {line.number, fields[1].column});
        }
        if (!is_valid_combination(*block, *level)) {
            throw Error(ErrorCode::ForbiddenCell,
                        "(" + std::string(block_display_name(*block)) + ", " + std::string(level_id(*level)) +
                            ") is not a valid cell",
                        {line.number, fields[0].column});
        }
        auto& was_seen = seen[index_of(*block)][index_of(*level)];
        if (was_seen) {
            throw Error(ErrorCode::DuplicateCell,
                        "cell (" + std::string(block_id(*block)) + ", " + std::string(level_id(*level)) +
                            ") appears twice",
                        {line.number, fields[0].column});
        }
        was_seen = true;

        double low = text::require_double(fields[2], line.number, "low");
        double typical = text::require_double(fields[3], line.number, "typical");
        double up = text::require_double(fields[4], line.number, "up");
        try {
            cells[index_of(*block)][index_of(*level)] = EmissionTriple(low, typical, up);
        } catch (const Error& e) {
            throw Error(e.code(), e.detail(), {line.number, fields[2].column});
        }
    }

    if (!header_seen) {
        throw Error(ErrorCode::ParseError, "missing header 'block,level,low,typical,up'");
    }

    std::string missing;
    for (auto block : kAllBlocks) {
        for (auto level : kAllLevels) {
            if (is_valid_combination(block, level) && !seen[index_of(block)][index_of(level)]) {
                missing += missing.empty() ? "" : " ";
                missing += "(" + std::string(block_id(block)) + "," + std::string(level_id(level)) + ")";
            }
        }
    }
    if (!missing.empty()) {
        throw Error(ErrorCode::MissingCell, "missing cells: " + missing);
    }
    return EmissionFactorTable(cells, std::move(metadata));
}

inline EmissionFactorTable load_factor_table(const std::filesystem::path& path)
{
    return parse_factor_table(detail::read_file(path));
}

// Values use the shortest round-trip representation, so reloading is bit-exact.
inline std::string serialize_factor_table(const EmissionFactorTable& table)
{
    std::string out;
    const auto& meta = table.metadata();
    if (!meta.source.empty()) out += "# @source: " + meta.source + "\n";
    if (!meta.version.empty()) out += "# @version: " + meta.version + "\n";
    if (!meta.method.empty()) out += "# @method: " + meta.method + "\n";
    out += "block,level,low,typical,up\n";
    for (auto block : kAllBlocks) {
        for (auto level : kAllLevels) {
            auto c = table.cell(block, level);
            if (!c) {
                continue;
            }
            out += std::string(block_id(block)) + "," + std::string(level_id(level)) + "," +
                   text::shortest(c->low()) + "," + text::shortest(c->typical()) + "," + text::shortest(c->up()) +
                   "\n";
        }
    }
    return out;
}

enum class FactorUnit { KgCo2ePerKg, KgCo2ePerUnit, KgCo2ePerMm2, GbPerMm2, Millimetre, GramPerCm3 };

constexpr std::string_view factor_unit_id(FactorUnit unit) noexcept
{
    switch (unit) {
    case FactorUnit::KgCo2ePerKg: return "kgCO2e/kg";
    case FactorUnit::KgCo2ePerUnit: return "kgCO2e/unit";
    case FactorUnit::KgCo2ePerMm2: return "kgCO2e/mm2";
    case FactorUnit::GbPerMm2: return "Gb/mm2";
    case FactorUnit::Millimetre: return "mm";
    case FactorUnit::GramPerCm3: return "g/cm3";
    }
    return "";
}

constexpr std::optional<FactorUnit> parse_factor_unit(std::string_view text) noexcept
{
    for (auto unit : {FactorUnit::KgCo2ePerKg, FactorUnit::KgCo2ePerUnit, FactorUnit::KgCo2ePerMm2,
                      FactorUnit::GbPerMm2, FactorUnit::Millimetre, FactorUnit::GramPerCm3}) {
        if (text == factor_unit_id(unit)) {
            return unit;
        }
    }
    return std::nullopt;
}

struct UnitFactor {
    std::string key;
    double value = 0.0;
    FactorUnit unit = FactorUnit::KgCo2ePerKg;
    std::string note;

    friend bool operator==(const UnitFactor&, const UnitFactor&) = default;
};

namespace factor_keys {
inline constexpr std::string_view li_ion_per_kg = "li_ion_per_kg";
inline constexpr std::string_view ndfeb_speaker_per_kg = "ndfeb_speaker_per_kg";
inline constexpr std::string_view alkaline_aaa_per_unit = "alkaline_aaa_per_unit";
inline constexpr std::string_view alkaline_aa_per_unit = "alkaline_aa_per_unit";
inline constexpr std::string_view dram_density = "dram_density";
inline constexpr std::string_view flash_density = "flash_density";
inline constexpr std::string_view solder_thickness = "solder_thickness";
inline constexpr std::string_view solder_density = "solder_density";
} // namespace factor_keys

inline constexpr std::array<std::pair<std::string_view, FactorUnit>, 8> kRequiredUnitFactors = {{
    {factor_keys::li_ion_per_kg, FactorUnit::KgCo2ePerKg},
    {factor_keys::ndfeb_speaker_per_kg, FactorUnit::KgCo2ePerKg},
    {factor_keys::alkaline_aaa_per_unit, FactorUnit::KgCo2ePerUnit},
    {factor_keys::alkaline_aa_per_unit, FactorUnit::KgCo2ePerUnit},
    {factor_keys::dram_density, FactorUnit::GbPerMm2},
    {factor_keys::flash_density, FactorUnit::GbPerMm2},
    {factor_keys::solder_thickness, FactorUnit::Millimetre},
    {factor_keys::solder_density, FactorUnit::GramPerCm3},
}};

// Named scaling constants. Entries keep file order; the eight built-ins are mandatory.
class UnitFactorRegistry {
public:
    explicit UnitFactorRegistry(std::vector<UnitFactor> entries) : entries_(std::move(entries))
    {
        for (const auto& e : entries_) {
            if (!(e.value > 0.0) || !std::isfinite(e.value)) {
                throw Error(ErrorCode::ParseError, "unit factor '" + e.key + "' must be strictly positive");
            }
        }
        for (const auto& [key, unit] : kRequiredUnitFactors) {
            const auto* entry = find(key);
            if (entry == nullptr) {
                throw Error(ErrorCode::MissingUnitFactor, "required unit factor '" + std::string(key) + "' is missing");
            }
            if (entry->unit != unit) {
                throw Error(ErrorCode::InvalidUnit, "unit factor '" + std::string(key) + "' must be in " +
                                                        std::string(factor_unit_id(unit)));
            }
        }
    }

    const UnitFactor* find(std::string_view key) const noexcept
    {
        for (const auto& e : entries_) {
            if (e.key == key) {
                return &e;
            }
        }
        return nullptr;
    }

    // Resolves `key` and checks that its unit is `expected`.
    double require(std::string_view key, FactorUnit expected) const
    {
        const auto* entry = find(key);
        if (entry == nullptr) {
            throw Error(ErrorCode::UnknownFactorKey, "unknown unit factor '" + std::string(key) + "'");
        }
        if (entry->unit != expected) {
            throw Error(ErrorCode::InvalidOverrideUnit, "unit factor '" + std::string(key) + "' is in " +
                                                            std::string(factor_unit_id(entry->unit)) + ", expected " +
                                                            std::string(factor_unit_id(expected)));
        }
        return entry->value;
    }

    const std::vector<UnitFactor>& entries() const noexcept { return entries_; }

    friend bool operator==(const UnitFactorRegistry&, const UnitFactorRegistry&) = default;

private:
    std::vector<UnitFactor> entries_;
};

inline UnitFactorRegistry parse_unit_registry(std::string_view content)
{
    std::vector<UnitFactor> entries;
    std::map<std::string, std::size_t, std::less<>> seen;
    bool header_seen = false;

    for (const auto& line : text::split_lines(content)) {
        if (text::is_blank_or_comment(line.content)) {
            continue;
        }
        if (!header_seen) {
            detail::expect_header(line, "key,value,unit,note");
            header_seen = true;
            continue;
        }
        // The note is free text and may itself contain commas.
        auto fields = text::split_fields(line.content);
        if (fields.size() < 3) {
            throw Error(ErrorCode::ParseError, "expected 'key,value,unit,note'", {line.number, 1});
        }
        std::string note;
        if (fields.size() >= 4) {
            auto note_start = fields[3].column - 1;
            note = std::string(text::trim(line.content.substr(note_start)));
        }
        const auto& key = fields[0];
        if (key.value.empty()) {
            throw Error(ErrorCode::ParseError, "empty key", {line.number, key.column});
        }
        if (auto it = seen.find(key.value); it != seen.end()) {
            throw Error(ErrorCode::ParseError,
                        "duplicate key '" + std::string(key.value) + "' (first on line " + std::to_string(it->second) +
                            ")",
                        {line.number, key.column});
        }
        seen.emplace(std::string(key.value), line.number);

        double value = text::require_double(fields[1], line.number, "value");
        if (!(value > 0.0)) {
            throw Error(ErrorCode::ParseError, "unit factor value must be strictly positive",
                        {line.number, fields[1].column});
        }
        auto unit = parse_factor_unit(fields[2].value);
        if (!unit) {
            throw Error(ErrorCode::InvalidUnit, "unknown unit '" + std::string(fields[2].value) + "'",
                        {line.number, fields[2].column});
        }
        entries.push_back({std::string(key.value), value, *unit, std::move(note)});
    }
    if (!header_seen) {
        throw Error(ErrorCode::ParseError, "missing header 'key,value,unit,note'");
    }
    return UnitFactorRegistry(std::move(entries));
}

inline UnitFactorRegistry load_unit_registry(const std::filesystem::path& path)
{
    return parse_unit_registry(detail::read_file(path));
}

inline std::string serialize_unit_registry(const UnitFactorRegistry& registry)
{
    std::string out = "key,value,unit,note\n";
    for (const auto& e : registry.entries()) {
        out += e.key + "," + text::shortest(e.value) + "," + std::string(factor_unit_id(e.unit)) + "," + e.note + "\n";
    }
    return out;
}

} // namespace edge_lca
