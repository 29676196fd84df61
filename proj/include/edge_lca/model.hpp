#pragma once

#include "edge_lca/error.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edge_lca {

// Functional blocks in their fixed, alphabetical iteration order.
enum class FunctionalBlock {
    Actuators,
    Casing,
    Connectivity,
    Memory,
    Others,
    PCB,
    PowerSupply,
    Processing,
    Security,
    Sensing,
    Transport,
    UserInterface,
};

inline constexpr std::size_t kBlockCount = 12;

inline constexpr std::array<FunctionalBlock, kBlockCount> kAllBlocks = {
    FunctionalBlock::Actuators,  FunctionalBlock::Casing,      FunctionalBlock::Connectivity,
    FunctionalBlock::Memory,     FunctionalBlock::Others,      FunctionalBlock::PCB,
    FunctionalBlock::PowerSupply, FunctionalBlock::Processing, FunctionalBlock::Security,
    FunctionalBlock::Sensing,    FunctionalBlock::Transport,   FunctionalBlock::UserInterface,
};

enum class HardwareSpecLevel { HSL0, HSL1, HSL2, HSL3 };

inline constexpr std::size_t kLevelCount = 4;

inline constexpr std::array<HardwareSpecLevel, kLevelCount> kAllLevels = {
    HardwareSpecLevel::HSL0, HardwareSpecLevel::HSL1, HardwareSpecLevel::HSL2, HardwareSpecLevel::HSL3};

constexpr std::size_t index_of(FunctionalBlock block) noexcept { return static_cast<std::size_t>(block); }
constexpr std::size_t index_of(HardwareSpecLevel level) noexcept { return static_cast<std::size_t>(level); }

// Lower snake case identifiers used in every file format.
constexpr std::string_view block_id(FunctionalBlock block) noexcept
{
    constexpr std::array<std::string_view, kBlockCount> ids = {
        "actuators", "casing",     "connectivity", "memory",   "others",    "pcb",
        "power_supply", "processing", "security",  "sensing",  "transport", "user_interface",
    };
    return ids[index_of(block)];
}

constexpr std::string_view block_display_name(FunctionalBlock block) noexcept
{
    constexpr std::array<std::string_view, kBlockCount> names = {
        "Actuators",   "Casing",     "Connectivity", "Memory",  "Others",    "PCB",
        "PowerSupply", "Processing", "Security",     "Sensing", "Transport", "UserInterface",
    };
    return names[index_of(block)];
}

constexpr std::string_view level_id(HardwareSpecLevel level) noexcept
{
    constexpr std::array<std::string_view, kLevelCount> ids = {"hsl0", "hsl1", "hsl2", "hsl3"};
    return ids[index_of(level)];
}

namespace detail {

constexpr char ascii_lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

constexpr bool iequals(std::string_view a, std::string_view b) noexcept
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ascii_lower(a[i]) != ascii_lower(b[i])) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Accepts the snake case id or the display name, case-insensitively.
constexpr std::optional<FunctionalBlock> parse_block(std::string_view text) noexcept
{
    for (auto block : kAllBlocks) {
        if (detail::iequals(text, block_id(block)) || detail::iequals(text, block_display_name(block))) {
            return block;
        }
    }
    return std::nullopt;
}

constexpr std::optional<HardwareSpecLevel> parse_level(std::string_view text) noexcept
{
    for (auto level : kAllLevels) {
        if (detail::iequals(text, level_id(level))) {
            return level;
        }
    }
    return std::nullopt;
}

// Security only exists as an external IC at HSL-1; HSL-2/3 are not defined.
constexpr bool is_valid_combination(FunctionalBlock block, HardwareSpecLevel level) noexcept
{
    return !(block == FunctionalBlock::Security &&
             (level == HardwareSpecLevel::HSL2 || level == HardwareSpecLevel::HSL3));
}

// (low, typical, up) carbon footprint in kgCO2-eq with 0 <= low <= typical <= up.
class EmissionTriple {
public:
    constexpr EmissionTriple() noexcept = default;

    EmissionTriple(double low, double typical, double up) : low_(low), typical_(typical), up_(up)
    {
        if (!std::isfinite(low) || !std::isfinite(typical) || !std::isfinite(up)) {
            throw Error(ErrorCode::InvalidTriple, "triple components must be finite");
        }
        if (low < 0.0) {
            throw Error(ErrorCode::InvalidTriple, "triple components must be nonnegative");
        }
        if (low > typical || typical > up) {
            throw Error(ErrorCode::InvalidOrdering, "triple must satisfy low <= typical <= up");
        }
    }

    static EmissionTriple uniform(double value) { return EmissionTriple(value, value, value); }

    constexpr double low() const noexcept { return low_; }
    constexpr double typical() const noexcept { return typical_; }
    constexpr double up() const noexcept { return up_; }

    constexpr bool is_zero() const noexcept { return low_ == 0.0 && typical_ == 0.0 && up_ == 0.0; }

    friend constexpr bool operator==(const EmissionTriple&, const EmissionTriple&) noexcept = default;

    // Rounded IEEE addition and multiplication are monotone, so ordering survives both.
    friend EmissionTriple operator+(const EmissionTriple& a, const EmissionTriple& b) noexcept
    {
        EmissionTriple out;
        out.low_ = a.low_ + b.low_;
        out.typical_ = a.typical_ + b.typical_;
        out.up_ = a.up_ + b.up_;
        return out;
    }

    EmissionTriple& operator+=(const EmissionTriple& other) noexcept { return *this = *this + other; }

private:
    friend EmissionTriple triple_scale(const EmissionTriple& a, double k);

    double low_ = 0.0;
    double typical_ = 0.0;
    double up_ = 0.0;
};

inline EmissionTriple triple_add(const EmissionTriple& a, const EmissionTriple& b) noexcept { return a + b; }

inline EmissionTriple triple_scale(const EmissionTriple& a, double k)
{
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw Error(ErrorCode::NegativeQuantity, "scale factor must be a finite nonnegative number");
    }
    EmissionTriple out;
    out.low_ = a.low_ * k;
    out.typical_ = a.typical_ * k;
    out.up_ = a.up_ * k;
    return out;
}

enum class OverrideKind { MassScaled, UnitCount, MemoryCapacity, SolderFromIcArea };

enum class MemoryKind { DRAM, Flash };

enum class QuantityUnit { Gram, Kilogram, Unit, Megabyte, Gigabyte, SquareMillimetre };

constexpr std::string_view override_kind_id(OverrideKind kind) noexcept
{
    switch (kind) {
    case OverrideKind::MassScaled: return "mass_scaled";
    case OverrideKind::UnitCount: return "unit_count";
    case OverrideKind::MemoryCapacity: return "memory_capacity";
    case OverrideKind::SolderFromIcArea: return "solder_from_ic_area";
    }
    return "";
}

constexpr std::string_view memory_kind_id(MemoryKind kind) noexcept
{
    return kind == MemoryKind::DRAM ? "dram" : "flash";
}

constexpr std::string_view quantity_unit_id(QuantityUnit unit) noexcept
{
    switch (unit) {
    case QuantityUnit::Gram: return "g";
    case QuantityUnit::Kilogram: return "kg";
    case QuantityUnit::Unit: return "units";
    case QuantityUnit::Megabyte: return "MB";
    case QuantityUnit::Gigabyte: return "GB";
    case QuantityUnit::SquareMillimetre: return "mm2";
    }
    return "";
}

constexpr std::optional<QuantityUnit> parse_quantity_unit(std::string_view text) noexcept
{
    if (text == "g") return QuantityUnit::Gram;
    if (text == "kg") return QuantityUnit::Kilogram;
    if (text == "units" || text == "unit") return QuantityUnit::Unit;
    if (text == "MB") return QuantityUnit::Megabyte;
    if (text == "GB") return QuantityUnit::Gigabyte;
    if (text == "mm2") return QuantityUnit::SquareMillimetre;
    return std::nullopt;
}

// Whether a quantity unit makes sense for an override kind.
constexpr bool unit_fits_kind(OverrideKind kind, QuantityUnit unit) noexcept
{
    switch (kind) {
    case OverrideKind::MassScaled: return unit == QuantityUnit::Gram || unit == QuantityUnit::Kilogram;
    case OverrideKind::UnitCount: return unit == QuantityUnit::Unit;
    case OverrideKind::MemoryCapacity: return unit == QuantityUnit::Megabyte || unit == QuantityUnit::Gigabyte;
    case OverrideKind::SolderFromIcArea: return unit == QuantityUnit::SquareMillimetre;
    }
    return false;
}

struct Quantity {
    double value = 0.0;
    QuantityUnit unit = QuantityUnit::Gram;

    friend bool operator==(const Quantity&, const Quantity&) = default;
};

// Replaces a block's table triple with a value computed from a physical quantity.
struct ComponentOverride {
    FunctionalBlock block = FunctionalBlock::Actuators;
    OverrideKind kind = OverrideKind::MassScaled;
    Quantity quantity;
    std::string factor_key;
    std::optional<MemoryKind> memory_kind; // MemoryCapacity only

    friend bool operator==(const ComponentOverride&, const ComponentOverride&) = default;
};

class HardwareProfile {
public:
    using Assignments = std::array<HardwareSpecLevel, kBlockCount>;

    // Rejects missing blocks and Security at HSL-2/3.
    HardwareProfile(std::string name, const std::map<FunctionalBlock, HardwareSpecLevel>& assignments,
                    std::vector<ComponentOverride> overrides = {}, std::string description = {})
        : name_(std::move(name)), overrides_(std::move(overrides)), description_(std::move(description))
    {
        std::string missing;
        for (auto block : kAllBlocks) {
            auto it = assignments.find(block);
            if (it == assignments.end()) {
                missing += missing.empty() ? "" : ", ";
                missing += block_display_name(block);
                continue;
            }
            levels_[index_of(block)] = it->second;
        }
        if (!missing.empty()) {
            throw Error(ErrorCode::InvalidProfile, "profile '" + name_ + "' is missing blocks: " + missing);
        }
        validate();
    }

    HardwareProfile(std::string name, const Assignments& levels, std::vector<ComponentOverride> overrides = {},
                    std::string description = {})
        : name_(std::move(name)), levels_(levels), overrides_(std::move(overrides)),
          description_(std::move(description))
    {
        validate();
    }

    // Every block at `level`; Security is capped at HSL-1.
    static HardwareProfile uniform(std::string name, HardwareSpecLevel level)
    {
        Assignments levels{};
        for (auto block : kAllBlocks) {
            levels[index_of(block)] = is_valid_combination(block, level) ? level : HardwareSpecLevel::HSL1;
        }
        return HardwareProfile(std::move(name), levels);
    }

    const std::string& name() const noexcept { return name_; }
    HardwareSpecLevel level(FunctionalBlock block) const noexcept { return levels_[index_of(block)]; }
    const Assignments& levels() const noexcept { return levels_; }
    const std::vector<ComponentOverride>& overrides() const noexcept { return overrides_; }
    const std::string& description() const noexcept { return description_; }

    HardwareProfile with_level(FunctionalBlock block, HardwareSpecLevel level) const
    {
        auto levels = levels_;
        levels[index_of(block)] = level;
        return HardwareProfile(name_, levels, overrides_, description_);
    }

    friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;

private:
    void validate() const
    {
        if (!is_valid_combination(FunctionalBlock::Security, levels_[index_of(FunctionalBlock::Security)])) {
            throw Error(ErrorCode::ForbiddenCombination,
                        "profile '" + name_ + "' assigns Security to " +
                            std::string(level_id(levels_[index_of(FunctionalBlock::Security)])));
        }
        for (const auto& ov : overrides_) {
            if (!(ov.quantity.value >= 0.0) || !std::isfinite(ov.quantity.value)) {
                throw Error(ErrorCode::NegativeQuantity,
                            "override on " + std::string(block_id(ov.block)) + " has a negative quantity");
            }
        }
    }

    std::string name_;
    Assignments levels_{};
    std::vector<ComponentOverride> overrides_;
    std::string description_;
};

// Per-block contributions and their componentwise sum.
class FootprintEstimate {
public:
    using PerBlock = std::array<EmissionTriple, kBlockCount>;

    FootprintEstimate(std::string profile_name, const PerBlock& per_block)
        : profile_name_(std::move(profile_name)), per_block_(per_block)
    {
        for (const auto& triple : per_block_) {
            total_ += triple;
        }
    }

    const std::string& profile_name() const noexcept { return profile_name_; }
    const PerBlock& per_block() const noexcept { return per_block_; }
    const EmissionTriple& block(FunctionalBlock b) const noexcept { return per_block_[index_of(b)]; }
    const EmissionTriple& total() const noexcept { return total_; }

    friend bool operator==(const FootprintEstimate&, const FootprintEstimate&) = default;

private:
    std::string profile_name_;
    PerBlock per_block_{};
    EmissionTriple total_;
};

} // namespace edge_lca
