#pragma once

#include "edge_lca/error.hpp"
#include "edge_lca/factors.hpp"
#include "edge_lca/model.hpp"
#include "edge_lca/text.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace edge_lca {

struct SensitivityResult {
    HardwareProfile min_profile;
    HardwareProfile max_profile;
    EmissionTriple min_total; // full triple of min_profile
    EmissionTriple max_total; // full triple of max_profile
    double spread_ratio = 1.0;         // max_total.up / min_total.low
    double rounded_spread_ratio = 1.0; // same, with the minimum rounded to one decimal

    double min_low() const noexcept { return min_total.low(); }
    double max_up() const noexcept { return max_total.up(); }
};

namespace detail {

inline EmissionTriple profile_total(const HardwareProfile& profile, const EmissionFactorTable& table)
{
    EmissionTriple total;
    for (auto block : kAllBlocks) {
        total += table.lookup(block, profile.level(block));
    }
    return total;
}

} // namespace detail

// Extrema over the whole valid profile space. Blocks are independent, so the
// minimum of the summed `low` (and maximum of summed `up`) is reached by
// choosing each block's extreme level on its own. Ties go to the lower HSL.
inline SensitivityResult scan_extrema(const EmissionFactorTable& table)
{
    HardwareProfile::Assignments min_levels{};
    HardwareProfile::Assignments max_levels{};
    for (auto block : kAllBlocks) {
        std::optional<HardwareSpecLevel> argmin;
        std::optional<HardwareSpecLevel> argmax;
        for (auto level : kAllLevels) {
            auto c = table.cell(block, level);
            if (!c) {
                continue;
            }
            if (!argmin || c->low() < table.lookup(block, *argmin).low()) {
                argmin = level;
            }
            if (!argmax || c->up() > table.lookup(block, *argmax).up()) {
                argmax = level;
            }
        }
        min_levels[index_of(block)] = *argmin;
        max_levels[index_of(block)] = *argmax;
    }

    HardwareProfile min_profile("framework_min", min_levels, {}, "per-block minimum of low");
    HardwareProfile max_profile("framework_max", max_levels, {}, "per-block maximum of up");
    auto min_total = detail::profile_total(min_profile, table);
    auto max_total = detail::profile_total(max_profile, table);

    const double min_low = min_total.low();
    const double rounded_min = std::round(min_low * 10.0) / 10.0;
    auto ratio = [&](double denom) { return denom > 0.0 ? max_total.up() / denom : INFINITY; };

    return SensitivityResult{std::move(min_profile), std::move(max_profile), min_total, max_total, ratio(min_low),
                             ratio(rounded_min)};
}

using BlockShares = std::array<double, kBlockCount>;

// Typical-value share of each block in the estimate's total.
inline BlockShares block_contributions(const FootprintEstimate& estimate)
{
    const double total = estimate.total().typical();
    if (!(total > 0.0)) {
        throw Error(ErrorCode::ZeroTotal, "estimate '" + estimate.profile_name() + "' has a zero typical total");
    }
    BlockShares shares{};
    for (auto block : kAllBlocks) {
        shares[index_of(block)] = estimate.block(block).typical() / total;
    }
    return shares;
}

// Per block, the four level cells; N/A cells stay empty.
using LevelSeries = std::array<std::array<std::optional<EmissionTriple>, kLevelCount>, kBlockCount>;

inline LevelSeries level_series(const EmissionFactorTable& table)
{
    LevelSeries series{};
    for (auto block : kAllBlocks) {
        for (auto level : kAllLevels) {
            series[index_of(block)][index_of(level)] = table.cell(block, level);
        }
    }
    return series;
}

// Chart-ready CSV: block,level,low,typical,up,absent. Absent cells leave the values empty.
inline std::string render_level_series_csv(const LevelSeries& series)
{
    std::string out = "block,level,low,typical,up,absent\n";
    for (auto block : kAllBlocks) {
        for (auto level : kAllLevels) {
            out += std::string(block_id(block)) + "," + std::string(level_id(level)) + ",";
            const auto& cell = series[index_of(block)][index_of(level)];
            if (cell) {
                out += text::fixed(cell->low()) + "," + text::fixed(cell->typical()) + "," + text::fixed(cell->up()) +
                       ",0\n";
            } else {
                out += ",,,1\n";
            }
        }
    }
    return out;
}

} // namespace edge_lca
