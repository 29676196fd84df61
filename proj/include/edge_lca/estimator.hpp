#pragma once

#include "edge_lca/error.hpp"
#include "edge_lca/factors.hpp"
#include "edge_lca/model.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace edge_lca {

struct AppliedOverride {
    FunctionalBlock block = FunctionalBlock::Actuators;
    ComponentOverride override_spec;
    EmissionTriple result;
};

struct EvaluationReport {
    FootprintEstimate estimate;
    std::vector<AppliedOverride> applied_overrides;
    std::vector<std::string> warnings;
};

// Capacity in Gb: 1 MB = 0.008 Gb, 1 GB = 8 Gb.
inline double capacity_gigabits(const Quantity& capacity)
{
    if (!(capacity.value >= 0.0)) {
        throw Error(ErrorCode::NegativeQuantity, "memory capacity must be nonnegative");
    }
    switch (capacity.unit) {
    case QuantityUnit::Megabyte: return capacity.value * 0.008;
    case QuantityUnit::Gigabyte: return capacity.value * 8.0;
    default:
        throw Error(ErrorCode::InvalidOverrideUnit, "memory capacity must be given in MB or GB, not " +
                                                        std::string(quantity_unit_id(capacity.unit)));
    }
}

// Equivalent silicon die area (mm2) for a stand-alone memory of the given capacity.
inline double memory_area(const Quantity& capacity, MemoryKind kind, const UnitFactorRegistry& units)
{
    const double gigabits = capacity_gigabits(capacity);
    const double density = units.require(kind == MemoryKind::DRAM ? factor_keys::dram_density
                                                                  : factor_keys::flash_density,
                                         FactorUnit::GbPerMm2);
    return gigabits / density;
}

// Solder paste mass (mg) for a total IC area: area x thickness x density.
// mm2 * mm * g/cm3 = mm3 * 1e-3 g/mm3 = mg.
inline double solder_mass(double total_ic_area_mm2, const UnitFactorRegistry& units)
{
    if (!(total_ic_area_mm2 >= 0.0)) {
        throw Error(ErrorCode::NegativeQuantity, "IC area must be nonnegative");
    }
    const double thickness_mm = units.require(factor_keys::solder_thickness, FactorUnit::Millimetre);
    const double density_g_cm3 = units.require(factor_keys::solder_density, FactorUnit::GramPerCm3);
    return total_ic_area_mm2 * thickness_mm * density_g_cm3;
}

// Footprint of one override in isolation, as a degenerate triple.
inline EmissionTriple evaluate_override(const ComponentOverride& ov, const UnitFactorRegistry& units)
{
    if (!unit_fits_kind(ov.kind, ov.quantity.unit)) {
        throw Error(ErrorCode::InvalidOverrideUnit, std::string(override_kind_id(ov.kind)) + " override on " +
                                                        std::string(block_id(ov.block)) + " cannot use unit " +
                                                        std::string(quantity_unit_id(ov.quantity.unit)));
    }
    if (!(ov.quantity.value >= 0.0)) {
        throw Error(ErrorCode::NegativeQuantity, "override quantity must be nonnegative");
    }

    double kg_co2e = 0.0;
    switch (ov.kind) {
    case OverrideKind::MassScaled: {
        const double kg = ov.quantity.unit == QuantityUnit::Gram ? ov.quantity.value / 1000.0 : ov.quantity.value;
        kg_co2e = kg * units.require(ov.factor_key, FactorUnit::KgCo2ePerKg);
        break;
    }
    case OverrideKind::UnitCount:
        kg_co2e = ov.quantity.value * units.require(ov.factor_key, FactorUnit::KgCo2ePerUnit);
        break;
    case OverrideKind::MemoryCapacity: {
        if (!ov.memory_kind) {
            throw Error(ErrorCode::InvalidOverride, "memory_capacity override needs a dram or flash qualifier");
        }
        const double area = memory_area(ov.quantity, *ov.memory_kind, units);
        kg_co2e = area * units.require(ov.factor_key, FactorUnit::KgCo2ePerMm2);
        break;
    }
    case OverrideKind::SolderFromIcArea: {
        const double kg = solder_mass(ov.quantity.value, units) * 1e-6;
        kg_co2e = kg * units.require(ov.factor_key, FactorUnit::KgCo2ePerKg);
        break;
    }
    }
    return EmissionTriple::uniform(kg_co2e);
}

// Table triple per block, unless overrides target the block: then the sum of
// its override results replaces the table triple.
inline EvaluationReport evaluate_profile(const HardwareProfile& profile, const EmissionFactorTable& table,
                                         const UnitFactorRegistry& units)
{
    FootprintEstimate::PerBlock per_block{};
    std::array<bool, kBlockCount> overridden{};
    std::array<EmissionTriple, kBlockCount> override_sum{};
    EvaluationReport report{FootprintEstimate(profile.name(), per_block), {}, {}};

    for (const auto& ov : profile.overrides()) {
        auto result = evaluate_override(ov, units);
        overridden[index_of(ov.block)] = true;
        override_sum[index_of(ov.block)] += result;
        report.applied_overrides.push_back({ov.block, ov, result});
    }

    for (auto block : kAllBlocks) {
        const auto level = profile.level(block);
        const auto& base = table.lookup(block, level);
        if (!overridden[index_of(block)]) {
            per_block[index_of(block)] = base;
            continue;
        }
        per_block[index_of(block)] = override_sum[index_of(block)];
        if (level == HardwareSpecLevel::HSL0 && base.is_zero()) {
            report.warnings.push_back("override targets " + std::string(block_id(block)) +
                                      " which is assigned hsl0 (feature absent)");
        }
    }
    report.estimate = FootprintEstimate(profile.name(), per_block);
    return report;
}

// Error from batch evaluation, carrying the index of the first failing profile.
class BatchError : public Error {
public:
    BatchError(std::size_t index, const std::string& profile_name, const Error& cause)
        : Error(cause.code(), "profile #" + std::to_string(index) + " '" + profile_name + "': " + cause.detail(),
                cause.where()),
          index_(index)
    {
    }

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Order-preserving; runs on up to `max_threads` workers (0 = hardware concurrency).
inline std::vector<EvaluationReport> batch_evaluate(std::span<const HardwareProfile> profiles,
                                                    const EmissionFactorTable& table, const UnitFactorRegistry& units,
                                                    unsigned max_threads = 0)
{
    const std::size_t n = profiles.size();
    std::vector<std::optional<EvaluationReport>> slots(n);
    std::vector<std::exception_ptr> failures(n);

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < n; i += stride) {
            try {
                slots[i] = evaluate_profile(profiles[i], table, units);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    unsigned workers = max_threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : max_threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
    }

    std::vector<EvaluationReport> reports;
    reports.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (failures[i]) {
            try {
                std::rethrow_exception(failures[i]);
            } catch (const Error& e) {
                throw BatchError(i, profiles[i].name(), e);
            }
        }
        reports.push_back(std::move(*slots[i]));
    }
    return reports;
}

inline std::vector<EvaluationReport> batch_evaluate(const std::vector<HardwareProfile>& profiles,
                                                    const EmissionFactorTable& table, const UnitFactorRegistry& units,
                                                    unsigned max_threads = 0)
{
    return batch_evaluate(std::span<const HardwareProfile>(profiles), table, units, max_threads);
}

} // namespace edge_lca
