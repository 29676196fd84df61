#pragma once

#include "edge_lca/factors.hpp"
#include "edge_lca/profiles_io.hpp"
#include "edge_lca/projection.hpp"

#include <edge_lca/embedded_data.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

// Bundled data: files from $EDGE_LCA_DATA_DIR when present, otherwise the
// copies compiled into the binary.
namespace edge_lca::defaults {

inline constexpr std::string_view kDataDirEnv = "EDGE_LCA_DATA_DIR";

inline std::optional<std::filesystem::path> data_dir()
{
    const char* env = std::getenv(std::string(kDataDirEnv).c_str());
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    return std::filesystem::path(env);
}

// Text of a bundled file, by its file name in data/.
inline std::string bundled_text(std::string_view file_name)
{
    if (auto dir = data_dir()) {
        auto candidate = *dir / file_name;
        if (file_name == "usecases.iotprof" && !std::filesystem::exists(candidate)) {
            candidate = *dir / "profiles" / file_name;
        }
        if (std::filesystem::is_regular_file(candidate)) {
            return detail::read_file(candidate);
        }
    }
    if (file_name == "factors.csv") return std::string(embedded::factors_csv);
    if (file_name == "units.csv") return std::string(embedded::units_csv);
    if (file_name == "trends.csv") return std::string(embedded::trends_csv);
    if (file_name == "scenarios.csv") return std::string(embedded::scenarios_csv);
    if (file_name == "usecases.iotprof") return std::string(embedded::usecases_iotprof);
    throw Error(ErrorCode::IoError, "no bundled file named '" + std::string(file_name) + "'");
}

inline EmissionFactorTable factor_table() { return parse_factor_table(bundled_text("factors.csv")); }
inline UnitFactorRegistry unit_registry() { return parse_unit_registry(bundled_text("units.csv")); }
inline std::vector<DeploymentTrend> trends() { return parse_trends(bundled_text("trends.csv")); }
inline std::vector<Scenario> scenarios() { return parse_scenarios(bundled_text("scenarios.csv")); }
inline ProfileDocument use_cases() { return parse_profiles(bundled_text("usecases.iotprof")); }

} // namespace edge_lca::defaults
