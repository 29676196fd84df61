#pragma once

#include "edge_lca/error.hpp"
#include "edge_lca/factors.hpp"
#include "edge_lca/model.hpp"
#include "edge_lca/text.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace edge_lca {

inline constexpr int kFirstTrendYear = 2018;
inline constexpr int kLastTrendYear = 2028;

// Billions of devices times kgCO2-eq per device gives 1e9 kg, i.e. MtCO2-eq.
inline constexpr double kDevicesPerBillion = 1e9;
inline constexpr double kMegatonnesPerKg = 1e-9;
inline constexpr double kMtPerBillionDeviceKg = kDevicesPerBillion * kMegatonnesPerKg;
static_assert(kMtPerBillionDeviceKg == 1.0);

enum class TrendKind { Cumulative, Annual };

constexpr std::string_view trend_kind_id(TrendKind kind) noexcept
{
    return kind == TrendKind::Cumulative ? "cumulative" : "annual";
}

// Device counts (billions) per year for one source.
class DeploymentTrend {
public:
    DeploymentTrend(std::string source, TrendKind kind, std::map<int, double> points,
                    std::set<int> extrapolated_years = {})
        : source_(std::move(source)), kind_(kind), points_(std::move(points)),
          extrapolated_(std::move(extrapolated_years))
    {
        for (const auto& [year, value] : points_) {
            if (year < kFirstTrendYear || year > kLastTrendYear) {
                throw Error(ErrorCode::InvalidTrend, source_ + ": year " + std::to_string(year) + " outside [" +
                                                         std::to_string(kFirstTrendYear) + ", " +
                                                         std::to_string(kLastTrendYear) + "]");
            }
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw Error(ErrorCode::InvalidTrend,
                            source_ + ": device count for " + std::to_string(year) + " must be positive");
            }
        }
        if (kind_ == TrendKind::Cumulative) {
            for (auto it = points_.begin(); it != points_.end() && std::next(it) != points_.end(); ++it) {
                if (!(std::next(it)->second > it->second)) {
                    throw Error(ErrorCode::InvalidTrend, source_ + ": cumulative series must be strictly increasing (" +
                                                             std::to_string(std::next(it)->first) + ")");
                }
            }
        }
        for (int year : extrapolated_) {
            if (!points_.contains(year)) {
                throw Error(ErrorCode::InvalidTrend,
                            source_ + ": extrapolated year " + std::to_string(year) + " has no value");
            }
        }
    }

    const std::string& source() const noexcept { return source_; }
    TrendKind kind() const noexcept { return kind_; }
    const std::map<int, double>& points() const noexcept { return points_; }
    const std::set<int>& extrapolated_years() const noexcept { return extrapolated_; }
    bool is_extrapolated(int year) const noexcept { return extrapolated_.contains(year); }

    double at(int year) const
    {
        auto it = points_.find(year);
        if (it == points_.end()) {
            throw Error(ErrorCode::InvalidTrend, source_ + ": no value for " + std::to_string(year));
        }
        return it->second;
    }

    bool is_contiguous() const noexcept
    {
        return points_.empty() ||
               static_cast<std::size_t>(points_.rbegin()->first - points_.begin()->first + 1) == points_.size();
    }

    friend bool operator==(const DeploymentTrend&, const DeploymentTrend&) = default;

private:
    std::string source_;
    TrendKind kind_;
    std::map<int, double> points_;
    std::set<int> extrapolated_;
};

// annual(y) = cumulative(y+1) - cumulative(y), over [first, last-1].
// A year is flagged extrapolated when either cumulative endpoint was.
inline DeploymentTrend cumulative_to_annual(const DeploymentTrend& trend)
{
    if (trend.kind() != TrendKind::Cumulative) {
        throw Error(ErrorCode::NotCumulative, trend.source() + ": trend is already annual");
    }
    if (trend.points().size() < 2) {
        throw Error(ErrorCode::TooFewPoints, trend.source() + ": need at least 2 cumulative points");
    }
    if (!trend.is_contiguous()) {
        throw Error(ErrorCode::InvalidTrend, trend.source() + ": cumulative years must be contiguous");
    }
    std::map<int, double> annual;
    std::set<int> flagged;
    for (auto it = trend.points().begin(); std::next(it) != trend.points().end(); ++it) {
        const int year = it->first;
        annual[year] = std::next(it)->second - it->second;
        if (trend.is_extrapolated(year) || trend.is_extrapolated(year + 1)) {
            flagged.insert(year);
        }
    }
    return DeploymentTrend(trend.source(), TrendKind::Annual, std::move(annual), std::move(flagged));
}

// Rebuilds the cumulative series from an annual one, anchored at `first_cumulative`.
inline DeploymentTrend annual_to_cumulative(const DeploymentTrend& annual, double first_cumulative)
{
    if (annual.kind() != TrendKind::Annual) {
        throw Error(ErrorCode::KindMismatch, annual.source() + ": expected an annual trend");
    }
    std::map<int, double> cumulative;
    if (annual.points().empty()) {
        return DeploymentTrend(annual.source(), TrendKind::Cumulative, std::move(cumulative));
    }
    double running = first_cumulative;
    int year = annual.points().begin()->first;
    cumulative[year] = running;
    for (const auto& [y, value] : annual.points()) {
        running += value;
        cumulative[y + 1] = running;
    }
    return DeploymentTrend(annual.source(), TrendKind::Cumulative, std::move(cumulative));
}

// Geometric continuation from the observed points up to `horizon`. The growth
// ratio is the mean of the last three observed year-over-year ratios; points
// already flagged as extrapolated are dropped and regenerated.
inline DeploymentTrend extrapolate(const DeploymentTrend& trend, int horizon)
{
    std::map<int, double> observed;
    for (const auto& [year, value] : trend.points()) {
        if (!trend.is_extrapolated(year)) {
            observed.emplace(year, value);
        }
    }
    if (observed.size() < 4) {
        throw Error(ErrorCode::TooFewPoints, trend.source() + ": extrapolation needs at least 4 observed points");
    }
    DeploymentTrend base(trend.source(), trend.kind(), observed);
    if (!base.is_contiguous()) {
        throw Error(ErrorCode::InvalidTrend, trend.source() + ": observed years must be contiguous");
    }
    const int last_observed = observed.rbegin()->first;
    if (horizon < last_observed) {
        throw Error(ErrorCode::HorizonBeforeLastObserved, trend.source() + ": horizon " + std::to_string(horizon) +
                                                              " precedes last observed year " +
                                                              std::to_string(last_observed));
    }
    if (horizon > kLastTrendYear) {
        throw Error(ErrorCode::InvalidTrend,
                    trend.source() + ": horizon must not exceed " + std::to_string(kLastTrendYear));
    }

    auto it = observed.rbegin();
    const double v0 = it->second;
    const double v1 = (++it)->second;
    const double v2 = (++it)->second;
    const double v3 = (++it)->second;
    const double ratio = (v0 / v1 + v1 / v2 + v2 / v3) / 3.0;

    std::map<int, double> points = observed;
    std::set<int> flagged;
    double value = v0;
    for (int year = last_observed + 1; year <= horizon; ++year) {
        value *= ratio;
        points[year] = value;
        flagged.insert(year);
    }
    return DeploymentTrend(trend.source(), trend.kind(), std::move(points), std::move(flagged));
}

// Annual series ready for projection: cumulative trends are extended to
// `horizon` (when enough observations exist) and differenced.
inline DeploymentTrend prepare_annual(const DeploymentTrend& trend, int horizon = kLastTrendYear)
{
    if (trend.kind() == TrendKind::Annual) {
        return trend;
    }
    std::size_t observed = 0;
    for (const auto& [year, value] : trend.points()) {
        observed += trend.is_extrapolated(year) ? 0 : 1;
    }
    if (observed >= 4) {
        return cumulative_to_annual(extrapolate(trend, horizon));
    }
    return cumulative_to_annual(trend);
}

// Deployment mix: share `alpha` of simple devices (D_s), the rest complex (D_c),
// revised upward by `psi`.
class Scenario {
public:
    Scenario(std::string name, double alpha, double psi, EmissionTriple d_simple, EmissionTriple d_complex)
        : name_(std::move(name)), alpha_(alpha), psi_(psi), d_simple_(d_simple), d_complex_(d_complex)
    {
        if (!(alpha >= 0.0 && alpha <= 1.0)) {
            throw Error(ErrorCode::InvalidScenario, name_ + ": alpha must lie in [0, 1]");
        }
        if (!(psi >= 1.0) || !std::isfinite(psi)) {
            throw Error(ErrorCode::InvalidScenario, name_ + ": psi must be >= 1");
        }
    }

    const std::string& name() const noexcept { return name_; }
    double alpha() const noexcept { return alpha_; }
    double psi() const noexcept { return psi_; }
    const EmissionTriple& d_simple() const noexcept { return d_simple_; }
    const EmissionTriple& d_complex() const noexcept { return d_complex_; }

    Scenario with_psi(double psi) const { return Scenario(name_, alpha_, psi, d_simple_, d_complex_); }
    Scenario with_alpha(double alpha) const { return Scenario(name_, alpha, psi_, d_simple_, d_complex_); }

    // alpha * D_s + (1 - alpha) * D_c, per device, kgCO2-eq.
    EmissionTriple blended_device_footprint() const
    {
        return triple_scale(d_simple_, alpha_) + triple_scale(d_complex_, 1.0 - alpha_);
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    std::string name_;
    double alpha_;
    double psi_;
    EmissionTriple d_simple_;
    EmissionTriple d_complex_;
};

inline const EmissionTriple kDefaultSimpleDevice{0.30, 0.96, 1.33};
inline const EmissionTriple kDefaultComplexDevice{16.62, 30.47, 47.41};

inline std::vector<Scenario> default_scenarios()
{
    std::vector<Scenario> out;
    const std::pair<const char*, double> mixes[] = {{"sc1", 0.9}, {"sc2", 0.5}, {"sc3", 0.1}};
    for (const auto& [name, alpha] : mixes) {
        for (double psi : {1.0, 2.0}) {
            out.emplace_back(name, alpha, psi, kDefaultSimpleDevice, kDefaultComplexDevice);
        }
    }
    return out;
}

struct ProjectionSeries {
    Scenario scenario;
    DeploymentTrend trend;
    std::map<int, EmissionTriple> values; // MtCO2-eq/year
};

// F_y = N_y * (alpha D_s + (1 - alpha) D_c) * psi, componentwise.
inline ProjectionSeries project(const Scenario& scenario, const DeploymentTrend& annual)
{
    if (annual.kind() != TrendKind::Annual) {
        throw Error(ErrorCode::KindMismatch, annual.source() + ": projection needs an annual trend");
    }
    const auto per_device = scenario.blended_device_footprint();
    ProjectionSeries series{scenario, annual, {}};
    for (const auto& [year, billions] : annual.points()) {
        auto year_total = triple_scale(per_device, billions * kMtPerBillionDeviceKg);
        series.values.emplace(year, triple_scale(year_total, scenario.psi()));
    }
    return series;
}

struct ReductionPathway {
    int start_year = 2020;
    double start_low = 0.0;
    double start_high = 0.0;
    double annual_reduction = 0.076;
    std::map<int, std::pair<double, double>> values; // MtCO2-eq/year
};

inline constexpr int kPathwayStartYear = 2020;
inline constexpr double kPathwayAnnualReduction = 0.076;

// Emissions declining by a fixed fraction per year from 2020.
inline ReductionPathway paris_pathway(double start_low, double start_high, int end_year)
{
    if (!(start_low > 0.0) || !(start_high > 0.0)) {
        throw Error(ErrorCode::NonPositiveStart, "pathway start values must be positive");
    }
    if (start_low > start_high) {
        throw Error(ErrorCode::InvalidArgument, "pathway low start exceeds high start");
    }
    if (end_year < kPathwayStartYear) {
        throw Error(ErrorCode::InvalidArgument, "pathway end year precedes " + std::to_string(kPathwayStartYear));
    }
    ReductionPathway pathway{kPathwayStartYear, start_low, start_high, kPathwayAnnualReduction, {}};
    const double keep = 1.0 - kPathwayAnnualReduction;
    double low = start_low;
    double high = start_high;
    for (int year = kPathwayStartYear; year <= end_year; ++year) {
        pathway.values.emplace(year, std::pair{low, high});
        low *= keep;
        high *= keep;
    }
    return pathway;
}

// ---- file formats ---------------------------------------------------------

inline std::optional<TrendKind> parse_trend_kind(std::string_view s) noexcept
{
    if (detail::iequals(s, "cumulative")) return TrendKind::Cumulative;
    if (detail::iequals(s, "annual")) return TrendKind::Annual;
    return std::nullopt;
}

// `source,kind,year,value,extrapolated`; rows grouped by (source, kind) in order of first appearance.
inline std::vector<DeploymentTrend> parse_trends(std::string_view content)
{
    struct Pending {
        std::string source;
        TrendKind kind;
        std::map<int, double> points;
        std::set<int> extrapolated;
        std::size_t first_line;
    };
    std::vector<Pending> pending;
    bool header_seen = false;

    for (const auto& line : text::split_lines(content)) {
        if (text::is_blank_or_comment(line.content)) {
            continue;
        }
        if (!header_seen) {
            detail::expect_header(line, "source,kind,year,value,extrapolated");
            header_seen = true;
            continue;
        }
        auto fields = text::split_fields(line.content);
        detail::expect_field_count(fields, 5, line);
        if (fields[0].value.empty()) {
            throw Error(ErrorCode::ParseError, "empty source", {line.number, fields[0].column});
        }
        auto kind = parse_trend_kind(fields[1].value);
        if (!kind) {
            throw Error(ErrorCode::ParseError, "kind must be 'cumulative' or 'annual'", {line.number, fields[1].column});
        }
        auto year = text::parse_integer(fields[2].value);
        if (!year) {
            throw Error(ErrorCode::ParseError, "year must be an integer", {line.number, fields[2].column});
        }
        double value = text::require_double(fields[3], line.number, "value");
        const auto flag = fields[4].value;
        bool extrapolated = false;
        if (flag == "1" || detail::iequals(flag, "true")) {
            extrapolated = true;
        } else if (!(flag == "0" || detail::iequals(flag, "false") || flag.empty())) {
            throw Error(ErrorCode::ParseError, "extrapolated must be 0/1", {line.number, fields[4].column});
        }

        auto it = std::find_if(pending.begin(), pending.end(),
                               [&](const Pending& p) { return p.source == fields[0].value && p.kind == *kind; });
        if (it == pending.end()) {
            pending.push_back({std::string(fields[0].value), *kind, {}, {}, line.number});
            it = std::prev(pending.end());
        }
        if (!it->points.emplace(static_cast<int>(*year), value).second) {
            throw Error(ErrorCode::ParseError, "duplicate year " + std::to_string(*year) + " for " + it->source,
                        {line.number, fields[2].column});
        }
        if (extrapolated) {
            it->extrapolated.insert(static_cast<int>(*year));
        }
    }
    if (!header_seen) {
        throw Error(ErrorCode::ParseError, "missing header 'source,kind,year,value,extrapolated'");
    }

    std::vector<DeploymentTrend> trends;
    for (auto& p : pending) {
        try {
            trends.emplace_back(p.source, p.kind, std::move(p.points), std::move(p.extrapolated));
        } catch (const Error& e) {
            throw Error(e.code(), e.detail(), {p.first_line, 1});
        }
    }
    return trends;
}

inline std::vector<DeploymentTrend> load_trends(const std::filesystem::path& path)
{
    return parse_trends(detail::read_file(path));
}

inline const DeploymentTrend* find_trend(const std::vector<DeploymentTrend>& trends, std::string_view source,
                                         TrendKind kind) noexcept
{
    for (const auto& t : trends) {
        if (detail::iequals(t.source(), source) && t.kind() == kind) {
            return &t;
        }
    }
    return nullptr;
}

inline std::vector<Scenario> parse_scenarios(std::string_view content)
{
    std::vector<Scenario> scenarios;
    bool header_seen = false;
    for (const auto& line : text::split_lines(content)) {
        if (text::is_blank_or_comment(line.content)) {
            continue;
        }
        if (!header_seen) {
            detail::expect_header(line, "name,alpha,psi,ds_low,ds_typ,ds_up,dc_low,dc_typ,dc_up");
            header_seen = true;
            continue;
        }
        auto fields = text::split_fields(line.content);
        detail::expect_field_count(fields, 9, line);
        if (fields[0].value.empty()) {
            throw Error(ErrorCode::ParseError, "empty scenario name", {line.number, fields[0].column});
        }
        std::array<double, 8> v{};
        constexpr std::array<std::string_view, 8> names = {"alpha",  "psi",    "ds_low", "ds_typ",
                                                           "ds_up",  "dc_low", "dc_typ", "dc_up"};
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = text::require_double(fields[i + 1], line.number, names[i]);
        }
        try {
            scenarios.emplace_back(std::string(fields[0].value), v[0], v[1], EmissionTriple(v[2], v[3], v[4]),
                                   EmissionTriple(v[5], v[6], v[7]));
        } catch (const Error& e) {
            throw Error(e.code(), e.detail(), {line.number, 1});
        }
    }
    if (!header_seen) {
        throw Error(ErrorCode::ParseError, "missing scenario header");
    }
    return scenarios;
}

inline std::vector<Scenario> load_scenarios(const std::filesystem::path& path)
{
    return parse_scenarios(detail::read_file(path));
}

// Rows ordered by (scenario name, source, psi, year).
inline std::string render_projection_csv(std::vector<ProjectionSeries> series)
{
    std::stable_sort(series.begin(), series.end(), [](const ProjectionSeries& a, const ProjectionSeries& b) {
        return std::tuple(a.scenario.name(), a.trend.source(), a.scenario.psi()) <
               std::tuple(b.scenario.name(), b.trend.source(), b.scenario.psi());
    });
    std::string out = "scenario,source,psi,year,low,typical,up\n";
    for (const auto& s : series) {
        for (const auto& [year, v] : s.values) {
            out += s.scenario.name() + "," + s.trend.source() + "," + text::shortest(s.scenario.psi()) + "," +
                   std::to_string(year) + "," + text::fixed(v.low()) + "," + text::fixed(v.typical()) + "," +
                   text::fixed(v.up()) + "\n";
        }
    }
    return out;
}

inline std::string render_pathway_csv(const ReductionPathway& pathway)
{
    std::string out = "year,low,high\n";
    for (const auto& [year, v] : pathway.values) {
        out += std::to_string(year) + "," + text::fixed(v.first) + "," + text::fixed(v.second) + "\n";
    }
    return out;
}

} // namespace edge_lca
