#include "edge_lca/defaults.hpp"
#include "edge_lca/profiles_io.hpp"
#include "edge_lca/report.hpp"
#include "support/reference.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace edge_lca;

namespace {

const std::filesystem::path kFixtures = EDGE_LCA_TEST_FIXTURES;

std::string fixture(const std::string& rel)
{
    return detail::read_file(kFixtures / "profiles" / rel);
}

std::string all_blocks(const std::string& level = "hsl1")
{
    std::string out;
    for (auto b : kAllBlocks) out += std::string(block_id(b)) + " = " + level + "\n";
    return out;
}

struct Expected {
    const char* file;
    ErrorCode code;
    std::size_t line;
    std::size_t column;
    std::size_t count;
};

} // namespace

TEST(ProfileParse, SingleValidProfile)
{
    auto result = parse_profiles_collect(fixture("valid/single.iotprof"));
    EXPECT_TRUE(result.ok());
    ASSERT_EQ(result.document.profiles.size(), 1u);
    EXPECT_EQ(result.document.profiles[0], HardwareProfile::uniform("gateway", HardwareSpecLevel::HSL1));
}

TEST(ProfileParse, OverridesDescriptionsAnnotations)
{
    auto doc = parse_profiles(fixture("valid/overrides.iotprof"));
    ASSERT_EQ(doc.profiles.size(), 2u);
    const auto& band = doc.profiles[0];
    EXPECT_EQ(band.description(), "Fitness band, 1 g Li-ion cell");
    ASSERT_EQ(band.overrides().size(), 2u);
    EXPECT_EQ(band.overrides()[0], (ComponentOverride{FunctionalBlock::PowerSupply, OverrideKind::MassScaled,
                                                      {1.5, QuantityUnit::Gram}, "li_ion_per_kg", std::nullopt}));
    EXPECT_EQ(band.overrides()[1], (ComponentOverride{FunctionalBlock::Memory, OverrideKind::MemoryCapacity,
                                                      {512, QuantityUnit::Megabyte}, "die_kgco2e_per_mm2",
                                                      MemoryKind::Flash}));
    EXPECT_EQ(doc.profiles[1].level(FunctionalBlock::Security), HardwareSpecLevel::HSL0);
    ASSERT_EQ(doc.annotations.size(), 1u);
    EXPECT_EQ(doc.annotations[0].first, "wrist_band.note");
}

TEST(ProfileParse, CrlfLineEndings)
{
    auto doc = parse_profiles(fixture("valid/crlf.iotprof"));
    ASSERT_EQ(doc.profiles.size(), 1u);
    EXPECT_EQ(doc.profiles[0].name(), "crlf");
}

TEST(ProfileParse, FixtureDiagnostics)
{
    const Expected cases[] = {
        {"syntax_error", ErrorCode::SyntaxError, 2, 1, 1},
        {"unsupported_version", ErrorCode::UnsupportedVersion, 1, 18, 1},
        {"unknown_block", ErrorCode::UnknownBlock, 15, 1, 1},
        {"unknown_level", ErrorCode::UnknownLevel, 6, 10, 1},
        {"duplicate_block", ErrorCode::DuplicateBlock, 15, 1, 1},
        {"missing_block", ErrorCode::MissingBlock, 2, 1, 1},
        {"forbidden_combination", ErrorCode::ForbiddenCombination, 11, 12, 1},
        {"duplicate_profile_name", ErrorCode::DuplicateProfileName, 15, 10, 1},
        {"invalid_override", ErrorCode::InvalidOverride, 15, 25, 1},
        {"invalid_override_unit", ErrorCode::InvalidOverrideUnit, 15, 39, 1},
        {"missing_version", ErrorCode::SyntaxError, 1, 1, 1},
        {"empty", ErrorCode::SyntaxError, 1, 1, 1},
        {"many_errors", ErrorCode::UnknownLevel, 4, 10, 4},
    };
    for (const auto& c : cases) {
        SCOPED_TRACE(c.file);
        auto result = parse_profiles_collect(fixture(std::string("invalid/") + c.file + ".iotprof"));
        ASSERT_FALSE(result.ok());
        EXPECT_EQ(result.diagnostics.size(), c.count);
        const auto& d = result.diagnostics.front();
        EXPECT_EQ(d.code, c.code) << d.message;
        EXPECT_EQ(d.where.line, c.line);
        EXPECT_EQ(d.where.column, c.column);
        try {
            parse_profiles(fixture(std::string("invalid/") + c.file + ".iotprof"));
            ADD_FAILURE() << "no exception";
        } catch (const ProfileParseError& e) {
            EXPECT_EQ(e.code(), c.code);
            EXPECT_EQ(e.diagnostics().size(), c.count);
        }
    }
}

TEST(ProfileParse, CollectsEveryDiagnosticInOrder)
{
    auto result = parse_profiles_collect(fixture("invalid/many_errors.iotprof"));
    ASSERT_EQ(result.diagnostics.size(), 4u);
    EXPECT_EQ(result.diagnostics[1].code, ErrorCode::ForbiddenCombination);
    EXPECT_EQ(result.diagnostics[2].code, ErrorCode::UnknownBlock);
    EXPECT_EQ(result.diagnostics[3].code, ErrorCode::MissingBlock);
    EXPECT_NE(result.diagnostics[3].message.find("PCB"), std::string::npos);
    EXPECT_TRUE(result.document.profiles.empty());
    EXPECT_EQ(format_diagnostic(result.diagnostics[0], "f.iotprof").rfind("f.iotprof:4:10: error[UnknownLevel]", 0), 0u);
}

TEST(ProfileParse, MissingTransportIsNamed)
{
    auto result = parse_profiles_collect(fixture("invalid/missing_block.iotprof"));
    ASSERT_EQ(result.diagnostics.size(), 1u);
    EXPECT_NE(result.diagnostics[0].message.find("Transport"), std::string::npos);
}

TEST(ProfileParse, ValidProfilesSurviveAlongsideBrokenOnes)
{
    auto result = parse_profiles_collect(fixture("invalid/duplicate_profile_name.iotprof"));
    ASSERT_EQ(result.document.profiles.size(), 1u);
    EXPECT_EQ(result.document.profiles[0].name(), "p");
}

TEST(ProfileParse, UsecasesAreWellFormed)
{
    auto doc = defaults::use_cases();
    EXPECT_EQ(doc.profiles.size(), 4u);
    EXPECT_EQ(doc.annotations.size(), 4u);
    auto again = load_profiles(std::filesystem::path(EDGE_LCA_SOURCE_DATA) / "profiles" / "all_hsl0.iotprof");
    ASSERT_EQ(again.profiles.size(), 1u);
    for (auto b : kAllBlocks) EXPECT_EQ(again.profiles[0].level(b), HardwareSpecLevel::HSL0);
}

TEST(ProfileParse, MiscSyntax)
{
    auto diag = [](const std::string& text) {
        auto r = parse_profiles_collect(text);
        return r.ok() ? ErrorCode::InvalidArgument : r.diagnostics.front().code;
    };
    const std::string v = "format_version = 1\n";
    EXPECT_EQ(diag(v + "[widget w]\n" + all_blocks()), ErrorCode::SyntaxError);
    EXPECT_EQ(diag(v + "[profile]\n" + all_blocks()), ErrorCode::SyntaxError);
    EXPECT_EQ(diag(v + "[profile p]\n" + all_blocks() + "no equals sign\n"), ErrorCode::SyntaxError);
    EXPECT_EQ(diag(v + v + "[profile p]\n" + all_blocks()), ErrorCode::SyntaxError);
    EXPECT_EQ(diag("format_version = one\n[profile p]\n" + all_blocks()), ErrorCode::SyntaxError);
    EXPECT_EQ(diag(v + "[profile p]\n" + all_blocks() + "override.memory = memory_capacity:1GB@k\n"),
              ErrorCode::InvalidOverride);
    EXPECT_EQ(diag(v + "[profile p]\n" + all_blocks() + "override.memory = mass_scaled:-1g@k\n"),
              ErrorCode::InvalidOverride);
    EXPECT_EQ(diag(v + "[profile p]\n" + all_blocks() + "override.memory = mass_scaled:1g@\n"),
              ErrorCode::InvalidOverride);
    EXPECT_EQ(diag(v + "[profile p]\n" + all_blocks() + "override.gizmo = mass_scaled:1g@k\n"),
              ErrorCode::UnknownBlock);
    EXPECT_EQ(diag(v + "[profile p]\n" + all_blocks() + "override.pcb = solder_from_ic_area:3stone@k\n"),
              ErrorCode::InvalidOverrideUnit);
    EXPECT_EQ(diag(v + "[profile p]\n  " + all_blocks() + "[annotations]\na = 1\na = 2\n"), ErrorCode::SyntaxError);
    // Names are case-insensitive; comments and indentation are ignored.
    std::string blocks = all_blocks();
    blocks.erase(blocks.find("memory = hsl1\n"), 14);
    auto r = parse_profiles_collect(v + "# c\n[profile p]\n  MEMORY = HSL2\n" + blocks);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.document.profiles[0].level(FunctionalBlock::Memory), HardwareSpecLevel::HSL2);
}

TEST(ProfileRoundTrip, RandomDocuments)
{
    std::mt19937_64 rng(0x5eed0501);
    std::uniform_int_distribution<int> count(0, 5);
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_real_distribution<double> qty(0.0, 1000.0);
    for (int i = 0; i < 500; ++i) {
        ProfileDocument doc;
        const int n = count(rng);
        for (int p = 0; p < n; ++p) {
            auto base = reference::random_profile(rng);
            std::vector<ComponentOverride> overrides;
            for (int o = count(rng) / 2; o > 0; --o) {
                auto b = kAllBlocks[static_cast<std::size_t>(count(rng) * 2)];
                switch (kind(rng)) {
                case 0: overrides.push_back({b, OverrideKind::MassScaled, {qty(rng), QuantityUnit::Gram}, "li_ion_per_kg", {}}); break;
                case 1: overrides.push_back({b, OverrideKind::MassScaled, {qty(rng), QuantityUnit::Kilogram}, "x.y-z", {}}); break;
                case 2: overrides.push_back({b, OverrideKind::UnitCount, {std::floor(qty(rng)), QuantityUnit::Unit}, "aa", {}}); break;
                case 3: overrides.push_back({b, OverrideKind::MemoryCapacity, {qty(rng), p % 2 ? QuantityUnit::Gigabyte : QuantityUnit::Megabyte}, "die", MemoryKind::DRAM}); break;
                default: overrides.push_back({b, OverrideKind::SolderFromIcArea, {qty(rng), QuantityUnit::SquareMillimetre}, "sac", {}}); break;
                }
            }
            std::string description = p % 2 ? "device #" + std::to_string(i) + " = fine, really" : "";
            doc.profiles.emplace_back("p" + std::to_string(p), base.levels(), std::move(overrides), description);
        }
        if (i % 3 == 0) doc.annotations.emplace_back("note.k" + std::to_string(i), "v = " + std::to_string(i));
        auto text = render_profiles(doc);
        ASSERT_EQ(parse_profiles(text), doc) << text;
        ASSERT_EQ(render_profiles(parse_profiles(text)), text);
    }
}

TEST(Report, AllHsl0Csv)
{
    auto report = evaluate_profile(HardwareProfile::uniform("zero", HardwareSpecLevel::HSL0), defaults::factor_table(),
                                   defaults::unit_registry());
    auto csv = render_report(report, ReportFormat::Csv);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 14); // header + 12 blocks + TOTAL
    // Exact cell sum; the printed total row reads 0.46 for low.
    EXPECT_NE(csv.find("zero,TOTAL,0.45,0.96,1.33\n"), std::string::npos);
    EXPECT_EQ(csv, render_report(report, ReportFormat::Csv));
    EXPECT_EQ(render_report(std::span<const EvaluationReport>{}, ReportFormat::Csv), "profile,block,low,typical,up\n");
    EXPECT_EQ(render_report(std::span<const EvaluationReport>{}, ReportFormat::JsonLines), "");

    auto jsonl = render_report(report, ReportFormat::JsonLines);
    EXPECT_NE(jsonl.find("{\"profile\":\"zero\",\"block\":\"power_supply\",\"low\":0.18,\"typical\":0.52,\"up\":0.66}\n"),
              std::string::npos);
    auto table = render_report(report, ReportFormat::Table);
    EXPECT_NE(table.find("PowerSupply"), std::string::npos);
    EXPECT_EQ(table, render_report(report, ReportFormat::Table));
}

TEST(Report, JsonEscapesNames)
{
    auto report = evaluate_profile(HardwareProfile::uniform("a\"b", HardwareSpecLevel::HSL1), defaults::factor_table(),
                                   defaults::unit_registry());
    auto jsonl = render_report(report, ReportFormat::JsonLines);
    EXPECT_EQ(jsonl.rfind("{\"profile\":\"a\\\"b\"", 0), 0u);
}
