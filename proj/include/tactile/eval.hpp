#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tactile/dataset.hpp"
#include "tactile/generator.hpp"
#include "tactile/stats/tests.hpp"
#include "tactile/vec.hpp"

namespace tactile {

inline constexpr int kReportSchemaVersion = 1;

struct TileParams {
    Vec3 size_mm{50.0, 50.0, 10.0};
    std::size_t target_faces = 25000;
    double amplitude_mm = 1.0;
    double magnification = 1.0;
};

struct FormativeOptions {
    TileParams tile;
    // Extraction grid; defaults to each ground-truth heightfield's size.
    std::optional<std::pair<std::size_t, std::size_t>> resolution;
    std::size_t sample_count = 50;
    std::uint64_t seed = 42;
    std::optional<Split> split;  // restrict to one split
    unsigned threads = 1;
};

struct TechnicalOptions {
    std::optional<Split> split;
    unsigned threads = 1;
};

// One (entry, candidate) evaluation. In the formative experiment the metrics
// compare the heightfields extracted from the two displaced tiles; in the
// technical experiment they compare the heightfield images directly.
struct EntryRecord {
    std::string id;
    std::string category;
    std::string candidate;
    bool ok = true;
    std::string error;
    double rms_groundtruth = 0.0;
    double rms_candidate = 0.0;
    double mse = 0.0;
    double ssim = 0.0;
    // Formative only: mean-centered RMS of the raw vertex displacements.
    std::optional<double> rms_groundtruth_mm;
    std::optional<double> rms_candidate_mm;
};

using TestResult = std::variant<std::monostate, stats::TTestResult, stats::AnovaResult,
                                std::vector<stats::GamesHowellEntry>>;

struct TestOutcome {
    std::string test;    // welch_t, welch_anova, games_howell
    std::string metric;  // which per-entry field was compared
    std::vector<std::string> groups;
    TestResult result;
    std::string unavailable;  // reason when the statistic is undefined
};

struct Provenance {
    std::vector<std::string> generators;
    std::string manifest_hash;
    nlohmann::json parameters = nlohmann::json::object();
};

struct EvalReport {
    std::string experiment;  // "formative" or "technical"
    std::string path;        // "mesh" or "direct"
    Provenance provenance;
    std::size_t entries = 0;  // corpus entries evaluated
    std::vector<EntryRecord> records;  // sorted by (id, candidate)
    std::size_t failures = 0;
    std::vector<TestOutcome> tests;

    const TestOutcome* find(const std::string& test, const std::string& metric) const;
};

// Builds one shared tile, then for every selected entry displaces it by the
// ground-truth and the candidate heightfield, extracts both, and compares
// their RMS distributions with Welch's t-test. Entries are sampled without
// replacement (seeded) when the corpus exceeds sample_count.
EvalReport run_formative(const DatasetManifest& corpus, const GeneratorKind& candidate,
                         const FormativeOptions& options = {});

// Direct heightfield comparison: per candidate and entry, RMS, MSE and SSIM
// against ground truth; Welch ANOVA and Games-Howell over the RMS groups
// (ground truth plus candidates); Welch t on MSE for every candidate pair.
EvalReport run_technical_eval(const DatasetManifest& corpus, const std::vector<GeneratorKind>& candidates,
                              const TechnicalOptions& options = {});

// Per-metric values grouped by condition, as plotted.
std::vector<std::pair<std::string, std::vector<double>>> metric_groups(const EvalReport& report,
                                                                       const std::string& metric);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc, const std::string& source = "<report>");
void save_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

struct BoxSeries {
    std::string label;
    std::vector<double> values;
};

struct BoxStats {
    double min, q1, median, q3, max;  // whiskers at 1.5 IQR, clipped to data
    std::vector<double> outliers;
};

// Linear-interpolated quartiles (type 7).
BoxStats box_stats(std::vector<double> values);

std::string box_plot_svg(const std::vector<BoxSeries>& series, const std::string& title, const std::string& y_label);

// One SVG per metric present in the report: rms for formative, rms, mse and
// ssim for technical.
std::vector<std::pair<std::string, std::string>> report_plots(const EvalReport& report);

}  // namespace tactile
