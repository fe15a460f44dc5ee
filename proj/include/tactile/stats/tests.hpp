#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tactile::stats {

struct Sample {
    std::vector<double> values;
    std::string label;
};

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

struct AnovaResult {
    double f = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    double p = 1.0;
};

// t = |mean_first - mean_second| / sqrt(s1^2/n1 + s2^2/n2); p from the
// studentized range at q = t * sqrt(2).
struct GamesHowellEntry {
    std::string first;
    std::string second;
    double mean_difference = 0.0;  // mean_first - mean_second
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

struct FriedmanResult {
    double chi2 = 0.0;
    double df = 0.0;
    double p = 1.0;
};

struct WilcoxonResult {
    double w = 0.0;  // min(w_plus, w_minus)
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::size_t n_effective = 0;
    double p = 1.0;
    bool exact = false;
    bool degenerate = false;  // every difference was zero
};

struct SpearmanResult {
    double rho = 0.0;
    double p = 1.0;
};

// Largest n_effective for which the Wilcoxon p-value is enumerated exactly.
inline constexpr std::size_t kWilcoxonExactLimit = 15;

// 1-based ranks, ties get the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

TTestResult welch_t(const Sample& a, const Sample& b);
AnovaResult welch_anova(const std::vector<Sample>& groups);
std::vector<GamesHowellEntry> games_howell(const std::vector<Sample>& groups);

// ratings[subject][condition]
FriedmanResult friedman(const std::vector<std::vector<double>>& ratings);

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// Holm step-down adjustment, returned in input order.
std::vector<double> holm_correct(std::span<const double> pvalues);
// Same, with an explicit family size m >= pvalues.size(); the extra members
// are treated as untested hypotheses with p = 1.
std::vector<double> holm_correct(std::span<const double> pvalues, std::size_t family_size);

SpearmanResult spearman(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> values);
// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> values);

}  // namespace tactile::stats
