#include "tactile/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "tactile/error.hpp"
#include "tactile/stats/distributions.hpp"

namespace tactile::stats {

namespace {

std::string name_of(const Sample& s, std::size_t index) {
    return s.label.empty() ? "group " + std::to_string(index) : s.label;
}

void check_sample(const Sample& s, std::size_t index) {
    if (s.values.size() < 2) {
        throw InvalidArgument(name_of(s, index) + " needs at least 2 values");
    }
    for (double v : s.values) {
        if (!std::isfinite(v)) throw InvalidArgument(name_of(s, index) + " contains a non-finite value");
    }
}

struct GroupSummary {
    double n;
    double mean;
    double var;
};

std::vector<GroupSummary> summarize_positive(const std::vector<Sample>& groups) {
    if (groups.size() < 2) throw InvalidArgument("at least 2 groups are required");
    std::vector<GroupSummary> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        check_sample(groups[i], i);
        const GroupSummary g{static_cast<double>(groups[i].values.size()), mean(groups[i].values),
                             sample_variance(groups[i].values)};
        if (!(g.var > 0.0)) {
            throw DomainError(name_of(groups[i], i) + " has zero variance");
        }
        out.push_back(g);
    }
    return out;
}

double welch_df(double va, double na, double vb, double nb) {
    const double qa = va / na;
    const double qb = vb / nb;
    return (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
}

}  // namespace

TTestResult welch_t(const Sample& a, const Sample& b) {
    check_sample(a, 0);
    check_sample(b, 1);
    const double na = static_cast<double>(a.values.size());
    const double nb = static_cast<double>(b.values.size());
    const double ma = mean(a.values);
    const double mb = mean(b.values);
    const double va = sample_variance(a.values);
    const double vb = sample_variance(b.values);
    const double se2 = va / na + vb / nb;
    if (!(se2 > 0.0)) {
        if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
        throw DomainError("welch t undefined: both samples have zero variance and different means");
    }
    TTestResult r;
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = welch_df(va, na, vb, nb);
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

AnovaResult welch_anova(const std::vector<Sample>& groups) {
    const auto g = summarize_positive(groups);
    const double k = static_cast<double>(g.size());
    double w_sum = 0.0;
    double wm_sum = 0.0;
    for (const auto& s : g) {
        const double w = s.n / s.var;
        w_sum += w;
        wm_sum += w * s.mean;
    }
    const double grand = wm_sum / w_sum;
    double between = 0.0;
    double tmp = 0.0;
    for (const auto& s : g) {
        const double w = s.n / s.var;
        between += w * (s.mean - grand) * (s.mean - grand);
        const double r = 1.0 - w / w_sum;
        tmp += r * r / (s.n - 1.0);
    }
    AnovaResult r;
    r.df1 = k - 1.0;
    r.df2 = (k * k - 1.0) / (3.0 * tmp);
    const double numerator = between / (k - 1.0);
    const double denominator = 1.0 + 2.0 * (k - 2.0) * tmp / (k * k - 1.0);
    r.f = numerator / denominator;
    r.p = f_sf(r.f, r.df1, r.df2);
    return r;
}

std::vector<GamesHowellEntry> games_howell(const std::vector<Sample>& groups) {
    const auto g = summarize_positive(groups);
    const double k = static_cast<double>(g.size());
    std::vector<GamesHowellEntry> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            GamesHowellEntry e;
            e.first = name_of(groups[i], i);
            e.second = name_of(groups[j], j);
            e.mean_difference = g[i].mean - g[j].mean;
            const double se = std::sqrt(g[i].var / g[i].n + g[j].var / g[j].n);
            e.t = std::abs(e.mean_difference) / se;
            e.df = welch_df(g[i].var, g[i].n, g[j].var, g[j].n);
            e.p = studentized_range_sf(e.t * std::sqrt(2.0), k, e.df);
            out.push_back(std::move(e));
        }
    }
    return out;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& ratings) {
    const std::size_t n = ratings.size();
    if (n < 2) throw InvalidArgument("friedman needs at least 2 subjects");
    const std::size_t k = ratings.front().size();
    if (k < 2) throw InvalidArgument("friedman needs at least 2 conditions");
    std::vector<double> rank_sums(k, 0.0);
    double tie_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ratings[i].size() != k) {
            throw InvalidArgument("friedman row " + std::to_string(i) + " has " +
                                  std::to_string(ratings[i].size()) + " values, expected " + std::to_string(k));
        }
        for (double v : ratings[i]) {
            if (!std::isfinite(v)) throw InvalidArgument("friedman ratings must be finite");
        }
        const auto ranks = average_ranks(ratings[i]);
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
        std::vector<double> sorted = ratings[i];
        std::sort(sorted.begin(), sorted.end());
        std::size_t a = 0;
        while (a < k) {
            std::size_t b = a + 1;
            while (b < k && sorted[b] == sorted[a]) ++b;
            const double t = static_cast<double>(b - a);
            tie_sum += t * t * t - t;
            a = b;
        }
    }
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    FriedmanResult r;
    r.df = dk - 1.0;
    const double correction = 1.0 - tie_sum / (dn * dk * (dk * dk - 1.0));
    if (correction <= 1e-12) {
        return r;
    }
    double ss = 0.0;
    for (double s : rank_sums) {
        const double d = s / dn - 0.5 * (dk + 1.0);
        ss += d * d;
    }
    r.chi2 = 12.0 * dn / (dk * (dk + 1.0)) * ss / correction;
    r.p = chisq_sf(r.chi2, r.df);
    return r;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("wilcoxon samples must be paired (equal length)");
    if (a.empty()) throw InvalidArgument("wilcoxon needs at least 1 pair");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) throw InvalidArgument("wilcoxon samples must be finite");
        if (d != 0.0) diffs.push_back(d);
    }
    WilcoxonResult r;
    r.n_effective = diffs.size();
    if (diffs.empty()) {
        r.degenerate = true;
        r.exact = true;
        return r;
    }
    std::vector<double> mags(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) mags[i] = std::abs(diffs[i]);
    const auto ranks = average_ranks(mags);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        (diffs[i] > 0.0 ? r.w_plus : r.w_minus) += ranks[i];
    }
    r.w = std::min(r.w_plus, r.w_minus);
    const std::size_t n = r.n_effective;
    const double dn = static_cast<double>(n);

    if (n <= kWilcoxonExactLimit) {
        // Doubled ranks are integers even with ties, so the enumeration is exact.
        std::vector<std::int64_t> doubled(n);
        for (std::size_t i = 0; i < n; ++i) doubled[i] = std::llround(2.0 * ranks[i]);
        const std::int64_t total = std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
        const std::int64_t observed = std::llround(2.0 * r.w_plus);
        const std::int64_t threshold = std::llabs(2 * observed - total);
        std::uint64_t hits = 0;
        const std::uint64_t count = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::uint64_t{1} << i)) s += doubled[i];
            }
            if (std::llabs(2 * s - total) >= threshold) ++hits;
        }
        r.exact = true;
        r.p = std::min(1.0, static_cast<double>(hits) / static_cast<double>(count));
        return r;
    }

    double tie_sum = 0.0;
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_sum += t * t * t - t;
        i = j;
    }
    const double mu = dn * (dn + 1.0) / 4.0;
    const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_sum / 48.0;
    const double diff = r.w - mu;
    const double cc = diff > 0.0 ? 0.5 : (diff < 0.0 ? -0.5 : 0.0);
    const double z = (diff - cc) / std::sqrt(var);
    r.p = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    return r;
}

std::vector<double> holm_correct(std::span<const double> pvalues) {
    return holm_correct(pvalues, pvalues.size());
}

std::vector<double> holm_correct(std::span<const double> pvalues, std::size_t family_size) {
    const std::size_t n = pvalues.size();
    if (family_size < n) {
        throw InvalidArgument("family size " + std::to_string(family_size) + " is smaller than the " +
                              std::to_string(n) + " p-values given");
    }
    for (double p : pvalues) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p-values must lie in [0,1]");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> adjusted(n);
    double running = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double factor = static_cast<double>(family_size - j);
        running = std::max(running, std::min(1.0, factor * pvalues[order[j]]));
        adjusted[order[j]] = running;
    }
    return adjusted;
}

SpearmanResult spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("spearman samples must have equal length");
    if (a.size() < 3) throw InvalidArgument("spearman needs at least 3 pairs");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw InvalidArgument("spearman samples must be finite");
        }
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double ma = mean(ra);
    const double mb = mean(rb);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        throw DomainError("spearman correlation undefined: an input has constant ranks");
    }
    SpearmanResult r;
    r.rho = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    if (1.0 - std::abs(r.rho) <= 4e-16) {
        r.rho = r.rho > 0.0 ? 1.0 : -1.0;
        r.p = 0.0;
        return r;
    }
    const double df = static_cast<double>(a.size()) - 2.0;
    const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
    r.p = student_t_two_sided_p(t, df);
    return r;
}

}  // namespace tactile::stats
