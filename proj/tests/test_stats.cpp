#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "tactile/error.hpp"
#include "tactile/stats/distributions.hpp"
#include "tactile/stats/tests.hpp"

#include "stat_oracle_values.inc"

using namespace tactile;
using namespace tactile::stats;

namespace {

std::vector<Sample> samples(const std::vector<std::vector<double>>& groups) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < groups.size(); ++i) out.push_back({groups[i], "g" + std::to_string(i)});
    return out;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_SUITE("stats") {
    TEST_CASE("distribution functions match the reference values") {
        for (const CdfPoint& c : kStudentT) CHECK(close(student_t_cdf(c.x, c.a), c.value, 1e-10));
        for (const CdfPoint& c : kFisherF) CHECK(close(f_cdf(c.x, c.a, c.b), c.value, 1e-10));
        for (const CdfPoint& c : kChiSquare) CHECK(close(chisq_cdf(c.x, c.a), c.value, 1e-10));
        for (const TukeyPoint& c : kStudentizedRange) {
            CAPTURE(c.q);
            CHECK(close(studentized_range_cdf(c.q, c.k, c.df), c.cdf, 1e-8));
        }
    }

    TEST_CASE("closed forms") {
        CHECK(chisq_cdf(2.0 * std::log(2.0), 2.0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(normal_cdf(0.0) == 0.5);
        CHECK(normal_sf(10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-10));
        CHECK(student_t_two_sided_p(0.0, 4.0) == 1.0);
        CHECK(f_sf(1.0, 3.0, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), DomainError);
        CHECK_THROWS_AS(chisq_sf(1.0, -1.0), DomainError);
    }

    TEST_CASE("studentized range quantiles match the published table") {
        struct Row { double p, k, df, q; };
        const Row rows[] = {
            {0.95, 3, 10, 3.877}, {0.95, 2, 10, 3.151}, {0.95, 4, 20, 3.958}, {0.99, 3, 10, 5.270},
            {0.95, 5, 30, 4.102}, {0.95, 10, 60, 4.646}, {0.99, 4, 24, 4.907},
        };
        for (const Row& r : rows) {
            CAPTURE(r.k);
            CAPTURE(r.df);
            CHECK(close(studentized_range_quantile(r.p, r.k, r.df), r.q, 1e-2));
        }
        // With two groups the range is |Z1 - Z2| so q / sqrt(2) is a t statistic.
        const double t = 2.3;
        CHECK(close(studentized_range_sf(t * std::sqrt(2.0), 2, 9), student_t_two_sided_p(t, 9), 1e-8));
        CHECK(close(studentized_range_cdf(3.314, 3, std::numeric_limits<double>::infinity()), 0.95, 1e-3));
    }

    TEST_CASE("welch t against reference") {
        for (const WelchTFixture& f : kWelchT) {
            const TTestResult r = welch_t({f.a, "a"}, {f.b, "b"});
            CHECK(close(r.t, f.t, 1e-9));
            CHECK(close(r.df, f.df, 1e-9));
            CHECK(close(r.p, f.p, 1e-9));
        }
    }

    TEST_CASE("welch t properties") {
        const Sample a{{0.3, 0.1, 0.5, 0.9, 0.2, 0.4}, "a"};
        const Sample b{{0.8, 1.1, 0.7, 1.5}, "b"};
        const TTestResult ab = welch_t(a, b);
        const TTestResult ba = welch_t(b, a);
        CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-14));
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-14));

        // Invariant under a common affine map with positive scale.
        Sample a2 = a;
        Sample b2 = b;
        for (double& v : a2.values) v = 3.0 * v + 7.0;
        for (double& v : b2.values) v = 3.0 * v + 7.0;
        const TTestResult scaled = welch_t(a2, b2);
        CHECK(scaled.t == doctest::Approx(ab.t).epsilon(1e-12));
        CHECK(scaled.p == doctest::Approx(ab.p).epsilon(1e-12));

        // Two-group Welch ANOVA reduces to the squared t statistic.
        const AnovaResult an = welch_anova({a, b});
        CHECK(close(an.f, ab.t * ab.t, 1e-9));
        CHECK(close(an.df2, ab.df, 1e-9));
        CHECK(close(an.p, ab.p, 1e-9));

        CHECK_THROWS_AS(welch_t({{1.0}, "x"}, b), InvalidArgument);
        const TTestResult same = welch_t({{2.0, 2.0}, "x"}, {{2.0, 2.0, 2.0}, "y"});
        CHECK(same.t == 0.0);
        CHECK(same.p == 1.0);
        CHECK_THROWS_AS(welch_t({{2.0, 2.0}, "x"}, {{3.0, 3.0}, "y"}), DomainError);
    }

    TEST_CASE("welch anova against reference") {
        for (const WelchAnovaFixture& f : kWelchAnova) {
            const AnovaResult r = welch_anova(samples(f.groups));
            CHECK(close(r.f, f.f, 1e-9 * std::max(1.0, f.f)));
            CHECK(close(r.df1, f.df1, 1e-12));
            CHECK(close(r.df2, f.df2, 1e-9));
            CHECK(close(r.p, f.p, 1e-9));
        }
        CHECK_THROWS_AS(welch_anova(samples({{1, 2, 3}})), InvalidArgument);
        CHECK_THROWS_WITH_AS(welch_anova({{{1, 2, 3}, "a"}, {{4, 4, 4}, "flat"}}), doctest::Contains("flat"),
                             DomainError);
    }

    TEST_CASE("games-howell against reference") {
        for (const GamesHowellFixture& f : kGamesHowell) {
            const auto entries = games_howell(samples(f.groups));
            REQUIRE(entries.size() == f.pairs.size());
            for (std::size_t n = 0; n < entries.size(); ++n) {
                const GamesHowellPair& want = f.pairs[n];
                CHECK(entries[n].first == "g" + std::to_string(want.i));
                CHECK(entries[n].second == "g" + std::to_string(want.j));
                CHECK(close(entries[n].t, want.t, 1e-9));
                CHECK(close(entries[n].df, want.df, 1e-9));
                CHECK(close(entries[n].p, want.p, 1e-6));
            }
        }
    }

    TEST_CASE("friedman against reference") {
        for (const FriedmanFixture& f : kFriedman) {
            const FriedmanResult r = friedman(f.rows);
            CHECK(close(r.chi2, f.chi2, 1e-9));
            CHECK(r.df == f.df);
            CHECK(close(r.p, f.p, 1e-9));
        }
        // Three subjects ranking three conditions identically.
        CHECK(friedman({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}).chi2 == doctest::Approx(6.0));
        const FriedmanResult flat = friedman({{2, 2}, {3, 3}});
        CHECK(flat.chi2 == 0.0);
        CHECK(flat.p == 1.0);
        CHECK_THROWS_AS(friedman({{1, 2}, {1, 2, 3}}), InvalidArgument);
    }

    TEST_CASE("friedman is invariant under monotone transforms within a subject") {
        const std::vector<std::vector<double>> rows = {{7, 5, 6, 4}, {6, 6, 5, 3}, {5, 7, 7, 2}, {7, 6, 4, 4}};
        auto transformed = rows;
        for (auto& r : transformed) {
            for (double& v : r) v = std::exp(v) + 3.0;
        }
        CHECK(friedman(rows).chi2 == doctest::Approx(friedman(transformed).chi2).epsilon(1e-12));
    }

    TEST_CASE("wilcoxon exact and normal approximation against reference") {
        for (const WilcoxonFixture& f : kWilcoxonExact) {
            const WilcoxonResult r = wilcoxon_signed_rank(f.a, f.b);
            CHECK(r.exact);
            CHECK(r.w == f.w);
            CHECK(r.n_effective == f.n_effective);
            CHECK(close(r.p, f.p, 1e-12));
        }
        for (const WilcoxonFixture& f : kWilcoxonApprox) {
            const WilcoxonResult r = wilcoxon_signed_rank(f.a, f.b);
            CHECK_FALSE(r.exact);
            CHECK(r.w == f.w);
            CHECK(r.n_effective == f.n_effective);
            CHECK(close(r.p, f.p, 1e-9));
        }
    }

    TEST_CASE("wilcoxon edge cases") {
        const std::vector<double> a = {1, 2, 3, 4, 5, 6};
        const std::vector<double> b = {2, 3, 4, 5, 6, 7};
        const WilcoxonResult r = wilcoxon_signed_rank(a, b);
        CHECK(r.p == doctest::Approx(0.03125).epsilon(1e-14));
        CHECK(r.w_plus + r.w_minus == doctest::Approx(21.0));
        const WilcoxonResult z = wilcoxon_signed_rank(a, a);
        CHECK(z.degenerate);
        CHECK(z.p == 1.0);
        const std::vector<double> shorter = {1, 2};
        CHECK_THROWS_AS(wilcoxon_signed_rank(a, shorter), InvalidArgument);
    }

    TEST_CASE("holm against reference and family size") {
        for (const HolmFixture& f : kHolm) {
            const auto adj = holm_correct(f.p);
            REQUIRE(adj.size() == f.adjusted.size());
            for (std::size_t i = 0; i < adj.size(); ++i) CHECK(close(adj[i], f.adjusted[i], 1e-12));
        }
        const std::vector<double> p = {0.01, 0.04};
        const auto wide = holm_correct(p, 5);
        CHECK(wide[0] == doctest::Approx(0.05));
        CHECK(wide[1] == doctest::Approx(0.16));
        CHECK_THROWS_AS(holm_correct(p, 1), InvalidArgument);

        // Adjusted values preserve the order of the raw p-values.
        const std::vector<double> raw = {0.9, 0.0001, 0.02, 0.6, 0.013, 0.049};
        const auto adj = holm_correct(raw);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            for (std::size_t j = 0; j < raw.size(); ++j) {
                if (raw[i] < raw[j]) CHECK(adj[i] <= adj[j]);
            }
            CHECK(adj[i] >= raw[i]);
        }
    }

    TEST_CASE("spearman against reference") {
        for (const SpearmanFixture& f : kSpearman) {
            const SpearmanResult r = spearman(f.a, f.b);
            CHECK(close(r.rho, f.rho, 1e-12));
            CHECK(close(r.p, f.p, 1e-9));
        }
        const std::vector<double> x = {1, 2, 3, 4};
        const std::vector<double> y = {10, 100, 1000, 10000};
        const SpearmanResult perfect = spearman(x, y);
        CHECK(perfect.rho == 1.0);
        CHECK(perfect.p == 0.0);
    }

    TEST_CASE("average ranks") {
        const std::vector<double> v = {3.0, 1.0, 3.0, 2.0};
        CHECK(average_ranks(v) == std::vector<double>{3.5, 1.0, 3.5, 2.0});
        CHECK(mean(v) == 2.25);
        CHECK(sample_variance(std::vector<double>{1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0));
    }

    TEST_CASE("identical groups") {
        const std::vector<double> v = {1.0, 2.5, 3.0, 4.5};
        const AnovaResult a = welch_anova({{v, "a"}, {v, "b"}, {v, "c"}});
        CHECK(a.f == doctest::Approx(0.0));
        CHECK(a.p == doctest::Approx(1.0));
        const auto gh = games_howell({{v, "a"}, {v, "b"}});
        CHECK(gh[0].t == 0.0);
        CHECK(gh[0].p == doctest::Approx(1.0).epsilon(1e-9));
        const TTestResult t = welch_t({v, "a"}, {v, "b"});
        CHECK(t.t == 0.0);
        CHECK(t.p == 1.0);
    }

    TEST_CASE("games-howell with two groups agrees with welch t") {
        for (const WelchTFixture& f : kWelchT) {
            const auto gh = games_howell({{f.a, "a"}, {f.b, "b"}});
            CHECK(close(gh[0].p, welch_t({f.a, "a"}, {f.b, "b"}).p, 2e-3));
        }
    }

    TEST_CASE("spearman monotone and reversed") {
        const std::vector<double> a = {0.3, 1.2, -0.7, 5.0, 2.2};
        std::vector<double> up;
        std::vector<double> down;
        for (double x : a) {
            up.push_back(std::exp(x));
            down.push_back(-x * x * x);
        }
        CHECK(spearman(a, up).rho == 1.0);
        CHECK(spearman(a, down).rho == -1.0);
    }

    TEST_CASE("holm single p and friedman without differences") {
        const std::vector<double> one = {0.2};
        CHECK(holm_correct(one) == one);
        const FriedmanResult r = friedman({{3, 3, 3}, {1, 1, 1}, {5, 5, 5}});
        CHECK(r.chi2 == 0.0);
        CHECK(r.p == 1.0);
        CHECK(friedman({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}).p == doctest::Approx(0.04978706836786395).epsilon(1e-12));
    }

    TEST_CASE("wilcoxon exact p by brute force over sign assignments") {
        const std::vector<double> a = {1.83, 0.5, 1.62, 2.48, 1.68, 1.88, 1.55, 3.06, 1.3};
        const std::vector<double> b = {0.878, 0.647, 0.598, 2.05, 1.06, 1.29, 1.06, 3.14, 1.29};
        std::vector<double> d;
        for (std::size_t i = 0; i < a.size(); ++i) d.push_back(std::abs(a[i] - b[i]));
        const auto ranks = average_ranks(d);
        double total = 0.0;
        double w_plus = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            total += ranks[i];
            if (a[i] > b[i]) w_plus += ranks[i];
        }
        const double observed = std::abs(2.0 * w_plus - total);
        std::size_t extreme = 0;
        const std::size_t n = a.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::size_t{1} << i)) s += ranks[i];
            }
            extreme += std::abs(2.0 * s - total) >= observed - 1e-9;
        }
        const double p = static_cast<double>(extreme) / static_cast<double>(std::size_t{1} << n);
        CHECK(wilcoxon_signed_rank(a, b).p == doctest::Approx(p).epsilon(1e-14));
    }
}
