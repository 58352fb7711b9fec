#include "parnn/distributions.hpp"
#include "parnn/ranking.hpp"
#include "parnn/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace parnn;

namespace {

ScoreTable table_from(const std::vector<std::vector<double>> &rows) {
    ScoreTable t;
    t.scores.resize(static_cast<long>(rows.size()),
                    static_cast<long>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.model_names.push_back("m" + std::to_string(i));
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            t.scores(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
        }
    }
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
        t.dataset_names.push_back("d" + std::to_string(j));
    }
    return t;
}

} // namespace

TEST_CASE("ranking worked examples") {
    const RankMatrix rm = rank_scores(table_from({{0.3}, {0.1}, {0.2}}));
    CHECK(rm.ranks(0, 0) == 3.0);
    CHECK(rm.ranks(1, 0) == 1.0);
    CHECK(rm.ranks(2, 0) == 2.0);

    const RankMatrix tied = rank_scores(table_from({{0.1}, {0.1}, {0.5}}));
    CHECK(tied.ranks(0, 0) == 1.5);
    CHECK(tied.ranks(1, 0) == 1.5);
    CHECK(tied.ranks(2, 0) == 3.0);

    ScoreTable bad = table_from({{0.1}, {0.2}});
    bad.scores(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(rank_scores(bad), std::invalid_argument);
}

TEST_CASE("rank columns always sum to kappa(kappa+1)/2") {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const int kappa = 2 + static_cast<int>(rng.uniform() * 6);
        const int zeta = 1 + static_cast<int>(rng.uniform() * 6);
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(kappa));
        for (auto &row : rows) {
            row.resize(static_cast<std::size_t>(zeta));
            for (double &v : row) {
                // coarse grid to provoke ties
                v = std::floor(rng.uniform() * 4.0);
            }
        }
        const RankMatrix rm = rank_scores(table_from(rows));
        const double expected = kappa * (kappa + 1) / 2.0;
        for (long j = 0; j < rm.ranks.cols(); ++j) {
            CHECK(rm.ranks.col(j).sum() == doctest::Approx(expected).epsilon(1e-12));
        }
        for (long i = 0; i < rm.ranks.rows(); ++i) {
            CHECK(rm.avg_ranks(i) == doctest::Approx(rm.ranks.row(i).mean()));
        }
    }
}

TEST_CASE("friedman degrees of freedom and critical value match the published anchor") {
    // 13 models x 14 datasets
    Rng rng(3);
    std::vector<std::vector<double>> rows(13);
    for (auto &row : rows) {
        row.resize(14);
        for (double &v : row) v = rng.uniform();
    }
    const FriedmanResult fr = friedman_test(rank_scores(table_from(rows)));
    CHECK(fr.df1 == 12);
    CHECK(fr.df2 == 156);
    CHECK(std::fabs(fr.critical_5pct - 1.815) <= 0.005);
}

TEST_CASE("friedman hand-computed example") {
    // 3 models x 4 datasets with consistent ordering: avg ranks (1,2,3)
    const RankMatrix rm = rank_scores(
        table_from({{1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3}}));
    CHECK(rm.avg_ranks(0) == 1.0);
    CHECK(rm.avg_ranks(2) == 3.0);
    const FriedmanResult fr = friedman_test(rm);
    CHECK(fr.chi2_f == doctest::Approx(8.0).epsilon(1e-12));
    // perfect agreement makes the F statistic degenerate
    CHECK(fr.degenerate);
    CHECK(fr.reject_at_5pct);
    CHECK(std::isinf(fr.f_f));
}

TEST_CASE("friedman accepts the null when every model ties") {
    ScoreTable t = table_from({{1, 1}, {1, 1}, {1, 1}});
    const FriedmanResult fr = friedman_test(rank_scores(t));
    CHECK(fr.chi2_f == doctest::Approx(0.0));
    CHECK(fr.f_f == doctest::Approx(0.0));
    CHECK_FALSE(fr.reject_at_5pct);
}

TEST_CASE("friedman statistic only depends on within-dataset order") {
    Rng rng(9);
    std::vector<std::vector<double>> rows(4);
    for (auto &row : rows) {
        row.resize(6);
        for (double &v : row) v = rng.normal();
    }
    const FriedmanResult base = friedman_test(rank_scores(table_from(rows)));

    // apply a strictly monotone transform per dataset column
    std::vector<std::vector<double>> warped = rows;
    for (std::size_t j = 0; j < warped.front().size(); ++j) {
        const double a = 0.5 + rng.uniform() * 3.0;
        const double b = rng.normal();
        for (std::size_t i = 0; i < warped.size(); ++i) {
            warped[i][j] = a * std::exp(rows[i][j]) + b;
        }
    }
    const FriedmanResult after = friedman_test(rank_scores(table_from(warped)));
    CHECK(after.chi2_f == doctest::Approx(base.chi2_f).epsilon(1e-12));
    CHECK(after.f_f == doctest::Approx(base.f_f).epsilon(1e-12));
}

TEST_CASE("mcb flags a clearly dominant model and spares identical ones") {
    // model 0 ranks first on every one of many datasets
    const int zeta = 60;
    std::vector<std::vector<double>> rows(3);
    for (int j = 0; j < zeta; ++j) {
        rows[0].push_back(1.0);
        rows[1].push_back(2.0 + (j % 2));
        rows[2].push_back(3.0 - (j % 2));
    }
    const McbResult res = mcb_intervals(rank_scores(table_from(rows)), 0.05);
    CHECK(res.best_index == 0);
    CHECK_FALSE(res.entries[0].significantly_worse_than_best);
    CHECK(res.entries[1].significantly_worse_than_best);
    CHECK(res.entries[2].significantly_worse_than_best);

    // two identical models never flag each other
    std::vector<std::vector<double>> same(2);
    for (int j = 0; j < 10; ++j) {
        same[0].push_back(1.0);
        same[1].push_back(1.0);
    }
    const McbResult tie = mcb_intervals(rank_scores(table_from(same)), 0.05);
    CHECK_FALSE(tie.entries[0].significantly_worse_than_best);
    CHECK_FALSE(tie.entries[1].significantly_worse_than_best);
}

TEST_CASE("mcb flags are equivariant under model relabeling") {
    Rng rng(5);
    std::vector<std::vector<double>> rows(5);
    for (auto &row : rows) {
        row.resize(12);
        for (double &v : row) v = rng.normal();
    }
    const McbResult base = mcb_intervals(rank_scores(table_from(rows)), 0.05);

    std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    std::vector<std::vector<double>> permuted(rows.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        permuted[i] = rows[perm[i]];
    }
    const McbResult shuffled = mcb_intervals(rank_scores(table_from(permuted)), 0.05);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        CHECK(shuffled.entries[i].significantly_worse_than_best ==
              base.entries[perm[i]].significantly_worse_than_best);
        CHECK(shuffled.entries[i].avg_rank ==
              doctest::Approx(base.entries[perm[i]].avg_rank));
    }
}

TEST_CASE("range-of-normals quantile agrees with a monte carlo oracle within 2%") {
    const int kappa = 13;
    const double analytic = normal_range_quantile(0.05, kappa);

    Rng rng(123456);
    const int samples = 1000000;
    std::vector<double> ranges(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < kappa; ++i) {
            const double z = rng.normal();
            lo = std::min(lo, z);
            hi = std::max(hi, z);
        }
        ranges[static_cast<std::size_t>(s)] = hi - lo;
    }
    std::nth_element(ranges.begin(), ranges.begin() + (samples * 95) / 100, ranges.end());
    const double mc = ranges[static_cast<std::size_t>((samples * 95) / 100)];
    CHECK(std::fabs(analytic - mc) / mc < 0.02);
}

TEST_CASE("half-width formula for the published table shape") {
    // kappa=13, zeta=42: half width = 0.5 * q * sqrt(13*14/(6*42))
    Rng rng(2);
    std::vector<std::vector<double>> rows(13);
    for (auto &row : rows) {
        row.resize(42);
        for (double &v : row) v = rng.normal();
    }
    const McbResult res = mcb_intervals(rank_scores(table_from(rows)), 0.05);
    const double q = normal_range_quantile(0.05, 13);
    CHECK(res.half_width ==
          doctest::Approx(0.5 * q * std::sqrt(13.0 * 14.0 / (6.0 * 42.0))));
}
