#include "parnn/ranking.hpp"

#include "parnn/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace parnn {

RankMatrix rank_scores(const ScoreTable &table) {
    const long kappa = table.scores.rows();
    const long zeta = table.scores.cols();
    if (kappa < 2 || zeta < 1) {
        throw std::invalid_argument("score table needs at least 2 models and 1 dataset");
    }
    if (!table.model_names.empty() &&
        static_cast<long>(table.model_names.size()) != kappa) {
        throw std::invalid_argument("model_names length does not match score rows");
    }
    for (long i = 0; i < kappa; ++i) {
        for (long j = 0; j < zeta; ++j) {
            if (!std::isfinite(table.scores(i, j))) {
                throw std::invalid_argument("score table contains a non-finite value");
            }
        }
    }

    RankMatrix rm;
    rm.model_names = table.model_names;
    rm.ranks.resize(kappa, zeta);
    std::vector<long> order(static_cast<std::size_t>(kappa));
    for (long j = 0; j < zeta; ++j) {
        std::iota(order.begin(), order.end(), 0L);
        std::sort(order.begin(), order.end(), [&](long a, long b) {
            return table.scores(a, j) < table.scores(b, j);
        });
        long pos = 0;
        while (pos < kappa) {
            long end = pos + 1;
            while (end < kappa &&
                   table.scores(order[static_cast<std::size_t>(end)], j) ==
                       table.scores(order[static_cast<std::size_t>(pos)], j)) {
                ++end;
            }
            // positions pos..end-1 are tied; assign the average rank
            const double avg =
                (static_cast<double>(pos + 1) + static_cast<double>(end)) / 2.0;
            for (long t = pos; t < end; ++t) {
                rm.ranks(order[static_cast<std::size_t>(t)], j) = avg;
            }
            pos = end;
        }
    }
    rm.avg_ranks = rm.ranks.rowwise().mean();
    return rm;
}

FriedmanResult friedman_test(const RankMatrix &rm) {
    const long kappa = rm.ranks.rows();
    const long zeta = rm.ranks.cols();
    if (kappa < 3) {
        throw std::invalid_argument(
            "Friedman F approximation requires at least 3 models");
    }
    if (zeta < 2) {
        throw std::invalid_argument("Friedman test requires at least 2 datasets");
    }

    FriedmanResult res;
    const double k = static_cast<double>(kappa);
    const double z = static_cast<double>(zeta);
    const double sum_r2 = rm.avg_ranks.array().square().sum();
    res.chi2_f = (12.0 * z / (k * (k + 1.0))) * (sum_r2 - k * (k + 1.0) * (k + 1.0) / 4.0);
    if (res.chi2_f < 0.0 && res.chi2_f > -1e-9) {
        res.chi2_f = 0.0; // guard tiny negative rounding
    }
    res.df1 = static_cast<int>(kappa - 1);
    res.df2 = static_cast<int>((kappa - 1) * (zeta - 1));
    res.critical_5pct = f_critical(0.05, res.df1, res.df2);

    const double denom = z * (k - 1.0) - res.chi2_f;
    if (denom <= 0.0) {
        res.degenerate = true;
        res.f_f = std::numeric_limits<double>::infinity();
        res.reject_at_5pct = true;
        return res;
    }
    res.f_f = (z - 1.0) * res.chi2_f / denom;
    res.reject_at_5pct = res.f_f > res.critical_5pct;
    return res;
}

McbResult mcb_intervals(const RankMatrix &rm, double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const long kappa = rm.ranks.rows();
    const long zeta = rm.ranks.cols();
    if (kappa < 2) {
        throw std::invalid_argument("MCB needs at least 2 models");
    }

    McbResult res;
    const double k = static_cast<double>(kappa);
    const double z = static_cast<double>(zeta);
    const double q = normal_range_quantile(alpha, static_cast<int>(kappa));
    res.half_width = 0.5 * q * std::sqrt(k * (k + 1.0) / (6.0 * z));

    long best = 0;
    for (long i = 1; i < kappa; ++i) {
        if (rm.avg_ranks(i) < rm.avg_ranks(best)) {
            best = i;
        }
    }
    res.best_index = static_cast<int>(best);
    res.reference = rm.avg_ranks(best) + res.half_width;

    res.entries.resize(static_cast<std::size_t>(kappa));
    for (long i = 0; i < kappa; ++i) {
        McbEntry &e = res.entries[static_cast<std::size_t>(i)];
        if (!rm.model_names.empty()) {
            e.model = rm.model_names[static_cast<std::size_t>(i)];
        }
        e.avg_rank = rm.avg_ranks(i);
        e.lower = e.avg_rank - res.half_width;
        e.upper = e.avg_rank + res.half_width;
        e.significantly_worse_than_best = e.lower > res.reference;
    }
    return res;
}

} // namespace parnn
