#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace parnn {

/// Accuracy scores for kappa models across zeta datasets; lower is better.
struct ScoreTable {
    std::vector<std::string> model_names;   // length kappa
    std::vector<std::string> dataset_names; // length zeta
    Eigen::MatrixXd scores;                 // kappa x zeta
};

struct RankMatrix {
    Eigen::MatrixXd ranks;    // kappa x zeta; each column sums to kappa(kappa+1)/2
    Eigen::VectorXd avg_ranks;
    std::vector<std::string> model_names;
};

/// Per-dataset ranking, smallest score = rank 1, ties averaged.
RankMatrix rank_scores(const ScoreTable &table);

struct FriedmanResult {
    double chi2_f = 0.0;
    double f_f = 0.0;
    int df1 = 0;
    int df2 = 0;
    double critical_5pct = 0.0;
    bool reject_at_5pct = false;
    bool degenerate = false; // chi2 reached its maximum; F statistic infinite
};

/// Modified Friedman test:
///   chi2_F = 12 zeta / (kappa (kappa+1)) * [sum R_i^2 - kappa (kappa+1)^2 / 4]
///   F_F    = (zeta - 1) chi2_F / (zeta (kappa - 1) - chi2_F)
/// compared against the F(kappa-1, (kappa-1)(zeta-1)) critical value at 5%.
FriedmanResult friedman_test(const RankMatrix &rm);

struct McbEntry {
    std::string model;
    double avg_rank = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool significantly_worse_than_best = false;
};

struct McbResult {
    std::vector<McbEntry> entries; // in input model order
    double half_width = 0.0;
    int best_index = 0;
    double reference = 0.0; // upper bound of the best model's interval
};

/// Multiple comparisons with the best: each model gets avg_rank +-
/// half_width where half_width = 0.5 * q_{alpha,kappa} *
/// sqrt(kappa (kappa+1) / (6 zeta)) and q is the upper-alpha quantile of
/// the range of kappa standard normals. A model is significantly worse
/// than the best when its lower bound exceeds the best model's upper
/// bound.
McbResult mcb_intervals(const RankMatrix &rm, double alpha);

} // namespace parnn
