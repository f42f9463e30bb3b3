#pragma once

#include <Eigen/Dense>

#include "ebrank/dirichlet.hpp"
#include "ebrank/markov.hpp"
#include "ebrank/matrix.hpp"

namespace ebrank {

// Posterior-mean smoothing matrix G*. Row i is
// (c_ij + gamma_j) / (n_i + K_leave_i) on non-masked cells and 0 elsewhere,
// equivalently alpha_i * p_ij + (1 - alpha_i) * gamma_j / K_leave_i.
struct SmoothedMatrix {
    Eigen::MatrixXd rows;
    Eigen::VectorXd per_row_alpha;
    Eigen::MatrixXd prior_rows;   // pi* with masked cells 0
    Mask mask;
    std::vector<std::string> labels;
};

SmoothedMatrix posterior_smoothing_matrix(const CitationMatrix& m, const DirichletParams& params);

TransitionMatrix to_transition(const SmoothedMatrix& g);

enum class StartKind { Empirical, Ones, Perks };

struct EbFitOptions {
    FitAlgorithm optimizer = FitAlgorithm::FixedPoint;
    bool lm_polish = true;   // refine the FP/INV optimum with LM when it succeeds
    StartKind start = StartKind::Empirical;
    FitOptions fit;
    double score_tol = 1e-12;
    int score_max_iter = 10000;
};

struct EbScoreResult {
    ScoreVector scores;
    DirichletParams params;
    FitReport report;
};

Eigen::VectorXd starting_gamma(const CitationMatrix& m, StartKind kind);

// Run the selected optimizer on a matrix (shared by the EBEF/EBPR pipelines
// and the fit CLI).
FitResult run_fit(const CitationMatrix& m, const EbFitOptions& opts);

// Diagonal-excluded empirical-Bayes score: fit gamma on the Polya likelihood,
// build G*, return its stationary distribution.
EbScoreResult ebef_score(const CitationMatrix& masked, const EbFitOptions& opts = {});

// Same pipeline on the full-dimension model (self-citations included).
EbScoreResult ebpr_score(const CitationMatrix& unmasked, const EbFitOptions& opts = {});

}  // namespace ebrank
