#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ebrank/matrix.hpp"

namespace ebrank {

enum class Normalization { SumOne, Sum1000, PerArticle };

struct ScoreVector {
    Eigen::VectorXd values;
    Normalization normalization = Normalization::SumOne;
    std::vector<std::string> labels;
};

enum class TeleportKind { Uniform, ArticleShare, Custom };

struct TeleportVector {
    Eigen::VectorXd probabilities;
    TeleportKind kind = TeleportKind::Uniform;
};

TeleportVector uniform_teleport(Eigen::Index n);
// a_i / a_+; requires the articles vector to be loaded.
TeleportVector article_share_teleport(const CitationMatrix& m);
TeleportVector custom_teleport(Eigen::VectorXd probabilities);

// G = alpha * P + (1 - alpha) * 1 t^T. Uniform teleport gives PageRank,
// article-share teleport the Eigenfactor-style matrix.
TransitionMatrix google_matrix(const TransitionMatrix& p, double alpha,
                               const TeleportVector& teleport);

// G2 = alpha2 * P + (1 - alpha2 - beta) * 1 pi^T + beta * 1 1^T / N.
TransitionMatrix psjr_matrix(const TransitionMatrix& p, double alpha2, double beta,
                             const TeleportVector& pi);

struct StationaryResult {
    ScoreVector scores;
    int iterations = 0;
};

// Left eigenvector r with r^T G = r^T, normalized to sum 1. Power iteration
// from the uniform vector, L1 convergence test.
StationaryResult stationary_distribution(const TransitionMatrix& g, double tol = 1e-12,
                                         int max_iter = 10000);

// AI_i = score_i / (a_i / a_+), scaled so the article-share weighted mean is 1.
ScoreVector article_influence(const ScoreVector& score, const CountVector& articles);

// PSJR preprocessing: clamp c_ii to at most `share` of the row total
// (diagonal included), re-applied until stable.
CitationMatrix cap_self_citations(const CitationMatrix& m, double share = 0.33);

// Presentation scale: multiply by 1000 (Sum1000 normalization tag).
ScoreVector scaled_by_1000(const ScoreVector& score);

}  // namespace ebrank
