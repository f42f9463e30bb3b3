#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ebrank/ebscores.hpp"
#include "ebrank/markov.hpp"
#include "ebrank/matrix.hpp"

namespace ebrank {

// Spearman rank correlation (Pearson on average ranks) and tie-corrected
// Kendall tau-b. Both throw InputError on constant input.
double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double kendall_tau(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct RankComparison {
    std::vector<std::string> methods;
    Eigen::MatrixXd scores;        // methods x nodes
    Eigen::MatrixXd spearman;      // symmetric, unit diagonal
    Eigen::MatrixXd kendall;
};

RankComparison compare_rankings(const std::vector<std::string>& methods,
                                const std::vector<Eigen::VectorXd>& scores);

struct SelfCitationProfile {
    std::string label;
    std::int64_t self_count = 0;           // c_ii
    std::int64_t received_external = 0;    // R = c_{+i} - c_ii
    std::int64_t made_external = 0;        // M = c_{i+} - c_ii
    double rate = 0.0;                     // c_ii / c_{i+}
    double kappa = 1.0;
    double s0 = 0.0;                       // S_i(0)
    double s_kappa = 0.0;                  // S_i(kappa)
    double s(double kappa_value) const;    // S_i at an arbitrary kappa
};

// Per-node self-citation attenuation weights
// kappa = min(min(R, M) / c_ii, 1), with kappa = 1 when c_ii = 0.
std::vector<SelfCitationProfile> self_citation_profile(const CitationMatrix& m);

// Replace the diagonal by round(kappa_i * c_ii); an extension of the
// score-level rule to count space, rounding kept explicit.
CitationMatrix apply_kappa(const CitationMatrix& m, const Eigen::VectorXd& kappa);

enum class SampleMode { Bernoulli, BetaBernoulli };

struct HalfSampleConfig {
    double a = 10.0;
    double b = 10.0;
    int replicates = 200;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::BetaBernoulli;
    // implied intra-class correlation of the Beta-Bernoulli draws
    double intra_class_correlation() const { return 1.0 / (a + b + 1.0); }
};

struct HalfSamplePair {
    CitationMatrix training;
    CitationMatrix complement;   // counts - training, cellwise
};

// Thin each cell independently. Bernoulli mode keeps each citation with
// probability 1/2; BetaBernoulli draws q_ij ~ Beta(a,b) per cell and keeps
// with probability 1 - q_ij. Deterministic given (seed, replicate, cell):
// every cell owns a splitmix64-derived substream.
HalfSamplePair half_sample(const CitationMatrix& m, const HalfSampleConfig& cfg,
                           int replicate = 0);

enum class ScoreMethod { PR, EIFA, PSJR, EBPR, EBEF };

std::string method_name(ScoreMethod method);
ScoreMethod parse_method(const std::string& name);

struct MethodOptions {
    double alpha = 0.85;       // PR / EIFA damping
    double alpha2 = 0.90;      // PSJR
    double beta = 1e-4;        // PSJR uniform term
    double psjr_self_cap = 0.33;
    EbFitOptions eb;
};

// Score one matrix with one method. EB methods may reuse externally fitted
// parameters (half-sampling fits on the training half and scores the
// complement).
ScoreVector score_matrix(const CitationMatrix& unmasked, ScoreMethod method,
                         const MethodOptions& opts = {},
                         const Eigen::VectorXd* fitted_gamma = nullptr);

struct HalfSampleStudyResult {
    std::vector<ScoreMethod> methods;
    std::vector<ScoreVector> mean_scores;
    int completed = 0;
    int failed = 0;
};

// Per replicate: split the matrix, fit gamma on the training half, score the
// complement with those parameters, then average over replicates. All
// methods are scored on the complement for comparability.
HalfSampleStudyResult half_sampling_study(const CitationMatrix& unmasked,
                                          const std::vector<ScoreMethod>& methods,
                                          const HalfSampleConfig& cfg,
                                          const MethodOptions& opts = {});

}  // namespace ebrank
