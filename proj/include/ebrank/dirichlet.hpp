#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "ebrank/markov.hpp"
#include "ebrank/matrix.hpp"

namespace ebrank {

// Fitted Dirichlet hyperparameters for the Polya (compound
// Dirichlet-multinomial) model. With the diagonal excluded, row i sees the
// leave-one-out concentration K_leave_i = K - gamma_i; without a mask,
// K_leave_i = K. alpha_i = n_i / (n_i + K_leave_i) is the per-row damping
// factor (0 exactly for dangling rows).
struct DirichletParams {
    Eigen::VectorXd gamma;
    double K = 0.0;
    Eigen::VectorXd K_leave;
    Eigen::VectorXd alpha;
    std::optional<Eigen::VectorXd> std_errors;
    bool mask_aware = false;
    std::vector<Eigen::Index> floored_columns;
};

enum class FitAlgorithm { FixedPoint, Inversion, LevenbergMarquardt, ConcentrationOnly };

struct FitReport {
    FitAlgorithm algorithm = FitAlgorithm::FixedPoint;
    int iterations = 0;
    double final_loglik = 0.0;
    bool converged = false;
    double elapsed_seconds = 0.0;
    // per-iteration (log-likelihood, max relative parameter change)
    std::vector<std::pair<double, double>> trace;
};

struct FitOptions {
    double eps1 = 1e-8;
    double eps2 = 1e-6;
    int max_iter = 1000;
    bool record_trace = true;
};

struct FitResult {
    DirichletParams params;
    FitReport report;
};

enum class PriorPreset { BayesLaplace, Jeffreys, Perks };

// gamma = 1, 1/2 or 1/N times the ones vector (K = N, N/2, 1).
DirichletParams prior_preset(PriorPreset kind, Eigen::Index n);

// Complete a gamma vector into DirichletParams against a matrix (computes
// K, K_leave and alpha under the matrix's mask).
DirichletParams make_params(const CitationMatrix& m, Eigen::VectorXd gamma);

// Empirical starting value gamma_j = N * c_{+j} / c_{++} over non-masked
// cells, floored at 1e-6.
Eigen::VectorXd empirical_start(const CitationMatrix& m);

// Sum over rows of the Polya log mass, dropping the gamma-free multinomial
// coefficient n_i! / prod c_ij!.
double marginal_log_likelihood(const CitationMatrix& m, const Eigen::VectorXd& gamma);

Eigen::VectorXd likelihood_gradient(const CitationMatrix& m, const Eigen::VectorXd& gamma);

Eigen::MatrixXd likelihood_hessian(const CitationMatrix& m, const Eigen::VectorXd& gamma);

// Majorize-Minimize multiplicative fixed point; log-likelihood ascends at
// every iteration.
FitResult fit_fixed_point(const CitationMatrix& m, Eigen::VectorXd gamma0,
                          const FitOptions& opts = {});

// Solve psi(x) = target by safeguarded Newton on (0, inf).
double invert_digamma(double target, double x0 = 1.0, int* iterations = nullptr);

// Outer digamma-inversion step, inner safeguarded Newton solve of
// psi(gamma_j) = a_j.
FitResult fit_inversion(const CitationMatrix& m, Eigen::VectorXd gamma0,
                        const FitOptions& opts = {});

// Damped Newton on the exact Hessian with the adaptive lambda schedule;
// reports standard errors from the observed information when it is positive
// definite.
FitResult fit_levenberg_marquardt(const CitationMatrix& m, Eigen::VectorXd gamma0,
                                  const FitOptions& opts = {});

// Fix the prior mean pi and estimate only the concentration K by its
// one-dimensional fixed point; gamma = K * pi.
FitResult fit_concentration_only(const CitationMatrix& m, const TeleportVector& pi, double k0,
                                 const FitOptions& opts = {});

}  // namespace ebrank
