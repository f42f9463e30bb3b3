#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

namespace ebrank {

// Generic damped-Newton maximizer used by the Dirichlet fitter. The damped
// system is solved on the negated Hessian so it is positive definite near a
// maximum. lambda starts at 0 (pure Newton) and follows the adaptive
// schedule lambda <- lambda * max(1/3, 1 - (2 rho - 1)^3) on a successful
// step, lambda <- 2 lambda otherwise.
struct LmProblem {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
    // keep all coordinates strictly positive by step halving
    bool positive_domain = true;
};

struct LmOptions {
    double eps1 = 1e-8;
    double eps2 = 1e-6;
    int max_iter = 1000;
    bool record_trace = true;
};

struct LmResult {
    Eigen::VectorXd x;
    int iterations = 0;       // accepted steps
    bool converged = false;
    double final_value = 0.0;
    std::vector<std::pair<double, double>> trace;  // (value, step norm ratio)
};

LmResult lm_maximize(const LmProblem& problem, Eigen::VectorXd x0, const LmOptions& opts = {});

}  // namespace ebrank
