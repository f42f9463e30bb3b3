#include "ebrank/lm.hpp"

#include <cmath>
#include <limits>

#include "ebrank/errors.hpp"

namespace ebrank {

LmResult lm_maximize(const LmProblem& problem, Eigen::VectorXd x0, const LmOptions& opts) {
    LmResult res;
    Eigen::VectorXd x = std::move(x0);
    double value = problem.value(x);
    double lambda = 0.0;
    int escalations = 0;

    for (int pass = 0; pass < opts.max_iter; ++pass) {
        const Eigen::VectorXd grad = problem.gradient(x);
        if (grad.lpNorm<Eigen::Infinity>() < 1e-12 * (1.0 + std::abs(value))) {
            res.converged = true;
            res.x = std::move(x);
            res.final_value = value;
            return res;
        }
        const Eigen::MatrixXd neg_hess = -problem.hessian(x);
        const Eigen::VectorXd diag = neg_hess.diagonal();

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = neg_hess;
            damped.diagonal() += lambda * diag;
            Eigen::LDLT<Eigen::MatrixXd> solver(damped);
            Eigen::VectorXd step;
            bool usable = solver.info() == Eigen::Success;
            if (usable) {
                step = solver.solve(grad);
                usable = step.allFinite();
            }
            double predicted = 0.0;
            if (usable) {
                predicted = 0.5 * step.dot(neg_hess * step) +
                            0.5 * lambda * step.dot(diag.cwiseProduct(step));
                usable = predicted > 0.0 && std::isfinite(predicted);
            }
            if (usable && problem.positive_domain) {
                int halvings = 0;
                while ((x + step).minCoeff() <= 0.0 && halvings < 60) {
                    step *= 0.5;
                    predicted = 0.5 * step.dot(neg_hess * step) +
                                0.5 * lambda * step.dot(diag.cwiseProduct(step));
                    ++halvings;
                }
                usable = halvings < 60;
            }
            double rho = -1.0;
            double trial_value = -std::numeric_limits<double>::infinity();
            Eigen::VectorXd trial;
            if (usable) {
                trial = x + step;
                trial_value = problem.value(trial);
                rho = (trial_value - value) / predicted;
            }
            if (usable && std::isfinite(trial_value) && rho > 0.0) {
                const double ratio = step.norm() / (x.norm() + opts.eps1);
                x = std::move(trial);
                value = trial_value;
                lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3.0));
                ++res.iterations;
                if (opts.record_trace) res.trace.emplace_back(value, ratio);
                accepted = true;
                if (ratio < opts.eps2) {
                    res.converged = true;
                    res.x = x;
                    res.final_value = value;
                    return res;
                }
            } else {
                lambda = std::max(2.0 * lambda, 1e-4);
                if (++escalations > 50)
                    throw ConvergenceError(
                        "damped Newton system remained unusable after 50 damping escalations");
            }
        }
        escalations = 0;
    }
    throw ConvergenceError("Levenberg-Marquardt did not converge within " +
                           std::to_string(opts.max_iter) + " iterations");
}

}  // namespace ebrank
