#include "ebrank/dirichlet.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ebrank/lm.hpp"
#include "ebrank/special.hpp"

namespace ebrank {

namespace {

constexpr double kGammaFloor = 1e-8;

// Cached per-row view of the masked count matrix.
struct ModelView {
    Eigen::Index n_nodes = 0;
    Eigen::MatrixXd counts;                       // masked cells are 0
    std::vector<std::vector<Eigen::Index>> active;  // non-masked columns per row
    Eigen::VectorXd row_n;                        // n_i over active cells

    explicit ModelView(const CitationMatrix& m) {
        n_nodes = m.size();
        counts = m.counts.cast<double>();
        active.resize(static_cast<std::size_t>(n_nodes));
        row_n = Eigen::VectorXd::Zero(n_nodes);
        for (Eigen::Index i = 0; i < n_nodes; ++i) {
            for (Eigen::Index j = 0; j < n_nodes; ++j) {
                if (!m.structural_mask(i, j)) {
                    active[static_cast<std::size_t>(i)].push_back(j);
                    row_n(i) += counts(i, j);
                }
            }
        }
    }

    double prior_row_sum(Eigen::Index i, const Eigen::VectorXd& gamma) const {
        double k = 0.0;
        for (Eigen::Index j : active[static_cast<std::size_t>(i)]) k += gamma(j);
        return k;
    }
};

void check_positive(const Eigen::VectorXd& gamma) {
    if ((gamma.array() <= 0.0).any())
        throw InputError("Dirichlet parameters must be strictly positive");
}

double loglik(const ModelView& v, const Eigen::VectorXd& gamma) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < v.n_nodes; ++i) {
        if (v.row_n(i) == 0.0) continue;  // L_i = 0 for dangling rows
        const double k = v.prior_row_sum(i, gamma);
        total += log_gamma(k) - log_gamma(v.row_n(i) + k);
        for (Eigen::Index j : v.active[static_cast<std::size_t>(i)]) {
            const double c = v.counts(i, j);
            if (c > 0.0) total += log_gamma(c + gamma(j)) - log_gamma(gamma(j));
        }
    }
    return total;
}

Eigen::VectorXd grad(const ModelView& v, const Eigen::VectorXd& gamma) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(v.n_nodes);
    for (Eigen::Index i = 0; i < v.n_nodes; ++i) {
        if (v.row_n(i) == 0.0) continue;
        const double k = v.prior_row_sum(i, gamma);
        const double row_term = digamma(k) - digamma(v.row_n(i) + k);
        for (Eigen::Index j : v.active[static_cast<std::size_t>(i)]) {
            g(j) += row_term + digamma(v.counts(i, j) + gamma(j)) - digamma(gamma(j));
        }
    }
    return g;
}

Eigen::MatrixXd hess(const ModelView& v, const Eigen::VectorXd& gamma) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(v.n_nodes, v.n_nodes);
    for (Eigen::Index i = 0; i < v.n_nodes; ++i) {
        if (v.row_n(i) == 0.0) continue;
        const auto& cols = v.active[static_cast<std::size_t>(i)];
        const double k = v.prior_row_sum(i, gamma);
        const double row_term = trigamma(k) - trigamma(v.row_n(i) + k);
        for (Eigen::Index j : cols) {
            for (Eigen::Index l : cols) h(j, l) += row_term;
            h(j, j) += trigamma(v.counts(i, j) + gamma(j)) - trigamma(gamma(j));
        }
    }
    return h;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void apply_floor(Eigen::VectorXd& gamma, std::vector<Eigen::Index>& floored) {
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
        if (gamma(j) <= kGammaFloor) {
            gamma(j) = kGammaFloor;
            if (std::find(floored.begin(), floored.end(), j) == floored.end())
                floored.push_back(j);
        }
    }
}

FitResult finish(const CitationMatrix& m, Eigen::VectorXd gamma, FitReport report,
                 std::vector<Eigen::Index> floored) {
    FitResult res;
    res.params = make_params(m, std::move(gamma));
    res.params.floored_columns = std::move(floored);
    res.report = std::move(report);
    return res;
}

}  // namespace

DirichletParams prior_preset(PriorPreset kind, Eigen::Index n) {
    if (n < 2) throw InputError("prior presets require at least 2 nodes");
    DirichletParams p;
    double value = 1.0;
    switch (kind) {
        case PriorPreset::BayesLaplace: value = 1.0; break;
        case PriorPreset::Jeffreys: value = 0.5; break;
        case PriorPreset::Perks: value = 1.0 / static_cast<double>(n); break;
    }
    p.gamma = Eigen::VectorXd::Constant(n, value);
    p.K = p.gamma.sum();
    return p;
}

DirichletParams make_params(const CitationMatrix& m, Eigen::VectorXd gamma) {
    if (gamma.size() != m.size())
        throw InputError("gamma vector size does not match matrix");
    check_positive(gamma);
    ModelView v(m);
    DirichletParams p;
    p.gamma = std::move(gamma);
    p.K = p.gamma.sum();
    p.K_leave = Eigen::VectorXd::Zero(m.size());
    p.alpha = Eigen::VectorXd::Zero(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        p.K_leave(i) = v.prior_row_sum(i, p.gamma);
        p.alpha(i) = v.row_n(i) / (v.row_n(i) + p.K_leave(i));
    }
    p.mask_aware = m.masked();
    return p;
}

Eigen::VectorXd empirical_start(const CitationMatrix& m) {
    ModelView v(m);
    const double n = static_cast<double>(m.size());
    Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(m.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        for (Eigen::Index j : v.active[static_cast<std::size_t>(i)]) {
            col_sums(j) += v.counts(i, j);
            total += v.counts(i, j);
        }
    }
    if (total <= 0.0) throw InputError("cannot form a starting value from an all-zero matrix");
    return (n * col_sums / total).cwiseMax(1e-6);
}

double marginal_log_likelihood(const CitationMatrix& m, const Eigen::VectorXd& gamma) {
    if (gamma.size() != m.size())
        throw InputError("gamma vector size does not match matrix");
    check_positive(gamma);
    return loglik(ModelView(m), gamma);
}

Eigen::VectorXd likelihood_gradient(const CitationMatrix& m, const Eigen::VectorXd& gamma) {
    if (gamma.size() != m.size())
        throw InputError("gamma vector size does not match matrix");
    check_positive(gamma);
    return grad(ModelView(m), gamma);
}

Eigen::MatrixXd likelihood_hessian(const CitationMatrix& m, const Eigen::VectorXd& gamma) {
    if (gamma.size() != m.size())
        throw InputError("gamma vector size does not match matrix");
    check_positive(gamma);
    return hess(ModelView(m), gamma);
}

FitResult fit_fixed_point(const CitationMatrix& m, Eigen::VectorXd gamma0,
                          const FitOptions& opts) {
    check_positive(gamma0);
    ModelView v(m);
    Timer timer;
    FitReport report;
    report.algorithm = FitAlgorithm::FixedPoint;
    std::vector<Eigen::Index> floored;

    Eigen::VectorXd gamma = std::move(gamma0);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        Eigen::VectorXd num = Eigen::VectorXd::Zero(v.n_nodes);
        Eigen::VectorXd den = Eigen::VectorXd::Zero(v.n_nodes);
        for (Eigen::Index i = 0; i < v.n_nodes; ++i) {
            if (v.row_n(i) == 0.0) continue;
            const double k = v.prior_row_sum(i, gamma);
            const double row_term = digamma(v.row_n(i) + k) - digamma(k);
            for (Eigen::Index j : v.active[static_cast<std::size_t>(i)]) {
                num(j) += digamma(v.counts(i, j) + gamma(j)) - digamma(gamma(j));
                den(j) += row_term;
            }
        }
        Eigen::VectorXd next(v.n_nodes);
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < v.n_nodes; ++j) {
            if (den(j) <= 0.0)
                throw InputError("degenerate data: no citations reach any row seen by column '" +
                                 m.labels[static_cast<std::size_t>(j)] + "'");
            // num(j) = 0 exactly when column j is all zeros over active cells
            next(j) = num(j) <= 0.0 ? kGammaFloor : gamma(j) * num(j) / den(j);
            max_change = std::max(max_change,
                                  std::abs(next(j) - gamma(j)) / (std::abs(gamma(j)) + opts.eps1));
        }
        apply_floor(next, floored);
        gamma = std::move(next);
        ++report.iterations;
        if (opts.record_trace) report.trace.emplace_back(loglik(v, gamma), max_change);
        if (max_change < opts.eps2) {
            report.converged = true;
            report.final_loglik = loglik(v, gamma);
            report.elapsed_seconds = timer.seconds();
            return finish(m, std::move(gamma), std::move(report), std::move(floored));
        }
    }
    throw ConvergenceError("fixed point iteration did not converge within " +
                           std::to_string(opts.max_iter) + " iterations");
}

double invert_digamma(double target, double x0, int* iterations) {
    double x = x0 > 0.0 ? x0 : 1.0;
    int iter = 0;
    for (; iter < 100; ++iter) {
        const double f = digamma(x) - target;
        if (std::abs(f) < 1e-13) break;
        double next = x - f / trigamma(x);
        if (next <= 0.0) next = x * 0.5;  // bisection-style fallback toward 0
        if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    if (iterations != nullptr) *iterations = iter;
    return x;
}

FitResult fit_inversion(const CitationMatrix& m, Eigen::VectorXd gamma0, const FitOptions& opts) {
    check_positive(gamma0);
    ModelView v(m);
    Timer timer;
    FitReport report;
    report.algorithm = FitAlgorithm::Inversion;
    std::vector<Eigen::Index> floored;

    Eigen::VectorXd gamma = std::move(gamma0);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(v.n_nodes);
        Eigen::VectorXi rows = Eigen::VectorXi::Zero(v.n_nodes);
        for (Eigen::Index i = 0; i < v.n_nodes; ++i) {
            const double k = v.prior_row_sum(i, gamma);
            const double row_term = digamma(k) - digamma(v.row_n(i) + k);
            for (Eigen::Index j : v.active[static_cast<std::size_t>(i)]) {
                sum(j) += row_term + digamma(v.counts(i, j) + gamma(j));
                rows(j) += 1;
            }
        }
        Eigen::VectorXd next(v.n_nodes);
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < v.n_nodes; ++j) {
            if (rows(j) == 0)
                throw InputError("degenerate data: column '" +
                                 m.labels[static_cast<std::size_t>(j)] +
                                 "' is masked in every row");
            const double a = sum(j) / static_cast<double>(rows(j));
            next(j) = invert_digamma(a, gamma(j));
            max_change = std::max(max_change,
                                  std::abs(next(j) - gamma(j)) / (std::abs(gamma(j)) + opts.eps1));
        }
        apply_floor(next, floored);
        gamma = std::move(next);
        ++report.iterations;
        if (opts.record_trace) report.trace.emplace_back(loglik(v, gamma), max_change);
        if (max_change < opts.eps2) {
            report.converged = true;
            report.final_loglik = loglik(v, gamma);
            report.elapsed_seconds = timer.seconds();
            return finish(m, std::move(gamma), std::move(report), std::move(floored));
        }
    }
    throw ConvergenceError("inversion method did not converge within " +
                           std::to_string(opts.max_iter) + " iterations");
}

FitResult fit_levenberg_marquardt(const CitationMatrix& m, Eigen::VectorXd gamma0,
                                  const FitOptions& opts) {
    check_positive(gamma0);
    ModelView v(m);
    Timer timer;

    LmProblem problem;
    problem.value = [&v](const Eigen::VectorXd& g) { return loglik(v, g); };
    problem.gradient = [&v](const Eigen::VectorXd& g) { return grad(v, g); };
    problem.hessian = [&v](const Eigen::VectorXd& g) { return hess(v, g); };
    problem.positive_domain = true;

    LmOptions lm_opts;
    lm_opts.eps1 = opts.eps1;
    lm_opts.eps2 = opts.eps2;
    lm_opts.max_iter = opts.max_iter;
    lm_opts.record_trace = opts.record_trace;

    LmResult lm = lm_maximize(problem, std::move(gamma0), lm_opts);

    std::vector<Eigen::Index> floored;
    Eigen::VectorXd gamma = lm.x;
    apply_floor(gamma, floored);

    FitReport report;
    report.algorithm = FitAlgorithm::LevenbergMarquardt;
    report.iterations = lm.iterations;
    report.converged = lm.converged;
    report.final_loglik = loglik(v, gamma);
    report.trace = std::move(lm.trace);
    report.elapsed_seconds = timer.seconds();

    FitResult res = finish(m, std::move(gamma), std::move(report), std::move(floored));
    // standard errors from the observed information, when it is PD
    Eigen::MatrixXd info = -hess(v, res.params.gamma);
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd cov =
            llt.solve(Eigen::MatrixXd::Identity(v.n_nodes, v.n_nodes));
        res.params.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    }
    return res;
}

FitResult fit_concentration_only(const CitationMatrix& m, const TeleportVector& pi, double k0,
                                 const FitOptions& opts) {
    if (k0 <= 0.0) throw InputError("initial concentration must be positive");
    if (pi.probabilities.size() != m.size())
        throw InputError("prior mean vector size does not match matrix");
    ModelView v(m);
    const Eigen::VectorXd& p = pi.probabilities;
    for (Eigen::Index i = 0; i < v.n_nodes; ++i)
        for (Eigen::Index j : v.active[static_cast<std::size_t>(i)])
            if (p(j) <= 0.0 && v.counts(i, j) > 0.0)
                throw InputError("prior mean gives zero mass to a cited column '" +
                                 m.labels[static_cast<std::size_t>(j)] + "'");

    Timer timer;
    FitReport report;
    report.algorithm = FitAlgorithm::ConcentrationOnly;

    double k = k0;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        double num = 0.0;
        double den = 0.0;
        for (Eigen::Index i = 0; i < v.n_nodes; ++i) {
            if (v.row_n(i) == 0.0) continue;
            double s = 0.0;
            for (Eigen::Index j : v.active[static_cast<std::size_t>(i)]) {
                if (p(j) <= 0.0) continue;
                s += p(j);
                num += p(j) * (digamma(v.counts(i, j) + k * p(j)) - digamma(k * p(j)));
            }
            den += s * (digamma(v.row_n(i) + k * s) - digamma(k * s));
        }
        if (num <= 0.0 || den <= 0.0)
            throw InputError("degenerate data: concentration update is undefined (no counts)");
        const double next = k * num / den;
        const double change = std::abs(next - k) / (std::abs(k) + opts.eps1);
        k = next;
        ++report.iterations;
        if (opts.record_trace)
            report.trace.emplace_back(loglik(v, (k * p).cwiseMax(kGammaFloor)), change);
        if (change < opts.eps2) {
            Eigen::VectorXd gamma = (k * p).cwiseMax(kGammaFloor);
            report.converged = true;
            report.final_loglik = loglik(v, gamma);
            report.elapsed_seconds = timer.seconds();
            return finish(m, std::move(gamma), std::move(report), {});
        }
    }
    throw ConvergenceError("concentration fixed point did not converge within " +
                           std::to_string(opts.max_iter) + " iterations");
}

}  // namespace ebrank
