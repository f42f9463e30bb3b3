#include "ebrank/ebscores.hpp"

namespace ebrank {

SmoothedMatrix posterior_smoothing_matrix(const CitationMatrix& m,
                                          const DirichletParams& params) {
    if (params.gamma.size() != m.size())
        throw InputError("fitted parameters do not match the matrix size");
    if (params.mask_aware != m.masked())
        throw InputError("mask mismatch between matrix and fitted parameters");

    const Eigen::Index n = m.size();
    SmoothedMatrix g;
    g.rows = Eigen::MatrixXd::Zero(n, n);
    g.prior_rows = Eigen::MatrixXd::Zero(n, n);
    g.per_row_alpha = params.alpha;
    g.mask = m.structural_mask;
    g.labels = m.labels;
    for (Eigen::Index i = 0; i < n; ++i) {
        double ni = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!m.structural_mask(i, j)) ni += static_cast<double>(m.counts(i, j));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (m.structural_mask(i, j)) continue;
            g.prior_rows(i, j) = params.gamma(j) / params.K_leave(i);
            g.rows(i, j) =
                (static_cast<double>(m.counts(i, j)) + params.gamma(j)) / (ni + params.K_leave(i));
        }
    }
    return g;
}

TransitionMatrix to_transition(const SmoothedMatrix& g) {
    TransitionMatrix t;
    t.rows = g.rows;
    t.dangling.assign(static_cast<std::size_t>(g.rows.rows()), false);
    for (Eigen::Index i = 0; i < g.per_row_alpha.size(); ++i)
        if (g.per_row_alpha(i) == 0.0) t.dangling[static_cast<std::size_t>(i)] = true;
    t.mask = g.mask;
    t.labels = g.labels;
    return t;
}

Eigen::VectorXd starting_gamma(const CitationMatrix& m, StartKind kind) {
    switch (kind) {
        case StartKind::Empirical: return empirical_start(m);
        case StartKind::Ones: return Eigen::VectorXd::Ones(m.size());
        case StartKind::Perks:
            return Eigen::VectorXd::Constant(m.size(), 1.0 / static_cast<double>(m.size()));
    }
    throw InputError("unknown starting value kind");
}

FitResult run_fit(const CitationMatrix& m, const EbFitOptions& opts) {
    Eigen::VectorXd gamma0 = starting_gamma(m, opts.start);
    switch (opts.optimizer) {
        case FitAlgorithm::LevenbergMarquardt:
            return fit_levenberg_marquardt(m, std::move(gamma0), opts.fit);
        case FitAlgorithm::Inversion: {
            FitResult res = fit_inversion(m, std::move(gamma0), opts.fit);
            if (opts.lm_polish) {
                try {
                    res = fit_levenberg_marquardt(m, res.params.gamma, opts.fit);
                } catch (const ConvergenceError&) {
                    // keep the INV optimum
                }
            }
            return res;
        }
        case FitAlgorithm::FixedPoint: {
            FitResult res = fit_fixed_point(m, std::move(gamma0), opts.fit);
            if (opts.lm_polish) {
                try {
                    res = fit_levenberg_marquardt(m, res.params.gamma, opts.fit);
                } catch (const ConvergenceError&) {
                    // keep the FP optimum
                }
            }
            return res;
        }
        case FitAlgorithm::ConcentrationOnly:
            break;
    }
    throw InputError("unsupported optimizer for the score pipeline");
}

namespace {

EbScoreResult score_pipeline(const CitationMatrix& m, const EbFitOptions& opts) {
    FitResult fit = run_fit(m, opts);
    SmoothedMatrix g = posterior_smoothing_matrix(m, fit.params);
    StationaryResult st =
        stationary_distribution(to_transition(g), opts.score_tol, opts.score_max_iter);
    EbScoreResult res;
    res.scores = std::move(st.scores);
    res.params = std::move(fit.params);
    res.report = std::move(fit.report);
    return res;
}

}  // namespace

EbScoreResult ebef_score(const CitationMatrix& masked, const EbFitOptions& opts) {
    if (!masked.masked())
        throw InputError("ebef_score requires a diagonal-masked matrix");
    return score_pipeline(masked, opts);
}

EbScoreResult ebpr_score(const CitationMatrix& unmasked, const EbFitOptions& opts) {
    if (unmasked.masked())
        throw InputError("ebpr_score requires an unmasked matrix");
    return score_pipeline(unmasked, opts);
}

}  // namespace ebrank
