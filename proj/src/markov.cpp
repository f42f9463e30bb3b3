#include "ebrank/markov.hpp"

#include <cmath>

namespace ebrank {

namespace {

void check_teleport(const TeleportVector& t) {
    if ((t.probabilities.array() < 0).any())
        throw InputError("teleport probabilities must be nonnegative");
    if (std::abs(t.probabilities.sum() - 1.0) > 1e-12)
        throw InputError("teleport probabilities must sum to 1");
}

}  // namespace

TeleportVector uniform_teleport(Eigen::Index n) {
    TeleportVector t;
    t.probabilities = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    t.kind = TeleportKind::Uniform;
    return t;
}

TeleportVector article_share_teleport(const CitationMatrix& m) {
    if (!m.articles)
        throw InputError("article-share teleportation requires an articles file");
    TeleportVector t;
    t.probabilities = m.articles->cast<double>();
    t.probabilities /= t.probabilities.sum();
    t.kind = TeleportKind::ArticleShare;
    return t;
}

TeleportVector custom_teleport(Eigen::VectorXd probabilities) {
    TeleportVector t;
    t.probabilities = std::move(probabilities);
    t.kind = TeleportKind::Custom;
    check_teleport(t);
    return t;
}

TransitionMatrix google_matrix(const TransitionMatrix& p, double alpha,
                               const TeleportVector& teleport) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0,1]");
    if (teleport.probabilities.size() != p.size())
        throw InputError("teleport vector size does not match matrix");
    check_teleport(teleport);
    TransitionMatrix g;
    g.rows = alpha * p.rows;
    g.rows.rowwise() += (1.0 - alpha) * teleport.probabilities.transpose();
    g.dangling = p.dangling;
    // teleportation reaches every node, so structural zeros are gone
    g.mask = Mask::Constant(p.size(), p.size(), false);
    g.labels = p.labels;
    return g;
}

TransitionMatrix psjr_matrix(const TransitionMatrix& p, double alpha2, double beta,
                             const TeleportVector& pi) {
    if (alpha2 < 0.0 || beta < 0.0 || alpha2 + beta > 1.0)
        throw InputError("psjr requires alpha2 >= 0, beta >= 0, alpha2 + beta <= 1");
    if (pi.probabilities.size() != p.size())
        throw InputError("teleport vector size does not match matrix");
    check_teleport(pi);
    const double n = static_cast<double>(p.size());
    TransitionMatrix g;
    g.rows = alpha2 * p.rows;
    g.rows.rowwise() += (1.0 - alpha2 - beta) * pi.probabilities.transpose();
    g.rows.array() += beta / n;
    g.dangling = p.dangling;
    g.mask = Mask::Constant(p.size(), p.size(), false);
    g.labels = p.labels;
    return g;
}

StationaryResult stationary_distribution(const TransitionMatrix& g, double tol, int max_iter) {
    const Eigen::Index n = g.size();
    Eigen::VectorXd r = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (int iter = 1; iter <= max_iter; ++iter) {
        Eigen::VectorXd next = g.rows.transpose() * r;
        next /= next.sum();
        const double delta = (next - r).lpNorm<1>();
        r = next;
        if (delta < tol) {
            StationaryResult res;
            res.scores.values = r;
            res.scores.normalization = Normalization::SumOne;
            res.scores.labels = g.labels;
            res.iterations = iter;
            return res;
        }
    }
    throw ConvergenceError("power iteration did not converge within " +
                           std::to_string(max_iter) + " iterations");
}

ScoreVector article_influence(const ScoreVector& score, const CountVector& articles) {
    const Eigen::Index n = score.values.size();
    if (articles.size() != n)
        throw InputError("articles vector size does not match scores");
    if ((articles.array() <= 0).any())
        throw InputError("article counts must be positive");
    const double a_plus = static_cast<double>(articles.sum());
    Eigen::VectorXd share = articles.cast<double>() / a_plus;
    Eigen::VectorXd raw = score.values.array() / share.array();
    // scale so sum_i share_i * AI_i = 1
    const double weighted = share.dot(raw);
    ScoreVector ai;
    ai.values = raw / weighted;
    ai.normalization = Normalization::PerArticle;
    ai.labels = score.labels;
    return ai;
}

CitationMatrix cap_self_citations(const CitationMatrix& m, double share) {
    if (!(share >= 0.0 && share < 1.0)) throw InputError("self-citation share must lie in [0,1)");
    const Eigen::Index n = m.size();
    CountMatrix counts = m.counts;
    if (m.preserved_diagonal.size() > 0)
        for (Eigen::Index i = 0; i < n; ++i) counts(i, i) = m.preserved_diagonal(i);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::int64_t off = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) off += counts(i, j);
        // clamp c_ii to floor(share * row total), iterated to a fixed point
        std::int64_t d = counts(i, i);
        for (;;) {
            const std::int64_t cap = static_cast<std::int64_t>(
                std::floor(share * static_cast<double>(off + d)));
            if (d <= cap) break;
            d = cap;
        }
        counts(i, i) = d;
    }
    CitationMatrix capped = make_citation_matrix(m.labels, std::move(counts),
                                                 m.masked() ? MaskPolicy::Diagonal
                                                            : MaskPolicy::None);
    capped.articles = m.articles;
    return capped;
}

ScoreVector scaled_by_1000(const ScoreVector& score) {
    ScoreVector s = score;
    s.values *= 1000.0;
    s.normalization = Normalization::Sum1000;
    return s;
}

}  // namespace ebrank
