#include "ebrank/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

namespace ebrank {

namespace {

std::vector<double> average_ranks(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&x](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
    std::vector<double> ranks(static_cast<std::size_t>(n));
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x(order[j + 1]) == x(order[i])) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[static_cast<std::size_t>(order[k])] = avg;
        i = j + 1;
    }
    return ranks;
}

void check_correlation_input(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InputError("correlation requires two vectors of equal length >= 2");
    if ((x.array() == x(0)).all()) throw InputError("correlation undefined for constant vector");
    if ((y.array() == y(0)).all()) throw InputError("correlation undefined for constant vector");
}

// splitmix64 finalizer; substream key for (seed, replicate, cell)
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 cell_rng(std::uint64_t seed, int replicate, Eigen::Index cell) {
    const std::uint64_t stream = mix64(seed ^ mix64(static_cast<std::uint64_t>(replicate) + 1));
    return std::mt19937_64(mix64(stream ^ static_cast<std::uint64_t>(cell)));
}

}  // namespace

double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    check_correlation_input(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(rx.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sx += rx[i];
        sy += ry[i];
        sxy += rx[i] * ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    return cov / std::sqrt(vx * vy);
}

double kendall_tau(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    check_correlation_input(x, y);
    const Eigen::Index n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dx = x(i) - x(j);
            const double dy = y(i) - y(j);
            if (dx == 0.0) ++ties_x;
            if (dy == 0.0) ++ties_y;
            if (dx == 0.0 || dy == 0.0) continue;
            if ((dx > 0.0) == (dy > 0.0)) ++concordant;
            else ++discordant;
        }
    }
    const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                   (n0 - static_cast<double>(ties_y)));
    return static_cast<double>(concordant - discordant) / denom;
}

RankComparison compare_rankings(const std::vector<std::string>& methods,
                                const std::vector<Eigen::VectorXd>& scores) {
    if (methods.size() != scores.size() || methods.empty())
        throw InputError("compare_rankings needs one score vector per method");
    const Eigen::Index k = static_cast<Eigen::Index>(methods.size());
    RankComparison cmp;
    cmp.methods = methods;
    cmp.scores.resize(k, scores[0].size());
    for (Eigen::Index a = 0; a < k; ++a)
        cmp.scores.row(a) = scores[static_cast<std::size_t>(a)].transpose();
    cmp.spearman = Eigen::MatrixXd::Identity(k, k);
    cmp.kendall = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a + 1; b < k; ++b) {
            const double s = spearman(scores[static_cast<std::size_t>(a)],
                                      scores[static_cast<std::size_t>(b)]);
            const double t = kendall_tau(scores[static_cast<std::size_t>(a)],
                                         scores[static_cast<std::size_t>(b)]);
            cmp.spearman(a, b) = cmp.spearman(b, a) = s;
            cmp.kendall(a, b) = cmp.kendall(b, a) = t;
        }
    }
    return cmp;
}

double SelfCitationProfile::s(double kappa_value) const {
    const double c = static_cast<double>(self_count);
    const double r = static_cast<double>(received_external);
    const double m = static_cast<double>(made_external);
    return (kappa_value * c + r) / (kappa_value * c + m);
}

std::vector<SelfCitationProfile> self_citation_profile(const CitationMatrix& m) {
    const RowTotals totals = row_totals(m);
    std::vector<SelfCitationProfile> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        SelfCitationProfile p;
        p.label = m.labels[static_cast<std::size_t>(i)];
        p.self_count = m.diagonal_count(i);
        if (totals.row_sums(i) == 0)
            throw InputError("node '" + p.label + "' has a zero row total");
        p.received_external = totals.col_sums(i) - p.self_count;
        p.made_external = totals.row_sums(i) - p.self_count;
        p.rate = static_cast<double>(p.self_count) / static_cast<double>(totals.row_sums(i));
        if (p.self_count > 0) {
            const double min_rm =
                static_cast<double>(std::min(p.received_external, p.made_external));
            p.kappa = std::min(min_rm / static_cast<double>(p.self_count), 1.0);
        } else {
            p.kappa = 1.0;
        }
        p.s0 = p.s(0.0);
        p.s_kappa = p.s(p.kappa);
        out.push_back(std::move(p));
    }
    return out;
}

CitationMatrix apply_kappa(const CitationMatrix& m, const Eigen::VectorXd& kappa) {
    if (kappa.size() != m.size())
        throw InputError("kappa vector size does not match matrix");
    if ((kappa.array() < 0.0).any() || (kappa.array() > 1.0).any())
        throw InputError("kappa weights must lie in [0,1]");
    CountMatrix counts = m.counts;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        counts(i, i) = static_cast<std::int64_t>(
            std::llround(kappa(i) * static_cast<double>(m.diagonal_count(i))));
    CitationMatrix out = make_citation_matrix(
        m.labels, std::move(counts), m.masked() ? MaskPolicy::Diagonal : MaskPolicy::None);
    out.articles = m.articles;
    return out;
}

HalfSamplePair half_sample(const CitationMatrix& m, const HalfSampleConfig& cfg, int replicate) {
    if (!(cfg.a > 0.0 && cfg.b > 0.0)) throw InputError("Beta shape parameters must be positive");
    if (cfg.replicates < 1) throw InputError("replicate count must be >= 1");
    const Eigen::Index n = m.size();
    CountMatrix training = CountMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::int64_t c = m.counts(i, j);
            if (c == 0) continue;
            auto rng = cell_rng(cfg.seed, replicate, i * n + j);
            double keep = 0.5;
            if (cfg.mode == SampleMode::BetaBernoulli) {
                std::gamma_distribution<double> ga(cfg.a, 1.0), gb(cfg.b, 1.0);
                const double qa = ga(rng);
                const double qb = gb(rng);
                keep = 1.0 - qa / (qa + qb);  // drop probability q ~ Beta(a,b)
            }
            std::binomial_distribution<std::int64_t> bin(c, keep);
            training(i, j) = bin(rng);
        }
    }
    const MaskPolicy policy = m.masked() ? MaskPolicy::Diagonal : MaskPolicy::None;
    HalfSamplePair pair;
    pair.training = make_citation_matrix(m.labels, training, policy);
    pair.complement = make_citation_matrix(m.labels, m.counts - training, policy);
    pair.training.articles = m.articles;
    pair.complement.articles = m.articles;
    return pair;
}

std::string method_name(ScoreMethod method) {
    switch (method) {
        case ScoreMethod::PR: return "PR";
        case ScoreMethod::EIFA: return "EIFA";
        case ScoreMethod::PSJR: return "PSJR";
        case ScoreMethod::EBPR: return "EBPR";
        case ScoreMethod::EBEF: return "EBEF";
    }
    throw InputError("unknown score method");
}

ScoreMethod parse_method(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
    if (s == "pr") return ScoreMethod::PR;
    if (s == "eifa") return ScoreMethod::EIFA;
    if (s == "psjr") return ScoreMethod::PSJR;
    if (s == "ebpr") return ScoreMethod::EBPR;
    if (s == "ebef") return ScoreMethod::EBEF;
    throw InputError("unknown method '" + name + "' (expected pr|eifa|psjr|ebpr|ebef)");
}

ScoreVector score_matrix(const CitationMatrix& unmasked, ScoreMethod method,
                         const MethodOptions& opts, const Eigen::VectorXd* fitted_gamma) {
    switch (method) {
        case ScoreMethod::PR: {
            TransitionMatrix p = transition_matrix(unmasked, DanglingPolicy::Uniform);
            TransitionMatrix g =
                google_matrix(p, opts.alpha, uniform_teleport(unmasked.size()));
            return stationary_distribution(g).scores;
        }
        case ScoreMethod::EIFA: {
            CitationMatrix masked = remask(unmasked, MaskPolicy::Diagonal);
            TeleportVector shares = article_share_teleport(masked);
            TransitionMatrix p =
                transition_matrix(masked, DanglingPolicy::Prior, &shares.probabilities);
            TransitionMatrix g = google_matrix(p, opts.alpha, shares);
            return stationary_distribution(g).scores;
        }
        case ScoreMethod::PSJR: {
            CitationMatrix capped =
                cap_self_citations(remask(unmasked, MaskPolicy::None), opts.psjr_self_cap);
            TeleportVector shares = article_share_teleport(capped);
            TransitionMatrix p =
                transition_matrix(capped, DanglingPolicy::Prior, &shares.probabilities);
            TransitionMatrix g = psjr_matrix(p, opts.alpha2, opts.beta, shares);
            return stationary_distribution(g).scores;
        }
        case ScoreMethod::EBPR: {
            CitationMatrix plain = remask(unmasked, MaskPolicy::None);
            if (fitted_gamma != nullptr) {
                SmoothedMatrix g =
                    posterior_smoothing_matrix(plain, make_params(plain, *fitted_gamma));
                return stationary_distribution(to_transition(g)).scores;
            }
            return ebpr_score(plain, opts.eb).scores;
        }
        case ScoreMethod::EBEF: {
            CitationMatrix masked = remask(unmasked, MaskPolicy::Diagonal);
            if (fitted_gamma != nullptr) {
                SmoothedMatrix g =
                    posterior_smoothing_matrix(masked, make_params(masked, *fitted_gamma));
                return stationary_distribution(to_transition(g)).scores;
            }
            return ebef_score(masked, opts.eb).scores;
        }
    }
    throw InputError("unknown score method");
}

HalfSampleStudyResult half_sampling_study(const CitationMatrix& unmasked,
                                          const std::vector<ScoreMethod>& methods,
                                          const HalfSampleConfig& cfg,
                                          const MethodOptions& opts) {
    if (methods.empty()) throw InputError("half-sampling study needs at least one method");
    const Eigen::Index n = unmasked.size();
    HalfSampleStudyResult res;
    res.methods = methods;
    std::vector<Eigen::VectorXd> sums(methods.size(), Eigen::VectorXd::Zero(n));

    for (int rep = 0; rep < cfg.replicates; ++rep) {
        HalfSamplePair pair = half_sample(unmasked, cfg, rep);
        std::vector<Eigen::VectorXd> rep_scores;
        rep_scores.reserve(methods.size());
        bool ok = true;
        for (ScoreMethod method : methods) {
            try {
                const Eigen::VectorXd* gamma_ptr = nullptr;
                Eigen::VectorXd gamma;
                if (method == ScoreMethod::EBEF || method == ScoreMethod::EBPR) {
                    const MaskPolicy policy = method == ScoreMethod::EBEF ? MaskPolicy::Diagonal
                                                                          : MaskPolicy::None;
                    gamma = run_fit(remask(pair.training, policy), opts.eb).params.gamma;
                    gamma_ptr = &gamma;
                }
                rep_scores.push_back(
                    score_matrix(pair.complement, method, opts, gamma_ptr).values);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (std::size_t k = 0; k < methods.size(); ++k) sums[k] += rep_scores[k];
            ++res.completed;
        } else {
            ++res.failed;
        }
    }
    if (res.completed == 0 ||
        static_cast<double>(res.failed) > 0.1 * static_cast<double>(cfg.replicates))
        throw ConvergenceError("more than 10% of half-sampling replicates failed (" +
                               std::to_string(res.failed) + " of " +
                               std::to_string(cfg.replicates) + ")");
    for (std::size_t k = 0; k < methods.size(); ++k) {
        ScoreVector mean;
        mean.values = sums[k] / static_cast<double>(res.completed);
        mean.normalization = Normalization::SumOne;
        mean.labels = unmasked.labels;
        res.mean_scores.push_back(std::move(mean));
    }
    return res;
}

}  // namespace ebrank
