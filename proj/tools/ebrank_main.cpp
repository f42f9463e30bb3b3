// ebrank command line: score / fit / compare / halfsample / kappa.
// Exit codes: 0 success, 2 input error, 3 numerical non-convergence.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebrank/analysis.hpp"
#include "ebrank/dirichlet.hpp"
#include "ebrank/ebscores.hpp"
#include "ebrank/markov.hpp"
#include "ebrank/matrix.hpp"

using json = nlohmann::json;
using namespace ebrank;

namespace {

constexpr const char* kVersion = "1.0.0";

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

struct Output {
    std::ostream* table = &std::cout;
    std::ofstream table_file;
    std::string sidecar_path;  // empty: sidecar goes to stdout after the table

    void open(const std::string& out_path) {
        if (out_path.empty()) return;
        table_file.open(out_path);
        if (!table_file) throw InputError("cannot write '" + out_path + "'");
        table = &table_file;
        sidecar_path = out_path + ".json";
    }

    void emit_sidecar(const json& j) {
        if (sidecar_path.empty()) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::ofstream side(sidecar_path);
            if (!side) throw InputError("cannot write '" + sidecar_path + "'");
            side << j.dump(2) << "\n";
        }
    }
};

json make_manifest(const std::string& command, const std::vector<std::string>& inputs,
                   const json& params) {
    json files = json::object();
    for (const std::string& path : inputs) files[path] = hex64(fnv1a64_file(path));
    return json{{"command", command},
                {"inputs", files},
                {"parameters", params},
                {"version", kVersion}};
}

// Stable presentation order: descending score, label as tiebreak.
std::vector<Eigen::Index> ranked_order(const ScoreVector& s) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(s.values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&s](Eigen::Index a, Eigen::Index b) {
        if (s.values(a) != s.values(b)) return s.values(a) > s.values(b);
        return s.labels[static_cast<std::size_t>(a)] < s.labels[static_cast<std::size_t>(b)];
    });
    return order;
}

void print_score_table(std::ostream& os, const ScoreVector& s, const ScoreVector* influence) {
    const auto order = ranked_order(s);
    os << std::left << std::setw(6) << "rank" << std::setw(16) << "label" << std::setw(14)
       << "score";
    if (influence != nullptr) os << std::setw(14) << "art_influence";
    os << "\n";
    os << std::setprecision(6) << std::fixed;
    int rank = 1;
    for (Eigen::Index i : order) {
        os << std::left << std::setw(6) << rank++ << std::setw(16)
           << s.labels[static_cast<std::size_t>(i)] << std::setw(14) << 1000.0 * s.values(i);
        if (influence != nullptr) os << std::setw(14) << influence->values(i);
        os << "\n";
    }
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

FitAlgorithm parse_optimizer(const std::string& name) {
    if (name == "fp") return FitAlgorithm::FixedPoint;
    if (name == "inv") return FitAlgorithm::Inversion;
    if (name == "lm") return FitAlgorithm::LevenbergMarquardt;
    throw InputError("unknown optimizer '" + name + "' (expected fp|inv|lm)");
}

StartKind parse_start(const std::string& name) {
    if (name == "empirical") return StartKind::Empirical;
    if (name == "ones") return StartKind::Ones;
    if (name == "perks") return StartKind::Perks;
    throw InputError("unknown start '" + name + "' (expected empirical|ones|perks)");
}

std::string optimizer_name(FitAlgorithm a) {
    switch (a) {
        case FitAlgorithm::FixedPoint: return "fp";
        case FitAlgorithm::Inversion: return "inv";
        case FitAlgorithm::LevenbergMarquardt: return "lm";
        case FitAlgorithm::ConcentrationOnly: return "k-only";
    }
    return "?";
}

json fit_report_json(const FitResult& fit) {
    json j;
    j["optimizer"] = optimizer_name(fit.report.algorithm);
    j["iterations"] = fit.report.iterations;
    j["converged"] = fit.report.converged;
    j["log_likelihood"] = fit.report.final_loglik;
    j["elapsed_seconds"] = fit.report.elapsed_seconds;
    j["K"] = fit.params.K;
    j["gamma"] = vector_json(fit.params.gamma);
    j["alpha"] = vector_json(fit.params.alpha);
    if (fit.params.std_errors) j["std_errors"] = vector_json(*fit.params.std_errors);
    return j;
}

struct CommonArgs {
    std::string matrix_file;
    std::string articles_file;
    std::string out_path;
};

CitationMatrix load_input(const CommonArgs& args, MaskPolicy policy) {
    CitationMatrix m = load_matrix_file(args.matrix_file, policy);
    if (!args.articles_file.empty()) load_articles_file(m, args.articles_file);
    return m;
}

std::vector<std::string> input_list(const CommonArgs& args) {
    std::vector<std::string> v = {args.matrix_file};
    if (!args.articles_file.empty()) v.push_back(args.articles_file);
    return v;
}

int cmd_score(const CommonArgs& args, const std::string& method_name_arg, double alpha,
              const std::string& optimizer, const std::string& start, double eps2) {
    const ScoreMethod method = parse_method(method_name_arg);
    CitationMatrix m = load_input(args, MaskPolicy::None);

    MethodOptions opts;
    opts.alpha = alpha;
    opts.eb.optimizer = parse_optimizer(optimizer);
    opts.eb.start = parse_start(start);
    opts.eb.fit.eps2 = eps2;

    json sidecar;
    ScoreVector scores;
    if (method == ScoreMethod::EBEF || method == ScoreMethod::EBPR) {
        const MaskPolicy policy =
            method == ScoreMethod::EBEF ? MaskPolicy::Diagonal : MaskPolicy::None;
        EbScoreResult r = method == ScoreMethod::EBEF ? ebef_score(remask(m, policy), opts.eb)
                                                      : ebpr_score(m, opts.eb);
        scores = r.scores;
        sidecar["fit"] = fit_report_json(FitResult{r.params, r.report});
        sidecar["K_leave"] = vector_json(r.params.K_leave);
    } else {
        scores = score_matrix(m, method, opts);
    }

    ScoreVector influence;
    const bool with_influence = m.articles.has_value();
    if (with_influence) influence = article_influence(scores, *m.articles);

    Output out;
    out.open(args.out_path);
    print_score_table(*out.table, scores, with_influence ? &influence : nullptr);

    sidecar["method"] = method_name(method);
    sidecar["labels"] = scores.labels;
    sidecar["scores"] = vector_json(scores.values);
    if (with_influence) sidecar["article_influence"] = vector_json(influence.values);
    sidecar["manifest"] = make_manifest(
        "score", input_list(args),
        json{{"method", method_name(method)},
             {"alpha", alpha},
             {"optimizer", optimizer},
             {"start", start},
             {"eps2", eps2}});
    out.emit_sidecar(sidecar);
    return 0;
}

int cmd_fit(const CommonArgs& args, const std::string& optimizer, const std::string& mask,
            const std::string& start, double eps1, double eps2, int max_iter, bool bench) {
    MaskPolicy policy;
    if (mask == "diag") policy = MaskPolicy::Diagonal;
    else if (mask == "none") policy = MaskPolicy::None;
    else throw InputError("unknown mask '" + mask + "' (expected diag|none)");
    CitationMatrix m = load_input(args, policy);

    Output out;
    out.open(args.out_path);
    json sidecar;

    if (bench) {
        *out.table << std::left << std::setw(10) << "optimizer" << std::setw(12) << "start"
                   << std::setw(10) << "eps2" << std::setw(8) << "iters" << std::setw(16)
                   << "loglik" << std::setw(12) << "seconds" << "\n";
        json rows = json::array();
        for (const std::string& opt_name : {"fp", "inv", "lm"}) {
            for (const std::string& start_name : {"empirical", "ones", "perks"}) {
                for (double tol : {1e-5, 1e-6}) {
                    EbFitOptions fo;
                    fo.optimizer = parse_optimizer(opt_name);
                    fo.lm_polish = false;
                    fo.start = parse_start(start_name);
                    fo.fit.eps1 = eps1;
                    fo.fit.eps2 = tol;
                    fo.fit.max_iter = max_iter;
                    FitResult fit = run_fit(m, fo);
                    *out.table << std::left << std::setw(10) << opt_name << std::setw(12)
                               << start_name << std::setw(10) << tol << std::setw(8)
                               << fit.report.iterations << std::setw(16) << std::setprecision(6)
                               << std::fixed << fit.report.final_loglik << std::setw(12)
                               << fit.report.elapsed_seconds << "\n";
                    json row = fit_report_json(fit);
                    row["start"] = start_name;
                    row["eps2"] = tol;
                    rows.push_back(std::move(row));
                }
            }
        }
        sidecar["bench"] = std::move(rows);
    } else {
        EbFitOptions fo;
        fo.optimizer = parse_optimizer(optimizer);
        fo.lm_polish = false;
        fo.start = parse_start(start);
        fo.fit.eps1 = eps1;
        fo.fit.eps2 = eps2;
        fo.fit.max_iter = max_iter;
        FitResult fit = run_fit(m, fo);
        *out.table << "optimizer " << optimizer << ": " << fit.report.iterations
                   << " iterations, log-likelihood " << std::setprecision(6) << std::fixed
                   << fit.report.final_loglik << ", K " << fit.params.K << "\n";
        for (Eigen::Index j = 0; j < m.size(); ++j)
            *out.table << std::left << std::setw(16) << m.labels[static_cast<std::size_t>(j)]
                       << "gamma " << std::setw(12) << fit.params.gamma(j) << "alpha "
                       << fit.params.alpha(j) << "\n";
        sidecar = fit_report_json(fit);
        sidecar["labels"] = m.labels;
    }

    sidecar["manifest"] = make_manifest(
        "fit", input_list(args),
        json{{"optimizer", optimizer},
             {"mask", mask},
             {"start", start},
             {"eps1", eps1},
             {"eps2", eps2},
             {"max_iter", max_iter},
             {"bench", bench}});
    out.emit_sidecar(sidecar);
    return 0;
}

std::vector<ScoreMethod> parse_methods(const std::string& csv) {
    std::vector<ScoreMethod> methods;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) methods.push_back(parse_method(token));
    }
    if (methods.empty()) throw InputError("no methods given");
    return methods;
}

// Kendall below the diagonal, Spearman above.
void print_correlation_table(std::ostream& os, const RankComparison& cmp) {
    os << std::left << std::setw(10) << "";
    for (const std::string& name : cmp.methods) os << std::setw(10) << name;
    os << "\n" << std::setprecision(4) << std::fixed;
    const Eigen::Index k = static_cast<Eigen::Index>(cmp.methods.size());
    for (Eigen::Index a = 0; a < k; ++a) {
        os << std::left << std::setw(10) << cmp.methods[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < k; ++b) {
            if (a == b) os << std::setw(10) << 1.0;
            else if (a < b) os << std::setw(10) << cmp.spearman(a, b);
            else os << std::setw(10) << cmp.kendall(a, b);
        }
        os << "\n";
    }
}

int cmd_compare(const CommonArgs& args, const std::string& methods_csv, double alpha) {
    const std::vector<ScoreMethod> methods = parse_methods(methods_csv);
    CitationMatrix m = load_input(args, MaskPolicy::None);
    MethodOptions opts;
    opts.alpha = alpha;

    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> scores;
    for (ScoreMethod method : methods) {
        names.push_back(method_name(method));
        scores.push_back(score_matrix(m, method, opts).values);
    }
    RankComparison cmp = compare_rankings(names, scores);

    Output out;
    out.open(args.out_path);
    print_correlation_table(*out.table, cmp);

    json sidecar;
    sidecar["methods"] = names;
    for (Eigen::Index a = 0; a < cmp.spearman.rows(); ++a) {
        sidecar["spearman"].push_back(vector_json(cmp.spearman.row(a).transpose()));
        sidecar["kendall"].push_back(vector_json(cmp.kendall.row(a).transpose()));
    }
    sidecar["manifest"] = make_manifest("compare", input_list(args),
                                        json{{"methods", methods_csv}, {"alpha", alpha}});
    out.emit_sidecar(sidecar);
    return 0;
}

int cmd_halfsample(const CommonArgs& args, const std::string& methods_csv, int replicates,
                   double a, double b, std::uint64_t seed, const std::string& mode) {
    const std::vector<ScoreMethod> methods = parse_methods(methods_csv);
    CitationMatrix m = load_input(args, MaskPolicy::None);
    HalfSampleConfig cfg;
    cfg.a = a;
    cfg.b = b;
    cfg.replicates = replicates;
    cfg.seed = seed;
    if (mode == "bernoulli") cfg.mode = SampleMode::Bernoulli;
    else if (mode == "beta") cfg.mode = SampleMode::BetaBernoulli;
    else throw InputError("unknown mode '" + mode + "' (expected bernoulli|beta)");

    HalfSampleStudyResult study = half_sampling_study(m, methods, cfg);

    Output out;
    out.open(args.out_path);
    *out.table << "replicates " << study.completed << " completed, " << study.failed
               << " failed\n";
    json sidecar;
    sidecar["completed"] = study.completed;
    sidecar["failed"] = study.failed;
    for (std::size_t k = 0; k < methods.size(); ++k) {
        *out.table << "\nmethod " << method_name(methods[k]) << "\n";
        const ScoreVector& mean = study.mean_scores[k];
        const ScoreVector* influence_ptr = nullptr;
        ScoreVector influence;
        if (m.articles) {
            influence = article_influence(mean, *m.articles);
            influence_ptr = &influence;
        }
        print_score_table(*out.table, mean, influence_ptr);
        json entry;
        entry["method"] = method_name(methods[k]);
        entry["mean_scores"] = vector_json(mean.values);
        if (influence_ptr) entry["article_influence"] = vector_json(influence.values);
        sidecar["methods"].push_back(std::move(entry));
    }
    sidecar["labels"] = m.labels;
    sidecar["manifest"] = make_manifest(
        "halfsample", input_list(args),
        json{{"methods", methods_csv},
             {"m", replicates},
             {"a", a},
             {"b", b},
             {"seed", seed},
             {"mode", mode}});
    out.emit_sidecar(sidecar);
    return 0;
}

int cmd_kappa(const CommonArgs& args) {
    CitationMatrix m = load_input(args, MaskPolicy::None);
    const auto profiles = self_citation_profile(m);

    Output out;
    out.open(args.out_path);
    *out.table << std::left << std::setw(16) << "label" << std::setw(8) << "self"
               << std::setw(8) << "R" << std::setw(8) << "M" << std::setw(10) << "rate"
               << std::setw(10) << "kappa" << std::setw(10) << "S0" << std::setw(10)
               << "S_kappa" << "\n"
               << std::setprecision(4) << std::fixed;
    json rows = json::array();
    double rate_sum = 0.0;
    for (const auto& p : profiles) {
        *out.table << std::left << std::setw(16) << p.label << std::setw(8) << p.self_count
                   << std::setw(8) << p.received_external << std::setw(8) << p.made_external
                   << std::setw(10) << p.rate << std::setw(10) << p.kappa << std::setw(10)
                   << p.s0 << std::setw(10) << p.s_kappa << "\n";
        rate_sum += p.rate;
        rows.push_back(json{{"label", p.label},
                            {"self", p.self_count},
                            {"received_external", p.received_external},
                            {"made_external", p.made_external},
                            {"rate", p.rate},
                            {"kappa", p.kappa},
                            {"S0", p.s0},
                            {"S_kappa", p.s_kappa}});
    }
    *out.table << "mean self-citation rate " << rate_sum / static_cast<double>(profiles.size())
               << "\n";

    json sidecar;
    sidecar["profiles"] = std::move(rows);
    sidecar["mean_rate"] = rate_sum / static_cast<double>(profiles.size());
    sidecar["manifest"] = make_manifest("kappa", input_list(args), json::object());
    out.emit_sidecar(sidecar);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Citation network rating toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonArgs args;
    std::string method = "pr";
    std::string optimizer = "fp";
    std::string mask = "diag";
    std::string start = "empirical";
    std::string methods_csv = "pr,ebef";
    std::string mode = "beta";
    double alpha = 0.85;
    double eps1 = 1e-8;
    double eps2 = 1e-6;
    int max_iter = 1000;
    int replicates = 200;
    double beta_a = 10.0, beta_b = 10.0;
    std::uint64_t seed = 0;
    bool bench = false;

    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("matrix", args.matrix_file, "citation matrix file")->required();
        cmd->add_option("--articles", args.articles_file, "label,articles file");
        cmd->add_option("--out", args.out_path, "write the table here (JSON sidecar alongside)");
    };

    CLI::App* score = app.add_subcommand("score", "rate the nodes of one matrix");
    add_common(score);
    score->add_option("--method", method, "pr|eifa|psjr|ebpr|ebef");
    score->add_option("--alpha", alpha, "damping factor");
    score->add_option("--optimizer", optimizer, "fp|inv|lm (EB methods)");
    score->add_option("--start", start, "empirical|ones|perks");
    score->add_option("--eps2", eps2, "relative parameter-change stop");

    CLI::App* fit = app.add_subcommand("fit", "estimate the Dirichlet hyperparameters");
    add_common(fit);
    fit->add_option("--optimizer", optimizer, "fp|inv|lm");
    fit->add_option("--mask", mask, "diag|none");
    fit->add_option("--start", start, "empirical|ones|perks");
    fit->add_option("--eps1", eps1, "denominator guard in the stop rule");
    fit->add_option("--eps2", eps2, "relative parameter-change stop");
    fit->add_option("--max-iter", max_iter, "iteration cap");
    fit->add_flag("--bench", bench, "run every optimizer x start x tolerance");

    CLI::App* compare = app.add_subcommand("compare", "rank correlations between methods");
    add_common(compare);
    compare->add_option("--methods", methods_csv, "comma list of methods");
    compare->add_option("--alpha", alpha, "damping factor");

    CLI::App* halfsample = app.add_subcommand("halfsample", "Monte Carlo half-sampling study");
    add_common(halfsample);
    halfsample->add_option("--methods", methods_csv, "comma list of methods");
    halfsample->add_option("--m", replicates, "replicate count");
    halfsample->add_option("--a", beta_a, "Beta shape a");
    halfsample->add_option("--b", beta_b, "Beta shape b");
    halfsample->add_option("--seed", seed, "RNG seed");
    halfsample->add_option("--mode", mode, "bernoulli|beta");

    CLI::App* kappa = app.add_subcommand("kappa", "self-citation attenuation profile");
    add_common(kappa);

    CLI11_PARSE(app, argc, argv);

    try {
        if (score->parsed()) return cmd_score(args, method, alpha, optimizer, start, eps2);
        if (fit->parsed())
            return cmd_fit(args, optimizer, mask, start, eps1, eps2, max_iter, bench);
        if (compare->parsed()) return cmd_compare(args, methods_csv, alpha);
        if (halfsample->parsed())
            return cmd_halfsample(args, methods_csv, replicates, beta_a, beta_b, seed, mode);
        if (kappa->parsed()) return cmd_kappa(args);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
