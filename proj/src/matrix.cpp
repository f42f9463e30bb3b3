#include "ebrank/matrix.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ebrank {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == delim) fields.emplace_back();
    return fields;
}

char detect_delimiter(const std::string& header) {
    return header.find('\t') != std::string::npos ? '\t' : ',';
}

std::int64_t parse_count(const std::string& s, const std::string& row_label,
                         const std::string& col_label) {
    if (s.empty())
        throw InputError("empty entry at row '" + row_label + "', column '" + col_label + "'");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size())
        throw InputError("entry '" + s + "' at row '" + row_label + "', column '" + col_label +
                         "' is not an integer");
    if (v < 0)
        throw InputError("negative entry at row '" + row_label + "', column '" + col_label + "'");
    return v;
}

}  // namespace

CitationMatrix make_citation_matrix(std::vector<std::string> labels, CountMatrix counts,
                                    MaskPolicy policy) {
    const Eigen::Index n = counts.rows();
    if (counts.cols() != n) throw InputError("citation matrix must be square");
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw InputError("label count does not match matrix size");
    {
        std::set<std::string> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second) throw InputError("duplicate label '" + l + "'");
    }
    if ((counts.array() < 0).any()) throw InputError("citation counts must be nonnegative");

    CitationMatrix m;
    m.labels = std::move(labels);
    m.structural_mask = Mask::Constant(n, n, false);
    if (policy == MaskPolicy::Diagonal) {
        m.preserved_diagonal = counts.diagonal();
        for (Eigen::Index i = 0; i < n; ++i) {
            counts(i, i) = 0;
            m.structural_mask(i, i) = true;
        }
    }
    m.counts = std::move(counts);
    return m;
}

CitationMatrix load_matrix(std::istream& in, MaskPolicy policy) {
    std::string header;
    if (!std::getline(in, header)) throw InputError("empty matrix file");
    const char delim = detect_delimiter(header);
    auto head = split_line(header, delim);
    if (head.size() < 2) throw InputError("header row must list the node labels");
    std::vector<std::string> col_labels(head.begin() + 1, head.end());
    const Eigen::Index n = static_cast<Eigen::Index>(col_labels.size());

    CountMatrix counts(n, n);
    std::vector<std::string> row_labels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_line(line, delim);
        if (static_cast<Eigen::Index>(fields.size()) != n + 1)
            throw InputError("row '" + (fields.empty() ? line : fields[0]) + "' has " +
                             std::to_string(fields.size() - 1) + " entries, expected " +
                             std::to_string(n));
        if (static_cast<Eigen::Index>(row_labels.size()) >= n)
            throw InputError("matrix has more rows than columns; table is not square");
        const Eigen::Index r = static_cast<Eigen::Index>(row_labels.size());
        row_labels.push_back(fields[0]);
        for (Eigen::Index j = 0; j < n; ++j)
            counts(r, j) = parse_count(fields[static_cast<std::size_t>(j) + 1], fields[0],
                                       col_labels[static_cast<std::size_t>(j)]);
    }
    if (static_cast<Eigen::Index>(row_labels.size()) != n)
        throw InputError("matrix has " + std::to_string(row_labels.size()) +
                         " rows but " + std::to_string(n) + " columns");
    if (row_labels != col_labels) throw InputError("row labels do not match column labels");
    return make_citation_matrix(std::move(row_labels), std::move(counts), policy);
}

CitationMatrix load_matrix_file(const std::string& path, MaskPolicy policy) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open matrix file '" + path + "'");
    return load_matrix(in, policy);
}

void save_matrix(std::ostream& out, const CitationMatrix& m) {
    const Eigen::Index n = m.size();
    out << "journal";
    for (const auto& l : m.labels) out << ',' << l;
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        out << m.labels[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            std::int64_t v = m.counts(i, j);
            if (i == j && m.preserved_diagonal.size() > 0) v = m.preserved_diagonal(i);
            out << ',' << v;
        }
        out << '\n';
    }
}

void set_articles(CitationMatrix& m, CountVector articles) {
    if (articles.size() != m.size())
        throw InputError("articles vector size does not match matrix");
    if ((articles.array() <= 0).any())
        throw InputError("article counts must be positive");
    m.articles = std::move(articles);
}

void load_articles_file(CitationMatrix& m, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open articles file '" + path + "'");
    std::map<std::string, std::int64_t> by_label;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const char delim = detect_delimiter(line);
        auto fields = split_line(line, delim);
        if (fields.size() != 2)
            throw InputError("articles file rows must be 'label,count'");
        if (!by_label.emplace(fields[0], parse_count(fields[1], fields[0], "articles")).second)
            throw InputError("duplicate label '" + fields[0] + "' in articles file");
    }
    CountVector articles(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        auto it = by_label.find(m.labels[static_cast<std::size_t>(i)]);
        if (it == by_label.end())
            throw InputError("articles file is missing label '" +
                             m.labels[static_cast<std::size_t>(i)] + "'");
        articles(i) = it->second;
    }
    set_articles(m, std::move(articles));
}

RowTotals row_totals(const CitationMatrix& m) {
    const Eigen::Index n = m.size();
    RowTotals t;
    t.n = CountVector::Zero(n);
    t.row_sums = CountVector::Zero(n);
    t.col_sums = CountVector::Zero(n);
    t.grand_total = 0;
    t.total = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            std::int64_t full = m.counts(i, j);
            if (m.structural_mask(i, j)) {
                if (i == j && m.preserved_diagonal.size() > 0) full = m.preserved_diagonal(i);
            } else {
                t.n(i) += m.counts(i, j);
            }
            t.row_sums(i) += full;
            t.col_sums(j) += full;
            t.total += full;
        }
        t.grand_total += t.n(i);
    }
    return t;
}

CitationMatrix remask(const CitationMatrix& m, MaskPolicy policy) {
    CountMatrix counts = m.counts;
    if (m.preserved_diagonal.size() > 0)
        for (Eigen::Index i = 0; i < m.size(); ++i) counts(i, i) = m.preserved_diagonal(i);
    CitationMatrix out = make_citation_matrix(m.labels, std::move(counts), policy);
    out.articles = m.articles;
    return out;
}

TransitionMatrix transition_matrix(const CitationMatrix& m, DanglingPolicy policy,
                                   const Eigen::VectorXd* prior) {
    const Eigen::Index n = m.size();
    if (policy == DanglingPolicy::Prior && prior == nullptr)
        throw InputError("dangling policy 'prior' requires a prior vector");
    if (prior != nullptr && prior->size() != n)
        throw InputError("prior vector size does not match matrix");

    TransitionMatrix p;
    p.rows = Eigen::MatrixXd::Zero(n, n);
    p.dangling.assign(static_cast<std::size_t>(n), false);
    p.mask = m.structural_mask;
    p.labels = m.labels;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::int64_t ni = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!m.structural_mask(i, j)) ni += m.counts(i, j);
        if (ni > 0) {
            for (Eigen::Index j = 0; j < n; ++j)
                if (!m.structural_mask(i, j))
                    p.rows(i, j) = static_cast<double>(m.counts(i, j)) / static_cast<double>(ni);
        } else {
            p.dangling[static_cast<std::size_t>(i)] = true;
            switch (policy) {
                case DanglingPolicy::Error:
                    throw InputError("row '" + m.labels[static_cast<std::size_t>(i)] +
                                     "' has no outgoing citations");
                case DanglingPolicy::Uniform: {
                    Eigen::Index active = 0;
                    for (Eigen::Index j = 0; j < n; ++j)
                        if (!m.structural_mask(i, j)) ++active;
                    if (active == 0)
                        throw InputError("row '" + m.labels[static_cast<std::size_t>(i)] +
                                         "' has no non-masked cells");
                    for (Eigen::Index j = 0; j < n; ++j)
                        if (!m.structural_mask(i, j))
                            p.rows(i, j) = 1.0 / static_cast<double>(active);
                    break;
                }
                case DanglingPolicy::Prior:
                    p.rows.row(i) = prior->transpose();
                    break;
            }
        }
    }
    return p;
}

}  // namespace ebrank
