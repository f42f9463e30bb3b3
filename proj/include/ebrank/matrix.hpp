#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ebrank/errors.hpp"

namespace ebrank {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class MaskPolicy { None, Diagonal };
enum class DanglingPolicy { Uniform, Prior, Error };

// Square citation-count matrix. Cells flagged in `structural_mask` are
// excluded from the probability model and zeroed in `counts`; when the mask
// is the diagonal the removed self-citation counts are kept in
// `preserved_diagonal` so self-citation analyses can still read them.
struct CitationMatrix {
    std::vector<std::string> labels;
    CountMatrix counts;
    Mask structural_mask;
    CountVector preserved_diagonal;          // size 0 when nothing was masked away
    std::optional<CountVector> articles;

    Eigen::Index size() const { return counts.rows(); }
    bool masked() const { return structural_mask.any(); }
    // Self-citation count of node i, whether or not the diagonal is masked.
    std::int64_t diagonal_count(Eigen::Index i) const {
        return preserved_diagonal.size() > 0 ? preserved_diagonal(i) : counts(i, i);
    }
};

struct RowTotals {
    CountVector n;               // per-row totals over non-masked cells
    std::int64_t grand_total;    // sum of n
    CountVector row_sums;        // c_{i+} with masked cells restored
    CountVector col_sums;        // c_{+j} with masked cells restored
    std::int64_t total;          // c_{++}
};

struct TransitionMatrix {
    Eigen::MatrixXd rows;
    std::vector<bool> dangling;
    Mask mask;
    std::vector<std::string> labels;

    Eigen::Index size() const { return rows.rows(); }
};

// Build a validated CitationMatrix from raw counts, applying the mask policy.
CitationMatrix make_citation_matrix(std::vector<std::string> labels, CountMatrix counts,
                                    MaskPolicy policy);

// Parse a delimited table (comma or tab) with a label header row and a label
// first column. Throws InputError on non-square input, duplicate labels,
// negative or non-integer entries, or row/column label mismatch.
CitationMatrix load_matrix(std::istream& in, MaskPolicy policy);
CitationMatrix load_matrix_file(const std::string& path, MaskPolicy policy);

// Write the matrix back as a comma-delimited table with masked cells
// restored, so load(save(m)) round-trips counts, labels and mask.
void save_matrix(std::ostream& out, const CitationMatrix& m);

// Two-column file: label, positive article count. Labels must match the
// matrix; order is free.
void load_articles_file(CitationMatrix& m, const std::string& path);
void set_articles(CitationMatrix& m, CountVector articles);

RowTotals row_totals(const CitationMatrix& m);

// Rebuild the matrix under a different mask policy (restores the preserved
// diagonal first). Articles carry over.
CitationMatrix remask(const CitationMatrix& m, MaskPolicy policy);

// Row i is counts[i]/n_i over non-masked cells. Rows with n_i = 0 are filled
// per the dangling policy and flagged.
TransitionMatrix transition_matrix(const CitationMatrix& m, DanglingPolicy policy,
                                   const Eigen::VectorXd* prior = nullptr);

}  // namespace ebrank
