#pragma once

#include <random>
#include <sstream>
#include <string>

#include "ebrank/matrix.hpp"

namespace fixtures {

inline const char* kExtract5 =
    "journal,AmS,AISM,AoS,ANZS,Bern\n"
    "AmS,43,0,9,0,1\n"
    "AISM,1,18,24,5,7\n"
    "AoS,2,3,291,2,27\n"
    "ANZS,0,3,4,5,0\n"
    "Bern,0,5,53,0,22\n";

inline ebrank::CitationMatrix extract5(ebrank::MaskPolicy policy) {
    std::istringstream in(kExtract5);
    return ebrank::load_matrix(in, policy);
}

inline ebrank::CitationMatrix tiny3(ebrank::MaskPolicy policy) {
    ebrank::CountMatrix counts(3, 3);
    counts << 0, 2, 1,
              1, 0, 1,
              4, 1, 0;
    return ebrank::make_citation_matrix({"A", "B", "C"}, counts, policy);
}

// Random count matrix with every column non-degenerate.
inline ebrank::CitationMatrix random_counts(Eigen::Index n, std::mt19937_64& rng,
                                            ebrank::MaskPolicy policy, int max_count = 30) {
    std::uniform_int_distribution<std::int64_t> dist(0, max_count);
    for (;;) {
        ebrank::CountMatrix counts(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) counts(i, j) = dist(rng);
        std::vector<std::string> labels;
        for (Eigen::Index i = 0; i < n; ++i) labels.push_back("J" + std::to_string(i));
        ebrank::CitationMatrix m = ebrank::make_citation_matrix(labels, counts, policy);
        bool ok = true;
        for (Eigen::Index j = 0; j < n && ok; ++j) {
            std::int64_t col = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!m.structural_mask(i, j)) col += m.counts(i, j);
            ok = col > 0;
        }
        if (ok) return m;
    }
}

}  // namespace fixtures
