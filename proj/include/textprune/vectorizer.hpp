#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "textprune/corpus.hpp"
#include "textprune/sparse.hpp"

namespace textprune {

// Term -> index map over all distinct tokens of a corpus, with per-term
// document frequencies. Terms are lexicographically sorted and index j is
// the term's position, so the mapping is reproducible.
struct Vocabulary {
    std::vector<std::string> terms;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::uint32_t> df;  // by term index; 1 <= df <= N

    std::uint32_t size() const { return static_cast<std::uint32_t>(terms.size()); }
};

struct EmbeddingMatrix {
    std::vector<SparseVector> rows;  // one per document, in document-id order
    std::uint32_t dim = 0;
    bool normalized = false;

    std::size_t size() const { return rows.size(); }
};

Vocabulary build_vocabulary(const std::vector<TokenStream>& corpus, int threads = 1);

// tf_j = count(w_j in doc) / total token count. Empty docs map to the zero
// vector. Tokens absent from the vocabulary signal a vocab/corpus mismatch.
SparseVector term_frequency(const TokenStream& tokens, const Vocabulary& vocab);

// idf_j = ln(N / (1 + df_j)), kept dense: zero and negative values are
// meaningful here.
DenseVector inverse_document_frequency(const Vocabulary& vocab, std::size_t corpus_size);

// Row i = tf_i (*) idf element-wise; entries whose product is exactly zero
// are dropped. With normalize, every non-zero row is scaled to unit L2 norm.
EmbeddingMatrix embed(const std::vector<TokenStream>& corpus, const Vocabulary& vocab,
                      bool normalize, int threads = 1);

}  // namespace textprune
