#include "textprune/vectorizer.hpp"

#include <algorithm>
#include <cmath>

#include "textprune/errors.hpp"
#include "textprune/parallel.hpp"

namespace textprune {

Vocabulary build_vocabulary(const std::vector<TokenStream>& corpus, int threads) {
    if (corpus.empty()) throw DataError("cannot build a vocabulary from an empty corpus");

    // Per-block document-frequency maps, then a merge in block order. df
    // counts documents, not occurrences.
    constexpr std::size_t kBlock = 512;
    const std::size_t num_blocks = (corpus.size() + kBlock - 1) / kBlock;
    std::vector<std::unordered_map<std::string, std::uint32_t>> partials(num_blocks);
    parallel_blocks(corpus.size(), kBlock, threads,
                    [&](std::size_t b, std::size_t lo, std::size_t hi) {
                        auto& local = partials[b];
                        for (std::size_t i = lo; i < hi; ++i) {
                            const auto& tokens = corpus[i].tokens;
                            // distinct terms of this document
                            std::vector<std::string_view> seen(tokens.begin(), tokens.end());
                            std::sort(seen.begin(), seen.end());
                            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
                            for (auto term : seen) ++local[std::string(term)];
                        }
                    });

    std::unordered_map<std::string, std::uint32_t> counts;
    for (auto& partial : partials)
        for (auto& [term, c] : partial) counts[term] += c;

    if (counts.empty()) throw DataError("corpus has zero tokens; no vocabulary exists");

    Vocabulary vocab;
    vocab.terms.reserve(counts.size());
    for (const auto& [term, _] : counts) vocab.terms.push_back(term);
    std::sort(vocab.terms.begin(), vocab.terms.end());

    vocab.index.reserve(vocab.terms.size());
    vocab.df.resize(vocab.terms.size());
    for (std::uint32_t j = 0; j < vocab.terms.size(); ++j) {
        vocab.index.emplace(vocab.terms[j], j);
        vocab.df[j] = counts.at(vocab.terms[j]);
    }
    return vocab;
}

SparseVector term_frequency(const TokenStream& tokens, const Vocabulary& vocab) {
    if (tokens.tokens.empty()) return SparseVector(vocab.size(), {});

    std::unordered_map<std::uint32_t, std::uint32_t> counts;
    counts.reserve(tokens.tokens.size());
    for (const auto& token : tokens.tokens) {
        auto it = vocab.index.find(token);
        if (it == vocab.index.end())
            throw DataError("token '" + token + "' not in vocabulary (doc " +
                            std::to_string(tokens.doc_id) + "); vocab/corpus mismatch");
        ++counts[it->second];
    }

    const double total = static_cast<double>(tokens.tokens.size());
    std::vector<SparseEntry> entries;
    entries.reserve(counts.size());
    for (const auto& [j, c] : counts)
        entries.push_back({j, static_cast<double>(c) / total});
    std::sort(entries.begin(), entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    return SparseVector(vocab.size(), std::move(entries));
}

DenseVector inverse_document_frequency(const Vocabulary& vocab, std::size_t corpus_size) {
    DenseVector idf(vocab.size());
    const double n = static_cast<double>(corpus_size);
    for (std::uint32_t j = 0; j < vocab.size(); ++j)
        idf[j] = std::log(n / (1.0 + static_cast<double>(vocab.df[j])));
    return idf;
}

EmbeddingMatrix embed(const std::vector<TokenStream>& corpus, const Vocabulary& vocab,
                      bool normalize, int threads) {
    const DenseVector idf = inverse_document_frequency(vocab, corpus.size());

    EmbeddingMatrix matrix;
    matrix.dim = vocab.size();
    matrix.normalized = normalize;
    matrix.rows.resize(corpus.size());

    parallel_for(corpus.size(), 256, threads, [&](std::size_t i) {
        const SparseVector tf = term_frequency(corpus[i], vocab);
        std::vector<SparseEntry> entries;
        entries.reserve(tf.nnz());
        for (const auto& e : tf.entries()) {
            const double v = e.value * idf[e.index];
            if (v != 0.0) entries.push_back({e.index, v});
        }
        if (normalize && !entries.empty()) {
            double sq = 0.0;
            for (const auto& e : entries) sq += e.value * e.value;
            const double norm = std::sqrt(sq);
            if (norm > 0.0)
                for (auto& e : entries) e.value /= norm;
        }
        matrix.rows[i] = SparseVector(vocab.size(), std::move(entries));
    });
    return matrix;
}

}  // namespace textprune
