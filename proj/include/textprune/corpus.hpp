#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace textprune {

enum class CorpusFormat { jsonl, csv };

// One sample. id equals the sample's 0-based position in input order and
// text is the configured fields joined by single spaces, in order. The
// label is pass-through metadata; scoring never reads it.
struct Document {
    std::uint32_t id = 0;
    std::vector<std::pair<std::string, std::string>> fields;  // (name, value)
    std::string text;
    std::optional<std::string> label;
};

struct Corpus {
    std::vector<Document> documents;
    std::size_t size() const { return documents.size(); }
};

struct TokenStream {
    std::uint32_t doc_id = 0;
    std::vector<std::string> tokens;
};

struct LoadSpec {
    CorpusFormat format = CorpusFormat::jsonl;
    std::vector<std::string> field_spec;
    std::optional<std::string> label_field;
};

// Loads a JSONL or CSV file in file order. Every record must contain all
// fields named in field_spec; a configured label field that is absent from
// a record yields an absent label.
Corpus load_corpus(const std::filesystem::path& path, const LoadSpec& spec);

// Maximal runs of alphanumeric characters, lowercased (ASCII and Latin-1
// case mapping). Non-alphanumeric characters act only as separators.
// Tokens shorter than min_token_length (in code points) are dropped.
std::vector<std::string> tokenize_text(std::string_view text, int min_token_length = 1);

TokenStream tokenize(const Document& doc, int min_token_length = 1);

// Tokenizes every document; results are in document-id order.
std::vector<TokenStream> tokenize_corpus(const Corpus& corpus, int min_token_length = 1,
                                         int threads = 1);

const char* format_name(CorpusFormat format);
CorpusFormat parse_format(std::string_view name);

}  // namespace textprune
