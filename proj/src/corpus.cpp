#include "textprune/corpus.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "textprune/errors.hpp"
#include "textprune/parallel.hpp"

namespace textprune {
namespace {

// --- tokenizer ------------------------------------------------------------

// Code-point classes that split tokens. ASCII is handled directly; for the
// rest, well-known punctuation, symbol and whitespace blocks separate and
// everything else (letters and digits of all scripts, combining marks)
// is a token constituent.
bool is_separator_cp(char32_t cp) {
    if (cp < 0x80) return true;  // callers only ask for non-ASCII
    if (cp <= 0xBF) return true;                     // C1 controls, Latin-1 punctuation
    if (cp == 0xD7 || cp == 0xF7) return true;       // multiplication/division signs
    if (cp == 0x1680) return true;                   // ogham space mark
    if (cp >= 0x2000 && cp <= 0x206F) return true;   // general punctuation
    if (cp >= 0x20A0 && cp <= 0x20CF) return true;   // currency symbols
    if (cp >= 0x2190 && cp <= 0x2BFF) return true;   // arrows, math, misc symbols
    if (cp >= 0x2E00 && cp <= 0x2E7F) return true;   // supplemental punctuation
    if (cp >= 0x3000 && cp <= 0x303F) return true;   // CJK symbols and punctuation
    if (cp >= 0xFE10 && cp <= 0xFE1F) return true;   // vertical forms
    if (cp >= 0xFE30 && cp <= 0xFE6F) return true;   // CJK compatibility/small forms
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;   // fullwidth punctuation
    if (cp >= 0xFF1A && cp <= 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF40) return true;
    if (cp >= 0xFF5B && cp <= 0xFF65) return true;
    if (cp >= 0x1F000) return true;                  // emoji and symbol planes
    return false;
}

char32_t lowercase_cp(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // Latin-1 uppercase
    if (cp == 0x178) return 0xFF;                                  // Y with diaeresis
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes the code point at position i; advances i. Invalid sequences
// consume one byte and decode as U+FFFD (a separator).
char32_t next_cp(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += len;
    return cp;
}

// --- loaders --------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string data = std::move(buf).str();
    if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);
    return data;
}

bool blank_line(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

Corpus load_jsonl(const std::filesystem::path& path, const LoadSpec& spec) {
    const std::string data = read_file(path);
    Corpus corpus;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string_view line(data.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (blank_line(line)) continue;

        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("malformed record at line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!record.is_object())
            throw DataError("malformed record at line " + std::to_string(line_no) +
                            ": expected a JSON object");

        Document doc;
        doc.id = static_cast<std::uint32_t>(corpus.documents.size());
        for (const auto& name : spec.field_spec) {
            auto it = record.find(name);
            if (it == record.end())
                throw DataError("missing field '" + name + "' at line " + std::to_string(line_no));
            if (!it->is_string())
                throw DataError("field '" + name + "' is not a string at line " +
                                std::to_string(line_no));
            doc.fields.emplace_back(name, it->get<std::string>());
        }
        if (spec.label_field) {
            auto it = record.find(*spec.label_field);
            if (it != record.end())
                doc.label = it->is_string() ? it->get<std::string>() : it->dump();
        }
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line;  // 1-based line where the record starts
};

// RFC 4180: comma-separated, optional double quotes, "" escapes a quote,
// quoted fields may span lines.
std::vector<CsvRecord> parse_csv(const std::string& data, const std::string& origin) {
    std::vector<CsvRecord> records;
    std::size_t i = 0;
    std::size_t line = 1;
    while (i < data.size()) {
        CsvRecord rec;
        rec.line = line;
        bool done = false;
        while (!done) {
            std::string field;
            if (i < data.size() && data[i] == '"') {
                ++i;
                for (;;) {
                    if (i >= data.size())
                        throw DataError(origin + ": unterminated quoted field at line " +
                                        std::to_string(rec.line));
                    const char c = data[i];
                    if (c == '"') {
                        if (i + 1 < data.size() && data[i + 1] == '"') {
                            field.push_back('"');
                            i += 2;
                        } else {
                            ++i;
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        field.push_back(c);
                        ++i;
                    }
                }
                if (i < data.size() && data[i] != ',' && data[i] != '\r' && data[i] != '\n')
                    throw DataError(origin + ": malformed record at line " + std::to_string(rec.line) +
                                    ": text after closing quote");
            } else {
                while (i < data.size() && data[i] != ',' && data[i] != '\r' && data[i] != '\n') {
                    field.push_back(data[i]);
                    ++i;
                }
            }
            rec.fields.push_back(std::move(field));
            if (i >= data.size()) {
                done = true;
            } else if (data[i] == ',') {
                ++i;
            } else {  // CR, LF or CRLF ends the record
                if (data[i] == '\r') ++i;
                if (i < data.size() && data[i] == '\n') {
                    ++i;
                    ++line;
                }
                done = true;
            }
        }
        // A lone trailing newline yields one empty field; skip it.
        if (rec.fields.size() == 1 && rec.fields[0].empty() && (i >= data.size())) break;
        records.push_back(std::move(rec));
    }
    return records;
}

Corpus load_csv(const std::filesystem::path& path, const LoadSpec& spec) {
    const std::string data = read_file(path);
    const auto records = parse_csv(data, path.filename().string());
    if (records.empty()) throw DataError("empty input file: " + path.string());

    const auto& header = records.front().fields;
    auto column_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        return std::nullopt;
    };

    std::vector<std::size_t> field_cols;
    for (const auto& name : spec.field_spec) {
        auto col = column_of(name);
        if (!col) throw DataError("missing field '" + name + "' in CSV header");
        field_cols.push_back(*col);
    }
    std::optional<std::size_t> label_col;
    if (spec.label_field) label_col = column_of(*spec.label_field);

    Corpus corpus;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw DataError("malformed record at line " + std::to_string(rec.line) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(rec.fields.size()));
        Document doc;
        doc.id = static_cast<std::uint32_t>(corpus.documents.size());
        for (std::size_t f = 0; f < field_cols.size(); ++f)
            doc.fields.emplace_back(spec.field_spec[f], rec.fields[field_cols[f]]);
        if (label_col) doc.label = rec.fields[*label_col];
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, const LoadSpec& spec) {
    if (spec.field_spec.empty()) throw ConfigError("field_spec must name at least one field");
    Corpus corpus =
        spec.format == CorpusFormat::jsonl ? load_jsonl(path, spec) : load_csv(path, spec);
    if (corpus.documents.empty()) throw DataError("empty input file: " + path.string());
    for (auto& doc : corpus.documents) {
        std::string text;
        for (std::size_t f = 0; f < doc.fields.size(); ++f) {
            if (f > 0) text.push_back(' ');
            text += doc.fields[f].second;
        }
        doc.text = std::move(text);
    }
    return corpus;
}

std::vector<std::string> tokenize_text(std::string_view text, int min_token_length) {
    std::vector<std::string> tokens;
    std::string current;
    int current_cps = 0;
    auto flush = [&] {
        if (current_cps >= min_token_length && !current.empty()) tokens.push_back(current);
        current.clear();
        current_cps = 0;
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const auto b = static_cast<unsigned char>(text[i]);
        if (b < 0x80) {
            const bool alnum = (b >= '0' && b <= '9') || (b >= 'a' && b <= 'z') || (b >= 'A' && b <= 'Z');
            if (alnum) {
                current.push_back(static_cast<char>(lowercase_cp(b)));
                ++current_cps;
            } else {
                flush();
            }
            ++i;
        } else {
            const char32_t cp = next_cp(text, i);
            if (is_separator_cp(cp)) {
                flush();
            } else {
                append_utf8(current, lowercase_cp(cp));
                ++current_cps;
            }
        }
    }
    flush();
    return tokens;
}

TokenStream tokenize(const Document& doc, int min_token_length) {
    return TokenStream{doc.id, tokenize_text(doc.text, min_token_length)};
}

std::vector<TokenStream> tokenize_corpus(const Corpus& corpus, int min_token_length, int threads) {
    std::vector<TokenStream> streams(corpus.size());
    parallel_for(corpus.size(), 256, threads, [&](std::size_t i) {
        streams[i] = tokenize(corpus.documents[i], min_token_length);
    });
    return streams;
}

const char* format_name(CorpusFormat format) {
    return format == CorpusFormat::jsonl ? "jsonl" : "csv";
}

CorpusFormat parse_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "csv") return CorpusFormat::csv;
    throw ConfigError("unknown corpus format: " + std::string(name));
}

}  // namespace textprune
