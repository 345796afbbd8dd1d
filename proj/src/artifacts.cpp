#include "textprune/artifacts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "textprune/errors.hpp"
#include "textprune/parallel.hpp"

namespace textprune {
namespace {

// Shortest round-trip decimal representation.
std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    const auto tmp = std::filesystem::path(path.string() + ".tmp" +
                                           std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string render_scores_csv(const ScoreSet& scores) {
    std::string out = "doc_id,fd,percentile\n";
    for (const auto& [id, fd] : scores.scores) {
        const auto smaller = std::lower_bound(scores.sorted_fd.begin(), scores.sorted_fd.end(), fd) -
                             scores.sorted_fd.begin();
        const double pct =
            100.0 * static_cast<double>(smaller) / static_cast<double>(scores.sorted_fd.size());
        out += std::to_string(id);
        out += ',';
        out += fmt_double(fd);
        out += ',';
        out += fmt_fixed2(pct);
        out += '\n';
    }
    return out;
}

std::string render_embedding_dump(const EmbeddingMatrix& matrix) {
    std::string out;
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        for (const auto& e : matrix.rows[i].entries()) {
            out += std::to_string(i);
            out += ' ';
            out += std::to_string(e.index);
            out += ' ';
            out += fmt_double(e.value);
            out += '\n';
        }
    }
    return out;
}

std::string render_coreset(const CoresetSelection& selection) {
    std::string out;
    for (auto id : selection.kept) {
        out += std::to_string(id);
        out += '\n';
    }
    return out;
}

std::string render_strata_csv(const std::vector<Stratum>& strata,
                              const CoresetSelection& selection) {
    std::string out = "stratum,lo,hi,population,selected\n";
    for (const auto& stratum : strata) {
        std::size_t taken = 0;
        if (stratum.index < selection.per_stratum.size())
            taken = selection.per_stratum[stratum.index].taken;
        out += std::to_string(stratum.index);
        out += ',';
        out += fmt_double(stratum.lo);
        out += ',';
        out += fmt_double(stratum.hi);
        out += ',';
        out += std::to_string(stratum.members.size());
        out += ',';
        out += std::to_string(taken);
        out += '\n';
    }
    return out;
}

std::string render_projection_csv(const ProjectionResult& projection,
                                  const std::vector<std::uint8_t>& kept) {
    std::string out = "doc_id,pc1,pc2,kept\n";
    for (std::size_t i = 0; i < projection.pc1.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += fmt_double(projection.pc1[i]);
        out += ',';
        out += fmt_double(projection.pc2[i]);
        out += ',';
        out += (i < kept.size() && kept[i]) ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::uint32_t, double>> read_scores_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open scores file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty scores file: " + path.string());
    if (line.rfind("doc_id,fd", 0) != 0)
        throw DataError("malformed scores file (bad header): " + path.string());

    std::vector<std::pair<std::uint32_t, double>> scores;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string id_str, fd_str;
        if (!std::getline(row, id_str, ',') || !std::getline(row, fd_str, ','))
            throw DataError("malformed scores row at line " + std::to_string(line_no));
        try {
            const unsigned long id = std::stoul(id_str);
            const double fd = std::stod(fd_str);
            if (!std::isfinite(fd) || fd < 0.0)
                throw DataError("invalid fd at line " + std::to_string(line_no));
            scores.emplace_back(static_cast<std::uint32_t>(id), fd);
        } catch (const std::logic_error&) {
            throw DataError("malformed scores row at line " + std::to_string(line_no));
        }
    }
    if (scores.empty()) throw DataError("scores file has no rows: " + path.string());
    return scores;
}

StatsSummary summarize_scores(std::vector<double> fd) {
    if (fd.empty()) throw DataError("cannot summarize an empty score list");
    std::sort(fd.begin(), fd.end());
    StatsSummary s;
    s.count = fd.size();
    s.min = fd.front();
    s.max = fd.back();
    s.mean = pairwise_sum(fd) / static_cast<double>(fd.size());
    auto quantile = [&](double p) {
        const double h = (static_cast<double>(fd.size()) - 1.0) * p / 100.0;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, fd.size() - 1);
        const double frac = h - std::floor(h);
        return fd[lo] + frac * (fd[hi] - fd[lo]);
    };
    s.p1 = quantile(1.0);
    s.p25 = quantile(25.0);
    s.p50 = quantile(50.0);
    s.p75 = quantile(75.0);
    s.p99 = quantile(99.0);
    return s;
}

}  // namespace textprune
