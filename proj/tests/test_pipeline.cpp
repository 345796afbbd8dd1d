#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "oracles.hpp"
#include "testutil.hpp"
#include "textprune/errors.hpp"
#include "textprune/pipeline.hpp"

using namespace textprune;

namespace {

RunConfig base_config(const std::filesystem::path& input, const std::filesystem::path& out) {
    RunConfig cfg;
    cfg.input = input.string();
    cfg.format = CorpusFormat::jsonl;
    cfg.fields = {"text"};
    cfg.out_dir = out;
    cfg.threads = 1;
    return cfg;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(TEXTPRUNE_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run_score: five-doc fixture matches end-to-end oracle recomputation") {
    const auto dir = testutil::scratch_dir("score5");
    const std::vector<std::string> texts = {
        "the cat sat on the mat",
        "a dog chased the cat",
        "quantum flux capacitors hum quietly",
        "the dog sat quietly",
        "cat and dog and mat",
    };
    std::string payload;
    for (const auto& t : texts) payload += "{\"text\":\"" + t + "\"}\n";
    testutil::write_file(dir / "in.jsonl", payload);

    RunConfig cfg = base_config(dir / "in.jsonl", dir);
    cfg.emit_scores = true;
    const ScoreRun run = run_score(cfg);
    CHECK(run.report.corpus_size == 5);
    CHECK(std::filesystem::exists(dir / "scores.csv"));

    // Independent recomputation: split on spaces, dense TF-IDF, smoothed
    // descent median, dense distances.
    std::vector<oracles::Tokens> docs;
    for (const auto& t : texts) {
        oracles::Tokens toks;
        std::istringstream ss(t);
        std::string tok;
        while (ss >> tok) toks.push_back(tok);
        docs.push_back(toks);
    }
    const auto tfidf = oracles::dense_tfidf(docs, true);
    const auto g = oracles::gm_minimize(tfidf.tfidf);

    const auto rows = read_scores_csv(dir / "scores.csv");
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double d = tfidf.tfidf[i][j] - g[j];
            sq += d * d;
        }
        CHECK(std::abs(rows[i].second - std::sqrt(sq)) <= 1e-3);
    }

    // Score-scale sanity with normalization on: all fd within [0, 2].
    for (const auto& [_, fd] : rows) {
        CHECK(fd >= 0.0);
        CHECK(fd <= 2.0);
    }
}

TEST_CASE("run_score: empty input names the failing stage") {
    const auto dir = testutil::scratch_dir("empty");
    testutil::write_file(dir / "in.jsonl", "");
    RunConfig cfg = base_config(dir / "in.jsonl", dir);
    CHECK_THROWS_WITH_AS(run_score(cfg), doctest::Contains("load:"), DataError);
}

TEST_CASE("run_prune: adaptive picks furthest at RTE scale and reports it") {
    const auto dir = testutil::scratch_dir("rte");
    testutil::make_jsonl_corpus(dir / "in.jsonl", 2490, 12, 500, 3);
    RunConfig cfg = base_config(dir / "in.jsonl", dir);
    cfg.prune.rate = 0.7;
    cfg.threads = 0;
    const PruneRun run = run_prune(cfg);
    CHECK(run.score.report.strategy == "furthest");
    CHECK(run.selection.kept.size() == 747);  // floor(0.3 * 2490)
    CHECK(run.score.report.kept == 747);

    std::ostringstream report;
    print_report(report, run.score.report);
    CHECK(report.str().find("strategy=furthest") != std::string::npos);
}

TEST_CASE("run_prune: adaptive equals the explicitly forced branch") {
    const auto dir = testutil::scratch_dir("adapt");
    testutil::make_jsonl_corpus(dir / "in.jsonl", 1200, 10, 300, 4);

    RunConfig adaptive = base_config(dir / "in.jsonl", dir / "a");
    adaptive.prune.rate = 0.5;  // (1-r)N = 600 <= 1500 -> furthest
    adaptive.seed = 77;
    const auto a = run_prune(adaptive);
    CHECK(a.score.report.strategy == "furthest");

    RunConfig forced = adaptive;
    forced.out_dir = dir / "b";
    forced.prune.strategy = PruneStrategy::furthest;
    const auto b = run_prune(forced);
    CHECK(a.selection.kept == b.selection.kept);
    CHECK(testutil::read_file(dir / "a" / "coreset.txt") ==
          testutil::read_file(dir / "b" / "coreset.txt"));

    // Stratified dispatch side: low rate pushes over the threshold.
    RunConfig strat = adaptive;
    strat.out_dir = dir / "c";
    strat.prune.rate = 0.1;  // (1-r)N = 1080 <= 1500... keep furthest
    const auto c = run_prune(strat);
    CHECK(c.score.report.strategy == "furthest");
}

TEST_CASE("run_prune: byte-identical artifacts across runs and thread counts") {
    const auto dir = testutil::scratch_dir("det");
    testutil::make_jsonl_corpus(dir / "in.jsonl", 4000, 14, 800, 5);

    auto configured = [&](const std::filesystem::path& out, int threads) {
        RunConfig cfg = base_config(dir / "in.jsonl", out);
        cfg.prune.rate = 0.5;  // 2000 > 1500 -> stratified
        cfg.prune.strata = 50;
        cfg.seed = 99;
        cfg.threads = threads;
        cfg.emit_scores = true;
        cfg.emit_strata = true;
        return cfg;
    };

    run_prune(configured(dir / "r1", 1));
    run_prune(configured(dir / "r2", 1));
    run_prune(configured(dir / "r4", 4));

    for (const char* name : {"coreset.txt", "scores.csv", "strata.csv"}) {
        const auto b1 = testutil::read_file(dir / "r1" / name);
        CHECK(!b1.empty());
        CHECK(b1 == testutil::read_file(dir / "r2" / name));
        CHECK(b1 == testutil::read_file(dir / "r4" / name));
        CHECK(b1.back() == '\n');  // artifacts end with a newline
    }
}

TEST_CASE("run_prune: stage timings account for the total wall clock") {
    const auto dir = testutil::scratch_dir("timing");
    testutil::make_jsonl_corpus(dir / "in.jsonl", 2000, 20, 600, 6);
    RunConfig cfg = base_config(dir / "in.jsonl", dir);
    cfg.prune.rate = 0.5;
    cfg.emit_scores = true;
    const auto run = run_prune(cfg);

    double sum = 0.0;
    for (const auto& s : run.score.report.stages) {
        CHECK(s.ms >= 0.0);
        sum += s.ms;
    }
    CHECK(sum <= run.score.report.total_ms + 1.0);
    CHECK(sum >= 0.95 * run.score.report.total_ms);
}

TEST_CASE("run_prune: projection artifact") {
    const auto dir = testutil::scratch_dir("proj");
    testutil::make_jsonl_corpus(dir / "in.jsonl", 300, 10, 100, 8);
    RunConfig cfg = base_config(dir / "in.jsonl", dir);
    cfg.prune.rate = 0.5;
    cfg.emit_projection = true;
    const auto run = run_prune(cfg);
    CHECK(std::filesystem::exists(dir / "projection.csv"));

    const auto content = testutil::read_file(dir / "projection.csv");
    CHECK(content.rfind("doc_id,pc1,pc2,kept\n", 0) == 0);
    std::size_t lines = 0;
    std::size_t kept = 0;
    std::istringstream in(content);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        ++lines;
        if (line.size() >= 2 && line.back() == '1') ++kept;
    }
    CHECK(lines == 300);
    CHECK(kept == run.selection.kept.size());
}

TEST_CASE("run_score: embedding debug dump matches the in-memory matrix") {
    const auto dir = testutil::scratch_dir("dump");
    testutil::write_file(dir / "in.jsonl",
                         "{\"text\":\"alpha beta\"}\n{\"text\":\"beta gamma gamma\"}\n");
    RunConfig cfg = base_config(dir / "in.jsonl", dir);
    cfg.emit_embeddings = true;
    const auto run = run_score(cfg);
    REQUIRE(std::filesystem::exists(dir / "embeddings.txt"));

    std::istringstream in(testutil::read_file(dir / "embeddings.txt"));
    std::size_t row, col;
    double value;
    std::size_t entries = 0;
    while (in >> row >> col >> value) {
        ++entries;
        double found = 0.0;
        for (const auto& e : run.embeddings.rows[row].entries())
            if (e.index == col) found = e.value;
        CHECK(value == found);
    }
    std::size_t expected = 0;
    for (const auto& r : run.embeddings.rows) expected += r.nnz();
    CHECK(entries == expected);
}

TEST_CASE("run_stats: summary of a scores file") {
    const auto dir = testutil::scratch_dir("stats");
    testutil::write_file(dir / "s.csv", "doc_id,fd,percentile\n0,1,0.00\n1,2,33.33\n2,3,66.67\n");
    std::ostringstream out;
    const auto s = run_stats(dir / "s.csv", out);
    CHECK(s.count == 3);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.p50 == doctest::Approx(2.0));
    CHECK(out.str().find("P50=2") != std::string::npos);

    testutil::write_file(dir / "empty.csv", "");
    CHECK_THROWS_AS(run_stats(dir / "empty.csv", out), DataError);
    testutil::write_file(dir / "frogs.csv", "doc_id,fd,percentile\nx,y,z\n");
    CHECK_THROWS_AS(run_stats(dir / "frogs.csv", out), DataError);
}

TEST_CASE("run_stats: quantiles of 1000 uniform scores") {
    const auto dir = testutil::scratch_dir("quant");
    textprune::rng::Generator gen(4242);
    std::string payload = "doc_id,fd,percentile\n";
    std::vector<double> fd;
    for (int i = 0; i < 1000; ++i) {
        const double u = static_cast<double>(gen() >> 11) * (1.0 / 9007199254740992.0);
        fd.push_back(u);
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,0.0\n", i, u);
        payload += buf;
    }
    testutil::write_file(dir / "s.csv", payload);
    std::ostringstream out;
    const auto s = run_stats(dir / "s.csv", out);

    // Direct quantile oracle on the same values.
    std::sort(fd.begin(), fd.end());
    auto oracle_q = [&](double p) {
        const double h = 999.0 * p / 100.0;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        return fd[lo] + (h - std::floor(h)) * (fd[std::min(lo + 1, fd.size() - 1)] - fd[lo]);
    };
    CHECK(s.p50 == doctest::Approx(oracle_q(50)).epsilon(1e-9));
    CHECK(s.p50 == doctest::Approx(0.5).epsilon(0.12));  // Monte-Carlo tolerance
    CHECK(s.p25 == doctest::Approx(oracle_q(25)).epsilon(1e-9));
    CHECK(s.p99 == doctest::Approx(oracle_q(99)).epsilon(1e-9));
}

TEST_CASE("cli: exit codes and config precedence") {
    const auto dir = testutil::scratch_dir("cli");
    testutil::make_jsonl_corpus(dir / "in.jsonl", 120, 8, 60, 9);

    // Usage error: unknown flag.
    CHECK(run_tool("prune --definitely-not-a-flag") == 1);
    // Config error: rate outside (0,1).
    CHECK(run_tool("prune --input " + (dir / "in.jsonl").string() +
                   " --fields text --rate 0.0 --out-dir " + (dir / "o0").string()) == 1);
    // Data error: missing input file.
    CHECK(run_tool("prune --input " + (dir / "nope.jsonl").string() +
                   " --fields text --rate 0.5 --out-dir " + (dir / "o1").string()) == 2);
    // Clean run.
    CHECK(run_tool("prune --input " + (dir / "in.jsonl").string() +
                   " --fields text --rate 0.5 --seed 1 --out-dir " + (dir / "o2").string()) == 0);
    CHECK(std::filesystem::exists(dir / "o2" / "coreset.txt"));

    // Config file values are used unless a flag overrides them.
    testutil::write_file(dir / "cfg.json",
                         "{\"input\":\"" + (dir / "in.jsonl").string() +
                             "\",\"fields\":[\"text\"],\"rate\":0.5,\"seed\":1,"
                             "\"out_dir\":\"" + (dir / "o3").string() + "\"}");
    CHECK(run_tool("prune --config " + (dir / "cfg.json").string()) == 0);
    CHECK(testutil::read_file(dir / "o3" / "coreset.txt") ==
          testutil::read_file(dir / "o2" / "coreset.txt"));

    CHECK(run_tool("prune --config " + (dir / "cfg.json").string() + " --rate 0.9 --out-dir " +
                   (dir / "o4").string()) == 0);
    std::size_t lines = 0;
    for (char ch : testutil::read_file(dir / "o4" / "coreset.txt"))
        if (ch == '\n') ++lines;
    CHECK(lines == 12);  // floor(0.1 * 120): the flag overrode the config rate

    // Solver cap of 1 iteration cannot converge: exit 3, artifacts still written.
    CHECK(run_tool("prune --input " + (dir / "in.jsonl").string() +
                   " --fields text --rate 0.5 --max-iterations 1 --out-dir " +
                   (dir / "o5").string()) == 3);
    CHECK(std::filesystem::exists(dir / "o5" / "coreset.txt"));

    // score subcommand emits scores.csv by default; stats reads it back.
    CHECK(run_tool("score --input " + (dir / "in.jsonl").string() +
                   " --fields text --out-dir " + (dir / "o6").string()) == 0);
    CHECK(std::filesystem::exists(dir / "o6" / "scores.csv"));
    CHECK(run_tool("stats --input " + (dir / "o6" / "scores.csv").string()) == 0);
    CHECK(run_tool("stats --input " + (dir / "o6" / "missing.csv").string()) == 2);

    // project subcommand writes projection.csv.
    CHECK(run_tool("project --input " + (dir / "in.jsonl").string() +
                   " --fields text --rate 0.5 --seed 2 --out-dir " + (dir / "o7").string()) == 0);
    CHECK(std::filesystem::exists(dir / "o7" / "projection.csv"));
}
