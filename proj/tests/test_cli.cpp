#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mlrag/cli.hpp"
#include "mlrag/errors.hpp"
#include "mlrag/io.hpp"
#include "test_util.hpp"

using namespace mlrag;

namespace {

struct CliResult {
    int rc = -1;
    std::string out;
    std::string err;
};

// Runs the real entry point in-process with stdout/stderr redirected at the
// fd level, which also catches the C-stdio structured logs.
CliResult cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("mlrag");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    static int call = 0;
    const auto dir = std::filesystem::temp_directory_path() / "mlrag_test_cli_io";
    std::filesystem::create_directories(dir);
    const auto out_path = dir / ("out" + std::to_string(call) + ".txt");
    const auto err_path = dir / ("err" + std::to_string(call) + ".txt");
    ++call;

    std::cout.flush();
    std::fflush(stdout);
    std::fflush(stderr);
    const int saved_out = dup(1);
    const int saved_err = dup(2);
    const int fo = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int fe = open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    REQUIRE(saved_out >= 0);
    REQUIRE(fo >= 0);
    REQUIRE(fe >= 0);
    dup2(fo, 1);
    dup2(fe, 2);
    close(fo);
    close(fe);

    CliResult result;
    result.rc = run_cli(static_cast<int>(argv.size()), argv.data());

    std::cout.flush();
    std::fflush(stdout);
    std::fflush(stderr);
    dup2(saved_out, 1);
    dup2(saved_err, 2);
    close(saved_out);
    close(saved_err);
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
    REQUIRE(f.good());
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config files parse flat key-value lines") {
    const auto dir = testutil::scratch_dir("cli_cfg");
    write_text(dir / "a.cfg",
               "# comment\n"
               "strategy = cross\n"
               "\n"
               "k_retrieve=12   # trailing comment\n"
               "  seed =  9  \n");
    const auto cfg = load_config_file(dir / "a.cfg");
    CHECK(cfg.size() == 3);
    CHECK(cfg.at("strategy") == "cross");
    CHECK(cfg.at("k_retrieve") == "12");
    CHECK(cfg.at("seed") == "9");

    write_text(dir / "noassign.cfg", "strategy cross\n");
    CHECK_THROWS_AS(load_config_file(dir / "noassign.cfg"), UsageError);

    write_text(dir / "dup.cfg", "seed = 1\nseed = 2\n");
    CHECK_THROWS_AS(load_config_file(dir / "dup.cfg"), UsageError);

    write_text(dir / "nokey.cfg", "= 5\n");
    CHECK_THROWS_AS(load_config_file(dir / "nokey.cfg"), UsageError);
}

TEST_CASE("flags override config values and the merge lands in run metadata") {
    const auto dir = testutil::scratch_dir("cli_run");
    const auto r = cli({"run", "--config", testutil::fixture("tiny/mono.cfg"),
                        "--k-retrieve", "6", "--output", (dir / "out").string()});
    CHECK(r.rc == 0);
    CHECK(r.out.find("row") != std::string::npos);  // report table on stdout

    for (const char* name :
         {"records.jsonl", "report.csv", "report.txt", "run_meta.json", "call_log.jsonl"}) {
        CHECK(std::filesystem::exists(dir / "out" / name));
    }
    const json meta = json::parse(read_file(dir / "out" / "run_meta.json"));
    CHECK(meta.at("strategy") == "mono");   // from the file
    CHECK(meta.at("k_retrieve") == 6);      // flag beat the file's 8
    CHECK(meta.at("k_context") == 3);       // from the file
    CHECK(meta.at("seed") == 1);
    CHECK(meta.at("offline") == true);
    CHECK_FALSE(meta.at("corpus_hash").get<std::string>().empty());
}

TEST_CASE("unknown config keys are usage errors") {
    const auto dir = testutil::scratch_dir("cli_badkey");
    write_text(dir / "bad.cfg", "nonsense = 1\n");
    const auto r = cli({"run", "--config", (dir / "bad.cfg").string(),
                        "--output", (dir / "out").string()});
    CHECK(r.rc == 1);
    CHECK(r.err.find("nonsense") != std::string::npos);
}

TEST_CASE("usage, data and provider failures map to distinct exit codes") {
    const auto dir = testutil::scratch_dir("cli_exit");

    CHECK(cli({"run", "--no-such-flag"}).rc == 1);
    CHECK(cli({"--help"}).rc == 0);
    CHECK(cli({}).rc == 1);  // a subcommand is required

    // Corpus without the query's language: the run dies naming the missing
    // bucket.
    write_text(dir / "en_only.jsonl",
               R"({"id": "e1", "lang": "en", "title": "T", "text": "Water boils at one hundred degrees."})"
               "\n");
    write_text(dir / "de_query.jsonl",
               R"({"id": "q1", "lang": "de", "question": "Wo liegt Bonn?", "golds": ["Bonn"]})"
               "\n");
    const auto miss = cli({"run", "--corpus", (dir / "en_only.jsonl").string(),
                           "--queries", (dir / "de_query.jsonl").string(),
                           "--strategy", "mono",
                           "--output", (dir / "out").string()});
    CHECK(miss.rc == 2);
    CHECK(miss.err.find("de") != std::string::npos);

    // Offline with a cold cache: the remote embedder cannot be consulted.
    write_text(dir / "endpoints.json",
               R"({"endpoints": [{"id": "emb1", "kind": "embed", "base_url": "http://127.0.0.1:9", "path": "/embed"}]})");
    const auto offline = cli({"run", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
                              "--queries", testutil::fixture("tiny/queries.jsonl"),
                              "--embedder", "http:emb1",
                              "--endpoints", (dir / "endpoints.json").string(),
                              "--offline", "--output", (dir / "out2").string()});
    CHECK(offline.rc == 3);
    CHECK(offline.err.find("cache miss") != std::string::npos);
}

TEST_CASE("ingest prints bucket stats and validates expected languages") {
    const auto ok = cli({"ingest", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
                         "--langs", "en,de"});
    CHECK(ok.rc == 0);
    const json stats = json::parse(ok.out);
    CHECK(stats.at("docs") == 10);
    CHECK(stats.at("languages").at("en") == 5);
    CHECK_FALSE(stats.at("content_hash").get<std::string>().empty());

    const auto missing = cli({"ingest", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
                              "--langs", "th"});
    CHECK(missing.rc == 2);
    CHECK(missing.err.find("th") != std::string::npos);
}

TEST_CASE("index warms snapshots that later runs reuse byte for byte") {
    const auto dir = testutil::scratch_dir("cli_index");
    const auto idx = cli({"index", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
                          "--index-cache", (dir / "cache").string(), "--dim", "64"});
    CHECK(idx.rc == 0);
    const json out = json::parse(idx.out);
    CHECK(out.at("dim") == 64);
    // 4 language buckets plus en+{de,fi,zh} pairs.
    CHECK(out.at("indexes").size() == 7);
    std::size_t snapshots = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir / "cache")) {
        snapshots += entry.path().extension() == ".idx" ? 1 : 0;
    }
    CHECK(snapshots == 7);

    // Same run with and without the warm cache, identical records.
    const std::vector<std::string> common = {
        "run", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
        "--queries", testutil::fixture("tiny/queries.jsonl"),
        "--dictionary", testutil::fixture("tiny/dictionary.jsonl"),
        "--strategy", "multi", "--dim", "64"};
    auto cached = common;
    cached.insert(cached.end(), {"--index-cache", (dir / "cache").string(),
                                 "--output", (dir / "warm").string()});
    auto cold = common;
    cold.insert(cold.end(), {"--output", (dir / "cold").string()});
    CHECK(cli(cached).rc == 0);
    CHECK(cli(cold).rc == 0);
    CHECK(read_file(dir / "warm" / "records.jsonl") ==
          read_file(dir / "cold" / "records.jsonl"));
}

TEST_CASE("report renders deltas against a baseline records file") {
    const auto dir = testutil::scratch_dir("cli_report");
    const std::vector<std::string> base = {
        "run", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
        "--queries", testutil::fixture("tiny/queries.jsonl"),
        "--dictionary", testutil::fixture("tiny/dictionary.jsonl")};

    auto mono = base;
    mono.insert(mono.end(), {"--strategy", "mono", "--output", (dir / "mono").string()});
    auto cross = base;
    cross.insert(cross.end(), {"--strategy", "cross", "--output", (dir / "cross").string()});
    REQUIRE(cli(mono).rc == 0);
    REQUIRE(cli(cross).rc == 0);

    const auto delta = cli({"report", "--records", (dir / "cross" / "records.jsonl").string(),
                            "--baseline", (dir / "mono" / "records.jsonl").string()});
    CHECK(delta.rc == 0);
    CHECK(delta.out.find('+') != std::string::npos);  // cross beats mono somewhere

    const auto csv = cli({"report", "--records", (dir / "cross" / "records.jsonl").string(),
                          "--csv"});
    CHECK(csv.rc == 0);
    CHECK(csv.out.rfind("row,n,em,recall3,lang_match", 0) == 0);
}

TEST_CASE("the mock llm refuses to run without its query fixture") {
    const auto dir = testutil::scratch_dir("cli_nollm");
    const auto r = cli({"run", "--corpus", testutil::fixture("tiny/corpus.jsonl"),
                        "--output", (dir / "out").string()});
    CHECK(r.rc == 1);
    CHECK(r.err.find("queries") != std::string::npos);
}

}  // TEST_SUITE
