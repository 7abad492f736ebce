#include <doctest.h>

#include <cstdlib>
#include <string>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "semspace/space.hpp"

// Drives the installed binary end to end over the bundled 12-document
// corpus: exit codes, output formats and the documented flag surface.

namespace {

using nlohmann::json;
using testutil::TempDir;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args,
                  const std::string& env_prefix = "") {
    const std::string out_path = dir.file("stdout.txt").string();
    const std::string err_path = dir.file("stderr.txt").string();
    const std::string command = env_prefix + std::string(SEMSPACE_CLI_PATH) + " " + args +
                                " > " + out_path + " 2> " + err_path;
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    result.out = testutil::read_file(out_path);
    result.err = testutil::read_file(err_path);
    return result;
}

std::string toy12() { return std::string(SEMSPACE_DATA_DIR) + "/toy12.jsonl"; }

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        n += c == '\n';
    }
    return n;
}

// One shared build for the query subcommand tests.
struct BuiltSpace {
    TempDir dir{"cli"};
    std::string space_path;

    BuiltSpace() {
        space_path = dir.file("toy.space").string();
        const auto result = run_cli(
            dir, "build --corpus " + toy12() + " --format jsonl -k 6 --seed 7 --output " +
                     space_path);
        REQUIRE(result.exit_code == 0);
    }
};

BuiltSpace& built() {
    static BuiltSpace instance;
    return instance;
}

}  // namespace

TEST_CASE("build writes a space and a report") {
    auto& b = built();
    CHECK(std::filesystem::exists(b.space_path));
    const std::string report_text = testutil::read_file(b.space_path + ".report.json");
    const json report = json::parse(report_text);
    CHECK(report.at("schema_version") == 1);
    CHECK(report.at("document_count") == 12);
    CHECK(report.at("achieved_k") == 6);
    CHECK(report.at("vocabulary_size").get<int>() > 20);
    CHECK(report.at("wall_ms").contains("svd"));

    // p and k in the report match the loaded space.
    const auto space = semspace::load_space(b.space_path);
    CHECK(space.n_terms() == report.at("vocabulary_size").get<semspace::Index>());
    CHECK(space.dim() == report.at("achieved_k").get<semspace::Index>());
}

TEST_CASE("k larger than the matrix rank support is clamped with a warning") {
    TempDir dir("clamp");
    const auto result = run_cli(dir, "build --corpus " + toy12() + " -k 500 --output " +
                                         dir.file("s.space").string());
    CHECK(result.exit_code == 0);
    const json report = json::parse(testutil::read_file(dir.file("s.space").string() +
                                                        ".report.json"));
    CHECK(report.at("k_clamped") == true);
    CHECK(report.at("requested_k") == 500);
    CHECK(report.at("achieved_k").get<int>() <= 12);
    CHECK(result.err.find("clamped") != std::string::npos);
}

TEST_CASE("missing corpus path exits with the io code and names the path") {
    TempDir dir("io");
    const auto result = run_cli(dir, "build --corpus /no/such/file.jsonl --output " +
                                         dir.file("s.space").string());
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("/no/such/file.jsonl") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    TempDir dir("usage");
    CHECK(run_cli(dir, "definitely-not-a-subcommand").exit_code == 2);
    CHECK(run_cli(dir, "cosine").exit_code == 2);  // missing arguments
    const auto bad_flag = run_cli(dir, "build --corpus x --output y --mode sideways");
    CHECK(bad_flag.exit_code == 2);
}

TEST_CASE("cosine prints seven significant digits") {
    auto& b = built();
    const auto self = run_cli(b.dir, "cosine " + b.space_path + " vaca vaca");
    CHECK(self.exit_code == 0);
    CHECK(self.out == "1.000000\n");

    const auto pair = run_cli(b.dir, "cosine " + b.space_path + " vaca granja");
    CHECK(pair.exit_code == 0);
    CHECK(pair.out.size() > 2);

    const auto json_out = run_cli(b.dir, "--json cosine " + b.space_path + " vaca granja");
    const json payload = json::parse(json_out.out);
    CHECK(payload.at("schema_version") == 1);
    CHECK(payload.at("cosine").is_number());
}

TEST_CASE("out-of-vocabulary terms exit with the data code and are named") {
    auto& b = built();
    const auto result = run_cli(b.dir, "cosine " + b.space_path + " vaca zeppelin");
    CHECK(result.exit_code == 4);
    CHECK(result.err.find("zeppelin") != std::string::npos);
}

TEST_CASE("uppercase accented queries resolve through normalization") {
    auto& b = built();
    const auto result =
        run_cli(b.dir, "cosine " + b.space_path + " MATEM\xc3\x81TICAS matem\xc3\xa1ticas");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "1.000000\n");
}

TEST_CASE("neighbors csv is rank-ordered with the requested row count") {
    auto& b = built();
    const auto result = run_cli(b.dir, "neighbors " + b.space_path + " vaca -n 5 --csv");
    CHECK(result.exit_code == 0);
    CHECK(result.out.rfind("rank,term,score\n", 0) == 0);
    CHECK(count_lines(result.out) == 6);  // header + 5 rows
    CHECK(result.out.find("\n1,") != std::string::npos);

    for (const char* metric : {"cosine", "euclidean", "mahalanobis"}) {
        const auto m = run_cli(b.dir, std::string("--json neighbors ") + b.space_path +
                                          " vaca -n 3 --metric " + metric);
        CHECK(m.exit_code == 0);
        const json payload = json::parse(m.out);
        CHECK(payload.at("metric") == metric);
        CHECK(payload.at("neighbors").size() == 3);
    }
}

TEST_CASE("project emits term,x,y") {
    auto& b = built();
    const auto result = run_cli(b.dir, "project " + b.space_path + " vaca granja --csv");
    CHECK(result.exit_code == 0);
    CHECK(result.out.rfind("term,x,y\n", 0) == 0);
    CHECK(count_lines(result.out) == 3);
}

TEST_CASE("info prints metadata as json") {
    auto& b = built();
    const auto result = run_cli(b.dir, "info " + b.space_path);
    CHECK(result.exit_code == 0);
    const json payload = json::parse(result.out);
    CHECK(payload.at("schema_version") == 1);
    CHECK(payload.at("k") == 6);
    CHECK(payload.at("mode") == "frequency");
    CHECK(payload.at("weighting") == "log_entropy");
    CHECK(payload.at("corpus_digest").get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("compare-texts of identical files is one") {
    auto& b = built();
    testutil::write_file(b.dir.file("t.txt"), "la vaca pasta en el campo");
    const std::string t = b.dir.file("t.txt").string();
    const auto result = run_cli(b.dir, "compare-texts " + b.space_path + " " + t + " " + t);
    CHECK(result.exit_code == 0);
    CHECK(result.out == "1.000000\n");
}

TEST_CASE("spectra compares two spaces") {
    auto& b = built();
    TempDir dir("spectra");
    const std::string binary_space = dir.file("bin.space").string();
    const auto build = run_cli(dir, "build --corpus " + toy12() +
                                        " --mode binary -k 6 --output " + binary_space);
    REQUIRE(build.exit_code == 0);
    const auto result =
        run_cli(dir, "--json spectra " + b.space_path + " " + binary_space);
    CHECK(result.exit_code == 0);
    const json payload = json::parse(result.out);
    CHECK(payload.at("ratio").size() == 6);
    CHECK(payload.at("label_b") == "binary/log_entropy");
}

TEST_CASE("extract then build round trip") {
    TempDir dir("extract");
    const std::string cleaned = dir.file("clean.jsonl").string();
    const auto extract = run_cli(dir, "extract --corpus " + toy12() + " --output " + cleaned);
    CHECK(extract.exit_code == 0);
    CHECK(count_lines(testutil::read_file(cleaned)) == 12);
    // Cleaned output contains no uppercase or punctuation in the text fields.
    const std::string body = testutil::read_file(cleaned);
    CHECK(body.find("https://") == std::string::npos);

    const auto build = run_cli(dir, "build --corpus " + cleaned + " -k 4 --output " +
                                        dir.file("s.space").string());
    CHECK(build.exit_code == 0);
}

TEST_CASE("config file drives the build and flags override it") {
    TempDir dir("config");
    const json config{
        {"corpus", toy12()},          {"format", "jsonl"}, {"k", 4},
        {"weighting", "log_entropy"}, {"seed", 3},         {"output", dir.file("c.space").string()},
    };
    testutil::write_file(dir.file("build.json"), config.dump());
    const auto result =
        run_cli(dir, "--config " + dir.file("build.json").string() + " build -k 5");
    CHECK(result.exit_code == 0);
    const json report =
        json::parse(testutil::read_file(dir.file("c.space").string() + ".report.json"));
    CHECK(report.at("achieved_k") == 5);  // flag wins over the file value

    const auto bad =
        run_cli(dir, "--config " + dir.file("missing.json").string() + " build -k 5");
    CHECK(bad.exit_code == 3);
}

TEST_CASE("SEMSPACE_LOG controls stage logging") {
    TempDir dir("log");
    const std::string args =
        "build --corpus " + toy12() + " -k 4 --output " + dir.file("s.space").string();
    const auto loud = run_cli(dir, args, "SEMSPACE_LOG=info ");
    CHECK(loud.exit_code == 0);
    CHECK(loud.err.find("[info]") != std::string::npos);
    const auto quiet = run_cli(dir, args, "SEMSPACE_LOG=off ");
    CHECK(quiet.exit_code == 0);
    CHECK(quiet.err.empty());
}

TEST_CASE("threads flag is accepted") {
    auto& b = built();
    const auto result = run_cli(b.dir, "--threads 2 cosine " + b.space_path + " vaca vaca");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "1.000000\n");
}

TEST_CASE("equal seeds give bit-identical space files") {
    TempDir dir("seeds");
    const std::string a = dir.file("a.space").string();
    const std::string b = dir.file("b.space").string();
    REQUIRE(run_cli(dir, "--seed 11 build --corpus " + toy12() + " -k 6 --output " + a)
                .exit_code == 0);
    REQUIRE(run_cli(dir, "--seed 11 build --corpus " + toy12() + " -k 6 --output " + b)
                .exit_code == 0);
    CHECK(testutil::read_file(a) == testutil::read_file(b));
}
