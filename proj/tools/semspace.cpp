#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semspace/pipeline.hpp"
#include "semspace/query.hpp"
#include "semspace/space.hpp"
#include "semspace/version.hpp"

namespace {

using nlohmann::json;
using namespace semspace;

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

LogLevel g_log_level = LogLevel::Info;

void init_log_level() {
    const char* env = std::getenv("SEMSPACE_LOG");
    if (env == nullptr) {
        return;
    }
    const std::string level(env);
    if (level == "debug") {
        g_log_level = LogLevel::Debug;
    } else if (level == "info") {
        g_log_level = LogLevel::Info;
    } else if (level == "warn") {
        g_log_level = LogLevel::Warn;
    } else if (level == "error") {
        g_log_level = LogLevel::Error;
    } else if (level == "off") {
        g_log_level = LogLevel::Off;
    }
}

void log_line(LogLevel level, const std::string& message) {
    if (level < g_log_level) {
        return;
    }
    static const char* kNames[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "[%s] %s\n", kNames[static_cast<int>(level)], message.c_str());
}

// Similarity values print with seven significant digits.
std::string format_score(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.7g", value);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void emit(const json& payload) { std::cout << payload.dump(2) << "\n"; }

struct GlobalFlags {
    bool json = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string config_path;
    int threads = 0;
};

json with_schema(json payload) {
    payload["schema_version"] = kJsonSchemaVersion;
    return payload;
}

int cmd_extract(const std::string& corpus, const std::string& format_name,
                const std::string& output, bool drop_digits, std::uint64_t min_tokens,
                bool fail_fast, const GlobalFlags& global) {
    CorpusOptions corpus_options;
    corpus_options.fail_fast = fail_fast;
    CleaningStreamOptions clean_options;
    clean_options.clean.drop_digits = drop_digits;
    clean_options.min_tokens = min_tokens;

    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + output);
    }

    CleaningStream stream(open_corpus(corpus, corpus_format_from_string(format_name),
                                      corpus_options),
                          clean_options);
    std::int64_t written = 0;
    while (auto doc = stream.next()) {
        json record{{"id", doc->doc_id}, {"text", doc->text}};
        out << record.dump() << "\n";
        ++written;
    }
    if (!out) {
        throw IoError("write failed: " + output);
    }

    const auto& skipped = stream.reader().skipped();
    for (const auto& skip : skipped) {
        log_line(LogLevel::Warn,
                 skip.file + ":" + std::to_string(skip.line) + " skipped: " + skip.reason);
    }
    log_line(LogLevel::Info, "extracted " + std::to_string(written) + " documents (" +
                                 std::to_string(stream.dropped()) + " cleaned to empty, " +
                                 std::to_string(skipped.size()) + " malformed)");
    if (global.json) {
        emit(with_schema(json{{"documents", written},
                              {"dropped_empty", stream.dropped()},
                              {"skipped_records", skipped.size()},
                              {"output", output}}));
    }
    return 0;
}

int cmd_build(CLI::App* cmd, BuildConfig config, const std::string& report_path,
              const GlobalFlags& global) {
    if (!global.config_path.empty()) {
        std::ifstream in(global.config_path);
        if (!in) {
            throw IoError("cannot open config " + global.config_path);
        }
        json parsed = json::parse(in, nullptr, false);
        if (parsed.is_discarded()) {
            throw UsageError("config file is not valid JSON: " + global.config_path);
        }
        BuildConfig from_file = build_config_from_json(parsed);
        // Command-line flags override file values.
        BuildConfig overrides = config;
        config = from_file;
        if (cmd->count("--corpus") > 0) config.corpus_path = overrides.corpus_path;
        if (cmd->count("--format") > 0) config.format = overrides.format;
        if (cmd->count("--min-doc-freq") > 0) config.min_doc_freq = overrides.min_doc_freq;
        if (cmd->count("--max-doc-ratio") > 0) config.max_doc_ratio = overrides.max_doc_ratio;
        if (cmd->count("--mode") > 0) config.mode = overrides.mode;
        if (cmd->count("--weighting") > 0) config.weighting = overrides.weighting;
        if (cmd->count("-k") > 0) config.k = overrides.k;
        if (cmd->count("--alpha") > 0) config.alpha = overrides.alpha;
        if (cmd->count("--output") > 0) config.output_path = overrides.output_path;
        if (cmd->count("--drop-digits") > 0) config.drop_digits = overrides.drop_digits;
        if (cmd->count("--min-tokens") > 0) config.min_tokens = overrides.min_tokens;
        if (cmd->count("--keep-doc-vectors") > 0)
            config.keep_doc_vectors = overrides.keep_doc_vectors;
        if (cmd->count("--fail-fast") > 0) config.fail_fast = overrides.fail_fast;
        if (cmd->count("--svd-tol") > 0) config.svd_tol = overrides.svd_tol;
        if (cmd->count("--svd-max-iter") > 0) config.svd_max_iter = overrides.svd_max_iter;
    }
    if (global.seed_set) {
        config.seed = global.seed;
    }
    if (config.corpus_path.empty()) {
        throw UsageError("build needs --corpus (flag or config file)");
    }
    if (config.output_path.empty()) {
        throw UsageError("build needs --output (flag or config file)");
    }

    log_line(LogLevel::Info, "building space from " + config.corpus_path);
    const BuildReport report = run_build(config);
    if (report.k_clamped) {
        log_line(LogLevel::Warn, "k clamped to " + std::to_string(report.achieved_k) +
                                     " (matrix supports at most min(docs, terms))");
    }
    if (report.rank_deficient) {
        log_line(LogLevel::Warn,
                 "rank deficient: only " + std::to_string(report.achieved_k) +
                     " nonzero singular values");
    }
    log_line(LogLevel::Info,
             "documents=" + std::to_string(report.document_count) +
                 " vocabulary=" + std::to_string(report.vocabulary_size) +
                 " nonzeros=" + std::to_string(report.matrix_nonzeros) +
                 " k=" + std::to_string(report.achieved_k));

    const json report_json = to_json(report);
    const std::string actual_report_path =
        report_path.empty() ? config.output_path + ".report.json" : report_path;
    std::ofstream report_out(actual_report_path, std::ios::trunc);
    if (!report_out) {
        throw IoError("cannot write " + actual_report_path);
    }
    report_out << report_json.dump(2) << "\n";
    log_line(LogLevel::Info, "space written to " + config.output_path + ", report to " +
                                 actual_report_path);
    if (global.json) {
        emit(report_json);
    }
    return 0;
}

int cmd_info(const std::string& space_path) {
    const SemanticSpace space = load_space(space_path);
    emit(with_schema(json{
        {"mode", to_string(space.meta.mode)},
        {"weighting", to_string(space.meta.weighting)},
        {"k", space.meta.k},
        {"alpha", space.meta.alpha},
        {"corpus_digest", space.meta.corpus_digest},
        {"tool_version", space.meta.tool_version},
        {"n_docs", space.meta.n_docs},
        {"n_terms", space.n_terms()},
        {"rank_deficient", space.meta.rank_deficient},
        {"has_doc_vectors", space.has_doc_vectors()},
    }));
    return 0;
}

int cmd_cosine(const std::string& space_path, const std::string& a, const std::string& b,
               const GlobalFlags& global) {
    const SemanticSpace space = load_space(space_path);
    const double value = cosine(space, a, b);
    if (global.json) {
        emit(with_schema(json{{"a", normalize_term(a)}, {"b", normalize_term(b)},
                              {"cosine", value}}));
    } else {
        std::cout << format_score(value) << "\n";
    }
    return 0;
}

int cmd_compare_texts(const std::string& space_path, const std::string& file_a,
                      const std::string& file_b, const GlobalFlags& global) {
    const SemanticSpace space = load_space(space_path);
    const std::string text_a = read_text_file(file_a);
    const std::string text_b = read_text_file(file_b);
    const double value = costring(space, text_a, text_b);
    if (global.json) {
        const TextVector va = text_vector(space, text_a);
        const TextVector vb = text_vector(space, text_b);
        emit(with_schema(json{
            {"file_a", file_a},
            {"file_b", file_b},
            {"costring", value},
            {"coverage_a", {{"known", va.known_tokens}, {"total", va.total_tokens}}},
            {"coverage_b", {{"known", vb.known_tokens}, {"total", vb.total_tokens}}},
        }));
    } else {
        std::cout << format_score(value) << "\n";
    }
    return 0;
}

int cmd_neighbors(const std::string& space_path, const std::string& term, Index n,
                  const std::string& metric_name, double ridge, bool csv,
                  const GlobalFlags& global) {
    const SemanticSpace space = load_space(space_path);
    const Metric metric = metric_from_string(metric_name);
    std::optional<MahalanobisContext> ctx;
    if (metric == Metric::Mahalanobis) {
        ctx = build_mahalanobis_context(space, ridge);
    }
    const NeighborList list =
        neighbors(space, term, n, metric, ctx.has_value() ? &*ctx : nullptr);

    if (csv) {
        std::cout << neighbors_to_csv(list);
    } else if (global.json) {
        json rows = json::array();
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            rows.push_back(json{{"rank", i + 1},
                                {"term", list.entries[i].term},
                                {"score", list.entries[i].score}});
        }
        emit(with_schema(json{{"term", normalize_term(term)},
                              {"metric", to_string(metric)},
                              {"neighbors", rows}}));
    } else {
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            std::printf("%3zu  %-24s %s\n", i + 1, list.entries[i].term.c_str(),
                        format_score(list.entries[i].score).c_str());
        }
    }
    return 0;
}

int cmd_project(const std::string& space_path, const std::vector<std::string>& terms, bool csv,
                const GlobalFlags& global) {
    const SemanticSpace space = load_space(space_path);
    std::vector<std::string> normalized;
    normalized.reserve(terms.size());
    for (const auto& term : terms) {
        normalized.push_back(normalize_term(term));
    }
    const auto points = project_2d(space, normalized);
    if (csv) {
        std::cout << projection_to_csv(points);
    } else if (global.json) {
        json rows = json::array();
        for (const auto& p : points) {
            rows.push_back(json{{"term", p.term}, {"x", p.x}, {"y", p.y}});
        }
        emit(with_schema(json{{"points", rows}}));
    } else {
        for (const auto& p : points) {
            std::printf("%-24s %s %s\n", p.term.c_str(), format_score(p.x).c_str(),
                        format_score(p.y).c_str());
        }
    }
    return 0;
}

json third_to_json(const ThirdStats& stats) {
    if (stats.count == 0) {
        return json{{"count", 0}};
    }
    return json{{"count", stats.count},
                {"min", stats.min_ratio},
                {"max", stats.max_ratio},
                {"median", stats.median_ratio}};
}

int cmd_spectra(const std::string& space_a, const std::string& space_b,
                const GlobalFlags& global) {
    const SemanticSpace a = load_space(space_a);
    const SemanticSpace b = load_space(space_b);
    const SpectrumReport report = compare_spectra(a, b);

    if (global.json) {
        emit(with_schema(json{
            {"label_a", report.label_a},
            {"label_b", report.label_b},
            {"sigma_a", report.sigma_a},
            {"sigma_b", report.sigma_b},
            {"ratio", report.ratio},
            {"head", third_to_json(report.head)},
            {"middle", third_to_json(report.middle)},
            {"tail", third_to_json(report.tail)},
        }));
    } else {
        std::printf("# %s vs %s, %zu paired values\n", report.label_a.c_str(),
                    report.label_b.c_str(), report.ratio.size());
        std::printf("%-8s %-14s %-14s %s\n", "index", "sigma_a", "sigma_b", "ratio");
        for (std::size_t i = 0; i < report.ratio.size(); ++i) {
            std::printf("%-8zu %-14s %-14s %s\n", i, format_score(report.sigma_a[i]).c_str(),
                        format_score(report.sigma_b[i]).c_str(),
                        format_score(report.ratio[i]).c_str());
        }
        auto print_third = [](const char* name, const ThirdStats& stats) {
            if (stats.count == 0) {
                return;
            }
            std::printf("%s: n=%lld min=%s median=%s max=%s\n", name,
                        static_cast<long long>(stats.count),
                        format_score(stats.min_ratio).c_str(),
                        format_score(stats.median_ratio).c_str(),
                        format_score(stats.max_ratio).c_str());
        };
        print_third("head", report.head);
        print_third("middle", report.middle);
        print_third("tail", report.tail);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    init_log_level();

    CLI::App app{"semspace: builds and queries truncated-SVD word-vector spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);

    GlobalFlags global;
    app.add_flag("--json", global.json, "emit JSON instead of plain text");
    auto* seed_opt =
        app.add_option("--seed", global.seed, "seed for all randomized stages");
    app.add_option("--config", global.config_path, "JSON config file for build");
    app.add_option("--threads", global.threads, "internal parallelism hint");

    // extract
    auto* extract = app.add_subcommand("extract", "clean a raw corpus into JSONL");
    std::string ex_corpus, ex_format = "jsonl", ex_output;
    bool ex_drop_digits = false, ex_fail_fast = false;
    std::uint64_t ex_min_tokens = 1;
    extract->add_option("--corpus", ex_corpus, "corpus path")->required();
    extract->add_option("--format", ex_format, "jsonl|textdir|wikiextractor");
    extract->add_option("--output", ex_output, "cleaned JSONL output path")->required();
    extract->add_flag("--drop-digits", ex_drop_digits, "remove digit characters");
    extract->add_option("--min-tokens", ex_min_tokens, "drop documents shorter than this");
    extract->add_flag("--fail-fast", ex_fail_fast, "abort on the first malformed record");

    // build
    auto* build = app.add_subcommand("build", "build a semantic space from a corpus");
    BuildConfig config;
    std::string report_path;
    std::string b_format = "jsonl", b_mode = "frequency", b_weighting = "log_entropy";
    build->add_option("--corpus", config.corpus_path, "corpus path");
    build->add_option("--format", b_format, "jsonl|textdir|wikiextractor");
    build->add_option("--min-doc-freq", config.min_doc_freq, "vocabulary floor");
    build->add_option("--max-doc-ratio", config.max_doc_ratio, "vocabulary ceiling");
    build->add_option("--mode", b_mode, "frequency|binary");
    build->add_option("--weighting", b_weighting, "none|log_entropy");
    build->add_option("-k", config.k, "retained dimensions");
    build->add_option("--alpha", config.alpha, "sigma exponent for term vectors");
    build->add_option("--output", config.output_path, "space file path");
    build->add_flag("--drop-digits", config.drop_digits, "remove digit characters");
    build->add_option("--min-tokens", config.min_tokens, "drop documents shorter than this");
    build->add_flag("--keep-doc-vectors", config.keep_doc_vectors,
                    "persist document vectors too");
    build->add_flag("--fail-fast", config.fail_fast, "abort on the first malformed record");
    build->add_option("--svd-tol", config.svd_tol, "Lanczos residual tolerance");
    build->add_option("--svd-max-iter", config.svd_max_iter, "Lanczos step budget");
    build->add_option("--report", report_path, "report path (default <output>.report.json)");

    // query family
    auto* info = app.add_subcommand("info", "print space metadata as JSON");
    std::string info_space;
    info->add_option("space", info_space, "space file")->required();

    auto* cos = app.add_subcommand("cosine", "cosine similarity of two words");
    std::string cos_space, cos_a, cos_b;
    cos->add_option("space", cos_space, "space file")->required();
    cos->add_option("a", cos_a, "first word")->required();
    cos->add_option("b", cos_b, "second word")->required();

    auto* cmp = app.add_subcommand("compare-texts", "cosine of two texts' average vectors");
    std::string cmp_space, cmp_a, cmp_b;
    cmp->add_option("space", cmp_space, "space file")->required();
    cmp->add_option("file_a", cmp_a, "first text file")->required();
    cmp->add_option("file_b", cmp_b, "second text file")->required();

    auto* nn = app.add_subcommand("neighbors", "nearest terms under a metric");
    std::string nn_space, nn_term, nn_metric = "cosine";
    Index nn_n = 10;
    double nn_ridge = -1.0;
    bool nn_csv = false;
    nn->add_option("space", nn_space, "space file")->required();
    nn->add_option("term", nn_term, "query term")->required();
    nn->add_option("-n", nn_n, "number of neighbors");
    nn->add_option("--metric", nn_metric, "cosine|euclidean|mahalanobis");
    nn->add_option("--ridge", nn_ridge, "covariance ridge (mahalanobis)");
    nn->add_flag("--csv", nn_csv, "emit rank,term,score CSV");

    auto* proj = app.add_subcommand("project", "first two coordinates of terms");
    std::string proj_space;
    std::vector<std::string> proj_terms;
    bool proj_csv = false;
    proj->add_option("space", proj_space, "space file")->required();
    proj->add_option("terms", proj_terms, "terms to project")->expected(-1);
    proj->add_flag("--csv", proj_csv, "emit term,x,y CSV");

    auto* spectra = app.add_subcommand("spectra", "compare singular values of two spaces");
    std::string sp_a, sp_b;
    spectra->add_option("space_a", sp_a, "first space file")->required();
    spectra->add_option("space_b", sp_b, "second space file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorFamily::Usage);
    }
    global.seed_set = seed_opt->count() > 0;
    if (global.threads > 0) {
        Eigen::setNbThreads(global.threads);
    }

    try {
        if (*extract) {
            return cmd_extract(ex_corpus, ex_format, ex_output, ex_drop_digits, ex_min_tokens,
                               ex_fail_fast, global);
        }
        if (*build) {
            config.format = corpus_format_from_string(b_format);
            config.mode = matrix_mode_from_string(b_mode);
            config.weighting = weighting_from_string(b_weighting);
            return cmd_build(build, config, report_path, global);
        }
        if (*info) {
            return cmd_info(info_space);
        }
        if (*cos) {
            return cmd_cosine(cos_space, cos_a, cos_b, global);
        }
        if (*cmp) {
            return cmd_compare_texts(cmp_space, cmp_a, cmp_b, global);
        }
        if (*nn) {
            return cmd_neighbors(nn_space, nn_term, nn_n, nn_metric, nn_ridge, nn_csv, global);
        }
        if (*proj) {
            return cmd_project(proj_space, proj_terms, proj_csv, global);
        }
        if (*spectra) {
            return cmd_spectra(sp_a, sp_b, global);
        }
    } catch (const Error& e) {
        log_line(LogLevel::Error, e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        log_line(LogLevel::Error, std::string("unexpected failure: ") + e.what());
        return 1;
    }
    return 0;
}
