#include "semspace/pipeline.hpp"

#include <chrono>
#include <cstdio>

#include "semspace/errors.hpp"
#include "semspace/svd.hpp"
#include "semspace/version.hpp"

namespace semspace {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv1a(std::uint64_t& hash, std::string_view bytes) {
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= kFnvPrime;
    }
}

// Wraps a cleaning stream to hash every document flowing through it.
class DigestingStream : public DocumentStream {
public:
    DigestingStream(DocumentStream& inner, std::uint64_t& hash) : inner_(inner), hash_(hash) {}

    std::optional<CleanDocument> next() override {
        auto doc = inner_.next();
        if (doc) {
            fnv1a(hash_, doc->doc_id);
            fnv1a(hash_, "\x1f");
            fnv1a(hash_, doc->text);
            fnv1a(hash_, "\x1e");
        }
        return doc;
    }

private:
    DocumentStream& inner_;
    std::uint64_t& hash_;
};

}  // namespace

std::string corpus_digest_hex(std::uint64_t value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(value));
    return buf;
}

BuildConfig build_config_from_json(const json& j) {
    static const char* kKnown[] = {
        "corpus",       "format",       "min_doc_freq",    "max_doc_ratio", "mode",
        "weighting",    "k",            "alpha",           "seed",          "output",
        "drop_digits",  "min_tokens",   "keep_doc_vectors", "fail_fast",    "svd_tol",
        "svd_max_iter",
    };
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* name : kKnown) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw UsageError("unknown config key: '" + key + "'");
        }
    }

    BuildConfig config;
    if (j.contains("corpus")) config.corpus_path = j.at("corpus").get<std::string>();
    if (j.contains("format"))
        config.format = corpus_format_from_string(j.at("format").get<std::string>());
    if (j.contains("min_doc_freq")) config.min_doc_freq = j.at("min_doc_freq").get<std::int64_t>();
    if (j.contains("max_doc_ratio")) config.max_doc_ratio = j.at("max_doc_ratio").get<double>();
    if (j.contains("mode")) config.mode = matrix_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("weighting"))
        config.weighting = weighting_from_string(j.at("weighting").get<std::string>());
    if (j.contains("k")) config.k = j.at("k").get<Index>();
    if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) config.output_path = j.at("output").get<std::string>();
    if (j.contains("drop_digits")) config.drop_digits = j.at("drop_digits").get<bool>();
    if (j.contains("min_tokens")) config.min_tokens = j.at("min_tokens").get<std::uint64_t>();
    if (j.contains("keep_doc_vectors"))
        config.keep_doc_vectors = j.at("keep_doc_vectors").get<bool>();
    if (j.contains("fail_fast")) config.fail_fast = j.at("fail_fast").get<bool>();
    if (j.contains("svd_tol")) config.svd_tol = j.at("svd_tol").get<double>();
    if (j.contains("svd_max_iter")) config.svd_max_iter = j.at("svd_max_iter").get<int>();
    return config;
}

json to_json(const BuildConfig& config) {
    return json{
        {"corpus", config.corpus_path},
        {"format", to_string(config.format)},
        {"min_doc_freq", config.min_doc_freq},
        {"max_doc_ratio", config.max_doc_ratio},
        {"mode", to_string(config.mode)},
        {"weighting", to_string(config.weighting)},
        {"k", config.k},
        {"alpha", config.alpha},
        {"seed", config.seed},
        {"output", config.output_path},
        {"drop_digits", config.drop_digits},
        {"min_tokens", config.min_tokens},
        {"keep_doc_vectors", config.keep_doc_vectors},
        {"fail_fast", config.fail_fast},
        {"svd_tol", config.svd_tol},
        {"svd_max_iter", config.svd_max_iter},
    };
}

json to_json(const BuildReport& report) {
    return json{
        {"schema_version", kJsonSchemaVersion},
        {"document_count", report.document_count},
        {"dropped_empty_count", report.dropped_empty_count},
        {"skipped_record_count", report.skipped_record_count},
        {"vocabulary_size", report.vocabulary_size},
        {"matrix_nonzeros", report.matrix_nonzeros},
        {"requested_k", report.requested_k},
        {"achieved_k", report.achieved_k},
        {"k_clamped", report.k_clamped},
        {"rank_deficient", report.rank_deficient},
        {"sigma_head", report.sigma_head},
        {"sigma_tail", report.sigma_tail},
        {"corpus_digest", report.corpus_digest},
        {"output", report.output_path},
        {"svd_iterations", report.svd_iterations},
        {"wall_ms",
         {
             {"vocabulary", report.timings.vocabulary_ms},
             {"matrix", report.timings.matrix_ms},
             {"weighting", report.timings.weighting_ms},
             {"svd", report.timings.svd_ms},
             {"space", report.timings.space_ms},
             {"save", report.timings.save_ms},
         }},
    };
}

BuildReport run_build(const BuildConfig& config) {
    BuildReport report;
    report.output_path = config.output_path;
    report.requested_k = config.k;

    CleaningStreamOptions clean_options;
    clean_options.clean.drop_digits = config.drop_digits;
    clean_options.min_tokens = config.min_tokens;
    CorpusOptions corpus_options;
    corpus_options.fail_fast = config.fail_fast;

    auto open_clean_stream = [&] {
        return CleaningStream(open_corpus(config.corpus_path, config.format, corpus_options),
                              clean_options);
    };

    // Pass 1: vocabulary, document counts, corpus digest.
    auto t0 = Clock::now();
    std::uint64_t hash = kFnvOffset;
    Vocabulary vocab;
    std::int64_t documents = 0;
    {
        CleaningStream cleaning = open_clean_stream();
        DigestingStream digesting(cleaning, hash);
        struct CountingStream : DocumentStream {
            DocumentStream& inner;
            std::int64_t& count;
            CountingStream(DocumentStream& s, std::int64_t& c) : inner(s), count(c) {}
            std::optional<CleanDocument> next() override {
                auto doc = inner.next();
                if (doc) {
                    ++count;
                }
                return doc;
            }
        } counting(digesting, documents);
        vocab = build_vocabulary(counting, config.min_doc_freq, config.max_doc_ratio);
        report.dropped_empty_count = static_cast<std::int64_t>(cleaning.dropped());
        report.skipped_record_count =
            static_cast<std::int64_t>(cleaning.reader().skipped().size());
    }
    report.document_count = documents;
    report.vocabulary_size = vocab.size();
    report.corpus_digest = corpus_digest_hex(hash);
    report.timings.vocabulary_ms = ms_since(t0);

    // Pass 2: matrix assembly.
    t0 = Clock::now();
    DocTermMatrix matrix;
    {
        CleaningStream cleaning = open_clean_stream();
        matrix = build_matrix(cleaning, vocab, config.mode);
    }
    report.matrix_nonzeros = matrix.nonzeros();
    report.timings.matrix_ms = ms_since(t0);

    t0 = Clock::now();
    DocTermMatrix weighted = apply_weighting(matrix, config.weighting);
    report.timings.weighting_ms = ms_since(t0);

    // Factorization; k is clamped to what the matrix can support.
    t0 = Clock::now();
    SvdConfig svd_config;
    svd_config.k = config.k;
    const Index max_k = std::min(weighted.n_docs(), weighted.n_terms());
    if (svd_config.k > max_k) {
        svd_config.k = max_k;
        report.k_clamped = true;
    }
    svd_config.tol = config.svd_tol;
    svd_config.max_iter = std::max(config.svd_max_iter, static_cast<int>(svd_config.k));
    svd_config.seed = config.seed;
    TruncatedSvd<Real> svd = lanczos_svd<Real>(weighted.values, svd_config);
    report.achieved_k = svd.k;
    report.rank_deficient = svd.rank_deficient;
    report.svd_iterations = svd.iterations;
    const Index head = std::min<Index>(5, svd.sigma.size());
    for (Index i = 0; i < head; ++i) {
        report.sigma_head.push_back(svd.sigma[i]);
    }
    for (Index i = std::max<Index>(head, svd.sigma.size() - 5); i < svd.sigma.size(); ++i) {
        report.sigma_tail.push_back(svd.sigma[i]);
    }
    report.timings.svd_ms = ms_since(t0);

    t0 = Clock::now();
    BuildSpaceOptions space_options;
    space_options.alpha = config.alpha;
    space_options.corpus_digest = report.corpus_digest;
    space_options.keep_doc_vectors = config.keep_doc_vectors;
    SemanticSpace space = build_space(vocab, weighted, svd, space_options);
    report.timings.space_ms = ms_since(t0);

    t0 = Clock::now();
    save_space(space, config.output_path);
    report.timings.save_ms = ms_since(t0);
    return report;
}

}  // namespace semspace
