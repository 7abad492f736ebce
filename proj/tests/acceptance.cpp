// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[SKIP], exit
// code = number of failures. Registered in ctest as "acceptance".

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "semspace/corpus.hpp"
#include "semspace/dtm.hpp"
#include "semspace/metrics.hpp"
#include "semspace/pipeline.hpp"
#include "semspace/query.hpp"
#include "semspace/space.hpp"
#include "semspace/svd.hpp"

using namespace semspace;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool ok = true;
    bool skipped = false;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += why;
    }
};

void run_criterion(const std::string& name, const std::function<Outcome()>& body) {
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const char* verdict = outcome.skipped ? "SKIP" : (outcome.ok ? "PASS" : "FAIL");
    std::printf("[%s] %s%s%s\n", verdict, name.c_str(), outcome.detail.empty() ? "" : ": ",
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.ok && !outcome.skipped) {
        ++g_failures;
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

RealSparse sparse_from_dense(const RealMatrix& dense) {
    RealSparse out = dense.sparseView();
    out.makeCompressed();
    return out;
}

std::string data_path(const std::string& name) {
    return std::string(SEMSPACE_DATA_DIR) + "/" + name;
}

// ---------------------------------------------------------------------
// SVD oracle equivalence: 100 random sparse matrices, k = 10. Singular
// values within 1e-8 relative, vectors within 1e-6 via projectors over
// near-degenerate clusters. Budget 30 s.
Outcome svd_oracle_equivalence() {
    const auto start = Clock::now();
    Outcome outcome;
    std::mt19937_64 rng(20260810);
    double worst_sigma = 0;
    double worst_projector = 0;

    for (int round = 0; round < 100; ++round) {
        const Index n = 15 + static_cast<Index>(rng() % 66);  // 15..80
        const Index p = 15 + static_cast<Index>(rng() % 66);
        const double density = 0.05 + 0.15 * (static_cast<double>(rng() % 1000) / 1000.0);
        const RealSparse a = testutil::random_sparse(n, p, density, rng());

        SvdConfig cfg;
        cfg.k = 10;
        cfg.seed = rng();
        TruncatedSvd<Real> fast;
        try {
            fast = lanczos_svd<Real>(a, cfg);
        } catch (const Error& e) {
            outcome.fail("round " + std::to_string(round) + ": " + e.what());
            continue;
        }
        const auto exact = dense_svd_oracle(RealMatrix(a), 10);
        if (fast.k != exact.k) {
            outcome.fail("round " + std::to_string(round) + ": achieved k disagrees (" +
                         std::to_string(fast.k) + " vs " + std::to_string(exact.k) + ")");
            continue;
        }

        const double scale = exact.sigma[0];
        for (Index i = 0; i < fast.k; ++i) {
            worst_sigma = std::max(worst_sigma,
                                   std::abs(fast.sigma[i] - exact.sigma[i]) / scale);
        }

        // Cluster by spectral gap, then compare subspace projectors.
        Index begin = 0;
        while (begin < fast.k) {
            Index end = begin + 1;
            while (end < fast.k && exact.sigma[end - 1] - exact.sigma[end] <= 1e-8 * scale) {
                ++end;
            }
            const bool cluster_truncated =
                end == fast.k && exact.k > fast.k &&
                exact.sigma[fast.k - 1] - exact.sigma[fast.k] <= 1e-8 * scale;
            const bool negligible = exact.sigma[begin] <= 1e-8 * scale;
            if (!cluster_truncated && !negligible) {
                const auto pf = (fast.v.middleCols(begin, end - begin) *
                                 fast.v.middleCols(begin, end - begin).transpose())
                                    .eval();
                const auto pe = (exact.v.middleCols(begin, end - begin) *
                                 exact.v.middleCols(begin, end - begin).transpose())
                                    .eval();
                const auto qf = (fast.u.middleCols(begin, end - begin) *
                                 fast.u.middleCols(begin, end - begin).transpose())
                                    .eval();
                const auto qe = (exact.u.middleCols(begin, end - begin) *
                                 exact.u.middleCols(begin, end - begin).transpose())
                                    .eval();
                worst_projector = std::max(worst_projector, (pf - pe).norm());
                worst_projector = std::max(worst_projector, (qf - qe).norm());
            }
            begin = end;
        }
    }

    if (worst_sigma > 1e-8) {
        outcome.fail("sigma error " + fmt(worst_sigma) + " > 1e-8");
    }
    if (worst_projector > 1e-6) {
        outcome.fail("projector error " + fmt(worst_projector) + " > 1e-6");
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 30.0) {
        outcome.fail("runtime " + fmt(elapsed) + "s >= 30s");
    }
    if (outcome.ok) {
        outcome.detail = "100 matrices, sigma err " + fmt(worst_sigma) + ", projector err " +
                         fmt(worst_projector) + ", " + fmt(elapsed) + "s";
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Analytic spectrum of [[3,0],[4,5]]: sigma = (sqrt 45, sqrt 5) to 1e-10.
Outcome analytic_spectrum() {
    Outcome outcome;
    RealMatrix m(2, 2);
    m << 3, 0, 4, 5;
    const double s1 = std::sqrt(45.0);
    const double s2 = std::sqrt(5.0);

    const auto exact = dense_svd_oracle(m, 2);
    SvdConfig cfg;
    cfg.k = 2;
    const auto fast = lanczos_svd<Real>(sparse_from_dense(m), cfg);

    const double worst = std::max(
        std::max(std::abs(exact.sigma[0] - s1), std::abs(exact.sigma[1] - s2)),
        std::max(std::abs(fast.sigma[0] - s1), std::abs(fast.sigma[1] - s2)));
    if (worst > 1e-10) {
        outcome.fail("max deviation " + fmt(worst) + " > 1e-10");
    } else {
        outcome.detail = "both solvers, max deviation " + fmt(worst);
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Eckart-Young: truncation error equals sqrt(sum of discarded sigma^2)
// for 20 random small matrices at every k, within 1e-8 (relative to the
// Frobenius norm of the matrix).
Outcome eckart_young() {
    Outcome outcome;
    std::mt19937_64 rng(7);
    double worst = 0;
    for (int round = 0; round < 20; ++round) {
        const Index n = 6 + static_cast<Index>(rng() % 7);
        const Index p = 5 + static_cast<Index>(rng() % 6);
        const RealMatrix m = testutil::random_dense(n, p, rng());
        const auto full = dense_svd_oracle(m, std::min(n, p));
        for (Index k = 1; k <= full.k; ++k) {
            const auto truncated = dense_svd_oracle(m, k);
            const double err = (reconstruct(truncated) - m).norm();
            double tail = 0;
            for (Index i = k; i < full.k; ++i) {
                tail += full.sigma[i] * full.sigma[i];
            }
            const double expected = std::sqrt(tail);
            worst = std::max(worst, std::abs(err - expected) / m.norm());
        }
    }
    if (worst > 1e-8) {
        outcome.fail("relative deviation " + fmt(worst) + " > 1e-8");
    } else {
        outcome.detail = "20 matrices, all k, deviation " + fmt(worst);
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Symmetric embedding [[0,A],[A^T,0]] has eigenvalues +/- sigma_i.
Outcome symmetric_embedding() {
    Outcome outcome;
    std::mt19937_64 rng(99);
    double worst = 0;
    for (int round = 0; round < 10; ++round) {
        const Index n = 4 + static_cast<Index>(rng() % 6);
        const Index p = 3 + static_cast<Index>(rng() % 6);
        const RealMatrix a = testutil::random_dense(n, p, rng());
        const auto svd = dense_svd_oracle(a, std::min(n, p));

        RealMatrix embedding = RealMatrix::Zero(n + p, n + p);
        embedding.topRightCorner(n, p) = a;
        embedding.bottomLeftCorner(p, n) = a.transpose();
        Eigen::SelfAdjointEigenSolver<RealMatrix> eig(embedding);
        const auto& values = eig.eigenvalues();  // ascending

        const double scale = svd.sigma[0];
        for (Index i = 0; i < svd.k; ++i) {
            worst = std::max(worst, std::abs(values[n + p - 1 - i] - svd.sigma[i]) / scale);
            worst = std::max(worst, std::abs(values[i] + svd.sigma[i]) / scale);
        }
        // Everything between the paired blocks is numerically zero.
        for (Index i = svd.k; i < n + p - svd.k; ++i) {
            worst = std::max(worst, std::abs(values[i]) / scale);
        }
    }
    if (worst > 1e-8) {
        outcome.fail("relative deviation " + fmt(worst) + " > 1e-8");
    } else {
        outcome.detail = "10 matrices, deviation " + fmt(worst);
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Gram identity: alpha = 1, full rank => term-vector Gram equals M^T M.
Outcome gram_identity() {
    Outcome outcome;
    std::vector<CleanDocument> ds = {
        {"d0", "a a b"}, {"d1", "b c"}, {"d2", "a c c"}, {"d3", "b b a"}, {"d4", "c a"},
    };
    VectorStream vocab_stream(ds);
    Vocabulary vocab = build_vocabulary(vocab_stream);
    VectorStream matrix_stream(ds);
    DocTermMatrix weighted = apply_weighting(
        build_matrix(matrix_stream, vocab, MatrixMode::Frequency), WeightingScheme::LogEntropy);

    SvdConfig cfg;
    cfg.k = 3;
    const auto svd = lanczos_svd<Real>(weighted.values, cfg);
    if (svd.k != 3) {
        outcome.fail("toy corpus lost rank: achieved k = " + std::to_string(svd.k));
        return outcome;
    }
    const SemanticSpace space = build_space(vocab, weighted, svd, {});
    const RealMatrix gram = space.term_vectors * space.term_vectors.transpose();
    const RealMatrix expected = RealMatrix(weighted.values.transpose() * weighted.values);
    const double err = (gram - expected).norm() / expected.norm();
    if (err > 1e-6) {
        outcome.fail("relative Frobenius error " + fmt(err) + " > 1e-6");
    } else {
        outcome.detail = "relative Frobenius error " + fmt(err);
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Query exactness: neighbors equal the brute-force oracle on 50 random
// spaces for all three metrics; identity-covariance Mahalanobis ranks
// exactly like Euclidean.
Outcome query_exactness() {
    Outcome outcome;
    std::mt19937_64 rng(31415);
    for (int round = 0; round < 50; ++round) {
        const Index p = 10 + static_cast<Index>(rng() % 111);  // 10..120
        const Index k = 2 + static_cast<Index>(rng() % 15);    // 2..16
        const SemanticSpace space = testutil::random_space(p, k, rng());
        const MahalanobisContext ctx = build_mahalanobis_context(space, 1e-8);
        const std::string query = space.vocab.term(static_cast<Index>(rng() % p));

        for (Index n : {Index(1), Index(5), p}) {
            for (Metric metric : {Metric::Cosine, Metric::Euclidean, Metric::Mahalanobis}) {
                const auto got = testutil::terms_of(neighbors(
                    space, query, n, metric,
                    metric == Metric::Mahalanobis ? &ctx : nullptr));
                const auto want = testutil::brute_force_neighbors(
                    space, query, n, metric,
                    metric == Metric::Mahalanobis ? &ctx.inv_cov : nullptr);
                if (got != want) {
                    outcome.fail("round " + std::to_string(round) + " metric " +
                                 to_string(metric) + " n=" + std::to_string(n) + " mismatch");
                }
            }
        }

        MahalanobisContext identity;
        identity.inv_cov = RealMatrix::Identity(k, k);
        const auto maha =
            testutil::terms_of(neighbors(space, query, p, Metric::Mahalanobis, &identity));
        const auto eucl = testutil::terms_of(neighbors(space, query, p, Metric::Euclidean));
        if (maha != eucl) {
            outcome.fail("round " + std::to_string(round) +
                         ": identity Mahalanobis != Euclidean ranking");
        }
    }
    if (outcome.ok) {
        outcome.detail = "50 spaces, 3 metrics, 3 depths each";
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Averaged-text laws: single-word reduction, self-similarity, and the
// two-plus-one multiplicity average.
Outcome costring_reduction() {
    Outcome outcome;
    const SemanticSpace space = testutil::random_space(30, 6, 2718);
    const std::string w1 = space.vocab.term(3);
    const std::string w2 = space.vocab.term(17);

    const double via_text = costring(space, w1, w2);
    const double via_words = cosine(space, w1, w2);
    if (std::abs(via_text - via_words) > 1e-12) {
        outcome.fail("single-word costring differs from cosine by " +
                     fmt(std::abs(via_text - via_words)));
    }

    const std::string text = w1 + " " + w2 + " " + space.vocab.term(9);
    if (std::abs(costring(space, text, text) - 1.0) > 1e-12) {
        outcome.fail("costring(t, t) deviates from 1");
    }

    const TextVector tv = text_vector(space, w1 + " " + w1 + " " + w2);
    const RealVector expected = (2.0 * space.term_vectors.row(3).transpose() +
                                 space.term_vectors.row(17).transpose()) /
                                3.0;
    if (tv.vector != expected) {
        outcome.fail("multiplicity average differs from the hand formula");
    }
    if (outcome.ok) {
        outcome.detail = "reduction, self-similarity and multiplicity laws hold";
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Log-entropy weighting laws: point mass, uniform over ten documents and
// the (1,3) two-document case.
Outcome weighting_laws() {
    Outcome outcome;
    std::vector<CleanDocument> ds;
    ds.push_back({"d0", "raro comun"});
    for (int i = 1; i < 10; ++i) {
        ds.push_back({"d" + std::to_string(i), "comun"});
    }
    VectorStream vs(ds);
    Vocabulary vocab = build_vocabulary(vs);
    VectorStream ms(ds);
    DocTermMatrix m = build_matrix(ms, vocab);
    const RealVector g = log_entropy_global_weights(m);
    const double g_point = g[*vocab.index_of("raro")];
    const double g_uniform = g[*vocab.index_of("comun")];
    if (g_point != 1.0) {
        outcome.fail("point-mass weight " + fmt(g_point) + " != 1");
    }
    if (std::abs(g_uniform) > 1e-12) {
        outcome.fail("uniform weight " + fmt(g_uniform) + " != 0");
    }

    std::vector<CleanDocument> two = {{"d0", "w"}, {"d1", "w w w"}};
    VectorStream vs2(two);
    Vocabulary vocab2 = build_vocabulary(vs2);
    VectorStream ms2(two);
    const RealVector g2 = log_entropy_global_weights(build_matrix(ms2, vocab2));
    if (std::abs(g2[0] - 0.1887) > 1e-4) {
        outcome.fail("counts-(1,3) weight " + fmt(g2[0]) + " not within 1e-4 of 0.1887");
    }
    if (outcome.ok) {
        outcome.detail = "g=1, g=0 and g=" + fmt(g2[0]);
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Topic separation on the bundled 200-document two-topic corpus, k = 20:
// mean intra-topic cosine exceeds mean inter-topic cosine by >= 0.2.
// Budget 10 s.
Outcome topic_separation() {
    const auto start = Clock::now();
    Outcome outcome;

    BuildConfig config;
    config.corpus_path = data_path("toy_topics.jsonl");
    config.format = CorpusFormat::JsonLines;
    config.k = 20;
    config.seed = 0;

    CleaningStreamOptions clean_options;
    CleaningStream vocab_stream(open_corpus(config.corpus_path, config.format), clean_options);
    Vocabulary vocab = build_vocabulary(vocab_stream);
    CleaningStream matrix_stream(open_corpus(config.corpus_path, config.format), clean_options);
    DocTermMatrix weighted = apply_weighting(
        build_matrix(matrix_stream, vocab, MatrixMode::Frequency), WeightingScheme::LogEntropy);

    SvdConfig cfg;
    cfg.k = 20;
    cfg.seed = config.seed;
    const auto svd = lanczos_svd<Real>(weighted.values, cfg);
    const SemanticSpace space = build_space(vocab, weighted, svd, {});

    // Word lists ship next to the corpus.
    std::ifstream words_in(data_path("toy_topics.words.json"));
    const auto words = nlohmann::json::parse(words_in);
    const auto topic_a = words.at("topic_a").get<std::vector<std::string>>();
    const auto topic_b = words.at("topic_b").get<std::vector<std::string>>();

    auto present = [&space](const std::vector<std::string>& terms) {
        std::vector<std::string> out;
        for (const auto& t : terms) {
            if (space.vocab.index_of(t).has_value()) {
                out.push_back(t);
            }
        }
        return out;
    };
    const auto in_a = present(topic_a);
    const auto in_b = present(topic_b);
    if (in_a.size() < 10 || in_b.size() < 10) {
        outcome.fail("topical coverage too small: " + std::to_string(in_a.size()) + "/" +
                     std::to_string(in_b.size()));
        return outcome;
    }

    double intra = 0;
    std::int64_t intra_count = 0;
    for (const auto& side : {in_a, in_b}) {
        for (std::size_t i = 0; i < side.size(); ++i) {
            for (std::size_t j = i + 1; j < side.size(); ++j) {
                intra += cosine(space, side[i], side[j]);
                ++intra_count;
            }
        }
    }
    intra /= static_cast<double>(intra_count);

    double inter = 0;
    std::int64_t inter_count = 0;
    for (const auto& a : in_a) {
        for (const auto& b : in_b) {
            inter += cosine(space, a, b);
            ++inter_count;
        }
    }
    inter /= static_cast<double>(inter_count);

    const double gap = intra - inter;
    const double elapsed = seconds_since(start);
    if (gap < 0.2) {
        outcome.fail("separation " + fmt(gap) + " < 0.2 (intra " + fmt(intra) + ", inter " +
                     fmt(inter) + ")");
    }
    if (elapsed >= 10.0) {
        outcome.fail("runtime " + fmt(elapsed) + "s >= 10s");
    }
    if (outcome.ok) {
        outcome.detail = "intra " + fmt(intra) + ", inter " + fmt(inter) + ", gap " + fmt(gap) +
                         ", " + fmt(elapsed) + "s";
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Optional order-level reproduction on a real Spanish Wikipedia sample
// (>= 50k articles). Gated on SEMSPACE_ESWIKI_DIR; skipped when absent.
Outcome paper_order_reproduction() {
    Outcome outcome;
    const char* dir = std::getenv("SEMSPACE_ESWIKI_DIR");
    if (dir == nullptr) {
        outcome.skipped = true;
        outcome.detail = "set SEMSPACE_ESWIKI_DIR to a >=50k-article sample to enable";
        return outcome;
    }
    const auto start = Clock::now();
    const std::string root(dir);

    BuildConfig config;
    if (std::filesystem::exists(root + "/corpus.jsonl")) {
        config.corpus_path = root + "/corpus.jsonl";
        config.format = CorpusFormat::JsonLines;
    } else if (std::filesystem::exists(root + "/extracted")) {
        config.corpus_path = root + "/extracted";
        config.format = CorpusFormat::WikiExtractorJson;
    } else {
        outcome.skipped = true;
        outcome.detail = "no corpus.jsonl or extracted/ under " + root;
        return outcome;
    }
    config.min_doc_freq = 5;
    config.max_doc_ratio = 0.5;
    config.k = 300;
    config.min_tokens = 10;
    config.output_path = (std::filesystem::temp_directory_path() / "eswiki.space").string();

    const BuildReport report = run_build(config);
    if (report.document_count < 50000) {
        outcome.skipped = true;
        outcome.detail = "sample has " + std::to_string(report.document_count) +
                         " documents (< 50000)";
        return outcome;
    }
    const SemanticSpace space = load_space(config.output_path);

    auto lookup_either = [&space](const std::string& accented,
                                  const std::string& plain) -> std::string {
        if (space.vocab.index_of(accented).has_value()) {
            return accented;
        }
        return plain;
    };
    const std::string matematicas = lookup_either("matemáticas", "matematicas");
    const std::string ciencia = "ciencia";
    const std::string toro = "toro";
    const std::string vaca = "vaca";

    const double c1 = cosine(space, ciencia, matematicas);
    const double c2 = cosine(space, matematicas, toro);
    const double c3 = cosine(space, matematicas, vaca);
    if (!(c1 > c2 && c2 > c3 && c3 >= 0.0)) {
        outcome.fail("word ordering violated: " + fmt(c1) + ", " + fmt(c2) + ", " + fmt(c3));
    }

    const std::string eum = testutil::read_file(data_path("texts/eum.txt"));
    const std::string dudh = testutil::read_file(data_path("texts/dudh.txt"));
    const std::string dh_wiki = testutil::read_file(data_path("texts/dh_wiki.txt"));
    const double t_wiki = costring(space, eum, dh_wiki);
    const double t_dudh = costring(space, eum, dudh);
    if (!(t_wiki > t_dudh)) {
        outcome.fail("text ordering violated: costring(EUM, DH.wiki) " + fmt(t_wiki) +
                     " <= costring(EUM, DUDH) " + fmt(t_dudh));
    }

    const double elapsed = seconds_since(start);
    if (elapsed >= 1800.0) {
        outcome.fail("runtime " + fmt(elapsed) + "s >= 30min");
    }
    if (outcome.ok) {
        outcome.detail = "orderings hold (" + fmt(c1) + " > " + fmt(c2) + " > " + fmt(c3) +
                         "; " + fmt(t_wiki) + " > " + fmt(t_dudh) + "), " + fmt(elapsed) + "s";
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Determinism: two builds of the bundled corpus with equal seeds produce
// bit-identical space files.
Outcome pipeline_determinism() {
    Outcome outcome;
    testutil::TempDir dir("accept_det");

    BuildConfig config;
    config.corpus_path = data_path("toy12.jsonl");
    config.format = CorpusFormat::JsonLines;
    config.k = 6;
    config.seed = 42;

    config.output_path = dir.file("a.space").string();
    run_build(config);
    config.output_path = dir.file("b.space").string();
    run_build(config);

    const std::string a = testutil::read_file(dir.file("a.space"));
    const std::string b = testutil::read_file(dir.file("b.space"));
    if (a.empty() || a != b) {
        outcome.fail("space files differ between identical builds");
    } else {
        outcome.detail = std::to_string(a.size()) + " bytes, identical";
    }
    return outcome;
}

// ---------------------------------------------------------------------
// Persistence: lossless round trip; corrupted byte rejected via checksum.
Outcome persistence() {
    Outcome outcome;
    testutil::TempDir dir("accept_persist");

    BuildConfig config;
    config.corpus_path = data_path("toy12.jsonl");
    config.format = CorpusFormat::JsonLines;
    config.k = 6;
    config.output_path = dir.file("s.space").string();
    run_build(config);

    const SemanticSpace space = load_space(config.output_path);
    testutil::TempDir dir2("accept_persist2");
    save_space(space, dir2.file("again.space"));
    const SemanticSpace reloaded = load_space(dir2.file("again.space"));
    if (reloaded.term_vectors != space.term_vectors || reloaded.sigma != space.sigma ||
        reloaded.vocab.terms() != space.vocab.terms() ||
        reloaded.vocab.doc_freqs() != space.vocab.doc_freqs() ||
        reloaded.vocab.coll_freqs() != space.vocab.coll_freqs() ||
        reloaded.meta.corpus_digest != space.meta.corpus_digest) {
        outcome.fail("round trip is not lossless");
    }

    std::string bytes = testutil::read_file(config.output_path);
    bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x01);
    testutil::write_file(dir.file("corrupt.space"), bytes);
    bool rejected = false;
    try {
        load_space(dir.file("corrupt.space"));
    } catch (const ChecksumMismatch&) {
        rejected = true;
    }
    if (!rejected) {
        outcome.fail("corrupted file was not rejected by the checksum");
    }
    if (outcome.ok) {
        outcome.detail = "round trip lossless, corruption rejected";
    }
    return outcome;
}

}  // namespace

int main() {
    run_criterion("svd-oracle-equivalence", svd_oracle_equivalence);
    run_criterion("analytic-spectrum", analytic_spectrum);
    run_criterion("eckart-young", eckart_young);
    run_criterion("symmetric-embedding-spectrum", symmetric_embedding);
    run_criterion("gram-identity", gram_identity);
    run_criterion("query-exactness", query_exactness);
    run_criterion("costring-reduction-laws", costring_reduction);
    run_criterion("weighting-laws", weighting_laws);
    run_criterion("topic-separation", topic_separation);
    run_criterion("paper-order-reproduction", paper_order_reproduction);
    run_criterion("pipeline-determinism", pipeline_determinism);
    run_criterion("persistence", persistence);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
