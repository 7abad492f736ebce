#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "semspace/space.hpp"

using namespace semspace;
using testutil::TempDir;

namespace {

struct Built {
    Vocabulary vocab;
    DocTermMatrix matrix;
    TruncatedSvd<Real> svd;
};

Built build_toy(MatrixMode mode, WeightingScheme weighting, Index k) {
    std::vector<CleanDocument> ds = {
        {"d0", "a a b"}, {"d1", "b c"}, {"d2", "a c c"}, {"d3", "b b a"}, {"d4", "c a"},
    };
    Built out;
    VectorStream vs(ds);
    out.vocab = build_vocabulary(vs);
    VectorStream ms(ds);
    out.matrix = apply_weighting(build_matrix(ms, out.vocab, mode), weighting);
    SvdConfig cfg;
    cfg.k = k;
    out.svd = lanczos_svd<Real>(out.matrix.values, cfg);
    return out;
}

SemanticSpace build_toy_space(double alpha, bool keep_doc_vectors = false) {
    Built b = build_toy(MatrixMode::Frequency, WeightingScheme::LogEntropy, 3);
    BuildSpaceOptions options;
    options.alpha = alpha;
    options.corpus_digest = "fnv1a64:0000000000000000";
    options.keep_doc_vectors = keep_doc_vectors;
    return build_space(b.vocab, b.matrix, b.svd, options);
}

bool spaces_equal(const SemanticSpace& a, const SemanticSpace& b) {
    return a.vocab.terms() == b.vocab.terms() && a.vocab.doc_freqs() == b.vocab.doc_freqs() &&
           a.vocab.coll_freqs() == b.vocab.coll_freqs() && a.term_vectors == b.term_vectors &&
           a.sigma == b.sigma && a.meta.mode == b.meta.mode &&
           a.meta.weighting == b.meta.weighting && a.meta.k == b.meta.k &&
           a.meta.alpha == b.meta.alpha && a.meta.corpus_digest == b.meta.corpus_digest &&
           a.meta.tool_version == b.meta.tool_version && a.meta.n_docs == b.meta.n_docs &&
           a.doc_vectors == b.doc_vectors && a.doc_ids == b.doc_ids;
}

}  // namespace

TEST_CASE("build_space scales right vectors by sigma^alpha") {
    Vocabulary vocab({"solo"}, {1}, {1});
    DocTermMatrix m;
    m.values.resize(2, 1);
    m.values.insert(0, 0) = 1.0;
    m.values.makeCompressed();
    m.doc_ids = {"d0", "d1"};

    TruncatedSvd<Real> svd;
    svd.u = RealMatrix::Identity(2, 2);
    svd.sigma = RealVector(2);
    svd.sigma << 5, 2;
    svd.v = RealMatrix(1, 2);
    svd.v << 0.6, 0.8;
    svd.k = 2;

    BuildSpaceOptions options;
    options.alpha = 1.0;
    SemanticSpace space = build_space(vocab, m, svd, options);
    CHECK(space.term_vectors(0, 0) == doctest::Approx(3.0));
    CHECK(space.term_vectors(0, 1) == doctest::Approx(1.6));

    options.alpha = 0.0;
    SemanticSpace raw = build_space(vocab, m, svd, options);
    CHECK(raw.term_vectors == svd.v);  // sigma^0 = 1 exactly
}

TEST_CASE("build_space validates inputs") {
    Built b = build_toy(MatrixMode::Frequency, WeightingScheme::None, 2);
    BuildSpaceOptions options;
    options.alpha = 2.0;
    CHECK_THROWS_AS(build_space(b.vocab, b.matrix, b.svd, options), UsageError);

    Vocabulary other({"x"}, {1}, {1});
    CHECK_THROWS_AS(build_space(other, b.matrix, b.svd, {}), DimensionMismatch);
}

TEST_CASE("full-rank alpha=1 term vectors reproduce the weighted Gram matrix") {
    Built b = build_toy(MatrixMode::Frequency, WeightingScheme::LogEntropy, 3);
    REQUIRE(b.svd.k == 3);  // toy corpus has full column rank
    SemanticSpace space = build_space(b.vocab, b.matrix, b.svd, {});

    const RealMatrix gram = space.term_vectors * space.term_vectors.transpose();
    const RealMatrix expected = RealMatrix(b.matrix.values.transpose() * b.matrix.values);
    CHECK((gram - expected).norm() <= 1e-6 * expected.norm());
}

TEST_CASE("space file round trip is lossless") {
    TempDir dir("space");
    for (bool keep_docs : {false, true}) {
        CAPTURE(keep_docs);
        SemanticSpace space = build_toy_space(1.0, keep_docs);
        const auto path = dir.file(keep_docs ? "with_docs.space" : "plain.space");
        save_space(space, path);
        SemanticSpace loaded = load_space(path);
        CHECK(spaces_equal(space, loaded));
        CHECK(loaded.meta.rank_deficient == space.meta.rank_deficient);
    }
}

TEST_CASE("save is byte-deterministic") {
    TempDir dir("det");
    SemanticSpace space = build_toy_space(1.0);
    save_space(space, dir.file("a.space"));
    save_space(space, dir.file("b.space"));
    CHECK(testutil::read_file(dir.file("a.space")) == testutil::read_file(dir.file("b.space")));
}

TEST_CASE("load rejects corruption before constructing a space") {
    TempDir dir("corrupt");
    SemanticSpace space = build_toy_space(1.0);
    const auto path = dir.file("s.space");
    save_space(space, path);
    const std::string good = testutil::read_file(path);

    SUBCASE("flipped payload byte fails the checksum") {
        std::string bad = good;
        bad[good.size() / 2] = static_cast<char>(bad[good.size() / 2] ^ 0x40);
        testutil::write_file(path, bad);
        CHECK_THROWS_AS(load_space(path), ChecksumMismatch);
    }
    SUBCASE("truncated file fails the checksum") {
        testutil::write_file(path, good.substr(0, good.size() - 9));
        CHECK_THROWS_AS(load_space(path), ChecksumMismatch);
    }
    SUBCASE("flipped version byte") {
        std::string bad = good;
        bad[8] = 9;
        testutil::write_file(path, bad);
        CHECK_THROWS_AS(load_space(path), UnsupportedVersion);
    }
    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        testutil::write_file(path, bad);
        CHECK_THROWS_AS(load_space(path), BadMagic);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_space(dir.file("nope.space")), IoError);
    }
}

TEST_CASE("compare_spectra against itself gives unit ratios") {
    SemanticSpace space = build_toy_space(1.0);
    SpectrumReport report = compare_spectra(space, space);
    REQUIRE(report.ratio.size() == static_cast<std::size_t>(space.sigma.size()));
    for (double r : report.ratio) {
        CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(report.tail.median_ratio == doctest::Approx(1.0));
}

TEST_CASE("compare_spectra pairs up to the shorter length") {
    Built five = build_toy(MatrixMode::Frequency, WeightingScheme::None, 3);
    Built three = build_toy(MatrixMode::Frequency, WeightingScheme::None, 2);
    SemanticSpace a = build_space(five.vocab, five.matrix, five.svd, {});
    SemanticSpace b = build_space(three.vocab, three.matrix, three.svd, {});
    SpectrumReport report = compare_spectra(a, b);
    CHECK(report.ratio.size() == 2);
}

TEST_CASE("frequency spectrum dominates the binary spectrum") {
    // Counts >= indicators entrywise for nonnegative matrices, so the top
    // singular value can only grow; checked via the dense oracle.
    Built freq = build_toy(MatrixMode::Frequency, WeightingScheme::None, 3);
    Built bin = build_toy(MatrixMode::Binary, WeightingScheme::None, 3);
    auto exact_freq = dense_svd_oracle(RealMatrix(freq.matrix.values), 3);
    auto exact_bin = dense_svd_oracle(RealMatrix(bin.matrix.values), 3);
    CHECK(exact_freq.sigma[0] >= exact_bin.sigma[0]);

    SemanticSpace a = build_space(freq.vocab, freq.matrix, freq.svd, {});
    SemanticSpace c = build_space(bin.vocab, bin.matrix, bin.svd, {});
    SpectrumReport report = compare_spectra(a, c);
    CHECK(report.label_a == "frequency/none");
    CHECK(report.label_b == "binary/none");
    CHECK(report.ratio[0] >= 1.0);
}

TEST_CASE("crc32 matches known vectors") {
    // Reference values of the IEEE polynomial ("check" value of the suite).
    const char* data = "123456789";
    CHECK(crc32(data, 9) == 0xCBF43926u);
    CHECK(crc32("", 0) == 0x00000000u);
}
