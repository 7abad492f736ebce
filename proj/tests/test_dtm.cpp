#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "semspace/dtm.hpp"

using namespace semspace;

namespace {

VectorStream docs(std::initializer_list<const char*> texts) {
    std::vector<CleanDocument> out;
    int i = 0;
    for (const char* text : texts) {
        out.push_back({"d" + std::to_string(i++), text});
    }
    return VectorStream(std::move(out));
}

double entry(const RealSparse& m, Index i, Index j) { return m.coeff(i, j); }

}  // namespace

TEST_CASE("tokenize splits on single spaces") {
    CHECK(tokenize("ciencia y matem\xc3\xa1ticas") ==
          std::vector<std::string>{"ciencia", "y", "matem\xc3\xa1ticas"});
    CHECK(tokenize("") == std::vector<std::string>{});
    // Out-of-contract double space still splits cleanly.
    CHECK(tokenize("a  b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize concatenation inverts cleaning") {
    const std::string text = "uno dos tres";
    const auto tokens = tokenize(text);
    std::string joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) {
            joined += ' ';
        }
        joined += tokens[i];
    }
    CHECK(joined == text);
}

TEST_CASE("build_vocabulary counts and filters") {
    SUBCASE("plain") {
        auto stream = docs({"a b", "b c"});
        Vocabulary v = build_vocabulary(stream);
        REQUIRE(v.size() == 3);
        CHECK(v.terms() == std::vector<std::string>{"a", "b", "c"});
        CHECK(v.doc_freqs() == std::vector<std::int64_t>{1, 2, 1});
        CHECK(v.coll_freqs() == std::vector<std::int64_t>{1, 2, 1});
        CHECK(v.index_of("b") == 1);
        CHECK(!v.index_of("zz").has_value());
    }
    SUBCASE("min_doc_freq") {
        auto stream = docs({"a b", "b c"});
        Vocabulary v = build_vocabulary(stream, 2);
        CHECK(v.terms() == std::vector<std::string>{"b"});
    }
    SUBCASE("max_doc_ratio") {
        auto stream = docs({"a b", "b c"});
        Vocabulary v = build_vocabulary(stream, 1, 0.5);
        CHECK(v.terms() == std::vector<std::string>{"a", "c"});
    }
}

TEST_CASE("build_vocabulary rejects empty corpora and bad arguments") {
    auto empty = VectorStream({});
    CHECK_THROWS_AS(build_vocabulary(empty), EmptyCorpus);
    auto stream = docs({"a"});
    CHECK_THROWS_AS(build_vocabulary(stream, 0), UsageError);
    auto stream2 = docs({"a"});
    CHECK_THROWS_AS(build_vocabulary(stream2, 1, 0.0), UsageError);
}

TEST_CASE("vocabulary term-index bijection") {
    auto stream = docs({"gato perro", "perro pez ave", "ave gato"});
    Vocabulary v = build_vocabulary(stream);
    for (Index j = 0; j < v.size(); ++j) {
        CHECK(v.index_of(v.term(j)) == j);
    }
}

TEST_CASE("build_matrix frequency and binary modes") {
    auto vocab_stream = docs({"a b b"});
    Vocabulary vocab = build_vocabulary(vocab_stream);

    SUBCASE("frequency") {
        auto stream = docs({"a b b"});
        DocTermMatrix m = build_matrix(stream, vocab, MatrixMode::Frequency);
        CHECK(m.n_docs() == 1);
        CHECK(m.n_terms() == 2);
        CHECK(entry(m.values, 0, 0) == 1.0);
        CHECK(entry(m.values, 0, 1) == 2.0);
    }
    SUBCASE("binary") {
        auto stream = docs({"a b b"});
        DocTermMatrix m = build_matrix(stream, vocab, MatrixMode::Binary);
        CHECK(entry(m.values, 0, 0) == 1.0);
        CHECK(entry(m.values, 0, 1) == 1.0);
    }
    SUBCASE("out-of-vocabulary only document keeps its row") {
        auto stream = docs({"c"});
        DocTermMatrix m = build_matrix(stream, vocab, MatrixMode::Frequency);
        CHECK(m.n_docs() == 1);
        CHECK(m.nonzeros() == 0);
        CHECK(m.doc_ids.size() == 1);
    }
}

TEST_CASE("build_matrix rejects an empty vocabulary") {
    Vocabulary empty;
    auto stream = docs({"a"});
    CHECK_THROWS_AS(build_matrix(stream, empty), EmptyVocabulary);
}

TEST_CASE("frequency column sums equal collection frequencies") {
    auto vocab_stream = docs({"a b b a", "b c c c", "a c"});
    Vocabulary vocab = build_vocabulary(vocab_stream);
    auto stream = docs({"a b b a", "b c c c", "a c"});
    DocTermMatrix m = build_matrix(stream, vocab);
    for (Index j = 0; j < vocab.size(); ++j) {
        double sum = 0;
        for (RealSparse::InnerIterator it(m.values, j); it; ++it) {
            sum += it.value();
        }
        CHECK(sum == static_cast<double>(vocab.coll_freq(j)));
    }
}

TEST_CASE("binary matrix values are exactly zero or one") {
    auto vocab_stream = docs({"a a a b", "b b c", "a c c"});
    Vocabulary vocab = build_vocabulary(vocab_stream);
    auto stream = docs({"a a a b", "b b c", "a c c"});
    DocTermMatrix m = build_matrix(stream, vocab, MatrixMode::Binary);
    for (Index j = 0; j < m.values.outerSize(); ++j) {
        for (RealSparse::InnerIterator it(m.values, j); it; ++it) {
            CHECK(it.value() == 1.0);
        }
    }
}

TEST_CASE("log-entropy global weights, documented cases") {
    SUBCASE("term in exactly one of ten documents has weight one") {
        std::vector<CleanDocument> ds;
        ds.push_back({"d0", "raro comun"});
        for (int i = 1; i < 10; ++i) {
            ds.push_back({"d" + std::to_string(i), "comun"});
        }
        VectorStream vocab_stream(ds);
        Vocabulary vocab = build_vocabulary(vocab_stream);
        VectorStream stream(ds);
        DocTermMatrix m = build_matrix(stream, vocab);
        RealVector g = log_entropy_global_weights(m);
        const Index raro = *vocab.index_of("raro");
        const Index comun = *vocab.index_of("comun");
        CHECK(g[raro] == 1.0);
        // Uniform over all ten documents: entropy hits ln n, weight zero.
        CHECK(std::abs(g[comun]) <= 1e-12);
    }
    SUBCASE("two documents with counts one and three") {
        auto vocab_stream = docs({"w", "w w w"});
        Vocabulary vocab = build_vocabulary(vocab_stream);
        auto stream = docs({"w", "w w w"});
        DocTermMatrix m = build_matrix(stream, vocab);
        RealVector g = log_entropy_global_weights(m);
        CHECK(g[0] == doctest::Approx(0.18872187554086717).epsilon(1e-12));

        DocTermMatrix weighted = apply_weighting(m, WeightingScheme::LogEntropy);
        CHECK(entry(weighted.values, 0, 0) ==
              doctest::Approx(std::log(2.0) * g[0]).epsilon(1e-12));
        CHECK(entry(weighted.values, 1, 0) ==
              doctest::Approx(std::log(4.0) * g[0]).epsilon(1e-12));
        CHECK(weighted.weighting == WeightingScheme::LogEntropy);
    }
}

TEST_CASE("weighting preserves sparsity and stays in range") {
    auto seed_docs = {"a a b c", "b c c", "a d", "d d d b"};
    auto vocab_stream = docs(seed_docs);
    Vocabulary vocab = build_vocabulary(vocab_stream);
    auto stream = docs(seed_docs);
    DocTermMatrix m = build_matrix(stream, vocab);
    RealVector g = log_entropy_global_weights(m);
    DocTermMatrix w = apply_weighting(m, WeightingScheme::LogEntropy);

    CHECK((g.array() >= 0.0).all());
    CHECK((g.array() <= 1.0).all());
    for (Index j = 0; j < w.values.outerSize(); ++j) {
        for (RealSparse::InnerIterator it(w.values, j); it; ++it) {
            CHECK(it.value() > 0.0);
            CHECK(std::isfinite(it.value()));
            // Pattern containment: every weighted entry sits on a count.
            CHECK(m.values.coeff(it.row(), it.col()) > 0.0);
        }
    }
}

TEST_CASE("weighting error paths") {
    auto vocab_stream = docs({"a b", "b"});
    Vocabulary vocab = build_vocabulary(vocab_stream);
    auto stream = docs({"a b", "b"});
    DocTermMatrix m = build_matrix(stream, vocab);

    DocTermMatrix once = apply_weighting(m, WeightingScheme::LogEntropy);
    CHECK_THROWS_AS(apply_weighting(once, WeightingScheme::LogEntropy), AlreadyWeighted);

    auto single_stream = docs({"a b"});
    DocTermMatrix single = build_matrix(single_stream, vocab);
    CHECK_THROWS_AS(apply_weighting(single, WeightingScheme::LogEntropy),
                    SingleDocumentCorpus);
}

TEST_CASE("matrix build is deterministic") {
    auto seed_docs = {"x y z", "z z y", "x", "y y y y x z"};
    auto vs1 = docs(seed_docs);
    Vocabulary v1 = build_vocabulary(vs1);
    auto s1 = docs(seed_docs);
    DocTermMatrix a = build_matrix(s1, v1);

    auto vs2 = docs(seed_docs);
    Vocabulary v2 = build_vocabulary(vs2);
    auto s2 = docs(seed_docs);
    DocTermMatrix b = build_matrix(s2, v2);

    REQUIRE(a.values.nonZeros() == b.values.nonZeros());
    for (Index j = 0; j < a.values.outerSize(); ++j) {
        RealSparse::InnerIterator ia(a.values, j);
        RealSparse::InnerIterator ib(b.values, j);
        for (; ia && ib; ++ia, ++ib) {
            CHECK(ia.row() == ib.row());
            CHECK(ia.value() == ib.value());
        }
    }
}

TEST_CASE("triplet export is sorted row-major") {
    testutil::TempDir dir("export");
    auto vocab_stream = docs({"b a", "a a"});
    Vocabulary vocab = build_vocabulary(vocab_stream);
    auto stream = docs({"b a", "a a"});
    DocTermMatrix m = build_matrix(stream, vocab);
    export_triplets(m, vocab, dir.file("m.tsv"));

    const std::string text = testutil::read_file(dir.file("m.tsv"));
    CHECK(text == "0\t0\t1\n0\t1\t1\n1\t0\t2\n");
    const std::string meta = testutil::read_file(dir.file("m.tsv.meta.json"));
    CHECK(meta.find("\"n_docs\": 2") != std::string::npos);
    CHECK(meta.find("\"mode\": \"frequency\"") != std::string::npos);
}
