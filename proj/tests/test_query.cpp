#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "semspace/metrics.hpp"
#include "semspace/query.hpp"

using namespace semspace;

namespace {

using testutil::brute_force_neighbors;
using testutil::make_space;
using testutil::random_space;
using testutil::terms_of;

}  // namespace

TEST_CASE("word_vector looks up the normalized form") {
    RealMatrix vectors(2, 2);
    vectors << 1, 2, 3, 4;
    SemanticSpace space = make_space({"matem\xc3\xa1ticas", "vaca"}, vectors);

    const RealVector direct = word_vector(space, "matem\xc3\xa1ticas");
    CHECK(direct[0] == 1.0);
    CHECK(direct[1] == 2.0);
    CHECK(word_vector(space, "MATEM\xc3\x81TICAS") == direct);
    // Combining-mark spelling resolves to the same row after NFC.
    CHECK(word_vector(space, "matema\xcc\x81ticas") == direct);
    CHECK(word_vector(space, "  vaca ")[0] == 3.0);

    CHECK_THROWS_AS(word_vector(space, "ausente"), OutOfVocabulary);
    try {
        word_vector(space, "AUSENTE");
    } catch (const OutOfVocabulary& e) {
        CHECK(e.term() == "ausente");
    }
}

TEST_CASE("cosine basics") {
    RealMatrix vectors(3, 2);
    vectors << 1, 0, 0, 1, 2, 0;
    SemanticSpace space = make_space({"a", "b", "c"}, vectors);

    CHECK(cosine(space, "a", "a") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(space, "a", "b") == doctest::Approx(0.0));
    CHECK(cosine(space, "a", "c") == doctest::Approx(1.0));  // parallel
    CHECK(cosine(space, "a", "b") == cosine(space, "b", "a"));
}

TEST_CASE("cosine rejects zero vectors") {
    RealMatrix vectors(2, 2);
    vectors << 1, 0, 0, 0;
    SemanticSpace space = make_space({"a", "cero"}, vectors);
    CHECK_THROWS_AS(cosine(space, "a", "cero"), ZeroVector);
}

TEST_CASE("cosine stays within [-1, 1] and is symmetric on random spaces") {
    SemanticSpace space = random_space(40, 6, 17);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Index> pick(0, 39);
    for (int round = 0; round < 200; ++round) {
        const std::string a = space.vocab.term(pick(rng));
        const std::string b = space.vocab.term(pick(rng));
        const double ab = cosine(space, a, b);
        CHECK(std::abs(ab) <= 1.0 + 1e-12);
        CHECK(ab == doctest::Approx(cosine(space, b, a)).epsilon(1e-14));
    }
}

TEST_CASE("text_vector averages with multiplicity") {
    RealMatrix vectors(2, 3);
    vectors << 1, 2, 3, 10, 20, 30;
    SemanticSpace space = make_space({"w1", "w2"}, vectors);

    SUBCASE("single word is exact") {
        const TextVector tv = text_vector(space, "w1");
        CHECK(tv.vector == vectors.row(0).transpose());
        CHECK(tv.known_tokens == 1);
    }
    SUBCASE("two words average") {
        const TextVector tv = text_vector(space, "w1 w2");
        const RealVector expected = (vectors.row(0) + vectors.row(1)).transpose() / 2.0;
        CHECK(tv.vector == expected);
    }
    SUBCASE("repeated word counts twice") {
        const TextVector tv = text_vector(space, "w1 w1 w2");
        const RealVector expected =
            (2.0 * vectors.row(0).transpose() + vectors.row(1).transpose()) / 3.0;
        CHECK(tv.vector == expected);
    }
    SUBCASE("oov tokens are reported, not fatal") {
        const TextVector tv = text_vector(space, "w1 desconocida w2 rara");
        CHECK(tv.known_tokens == 2);
        CHECK(tv.total_tokens == 4);
        CHECK(tv.oov_tokens == std::vector<std::string>{"desconocida", "rara"});
    }
    SUBCASE("all oov raises") {
        CHECK_THROWS_AS(text_vector(space, "nada conocida"), NoKnownWords);
    }
    SUBCASE("cleaning applies to the text") {
        const TextVector tv = text_vector(space, "¡W1, W2!");
        CHECK(tv.known_tokens == 2);
    }
}

TEST_CASE("costring reduces to cosine for single words") {
    SemanticSpace space = random_space(10, 4, 23);
    const std::string a = space.vocab.term(2);
    const std::string b = space.vocab.term(7);
    CHECK(costring(space, a, b) == doctest::Approx(cosine(space, a, b)).epsilon(1e-14));
    CHECK(costring(space, a, a) == doctest::Approx(1.0).epsilon(1e-12));

    const std::string text = space.vocab.term(1) + " " + space.vocab.term(3);
    CHECK(costring(space, text, b) == doctest::Approx(costring(space, b, text)).epsilon(1e-14));
}

TEST_CASE("neighbors finds a planted duplicate under every metric") {
    RealMatrix vectors = testutil::random_dense(20, 5, 77);
    vectors.row(13) = vectors.row(4);  // twin of t0004
    SemanticSpace space = make_space(
        [&] {
            std::vector<std::string> terms;
            for (int j = 0; j < 20; ++j) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "t%04d", j);
                terms.push_back(buf);
            }
            return terms;
        }(),
        vectors);

    for (Metric metric : {Metric::Cosine, Metric::Euclidean, Metric::Mahalanobis}) {
        CAPTURE(to_string(metric));
        const NeighborList list = neighbors(space, "t0004", 1, metric);
        REQUIRE(list.entries.size() == 1);
        CHECK(list.entries[0].term == "t0013");
    }
}

TEST_CASE("neighbors excludes the query term and honours n") {
    SemanticSpace space = random_space(12, 3, 5);
    const NeighborList list = neighbors(space, "t0003", 50);
    CHECK(list.entries.size() == 11);  // everything except the query
    for (const auto& e : list.entries) {
        CHECK(e.term != "t0003");
    }
    CHECK_THROWS_AS(neighbors(space, "t0003", 0), UsageError);
    CHECK_THROWS_AS(neighbors(space, "nope", 3), OutOfVocabulary);
}

TEST_CASE("neighbors matches the brute-force oracle on random spaces") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 25; ++round) {
        const Index p = 20 + static_cast<Index>(rng() % 40);
        const Index k = 3 + static_cast<Index>(rng() % 6);
        SemanticSpace space = random_space(p, k, rng());
        MahalanobisContext ctx = build_mahalanobis_context(space, 1e-8);
        const std::string query = space.vocab.term(static_cast<Index>(rng() % p));
        const Index n = 1 + static_cast<Index>(rng() % p);

        CHECK(terms_of(neighbors(space, query, n, Metric::Cosine)) ==
              brute_force_neighbors(space, query, n, Metric::Cosine));
        CHECK(terms_of(neighbors(space, query, n, Metric::Euclidean)) ==
              brute_force_neighbors(space, query, n, Metric::Euclidean));
        CHECK(terms_of(neighbors(space, query, n, Metric::Mahalanobis, &ctx)) ==
              brute_force_neighbors(space, query, n, Metric::Mahalanobis, &ctx.inv_cov));
    }
}

TEST_CASE("mahalanobis with identity inverse covariance ranks like euclidean") {
    SemanticSpace space = random_space(60, 6, 404);
    MahalanobisContext identity;
    identity.inv_cov = RealMatrix::Identity(6, 6);

    const auto maha = neighbors(space, "t0007", 59, Metric::Mahalanobis, &identity);
    const auto eucl = neighbors(space, "t0007", 59, Metric::Euclidean);
    REQUIRE(maha.entries.size() == eucl.entries.size());
    for (std::size_t i = 0; i < maha.entries.size(); ++i) {
        CHECK(maha.entries[i].term == eucl.entries[i].term);
        CHECK(maha.entries[i].score == doctest::Approx(eucl.entries[i].score).epsilon(1e-12));
    }
}

TEST_CASE("euclidean distance squares to the coordinate sum") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int round = 0; round < 100; ++round) {
        RealVector x(8), y(8);
        for (Index i = 0; i < 8; ++i) {
            x[i] = dist(rng);
            y[i] = dist(rng);
        }
        double expected = 0;
        for (Index i = 0; i < 8; ++i) {
            expected += (x[i] - y[i]) * (x[i] - y[i]);
        }
        const double d = euclidean_distance(x, y);
        CHECK(std::abs(d * d - expected) <= 1e-10);
    }
}

TEST_CASE("mahalanobis context construction") {
    SUBCASE("identity sample covariance inverts to identity with zero ridge") {
        const double a = std::sqrt(1.5);
        RealMatrix vectors(4, 2);
        vectors << a, 0, -a, 0, 0, a, 0, -a;
        SemanticSpace space = make_space({"p", "q", "r", "s"}, vectors);
        MahalanobisContext ctx = build_mahalanobis_context(space, 0.0);
        CHECK((ctx.inv_cov - RealMatrix::Identity(2, 2)).norm() <= 1e-12);
    }
    SUBCASE("rank-deficient vectors are rejected at zero ridge") {
        RealMatrix vectors = testutil::random_dense(6, 2, 88);
        RealMatrix embedded(6, 3);
        embedded.leftCols(2) = vectors;
        embedded.col(2) = vectors.col(0) + vectors.col(1);
        SemanticSpace space = make_space({"a", "b", "c", "d", "e", "f"}, embedded);
        CHECK_THROWS_AS(build_mahalanobis_context(space, 0.0), NotPositiveDefinite);
    }
    SUBCASE("ridge-regularized inverse multiplies back to identity") {
        SemanticSpace space = random_space(50, 5, 1234);
        MahalanobisContext ctx = build_mahalanobis_context(space, 1e-6);
        const RealMatrix centered =
            space.term_vectors.rowwise() - space.term_vectors.colwise().mean();
        RealMatrix cov = (centered.transpose() * centered) / 49.0;
        cov.diagonal().array() += 1e-6;
        CHECK((ctx.inv_cov * cov - RealMatrix::Identity(5, 5)).norm() <= 1e-4);
    }
    SUBCASE("bad handmade contexts are rejected") {
        SemanticSpace space = random_space(10, 3, 55);
        MahalanobisContext bad;
        bad.inv_cov = RealMatrix::Zero(3, 3);
        bad.inv_cov(0, 1) = 1.0;  // asymmetric
        CHECK_THROWS_AS(neighbors(space, "t0001", 2, Metric::Mahalanobis, &bad), BadContext);
        bad.inv_cov = -RealMatrix::Identity(3, 3);  // symmetric but not PD
        CHECK_THROWS_AS(neighbors(space, "t0001", 2, Metric::Mahalanobis, &bad), BadContext);
    }
}

TEST_CASE("project_2d returns leading coordinates in input order") {
    RealMatrix vectors(3, 2);
    vectors << 1, 2, 3, 4, 5, 6;
    SemanticSpace space = make_space({"x", "y", "z"}, vectors);

    const auto points = project_2d(space, {"z", "x"});
    REQUIRE(points.size() == 2);
    CHECK(points[0].term == "z");
    CHECK(points[0].x == 5.0);
    CHECK(points[0].y == 6.0);
    CHECK(points[1].term == "x");

    CHECK(project_2d(space, {}).empty());
    CHECK_THROWS_AS(project_2d(space, {"w"}), OutOfVocabulary);

    // k = 2 spaces project onto the full vectors.
    SemanticSpace wide = random_space(5, 2, 3);
    const auto full = project_2d(wide, {"t0002"});
    CHECK(full[0].x == wide.term_vectors(2, 0));
    CHECK(full[0].y == wide.term_vectors(2, 1));
}

TEST_CASE("csv export formats") {
    SemanticSpace space = random_space(6, 3, 8);
    const NeighborList list = neighbors(space, "t0000", 3);
    const std::string csv = neighbors_to_csv(list);
    CHECK(csv.rfind("rank,term,score\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
    CHECK(csv.find("1,") != std::string::npos);

    const std::string proj = projection_to_csv(project_2d(space, {"t0001"}));
    CHECK(proj.rfind("term,x,y\n", 0) == 0);
    CHECK(std::count(proj.begin(), proj.end(), '\n') == 2);
}

TEST_CASE("cosine neighbors skip zero-norm candidates") {
    RealMatrix vectors(3, 2);
    vectors << 1, 0, 0, 0, 0.5, 0.5;
    SemanticSpace space = make_space({"a", "cero", "c"}, vectors);
    const auto list = neighbors(space, "a", 5, Metric::Cosine);
    REQUIRE(list.entries.size() == 1);
    CHECK(list.entries[0].term == "c");
    // Distance metrics still see the zero vector.
    CHECK(neighbors(space, "a", 5, Metric::Euclidean).entries.size() == 2);
}
