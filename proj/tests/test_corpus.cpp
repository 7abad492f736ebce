#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "semspace/corpus.hpp"
#include "semspace/unicode.hpp"

using namespace semspace;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("clean_text documented examples") {
    CHECK(clean_text("Ver https://es.wikipedia.org ahora.") == "ver ahora");
    CHECK(clean_text("") == "");
    CHECK(clean_text("\xc2\xa1Matem\xc3\xa1ticas, geometr\xc3\xad"
                     "a!") == "matem\xc3\xa1ticas geometr\xc3\xad"
                              "a");
}

TEST_CASE("clean_text strips urls before punctuation") {
    CHECK(clean_text("ver WWW.ejemplo.com/pagina?x=1 ya") == "ver ya");
    CHECK(clean_text("ftp://host/archivo fin") == "fin");
    // Without the scheme or www prefix the host survives as tokens.
    CHECK(clean_text("ejemplo.com") == "ejemplocom");
}

TEST_CASE("clean_text preserves accents and case-folds") {
    CHECK(clean_text("NI\xc3\x91O ni\xc3\xb1o") == "ni\xc3\xb1o ni\xc3\xb1o");
    // NFC unifies combining-mark spellings with precomposed ones.
    CHECK(clean_text("nin\xcc\x83o") == "ni\xc3\xb1o");
}

TEST_CASE("clean_text digit handling") {
    CHECK(clean_text("año 2018 fin") == "año 2018 fin");
    CleanOptions drop;
    drop.drop_digits = true;
    CHECK(clean_text("año 2018 fin", drop) == "año fin");
    // Digits glued to letters survive as part of the token.
    CHECK(clean_text("mp3 player") == "mp3 player");
}

TEST_CASE("clean_text collapses whitespace") {
    CHECK(clean_text("  hola \t\n mundo  ") == "hola mundo");
    CHECK(clean_text("...") == "");
}

TEST_CASE("clean_text is idempotent and emits only letters digits spaces") {
    std::mt19937_64 rng(20240811);
    for (int round = 0; round < 400; ++round) {
        const std::string raw = testutil::random_utf8(rng, 80);
        const std::string once = clean_text(raw);
        CHECK(clean_text(once) == once);

        bool previous_space = true;  // no leading space allowed
        for (char32_t cp : unicode::decode_utf8(once)) {
            const bool space = cp == U' ';
            const bool valid = unicode::is_letter(cp) || unicode::is_digit(cp) || space;
            CHECK(valid);
            CHECK(!(space && previous_space));  // no duplicated/leading spaces
            previous_space = space;
        }
        if (!once.empty()) {
            CHECK(once.back() != ' ');
        }
    }
}

TEST_CASE("jsonl corpus preserves record order") {
    TempDir dir("jsonl");
    write_file(dir.file("c.jsonl"),
               R"({"id":"1","title":"Uno","text":"primero"})"
               "\n"
               R"({"id":"2","text":"segundo"})"
               "\n"
               R"({"id":"3","text":"tercero"})"
               "\n");
    auto reader = open_corpus(dir.file("c.jsonl"), CorpusFormat::JsonLines);
    std::vector<RawDocument> docs;
    while (auto doc = reader.next()) {
        docs.push_back(*doc);
    }
    REQUIRE(docs.size() == 3);
    CHECK(docs[0].doc_id == "1");
    CHECK(docs[0].title == "Uno");
    CHECK(docs[1].doc_id == "2");
    CHECK(docs[2].text == "tercero");
    CHECK(reader.skipped().empty());
}

TEST_CASE("empty corpus file yields empty stream") {
    TempDir dir("empty");
    write_file(dir.file("c.jsonl"), "");
    auto reader = open_corpus(dir.file("c.jsonl"), CorpusFormat::JsonLines);
    CHECK(!reader.next().has_value());
    CHECK(reader.skipped().empty());
}

TEST_CASE("malformed records are skipped and reported") {
    TempDir dir("malformed");
    write_file(dir.file("c.jsonl"),
               R"({"id":"1","text":"a"})"
               "\n"
               "{broken json\n"
               R"({"id":"2","text":"b"})"
               "\n"
               R"({"id":"3"})"
               "\n"
               R"({"id":"4","text":"d"})"
               "\n");
    auto reader = open_corpus(dir.file("c.jsonl"), CorpusFormat::JsonLines);
    int count = 0;
    while (reader.next()) {
        ++count;
    }
    CHECK(count == 3);
    REQUIRE(reader.skipped().size() == 2);
    CHECK(reader.skipped()[0].line == 2);
    CHECK(reader.skipped()[1].line == 4);
}

TEST_CASE("fail fast raises on the malformed record only when reached") {
    TempDir dir("failfast");
    write_file(dir.file("c.jsonl"),
               R"({"id":"1","text":"a"})"
               "\n"
               R"({"id":"2","text":"b"})"
               "\n"
               "nope\n");
    CorpusOptions options;
    options.fail_fast = true;
    auto reader = open_corpus(dir.file("c.jsonl"), CorpusFormat::JsonLines, options);
    CHECK(reader.next().has_value());
    CHECK(reader.next().has_value());  // records before the bad line stream fine
    CHECK_THROWS_AS(reader.next(), MalformedRecord);
}

TEST_CASE("missing path raises PathNotFound") {
    CHECK_THROWS_AS(open_corpus("/no/such/corpus.jsonl", CorpusFormat::JsonLines), PathNotFound);
}

TEST_CASE("plain text directory uses relative paths as ids") {
    TempDir dir("textdir");
    std::filesystem::create_directories(dir.file("sub"));
    write_file(dir.file("b.txt"), "Texto B.");
    write_file(dir.file("a.txt"), "Texto A.");
    write_file(dir.file("sub/c.txt"), "Texto C.");
    write_file(dir.file("ignored.dat"), "no");

    auto reader = open_corpus(dir.path(), CorpusFormat::PlainTextDir);
    std::vector<RawDocument> docs;
    while (auto doc = reader.next()) {
        docs.push_back(*doc);
    }
    REQUIRE(docs.size() == 3);
    CHECK(docs[0].doc_id == "a.txt");
    CHECK(docs[1].doc_id == "b.txt");
    CHECK(docs[2].doc_id == "sub/c.txt");
    CHECK(docs[0].text == "Texto A.");
}

TEST_CASE("wikiextractor json format accepts numeric ids and ignores url") {
    TempDir dir("wiki");
    write_file(dir.file("wiki_00"),
               R"({"id": 12, "url": "https://x", "title": "T", "text": "cuerpo del artículo"})"
               "\n");
    auto reader = open_corpus(dir.file("wiki_00"), CorpusFormat::WikiExtractorJson);
    auto doc = reader.next();
    REQUIRE(doc.has_value());
    CHECK(doc->doc_id == "12");
    CHECK(doc->title == "T");
    CHECK(doc->text == "cuerpo del artículo");
}

TEST_CASE("directory corpora are visited in sorted file order") {
    TempDir dir("multi");
    std::filesystem::create_directories(dir.file("BB"));
    std::filesystem::create_directories(dir.file("AA"));
    write_file(dir.file("BB/wiki_00"), R"({"id":"3","text":"tres"})" "\n");
    write_file(dir.file("AA/wiki_00"), R"({"id":"1","text":"uno"})" "\n");
    write_file(dir.file("AA/wiki_01"), R"({"id":"2","text":"dos"})" "\n");

    auto reader = open_corpus(dir.path(), CorpusFormat::WikiExtractorJson);
    std::vector<std::string> ids;
    while (auto doc = reader.next()) {
        ids.push_back(doc->doc_id);
    }
    CHECK(ids == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("cleaning stream drops documents that clean to empty") {
    TempDir dir("cleaning");
    write_file(dir.file("c.jsonl"),
               R"({"id":"1","text":"Hola mundo."})"
               "\n"
               R"({"id":"2","text":"!!! ..."})"
               "\n"
               R"({"id":"3","text":"Adiós"})"
               "\n");
    CleaningStream stream(open_corpus(dir.file("c.jsonl"), CorpusFormat::JsonLines));
    std::vector<CleanDocument> docs;
    while (auto doc = stream.next()) {
        docs.push_back(*doc);
    }
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].text == "hola mundo");
    CHECK(docs[1].doc_id == "3");
    CHECK(stream.dropped() == 1);
}

TEST_CASE("min token filter drops short documents") {
    TempDir dir("minlen");
    write_file(dir.file("c.jsonl"),
               R"({"id":"1","text":"una palabra"})"
               "\n"
               R"({"id":"2","text":"sola"})"
               "\n");
    CleaningStreamOptions options;
    options.min_tokens = 2;
    CleaningStream stream(open_corpus(dir.file("c.jsonl"), CorpusFormat::JsonLines), options);
    auto doc = stream.next();
    REQUIRE(doc.has_value());
    CHECK(doc->doc_id == "1");
    CHECK(!stream.next().has_value());
    CHECK(stream.dropped() == 1);
}
