#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semspace/errors.hpp"

namespace semspace {

// One corpus article as read from disk, before cleaning.
struct RawDocument {
    std::string doc_id;
    std::string title;
    std::string text;
};

// Article after clean_text: lowercase, letters/digits/single spaces only.
struct CleanDocument {
    std::string doc_id;
    std::string text;
};

enum class CorpusFormat {
    JsonLines,         // one JSON object per line: "id", "text", optional "title"
    PlainTextDir,      // every *.txt file is one document, doc_id = relative path
    WikiExtractorJson  // WikiExtractor --json output: "id", "url", "title", "text"
};

std::string to_string(CorpusFormat format);
CorpusFormat corpus_format_from_string(std::string_view name);

struct CleanOptions {
    bool drop_digits = false;
};

// Normalizes raw article text: NFC, lowercase, URL removal, then keeps
// only letters/digits separated by single spaces. Total and idempotent.
std::string clean_text(std::string_view raw, const CleanOptions& options = {});

struct SkipReport {
    std::string file;
    std::uint64_t line = 0;
    std::string reason;
};

struct CorpusOptions {
    // When set, a malformed record raises MalformedRecord instead of being
    // skipped and reported.
    bool fail_fast = false;
};

// Pull-based reader over a corpus path (single file or directory tree).
// Files are visited in sorted relative-path order, records in file order;
// only one record is materialized at a time.
class CorpusReader {
public:
    CorpusReader(std::filesystem::path path, CorpusFormat format, CorpusOptions options = {});

    // Next document, or nullopt at end of corpus.
    std::optional<RawDocument> next();

    const std::vector<SkipReport>& skipped() const noexcept { return skipped_; }
    std::uint64_t documents_read() const noexcept { return documents_read_; }

private:
    bool advance_file();
    std::optional<RawDocument> next_json_record();
    std::optional<RawDocument> next_plain_text();
    void report_skip(std::uint64_t line, const std::string& reason);

    std::filesystem::path root_;
    CorpusFormat format_;
    CorpusOptions options_;
    std::vector<std::filesystem::path> files_;
    std::size_t file_index_ = 0;
    std::ifstream stream_;
    std::string current_file_label_;
    std::uint64_t line_number_ = 0;
    bool file_open_ = false;
    std::vector<SkipReport> skipped_;
    std::uint64_t documents_read_ = 0;
};

CorpusReader open_corpus(const std::filesystem::path& path, CorpusFormat format,
                         CorpusOptions options = {});

// Single-pass pull stream of cleaned documents. Implementations must keep
// at most one document materialized at a time.
class DocumentStream {
public:
    virtual ~DocumentStream() = default;
    virtual std::optional<CleanDocument> next() = 0;
};

// Factory for re-iterable streams; matrix assembly takes two passes.
using StreamFactory = std::function<std::unique_ptr<DocumentStream>()>;

struct CleaningStreamOptions {
    CleanOptions clean;
    // Documents whose cleaned text has fewer tokens are dropped and counted.
    std::uint64_t min_tokens = 1;
};

// Cleans a RawDocument reader on the fly, dropping documents that clean to
// fewer than min_tokens tokens.
class CleaningStream : public DocumentStream {
public:
    CleaningStream(CorpusReader reader, CleaningStreamOptions options = {});

    std::optional<CleanDocument> next() override;

    std::uint64_t dropped() const noexcept { return dropped_; }
    const CorpusReader& reader() const noexcept { return reader_; }

private:
    CorpusReader reader_;
    CleaningStreamOptions options_;
    std::uint64_t dropped_ = 0;
};

// In-memory stream, mainly for tests and small fixtures.
class VectorStream : public DocumentStream {
public:
    explicit VectorStream(std::vector<CleanDocument> docs) : docs_(std::move(docs)) {}

    std::optional<CleanDocument> next() override {
        if (index_ >= docs_.size()) {
            return std::nullopt;
        }
        return docs_[index_++];
    }

private:
    std::vector<CleanDocument> docs_;
    std::size_t index_ = 0;
};

}  // namespace semspace
