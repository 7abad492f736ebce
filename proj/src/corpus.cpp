#include "semspace/corpus.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "semspace/unicode.hpp"

namespace semspace {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool starts_with_ci(const std::vector<char32_t>& cps, std::size_t pos, std::string_view ascii) {
    if (pos + ascii.size() > cps.size()) {
        return false;
    }
    for (std::size_t k = 0; k < ascii.size(); ++k) {
        const char32_t cp = cps[pos + k];
        if (cp > 0x7F) {
            return false;
        }
        if (std::tolower(static_cast<int>(cp)) != ascii[k]) {
            return false;
        }
    }
    return true;
}

// Removes scheme- or www-prefixed runs up to the next whitespace.
void strip_urls(std::vector<char32_t>& cps) {
    static constexpr std::string_view kPrefixes[] = {"http://", "https://", "ftp://", "www."};
    std::vector<char32_t> out;
    out.reserve(cps.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        bool url = false;
        for (std::string_view prefix : kPrefixes) {
            if (starts_with_ci(cps, i, prefix)) {
                url = true;
                break;
            }
        }
        if (url) {
            while (i < cps.size() && !unicode::is_space(cps[i])) {
                ++i;
            }
            continue;
        }
        out.push_back(cps[i]);
        ++i;
    }
    cps = std::move(out);
}

std::string json_type_name(const json& v) { return v.type_name(); }

std::string require_string_field(const json& record, const char* key, bool allow_number) {
    auto it = record.find(key);
    if (it == record.end()) {
        throw std::runtime_error(std::string("missing key \"") + key + "\"");
    }
    if (it->is_string()) {
        return it->get<std::string>();
    }
    if (allow_number && it->is_number_integer()) {
        return std::to_string(it->get<std::int64_t>());
    }
    throw std::runtime_error(std::string("key \"") + key + "\" has type " + json_type_name(*it) +
                             ", expected string");
}

}  // namespace

std::string to_string(CorpusFormat format) {
    switch (format) {
        case CorpusFormat::JsonLines:
            return "jsonl";
        case CorpusFormat::PlainTextDir:
            return "textdir";
        case CorpusFormat::WikiExtractorJson:
            return "wikiextractor";
    }
    return "unknown";
}

CorpusFormat corpus_format_from_string(std::string_view name) {
    if (name == "jsonl") {
        return CorpusFormat::JsonLines;
    }
    if (name == "textdir") {
        return CorpusFormat::PlainTextDir;
    }
    if (name == "wikiextractor") {
        return CorpusFormat::WikiExtractorJson;
    }
    throw UsageError("unknown corpus format: '" + std::string(name) +
                     "' (expected jsonl, textdir or wikiextractor)");
}

std::string clean_text(std::string_view raw, const CleanOptions& options) {
    std::vector<char32_t> cps = unicode::decode_utf8(raw);
    unicode::normalize_nfc(cps);
    for (char32_t& cp : cps) {
        cp = unicode::to_lower(cp);
    }
    strip_urls(cps);

    std::string out;
    out.reserve(raw.size());
    std::vector<char32_t> token;
    bool first = true;
    auto flush_token = [&] {
        if (token.empty()) {
            return;
        }
        if (!first) {
            out.push_back(' ');
        }
        out += unicode::encode_utf8(token);
        token.clear();
        first = false;
    };
    for (char32_t cp : cps) {
        const bool keep =
            unicode::is_letter(cp) || (!options.drop_digits && unicode::is_digit(cp));
        if (keep) {
            token.push_back(cp);
        } else if (unicode::is_space(cp)) {
            flush_token();
        }
        // Punctuation, symbols and stray marks are removed in place and do
        // not split the surrounding token.
    }
    flush_token();
    return out;
}

CorpusReader::CorpusReader(fs::path path, CorpusFormat format, CorpusOptions options)
    : root_(std::move(path)), format_(format), options_(options) {
    std::error_code ec;
    if (!fs::exists(root_, ec) || ec) {
        throw PathNotFound(root_.string());
    }
    if (fs::is_directory(root_)) {
        for (const auto& entry : fs::recursive_directory_iterator(root_)) {
            if (!entry.is_regular_file()) {
                continue;
            }
            if (format_ == CorpusFormat::PlainTextDir && entry.path().extension() != ".txt") {
                continue;
            }
            files_.push_back(entry.path());
        }
        std::sort(files_.begin(), files_.end(), [this](const fs::path& a, const fs::path& b) {
            return a.lexically_relative(root_).generic_string() <
                   b.lexically_relative(root_).generic_string();
        });
    } else {
        if (format_ == CorpusFormat::PlainTextDir) {
            throw UsageError("textdir corpus path must be a directory: " + root_.string());
        }
        files_.push_back(root_);
    }
}

bool CorpusReader::advance_file() {
    while (file_index_ < files_.size()) {
        const fs::path& path = files_[file_index_++];
        stream_.close();
        stream_.clear();
        stream_.open(path, std::ios::binary);
        if (!stream_.is_open()) {
            throw IoError("cannot open file: " + path.string());
        }
        current_file_label_ = fs::is_directory(root_)
                                  ? path.lexically_relative(root_).generic_string()
                                  : path.generic_string();
        line_number_ = 0;
        file_open_ = true;
        return true;
    }
    file_open_ = false;
    return false;
}

void CorpusReader::report_skip(std::uint64_t line, const std::string& reason) {
    if (options_.fail_fast) {
        throw MalformedRecord(current_file_label_, line, reason);
    }
    skipped_.push_back({current_file_label_, line, reason});
}

std::optional<RawDocument> CorpusReader::next_json_record() {
    std::string line;
    for (;;) {
        if (!file_open_ && !advance_file()) {
            return std::nullopt;
        }
        while (std::getline(stream_, line)) {
            ++line_number_;
            if (line.empty() ||
                line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            json record = json::parse(line, nullptr, false);
            if (record.is_discarded() || !record.is_object()) {
                report_skip(line_number_, "not a JSON object");
                continue;
            }
            RawDocument doc;
            try {
                doc.doc_id = require_string_field(record, "id", /*allow_number=*/true);
                doc.text = require_string_field(record, "text", /*allow_number=*/false);
            } catch (const std::runtime_error& e) {
                report_skip(line_number_, e.what());
                continue;
            }
            if (doc.doc_id.empty()) {
                report_skip(line_number_, "empty \"id\"");
                continue;
            }
            if (auto it = record.find("title"); it != record.end() && it->is_string()) {
                doc.title = it->get<std::string>();
            }
            ++documents_read_;
            return doc;
        }
        file_open_ = false;
    }
}

std::optional<RawDocument> CorpusReader::next_plain_text() {
    if (!advance_file()) {
        return std::nullopt;
    }
    RawDocument doc;
    doc.doc_id = current_file_label_;
    doc.title = files_[file_index_ - 1].stem().string();
    doc.text.assign(std::istreambuf_iterator<char>(stream_), std::istreambuf_iterator<char>());
    file_open_ = false;
    ++documents_read_;
    return doc;
}

std::optional<RawDocument> CorpusReader::next() {
    switch (format_) {
        case CorpusFormat::JsonLines:
        case CorpusFormat::WikiExtractorJson:
            return next_json_record();
        case CorpusFormat::PlainTextDir:
            return next_plain_text();
    }
    return std::nullopt;
}

CorpusReader open_corpus(const fs::path& path, CorpusFormat format, CorpusOptions options) {
    return CorpusReader(path, format, options);
}

CleaningStream::CleaningStream(CorpusReader reader, CleaningStreamOptions options)
    : reader_(std::move(reader)), options_(options) {}

std::optional<CleanDocument> CleaningStream::next() {
    while (auto raw = reader_.next()) {
        CleanDocument doc{std::move(raw->doc_id), clean_text(raw->text, options_.clean)};
        std::uint64_t tokens = 0;
        if (!doc.text.empty()) {
            tokens = 1 + static_cast<std::uint64_t>(
                             std::count(doc.text.begin(), doc.text.end(), ' '));
        }
        if (tokens < options_.min_tokens) {
            ++dropped_;
            continue;
        }
        return doc;
    }
    return std::nullopt;
}

}  // namespace semspace
