#include "semspace/space.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "semspace/errors.hpp"
#include "semspace/version.hpp"

namespace semspace {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'S', 'E', 'M', 'S', 'P', 'A', 'C', 'E'};
constexpr std::uint32_t kFlagDocVectors = 1u;

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const void* data, std::size_t size) {
        const char* p = static_cast<const char*>(data);
        buf_.insert(buf_.end(), p, p + size);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }

    std::vector<char>& data() { return buf_; }

private:
    std::vector<char> buf_;
};

class Cursor {
public:
    Cursor(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 8;
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s(data_ + pos_, len);
        pos_ += len;
        return s;
    }
    std::size_t remaining() const { return size_ - pos_; }

private:
    void need(std::size_t count) {
        if (size_ - pos_ < count) {
            throw DataError("space file structure is corrupt");
        }
    }
    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

json meta_to_json(const SpaceMeta& meta) {
    return json{
        {"mode", to_string(meta.mode)},
        {"weighting", to_string(meta.weighting)},
        {"k", meta.k},
        {"alpha", meta.alpha},
        {"corpus_digest", meta.corpus_digest},
        {"tool_version", meta.tool_version},
        {"n_docs", meta.n_docs},
        {"rank_deficient", meta.rank_deficient},
    };
}

SpaceMeta meta_from_json(const json& j) {
    SpaceMeta meta;
    meta.mode = matrix_mode_from_string(j.at("mode").get<std::string>());
    meta.weighting = weighting_from_string(j.at("weighting").get<std::string>());
    meta.k = j.at("k").get<Index>();
    meta.alpha = j.at("alpha").get<double>();
    meta.corpus_digest = j.at("corpus_digest").get<std::string>();
    meta.tool_version = j.at("tool_version").get<std::string>();
    meta.n_docs = j.at("n_docs").get<std::int64_t>();
    meta.rank_deficient = j.at("rank_deficient").get<bool>();
    return meta;
}

ThirdStats third_stats(const std::vector<double>& ratios, std::size_t lo, std::size_t hi) {
    ThirdStats stats;
    stats.count = static_cast<Index>(hi - lo);
    if (lo >= hi) {
        return stats;
    }
    std::vector<double> slice(ratios.begin() + static_cast<std::ptrdiff_t>(lo),
                              ratios.begin() + static_cast<std::ptrdiff_t>(hi));
    std::sort(slice.begin(), slice.end());
    stats.min_ratio = slice.front();
    stats.max_ratio = slice.back();
    const std::size_t mid = slice.size() / 2;
    stats.median_ratio = (slice.size() % 2 == 1)
                             ? slice[mid]
                             : 0.5 * (slice[mid - 1] + slice[mid]);
    return stats;
}

}  // namespace

std::uint32_t crc32(const void* data, std::size_t size, std::uint32_t seed) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int bit = 0; bit < 8; ++bit) {
                c = (c & 1) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = seed ^ 0xFFFFFFFFu;
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        crc = table[(crc ^ bytes[i]) & 0xFF] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

SemanticSpace build_space(const Vocabulary& vocab, const DocTermMatrix& m,
                          const TruncatedSvd<Real>& svd, const BuildSpaceOptions& options) {
    if (svd.v.rows() != m.n_terms() || vocab.size() != m.n_terms()) {
        throw DimensionMismatch("SVD factors, matrix and vocabulary disagree on term count");
    }
    if (svd.u.rows() != m.n_docs()) {
        throw DimensionMismatch("SVD factors and matrix disagree on document count");
    }
    if (options.alpha < 0.0 || options.alpha > 1.0) {
        throw UsageError("alpha must lie in [0, 1]");
    }

    SemanticSpace space;
    space.vocab = vocab;
    const RealVector scale = svd.sigma.array().pow(options.alpha);
    space.term_vectors = svd.v * scale.asDiagonal();
    space.sigma = svd.sigma;
    space.meta.mode = m.mode;
    space.meta.weighting = m.weighting;
    space.meta.k = svd.k;
    space.meta.alpha = options.alpha;
    space.meta.corpus_digest = options.corpus_digest;
    space.meta.tool_version = kToolVersion;
    space.meta.n_docs = m.n_docs();
    space.meta.rank_deficient = svd.rank_deficient;
    if (options.keep_doc_vectors) {
        space.doc_vectors = svd.u * scale.asDiagonal();
        space.doc_ids = m.doc_ids;
    }
    return space;
}

void save_space(const SemanticSpace& space, const std::filesystem::path& path) {
    Writer w;
    w.bytes(kMagic, sizeof(kMagic));
    w.u32(kSpaceFormatVersion);
    w.u32(space.has_doc_vectors() ? kFlagDocVectors : 0);

    w.str(meta_to_json(space.meta).dump());

    const Index p = space.n_terms();
    const Index k = space.dim();
    w.u64(static_cast<std::uint64_t>(p));
    for (Index j = 0; j < p; ++j) {
        w.str(space.vocab.term(j));
    }
    for (Index j = 0; j < p; ++j) {
        w.i64(space.vocab.doc_freq(j));
    }
    for (Index j = 0; j < p; ++j) {
        w.i64(space.vocab.coll_freq(j));
    }

    w.u32(static_cast<std::uint32_t>(k));
    for (Index i = 0; i < k; ++i) {
        w.f64(space.sigma[i]);
    }
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < k; ++i) {
            w.f64(space.term_vectors(j, i));
        }
    }

    if (space.has_doc_vectors()) {
        const Index n = space.doc_vectors.rows();
        w.u64(static_cast<std::uint64_t>(n));
        for (Index r = 0; r < n; ++r) {
            w.str(space.doc_ids[static_cast<std::size_t>(r)]);
        }
        for (Index r = 0; r < n; ++r) {
            for (Index i = 0; i < k; ++i) {
                w.f64(space.doc_vectors(r, i));
            }
        }
    }

    const std::uint32_t checksum = crc32(w.data().data(), w.data().size());
    w.u32(checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

SemanticSpace load_space(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());

    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
        throw BadMagic();
    }
    Cursor header(bytes.data() + 8, 8);
    const std::uint32_t version = header.u32();
    const std::uint32_t flags = header.u32();
    if (version != kSpaceFormatVersion) {
        throw UnsupportedVersion(version);
    }
    if (bytes.size() < 20) {
        throw ChecksumMismatch();
    }
    Cursor trailer(bytes.data() + bytes.size() - 4, 4);
    const std::uint32_t stored = trailer.u32();
    const std::uint32_t actual = crc32(bytes.data(), bytes.size() - 4);
    if (stored != actual) {
        throw ChecksumMismatch();
    }

    Cursor c(bytes.data() + 16, bytes.size() - 20);
    SemanticSpace space;
    const json meta_json = json::parse(c.str(), nullptr, false);
    if (meta_json.is_discarded()) {
        throw DataError("space file metadata is not valid JSON");
    }
    space.meta = meta_from_json(meta_json);

    const std::uint64_t p = c.u64();
    std::vector<std::string> terms(p);
    for (auto& term : terms) {
        term = c.str();
    }
    std::vector<std::int64_t> doc_freq(p);
    for (auto& v : doc_freq) {
        v = c.i64();
    }
    std::vector<std::int64_t> coll_freq(p);
    for (auto& v : coll_freq) {
        v = c.i64();
    }
    space.vocab = Vocabulary(std::move(terms), std::move(doc_freq), std::move(coll_freq));

    const std::uint32_t k = c.u32();
    space.sigma.resize(static_cast<Index>(k));
    for (Index i = 0; i < space.sigma.size(); ++i) {
        space.sigma[i] = c.f64();
    }
    space.term_vectors.resize(static_cast<Index>(p), static_cast<Index>(k));
    for (Index j = 0; j < space.term_vectors.rows(); ++j) {
        for (Index i = 0; i < space.term_vectors.cols(); ++i) {
            space.term_vectors(j, i) = c.f64();
        }
    }

    if (flags & kFlagDocVectors) {
        const std::uint64_t n = c.u64();
        space.doc_ids.resize(n);
        for (auto& id : space.doc_ids) {
            id = c.str();
        }
        space.doc_vectors.resize(static_cast<Index>(n), static_cast<Index>(k));
        for (Index r = 0; r < space.doc_vectors.rows(); ++r) {
            for (Index i = 0; i < space.doc_vectors.cols(); ++i) {
                space.doc_vectors(r, i) = c.f64();
            }
        }
    }
    if (c.remaining() != 0) {
        throw DataError("space file has trailing bytes");
    }
    if (space.meta.k != space.sigma.size() || space.meta.k != space.term_vectors.cols()) {
        throw DataError("space file metadata disagrees with its payload dimensions");
    }
    for (Index i = 0; i + 1 < space.sigma.size(); ++i) {
        if (!(space.sigma[i] >= space.sigma[i + 1]) || !(space.sigma[i + 1] >= 0.0)) {
            throw DataError("space file singular values are not nonincreasing");
        }
    }
    if (!space.term_vectors.allFinite()) {
        throw DataError("space file term vectors contain non-finite values");
    }
    return space;
}

SpectrumReport compare_spectra(const SemanticSpace& a, const SemanticSpace& b) {
    if (a.sigma.size() == 0 || b.sigma.size() == 0) {
        throw UsageError("compare_spectra needs nonempty spaces");
    }
    SpectrumReport report;
    report.label_a = to_string(a.meta.mode) + "/" + to_string(a.meta.weighting);
    report.label_b = to_string(b.meta.mode) + "/" + to_string(b.meta.weighting);

    const std::size_t length =
        static_cast<std::size_t>(std::min(a.sigma.size(), b.sigma.size()));
    report.sigma_a.resize(length);
    report.sigma_b.resize(length);
    report.ratio.resize(length);
    for (std::size_t i = 0; i < length; ++i) {
        report.sigma_a[i] = a.sigma[static_cast<Index>(i)];
        report.sigma_b[i] = b.sigma[static_cast<Index>(i)];
        report.ratio[i] = report.sigma_a[i] / report.sigma_b[i];
    }

    const std::size_t first = length / 3;
    const std::size_t second = 2 * length / 3;
    report.head = third_stats(report.ratio, 0, first);
    report.middle = third_stats(report.ratio, first, second);
    report.tail = third_stats(report.ratio, second, length);
    return report;
}

}  // namespace semspace
