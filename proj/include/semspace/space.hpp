#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semspace/dtm.hpp"
#include "semspace/svd.hpp"
#include "semspace/types.hpp"

namespace semspace {

struct SpaceMeta {
    MatrixMode mode = MatrixMode::Frequency;
    WeightingScheme weighting = WeightingScheme::None;
    Index k = 0;
    double alpha = 1.0;
    std::string corpus_digest;
    std::string tool_version;
    std::int64_t n_docs = 0;
    bool rank_deficient = false;
};

// The queryable artifact: one k-dimensional vector per vocabulary term.
// Immutable after construction; safe for concurrent readers.
struct SemanticSpace {
    Vocabulary vocab;
    RealMatrix term_vectors;  // p x k, row j = vector of term j
    RealVector sigma;         // k singular values, nonincreasing
    SpaceMeta meta;

    // Document vectors, retained only when requested at build time.
    RealMatrix doc_vectors;  // n x k or empty
    std::vector<std::string> doc_ids;

    Index n_terms() const noexcept { return term_vectors.rows(); }
    Index dim() const noexcept { return term_vectors.cols(); }
    bool has_doc_vectors() const noexcept { return doc_vectors.size() > 0; }
};

struct BuildSpaceOptions {
    double alpha = 1.0;  // term vector = V row scaled by sigma^alpha
    std::string corpus_digest;
    bool keep_doc_vectors = false;
};

// Scales the right singular vectors into per-term coordinates:
// row j of V_k, elementwise times sigma_i^alpha.
SemanticSpace build_space(const Vocabulary& vocab, const DocTermMatrix& m,
                          const TruncatedSvd<Real>& svd, const BuildSpaceOptions& options = {});

// Binary space file (docs/space_format.md): little-endian, 16-byte
// magic+version header, length-prefixed vocabulary, row-major f64 vector
// block, trailing CRC-32. load validates magic, version and checksum
// before constructing anything.
void save_space(const SemanticSpace& space, const std::filesystem::path& path);
SemanticSpace load_space(const std::filesystem::path& path);

struct ThirdStats {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    Index count = 0;
};

// Paired singular values of two spaces, compared up to the shorter length.
struct SpectrumReport {
    std::vector<double> sigma_a;
    std::vector<double> sigma_b;
    std::vector<double> ratio;  // sigma_a / sigma_b
    std::string label_a;
    std::string label_b;
    ThirdStats head;
    ThirdStats middle;
    ThirdStats tail;
};

SpectrumReport compare_spectra(const SemanticSpace& a, const SemanticSpace& b);

// CRC-32 (IEEE reflected polynomial), used by the space file trailer.
std::uint32_t crc32(const void* data, std::size_t size, std::uint32_t seed = 0);

}  // namespace semspace
