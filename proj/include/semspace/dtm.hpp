#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semspace/corpus.hpp"
#include "semspace/errors.hpp"
#include "semspace/types.hpp"

namespace semspace {

// Bidirectional term <-> column-index map with per-term document and
// collection frequencies. Terms are kept in lexicographic (byte) order so
// the column layout is independent of document order.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> doc_freq,
               std::vector<std::int64_t> coll_freq);

    Index size() const noexcept { return static_cast<Index>(terms_.size()); }
    const std::string& term(Index j) const { return terms_.at(static_cast<std::size_t>(j)); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }

    std::optional<Index> index_of(std::string_view term) const;

    std::int64_t doc_freq(Index j) const { return doc_freq_.at(static_cast<std::size_t>(j)); }
    std::int64_t coll_freq(Index j) const { return coll_freq_.at(static_cast<std::size_t>(j)); }
    const std::vector<std::int64_t>& doc_freqs() const noexcept { return doc_freq_; }
    const std::vector<std::int64_t>& coll_freqs() const noexcept { return coll_freq_; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, Index> index_;
    std::vector<std::int64_t> doc_freq_;
    std::vector<std::int64_t> coll_freq_;
};

enum class MatrixMode { Frequency, Binary };
enum class WeightingScheme { None, LogEntropy };

std::string to_string(MatrixMode mode);
std::string to_string(WeightingScheme scheme);
MatrixMode matrix_mode_from_string(std::string_view name);
WeightingScheme weighting_from_string(std::string_view name);

// Sparse documents-by-terms matrix. Stored column compressed with sorted
// inner indices; all stored values are strictly positive and finite.
struct DocTermMatrix {
    RealSparse values;                 // n_docs x n_terms
    std::vector<std::string> doc_ids;  // row index -> doc_id
    MatrixMode mode = MatrixMode::Frequency;
    WeightingScheme weighting = WeightingScheme::None;

    Index n_docs() const noexcept { return values.rows(); }
    Index n_terms() const noexcept { return values.cols(); }
    Index nonzeros() const noexcept { return values.nonZeros(); }
};

// Splits clean text into its maximal space-delimited runs.
std::vector<std::string> tokenize(std::string_view text);

// Scans the stream once and keeps the terms with doc_freq >= min_doc_freq
// and doc_freq / n_docs <= max_doc_ratio.
Vocabulary build_vocabulary(DocumentStream& corpus, std::int64_t min_doc_freq = 1,
                            double max_doc_ratio = 1.0);

// Second pass: one row per document, x_ij = term count (Frequency) or
// presence indicator (Binary). Rows without in-vocabulary terms are kept so
// row index <-> doc_id stays total.
DocTermMatrix build_matrix(DocumentStream& corpus, const Vocabulary& vocab,
                           MatrixMode mode = MatrixMode::Frequency);

// Log-entropy weighting: x'_ij = ln(1 + x_ij) * g_j with
// g_j = 1 + sum_i (p_ij ln p_ij) / ln n and p_ij = x_ij / coll_freq_j.
// The sparsity pattern shrinks only where g_j = 0.
DocTermMatrix apply_weighting(const DocTermMatrix& m, WeightingScheme scheme);

// Global weights g_j of the log-entropy scheme, exposed for inspection.
RealVector log_entropy_global_weights(const DocTermMatrix& m);

// Debug/test export: sorted "row<TAB>col<TAB>value" triplets plus a JSON
// sidecar (<path>.meta.json) with dimensions, mode, weighting and terms.
void export_triplets(const DocTermMatrix& m, const Vocabulary& vocab,
                     const std::filesystem::path& path);

}  // namespace semspace
