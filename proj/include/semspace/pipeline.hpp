#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "semspace/corpus.hpp"
#include "semspace/dtm.hpp"
#include "semspace/space.hpp"

// End-to-end build: corpus -> clean -> vocabulary -> matrix -> weighting
// -> truncated SVD -> persisted space. Two streaming passes over the
// corpus; nothing larger than the matrix is held in memory.

namespace semspace {

struct BuildConfig {
    std::string corpus_path;
    CorpusFormat format = CorpusFormat::JsonLines;
    std::int64_t min_doc_freq = 1;
    double max_doc_ratio = 1.0;
    MatrixMode mode = MatrixMode::Frequency;
    WeightingScheme weighting = WeightingScheme::LogEntropy;
    Index k = 300;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    std::string output_path;

    bool drop_digits = false;
    std::uint64_t min_tokens = 1;  // documents cleaning below this are dropped
    bool keep_doc_vectors = false;
    bool fail_fast = false;
    double svd_tol = 1e-10;
    int svd_max_iter = 1000;
};

// JSON round-trip for --config files; unknown keys are rejected.
BuildConfig build_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BuildConfig& config);

struct StageTimings {
    double vocabulary_ms = 0.0;
    double matrix_ms = 0.0;
    double weighting_ms = 0.0;
    double svd_ms = 0.0;
    double space_ms = 0.0;
    double save_ms = 0.0;
};

struct BuildReport {
    std::int64_t document_count = 0;
    std::int64_t dropped_empty_count = 0;
    std::int64_t skipped_record_count = 0;
    std::int64_t vocabulary_size = 0;
    std::int64_t matrix_nonzeros = 0;
    Index requested_k = 0;
    Index achieved_k = 0;
    bool k_clamped = false;
    bool rank_deficient = false;
    std::vector<double> sigma_head;  // first five
    std::vector<double> sigma_tail;  // last five
    std::string corpus_digest;
    std::string output_path;
    StageTimings timings;
    int svd_iterations = 0;
};

nlohmann::json to_json(const BuildReport& report);

// Runs the full pipeline and writes the space file to config.output_path.
BuildReport run_build(const BuildConfig& config);

// FNV-1a 64 over the cleaned document stream (ids and texts), as a hex
// string. Identifies the corpus in space metadata.
std::string corpus_digest_hex(std::uint64_t value);

}  // namespace semspace
