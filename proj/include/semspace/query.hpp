#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semspace/space.hpp"
#include "semspace/types.hpp"

// Read-only queries over a loaded SemanticSpace: word and text cosines,
// exhaustive nearest-neighbor retrieval under three metrics, and the 2-D
// projection used for plots.

namespace semspace {

enum class Metric { Cosine, Euclidean, Mahalanobis };

std::string to_string(Metric metric);
Metric metric_from_string(std::string_view name);

// NFC + lowercase + trim: the normalization applied to query terms before
// vocabulary lookup.
std::string normalize_term(std::string_view term);

// The term's row of the space. Lookup is exact on the normalized form.
RealVector word_vector(const SemanticSpace& space, std::string_view term);

// Cosine of two word vectors, in [-1, 1].
Real cosine(const SemanticSpace& space, std::string_view a, std::string_view b);

struct TextVector {
    RealVector vector;                     // mean of in-vocabulary token vectors
    std::vector<std::string> oov_tokens;   // skipped tokens, in text order
    std::int64_t known_tokens = 0;         // counted with multiplicity
    std::int64_t total_tokens = 0;
};

// Mean vector of a text's in-vocabulary tokens; a token occurring twice
// contributes twice. OOV tokens are skipped and reported.
TextVector text_vector(const SemanticSpace& space, std::string_view text);

// Cosine of the two texts' average vectors.
Real costring(const SemanticSpace& space, std::string_view text_a, std::string_view text_b);

struct MahalanobisContext {
    RealMatrix inv_cov;  // k x k, symmetric positive definite
    Real ridge = 0.0;
};

// Inverse of (sample covariance of the term vectors + ridge * I). A
// negative ridge requests the default 1e-8 * trace / k.
MahalanobisContext build_mahalanobis_context(const SemanticSpace& space, Real ridge = -1.0);

struct Neighbor {
    std::string term;
    Real score;  // cosine (higher is closer) or distance (lower is closer)
};

struct NeighborList {
    std::vector<Neighbor> entries;  // sorted best-first
    Metric metric = Metric::Cosine;
};

// Exhaustive scan for the n best terms. When the query is a term it is
// excluded from the result. Ties are broken by lexicographic term order.
// Under the cosine metric, zero-norm candidate vectors are skipped.
NeighborList neighbors(const SemanticSpace& space, std::string_view term, Index n,
                       Metric metric = Metric::Cosine,
                       const MahalanobisContext* context = nullptr);

NeighborList neighbors(const SemanticSpace& space, const RealVector& query, Index n,
                       Metric metric = Metric::Cosine,
                       const MahalanobisContext* context = nullptr);

struct Point2D {
    std::string term;
    Real x;
    Real y;
};

// First two coordinates of each term vector, order preserved.
std::vector<Point2D> project_2d(const SemanticSpace& space,
                                const std::vector<std::string>& terms);

// CSV/JSON export payloads used by the CLI and external plotting.
std::string neighbors_to_csv(const NeighborList& list);
std::string projection_to_csv(const std::vector<Point2D>& points);

}  // namespace semspace
