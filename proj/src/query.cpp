#include "semspace/query.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>

#include "semspace/corpus.hpp"
#include "semspace/dtm.hpp"
#include "semspace/errors.hpp"
#include "semspace/metrics.hpp"
#include "semspace/unicode.hpp"

namespace semspace {
namespace {

Index lookup(const SemanticSpace& space, std::string_view term) {
    const std::string normalized = normalize_term(term);
    if (auto j = space.vocab.index_of(normalized)) {
        return *j;
    }
    throw OutOfVocabulary(normalized);
}

void validate_context(const MahalanobisContext& ctx, Index dim) {
    if (ctx.inv_cov.rows() != dim || ctx.inv_cov.cols() != dim) {
        throw BadContext();
    }
    const Real scale = ctx.inv_cov.norm();
    if (!((ctx.inv_cov - ctx.inv_cov.transpose()).norm() <= 1e-8 * std::max(scale, 1.0))) {
        throw BadContext();
    }
    Eigen::LLT<RealMatrix> llt(ctx.inv_cov);
    if (llt.info() != Eigen::Success) {
        throw BadContext();
    }
}

NeighborList scan(const SemanticSpace& space, const RealVector& query, Index n, Metric metric,
                  const MahalanobisContext* context, std::optional<Index> exclude) {
    if (n < 1) {
        throw UsageError("neighbors: n must be >= 1");
    }
    if (query.size() != space.dim()) {
        throw DimensionMismatch("query vector dimensionality differs from the space");
    }

    MahalanobisContext local;
    if (metric == Metric::Mahalanobis) {
        if (context == nullptr) {
            local = build_mahalanobis_context(space);
            context = &local;
        } else {
            validate_context(*context, space.dim());
        }
    }
    const Real query_norm = query.norm();
    if (metric == Metric::Cosine && query_norm == 0.0) {
        throw ZeroVector("<query>");
    }

    std::vector<Neighbor> all;
    all.reserve(static_cast<std::size_t>(space.n_terms()));
    for (Index j = 0; j < space.n_terms(); ++j) {
        if (exclude && *exclude == j) {
            continue;
        }
        const auto row = space.term_vectors.row(j).transpose();
        Real score = 0.0;
        switch (metric) {
            case Metric::Cosine: {
                const Real norm = row.norm();
                if (norm == 0.0) {
                    continue;  // cosine undefined for zero vectors
                }
                score = query.dot(row) / (query_norm * norm);
                break;
            }
            case Metric::Euclidean:
                score = euclidean_distance(query, row);
                break;
            case Metric::Mahalanobis:
                score = mahalanobis_distance(query, row, context->inv_cov);
                break;
        }
        all.push_back({space.vocab.term(j), score});
    }

    const bool descending = metric == Metric::Cosine;
    auto better = [descending](const Neighbor& a, const Neighbor& b) {
        if (a.score != b.score) {
            return descending ? a.score > b.score : a.score < b.score;
        }
        return a.term < b.term;
    };
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(n), all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                      better);
    all.resize(keep);

    NeighborList list;
    list.entries = std::move(all);
    list.metric = metric;
    return list;
}

}  // namespace

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::Cosine:
            return "cosine";
        case Metric::Euclidean:
            return "euclidean";
        case Metric::Mahalanobis:
            return "mahalanobis";
    }
    return "unknown";
}

Metric metric_from_string(std::string_view name) {
    if (name == "cosine") {
        return Metric::Cosine;
    }
    if (name == "euclidean") {
        return Metric::Euclidean;
    }
    if (name == "mahalanobis") {
        return Metric::Mahalanobis;
    }
    throw UsageError("unknown metric: '" + std::string(name) +
                     "' (expected cosine, euclidean or mahalanobis)");
}

std::string normalize_term(std::string_view term) {
    std::string s = unicode::lowercase(unicode::nfc(term));
    const std::size_t first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return std::string();
    }
    const std::size_t last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

RealVector word_vector(const SemanticSpace& space, std::string_view term) {
    return space.term_vectors.row(lookup(space, term)).transpose();
}

Real cosine(const SemanticSpace& space, std::string_view a, std::string_view b) {
    const Index ja = lookup(space, a);
    const Index jb = lookup(space, b);
    const auto va = space.term_vectors.row(ja);
    const auto vb = space.term_vectors.row(jb);
    if (va.norm() == 0.0) {
        throw ZeroVector(space.vocab.term(ja));
    }
    if (vb.norm() == 0.0) {
        throw ZeroVector(space.vocab.term(jb));
    }
    return cosine_similarity(va, vb);
}

TextVector text_vector(const SemanticSpace& space, std::string_view text) {
    TextVector out;
    out.vector = RealVector::Zero(space.dim());
    for (const std::string& token : tokenize(clean_text(text))) {
        ++out.total_tokens;
        if (auto j = space.vocab.index_of(token)) {
            out.vector += space.term_vectors.row(*j).transpose();
            ++out.known_tokens;
        } else {
            out.oov_tokens.push_back(token);
        }
    }
    if (out.known_tokens == 0) {
        throw NoKnownWords("text");
    }
    out.vector /= static_cast<Real>(out.known_tokens);
    return out;
}

Real costring(const SemanticSpace& space, std::string_view text_a, std::string_view text_b) {
    RealVector va, vb;
    try {
        va = text_vector(space, text_a).vector;
    } catch (const NoKnownWords&) {
        throw NoKnownWords("first text");
    }
    try {
        vb = text_vector(space, text_b).vector;
    } catch (const NoKnownWords&) {
        throw NoKnownWords("second text");
    }
    if (va.norm() == 0.0 || vb.norm() == 0.0) {
        throw ZeroVector("<text average>");
    }
    return cosine_similarity(va, vb);
}

MahalanobisContext build_mahalanobis_context(const SemanticSpace& space, Real ridge) {
    const Index p = space.n_terms();
    const Index k = space.dim();
    if (p < 2) {
        throw UsageError("Mahalanobis context needs at least two term vectors");
    }

    const RealMatrix centered =
        space.term_vectors.rowwise() - space.term_vectors.colwise().mean();
    RealMatrix cov = (centered.transpose() * centered) / static_cast<Real>(p - 1);
    if (ridge < 0.0) {
        ridge = 1e-8 * cov.trace() / static_cast<Real>(k);
    }
    cov.diagonal().array() += ridge;

    Eigen::LLT<RealMatrix> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite();
    }
    // LLT can slip through on a numerically singular covariance; reject
    // factors whose pivots collapse relative to the largest one.
    const RealVector pivots = llt.matrixLLT().diagonal();
    if (pivots.minCoeff() <=
        100.0 * std::sqrt(std::numeric_limits<Real>::epsilon()) * pivots.maxCoeff()) {
        throw NotPositiveDefinite();
    }
    MahalanobisContext ctx;
    ctx.inv_cov = llt.solve(RealMatrix::Identity(k, k));
    ctx.inv_cov = ((ctx.inv_cov + ctx.inv_cov.transpose()) / 2.0).eval();
    ctx.ridge = ridge;

    // The inverse must itself be PD for distance evaluation.
    Eigen::LLT<RealMatrix> check(ctx.inv_cov);
    if (check.info() != Eigen::Success) {
        throw NotPositiveDefinite();
    }
    return ctx;
}

NeighborList neighbors(const SemanticSpace& space, std::string_view term, Index n,
                       Metric metric, const MahalanobisContext* context) {
    const Index j = lookup(space, term);
    const RealVector query = space.term_vectors.row(j).transpose();
    return scan(space, query, n, metric, context, j);
}

NeighborList neighbors(const SemanticSpace& space, const RealVector& query, Index n,
                       Metric metric, const MahalanobisContext* context) {
    return scan(space, query, n, metric, context, std::nullopt);
}

std::vector<Point2D> project_2d(const SemanticSpace& space,
                                const std::vector<std::string>& terms) {
    if (space.dim() < 2) {
        throw DimensionMismatch("projection needs a space with k >= 2");
    }
    std::vector<Point2D> points;
    points.reserve(terms.size());
    for (const std::string& term : terms) {
        const Index j = lookup(space, term);
        points.push_back({space.vocab.term(j), space.term_vectors(j, 0),
                          space.term_vectors(j, 1)});
    }
    return points;
}

std::string neighbors_to_csv(const NeighborList& list) {
    std::string out = "rank,term,score\n";
    char line[256];
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%s,%.17g\n", i + 1,
                      list.entries[i].term.c_str(), list.entries[i].score);
        out += line;
    }
    return out;
}

std::string projection_to_csv(const std::vector<Point2D>& points) {
    std::string out = "term,x,y\n";
    char line[256];
    for (const Point2D& p : points) {
        std::snprintf(line, sizeof(line), "%s,%.17g,%.17g\n", p.term.c_str(), p.x, p.y);
        out += line;
    }
    return out;
}

}  // namespace semspace
