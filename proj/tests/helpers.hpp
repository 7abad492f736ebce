#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "semspace/query.hpp"
#include "semspace/space.hpp"
#include "semspace/types.hpp"

// Shared fixtures: temp directories, deterministic random matrices and
// spaces, a codepoint fuzzer for the cleaning property tests, and the
// naive neighbor scan used as the exactness oracle.

namespace testutil {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("semspace_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline semspace::RealMatrix random_dense(semspace::Index rows, semspace::Index cols,
                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    semspace::RealMatrix m(rows, cols);
    for (semspace::Index i = 0; i < rows; ++i) {
        for (semspace::Index j = 0; j < cols; ++j) {
            m(i, j) = dist(rng);
        }
    }
    return m;
}

inline semspace::RealSparse random_sparse(semspace::Index rows, semspace::Index cols,
                                          double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::vector<Eigen::Triplet<double>> triplets;
    for (semspace::Index i = 0; i < rows; ++i) {
        for (semspace::Index j = 0; j < cols; ++j) {
            if (coin(rng) < density) {
                triplets.emplace_back(i, j, value(rng));
            }
        }
    }
    if (triplets.empty()) {
        triplets.emplace_back(0, 0, 1.0);
    }
    semspace::RealSparse m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

inline semspace::SemanticSpace make_space(const std::vector<std::string>& terms,
                                          const semspace::RealMatrix& vectors) {
    semspace::SemanticSpace space;
    std::vector<std::int64_t> ones(terms.size(), 1);
    space.vocab = semspace::Vocabulary(terms, ones, ones);
    space.term_vectors = vectors;
    space.sigma = semspace::RealVector::Ones(vectors.cols());
    space.meta.k = vectors.cols();
    space.meta.n_docs = 1;
    return space;
}

inline semspace::SemanticSpace random_space(semspace::Index p, semspace::Index k,
                                            std::uint64_t seed) {
    std::vector<std::string> terms;
    terms.reserve(static_cast<std::size_t>(p));
    for (semspace::Index j = 0; j < p; ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "t%04d", static_cast<int>(j));
        terms.push_back(buf);
    }
    return make_space(terms, random_dense(p, k, seed));
}

// Independent reference scan: plain loops, full sort, same tie rule as the
// production path. Kept free of semspace::neighbors internals on purpose.
inline std::vector<std::string> brute_force_neighbors(
    const semspace::SemanticSpace& space, const std::string& term, semspace::Index n,
    semspace::Metric metric, const semspace::RealMatrix* inv_cov = nullptr) {
    using semspace::Index;
    const Index q = *space.vocab.index_of(term);
    std::vector<std::pair<double, std::string>> scored;
    for (Index j = 0; j < space.n_terms(); ++j) {
        if (j == q) {
            continue;
        }
        double score = 0;
        double dot = 0, nq = 0, nj = 0;
        switch (metric) {
            case semspace::Metric::Cosine: {
                for (Index d = 0; d < space.dim(); ++d) {
                    dot += space.term_vectors(q, d) * space.term_vectors(j, d);
                    nq += space.term_vectors(q, d) * space.term_vectors(q, d);
                    nj += space.term_vectors(j, d) * space.term_vectors(j, d);
                }
                if (nj == 0) {
                    continue;
                }
                score = -(dot / std::sqrt(nq * nj));  // negate: sort ascending
                break;
            }
            case semspace::Metric::Euclidean: {
                for (Index d = 0; d < space.dim(); ++d) {
                    const double diff = space.term_vectors(q, d) - space.term_vectors(j, d);
                    score += diff * diff;
                }
                score = std::sqrt(score);
                break;
            }
            case semspace::Metric::Mahalanobis: {
                std::vector<double> diff(static_cast<std::size_t>(space.dim()));
                for (Index d = 0; d < space.dim(); ++d) {
                    diff[static_cast<std::size_t>(d)] =
                        space.term_vectors(q, d) - space.term_vectors(j, d);
                }
                for (Index r = 0; r < space.dim(); ++r) {
                    for (Index c = 0; c < space.dim(); ++c) {
                        score += diff[static_cast<std::size_t>(r)] * (*inv_cov)(r, c) *
                                 diff[static_cast<std::size_t>(c)];
                    }
                }
                score = std::sqrt(std::max(score, 0.0));
                break;
            }
        }
        scored.emplace_back(score, space.vocab.term(j));
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (Index i = 0; i < n && i < static_cast<Index>(scored.size()); ++i) {
        out.push_back(scored[static_cast<std::size_t>(i)].second);
    }
    return out;
}

inline std::vector<std::string> terms_of(const semspace::NeighborList& list) {
    std::vector<std::string> out;
    for (const auto& e : list.entries) {
        out.push_back(e.term);
    }
    return out;
}

// Random scalar values drawn over letters, digits, punctuation, marks and
// assorted symbol planes; exercises the cleaning rules far from ASCII.
inline std::string random_utf8(std::mt19937_64& rng, int length) {
    static const std::pair<char32_t, char32_t> kBlocks[] = {
        {0x0020, 0x007E}, {0x00A0, 0x024F}, {0x0300, 0x036F}, {0x0370, 0x03FF},
        {0x0400, 0x04FF}, {0x1E00, 0x1EFF}, {0x2000, 0x206F}, {0x20A0, 0x20BF},
        {0x0600, 0x06FF}, {0x4E00, 0x4E80}, {0x1F300, 0x1F340},
    };
    std::u32string cps;
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kBlocks) - 1);
    for (int i = 0; i < length; ++i) {
        const auto& block = kBlocks[pick(rng)];
        std::uniform_int_distribution<char32_t> inside(block.first, block.second);
        cps.push_back(inside(rng));
    }
    std::string out;
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

}  // namespace testutil
