#include "semspace/dtm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace semspace {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> doc_freq,
                       std::vector<std::int64_t> coll_freq)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), coll_freq_(std::move(coll_freq)) {
    if (terms_.size() != doc_freq_.size() || terms_.size() != coll_freq_.size()) {
        throw DimensionMismatch("vocabulary term/frequency lengths differ");
    }
    index_.reserve(terms_.size());
    for (std::size_t j = 0; j < terms_.size(); ++j) {
        index_.emplace(terms_[j], static_cast<Index>(j));
    }
}

std::optional<Index> Vocabulary::index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string to_string(MatrixMode mode) {
    return mode == MatrixMode::Frequency ? "frequency" : "binary";
}

std::string to_string(WeightingScheme scheme) {
    return scheme == WeightingScheme::None ? "none" : "log_entropy";
}

MatrixMode matrix_mode_from_string(std::string_view name) {
    if (name == "frequency") {
        return MatrixMode::Frequency;
    }
    if (name == "binary") {
        return MatrixMode::Binary;
    }
    throw UsageError("unknown matrix mode: '" + std::string(name) +
                     "' (expected frequency or binary)");
}

WeightingScheme weighting_from_string(std::string_view name) {
    if (name == "none") {
        return WeightingScheme::None;
    }
    if (name == "log_entropy") {
        return WeightingScheme::LogEntropy;
    }
    throw UsageError("unknown weighting scheme: '" + std::string(name) +
                     "' (expected none or log_entropy)");
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t space = text.find(' ', pos);
        const std::size_t end = (space == std::string_view::npos) ? text.size() : space;
        if (end > pos) {
            tokens.emplace_back(text.substr(pos, end - pos));
        }
        pos = end + 1;
    }
    return tokens;
}

Vocabulary build_vocabulary(DocumentStream& corpus, std::int64_t min_doc_freq,
                            double max_doc_ratio) {
    if (min_doc_freq < 1) {
        throw UsageError("min_doc_freq must be >= 1");
    }
    if (!(max_doc_ratio > 0.0) || max_doc_ratio > 1.0) {
        throw UsageError("max_doc_ratio must be in (0, 1]");
    }

    struct Counts {
        std::int64_t doc_freq = 0;
        std::int64_t coll_freq = 0;
        std::int64_t last_doc = -1;
    };
    std::unordered_map<std::string, Counts> counts;
    std::int64_t n_docs = 0;
    while (auto doc = corpus.next()) {
        const std::int64_t doc_index = n_docs++;
        for (std::string& token : tokenize(doc->text)) {
            Counts& c = counts[std::move(token)];
            c.coll_freq += 1;
            if (c.last_doc != doc_index) {
                c.last_doc = doc_index;
                c.doc_freq += 1;
            }
        }
    }
    if (n_docs == 0) {
        throw EmptyCorpus();
    }

    std::vector<std::string> terms;
    terms.reserve(counts.size());
    for (const auto& [term, c] : counts) {
        const double ratio = static_cast<double>(c.doc_freq) / static_cast<double>(n_docs);
        if (c.doc_freq >= min_doc_freq && ratio <= max_doc_ratio) {
            terms.push_back(term);
        }
    }
    std::sort(terms.begin(), terms.end());

    std::vector<std::int64_t> doc_freq(terms.size());
    std::vector<std::int64_t> coll_freq(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const Counts& c = counts.at(terms[j]);
        doc_freq[j] = c.doc_freq;
        coll_freq[j] = c.coll_freq;
    }
    return Vocabulary(std::move(terms), std::move(doc_freq), std::move(coll_freq));
}

DocTermMatrix build_matrix(DocumentStream& corpus, const Vocabulary& vocab, MatrixMode mode) {
    if (vocab.size() == 0) {
        throw EmptyVocabulary();
    }

    DocTermMatrix out;
    out.mode = mode;

    std::vector<Eigen::Triplet<Real>> triplets;
    std::unordered_map<Index, std::int64_t> row_counts;
    Index row = 0;
    while (auto doc = corpus.next()) {
        row_counts.clear();
        for (const std::string& token : tokenize(doc->text)) {
            if (auto j = vocab.index_of(token)) {
                row_counts[*j] += 1;
            }
        }
        for (const auto& [col, count] : row_counts) {
            const Real value =
                mode == MatrixMode::Binary ? 1.0 : static_cast<Real>(count);
            triplets.emplace_back(row, col, value);
        }
        out.doc_ids.push_back(std::move(doc->doc_id));
        ++row;
    }

    out.values.resize(row, vocab.size());
    out.values.setFromTriplets(triplets.begin(), triplets.end());
    out.values.makeCompressed();
    return out;
}

RealVector log_entropy_global_weights(const DocTermMatrix& m) {
    const Index n = m.n_docs();
    if (n <= 1) {
        throw SingleDocumentCorpus();
    }
    const double log_n = std::log(static_cast<double>(n));

    RealVector g = RealVector::Ones(m.n_terms());
    for (Index col = 0; col < m.values.outerSize(); ++col) {
        double coll_freq = 0.0;
        for (RealSparse::InnerIterator it(m.values, col); it; ++it) {
            coll_freq += it.value();
        }
        if (coll_freq <= 0.0) {
            continue;  // unused vocabulary column: entropy term vanishes
        }
        double entropy = 0.0;
        for (RealSparse::InnerIterator it(m.values, col); it; ++it) {
            const double p = it.value() / coll_freq;
            entropy += p * std::log(p);
        }
        g[col] = std::clamp(1.0 + entropy / log_n, 0.0, 1.0);
    }
    return g;
}

DocTermMatrix apply_weighting(const DocTermMatrix& m, WeightingScheme scheme) {
    if (m.weighting != WeightingScheme::None) {
        throw AlreadyWeighted();
    }
    DocTermMatrix out;
    out.doc_ids = m.doc_ids;
    out.mode = m.mode;
    out.weighting = scheme;
    if (scheme == WeightingScheme::None) {
        out.values = m.values;
        return out;
    }

    const RealVector g = log_entropy_global_weights(m);
    out.values = m.values;
    for (Index col = 0; col < out.values.outerSize(); ++col) {
        for (RealSparse::InnerIterator it(out.values, col); it; ++it) {
            it.valueRef() = std::log1p(it.value()) * g[col];
        }
    }
    // Columns with g_j = 0 now hold stored zeros; restore canonical form.
    out.values.prune(0.0, 0.0);
    out.values.makeCompressed();
    return out;
}

void export_triplets(const DocTermMatrix& m, const Vocabulary& vocab,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    std::vector<Eigen::Triplet<Real>> triplets;
    triplets.reserve(static_cast<std::size_t>(m.nonzeros()));
    for (Index col = 0; col < m.values.outerSize(); ++col) {
        for (RealSparse::InnerIterator it(m.values, col); it; ++it) {
            triplets.emplace_back(it.row(), it.col(), it.value());
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
        return std::pair(a.row(), a.col()) < std::pair(b.row(), b.col());
    });
    char line[128];
    for (const auto& t : triplets) {
        std::snprintf(line, sizeof(line), "%lld\t%lld\t%.17g\n", static_cast<long long>(t.row()),
                      static_cast<long long>(t.col()), t.value());
        out << line;
    }
    out.close();

    nlohmann::json sidecar{
        {"n_docs", m.n_docs()},
        {"n_terms", m.n_terms()},
        {"nonzeros", m.nonzeros()},
        {"mode", to_string(m.mode)},
        {"weighting", to_string(m.weighting)},
        {"order", "column-major"},
        {"terms", vocab.terms()},
    };
    std::ofstream meta(path.string() + ".meta.json");
    if (!meta) {
        throw IoError("cannot write " + path.string() + ".meta.json");
    }
    meta << sidecar.dump(2) << '\n';
}

}  // namespace semspace
