#ifndef GNMF_TEXT_HPP
#define GNMF_TEXT_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gnmf/matrix.hpp"

namespace gnmf {

struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> label;
};

struct Corpus {
    std::vector<Document> documents;  // doc ids unique, at least one document
};

/// Token <-> index bijection, ordered by descending document frequency with
/// lexicographic tie-break.
struct Vocabulary {
    std::vector<std::string> terms;
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const { return terms.size(); }
    bool contains(const std::string& term) const { return index.count(term) > 0; }
};

struct SeedTopic {
    std::string name;
    std::vector<std::pair<std::string, double>> entries;  // (term, weight > 0)
};

struct SeedMatrix {
    NonnegMatrix Y;                       // m x c, column j realizes seed topic j
    std::vector<std::string> topic_names; // length c

    SeedMatrix() : Y(1, 1) {}
    SeedMatrix(NonnegMatrix y, std::vector<std::string> names)
        : Y(std::move(y)), topic_names(std::move(names)) {}
};

// Lowercases, splits on non-alphanumeric boundaries, then drops tokens
// shorter than 3 characters, tokens in the built-in English stopword list,
// and pure numerals.
std::vector<std::string> tokenize(const std::string& text);

bool is_stopword(const std::string& token);

// Terms appearing in at least min_df documents and at most
// max_df_frac * n documents. Throws PipelineError if nothing survives.
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df, double max_df_frac);

// TF-IDF term-document matrix, m x n:
//   X[i,j] = tf(i,j) * idf(i),  idf(i) = ln((1 + n) / (1 + df(i))) + 1
// with every column scaled to unit Euclidean norm (all-zero columns kept
// as zeros).
NonnegMatrix build_matrix(const Corpus& corpus, const Vocabulary& vocab);

// Column-stacks seed topics into Y (m x c). Seed terms missing from the
// vocabulary are dropped with a warning appended to `warnings`; a topic with
// no in-vocabulary terms at all is a ConfigError. Also warns when a column's
// nonzero count exceeds 5% of the vocabulary (seed topics are expected to be
// very sparse).
SeedMatrix build_seed_matrix(const std::vector<SeedTopic>& topics, const Vocabulary& vocab,
                             std::vector<std::string>* warnings = nullptr);

// Corpus input format A: directory tree root/<class_label>/<doc_id>.txt.
Corpus load_corpus_dir(const std::string& root);

// Corpus input format B: UTF-8 CSV with header doc_id,text,label
// (label may be empty). Quoted fields may contain commas and newlines.
Corpus load_corpus_csv(const std::string& path);

// Picks the loader from the path: directory -> format A, file -> format B.
Corpus load_corpus(const std::string& path, const std::string& format = "auto");

// Seed-topic file: one topic per line,
//   topic_name: term[:weight], term[:weight], ...
// Weights default to 1. Blank lines and lines starting with '#' are skipped.
std::vector<SeedTopic> load_seed_topics(const std::string& path);

} // namespace gnmf

#endif
