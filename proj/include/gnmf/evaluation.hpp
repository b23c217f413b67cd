#ifndef GNMF_EVALUATION_HPP
#define GNMF_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gnmf/matrix.hpp"
#include "gnmf/text.hpp"

namespace gnmf {

/// Per-topic ranked keyword lists taken from the columns of A.
struct TopicTable {
    // topics[t] is a list of (term, weight) pairs, weights nonincreasing.
    std::vector<std::vector<std::pair<std::string, double>>> topics;
};

/// Seed topic j is matched to learned topic assigned_topic[j], the argmax row
/// of B's column j (0-based; ties go to the lowest topic index).
struct SeedAssignment {
    std::vector<std::size_t> assigned_topic;
    std::vector<double> winning_value;
};

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (FPR, TPR), (0,0) .. (1,1)
    double auc = 0.0;
};

struct ClassEval {
    std::string seed_topic;
    std::string positive_class;
    std::size_t topic_index = 0;  // learned topic the seed was assigned to
    RocCurve roc;
};

struct EvaluationReport {
    TopicTable topic_table;
    SeedAssignment assignments;            // empty for unsupervised runs
    std::vector<std::string> seed_names;   // parallel to assignments
    std::vector<ClassEval> class_evals;
    std::vector<std::string> warnings;
};

// Top `top_k` terms per column of A by descending weight, ties broken by
// vocabulary index. top_k larger than the vocabulary is clamped. An all-zero
// column degenerates to the first top_k vocabulary terms (warned).
TopicTable top_keywords(const NonnegMatrix& A, const Vocabulary& vocab, std::size_t top_k,
                        std::vector<std::string>* warnings = nullptr);

SeedAssignment assign_seeds(const NonnegMatrix& B, std::vector<std::string>* warnings = nullptr);

// Row `topic` of S: the per-document scores for that topic. 0-based.
std::vector<double> document_scores(const NonnegMatrix& S, std::size_t topic);

// ROC curve from thresholding at every distinct score, and AUC as the
// Mann-Whitney statistic: (#(pos,neg) pairs with pos scored higher, ties
// counted 1/2) / (P*N). Throws EvalError unless both label values occur.
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

// Report serializations: JSON document and an aligned plain-text topic table.
std::string report_to_json(const EvaluationReport& report);
std::string topic_table_text(const TopicTable& table);

} // namespace gnmf

#endif
