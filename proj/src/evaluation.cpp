#include "gnmf/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace gnmf {

using ordered_json = nlohmann::ordered_json;

TopicTable top_keywords(const NonnegMatrix& A, const Vocabulary& vocab, std::size_t top_k,
                        std::vector<std::string>* warnings) {
    if (A.rows() != vocab.size()) {
        throw ShapeError("top_keywords: A is " + A.shape_str() + " but the vocabulary has " +
                         std::to_string(vocab.size()) + " terms");
    }
    if (top_k == 0) throw ConfigError("top_keywords: top_k must be at least 1");
    const std::size_t m = A.rows();
    const std::size_t depth = std::min(top_k, m);

    TopicTable table;
    table.topics.resize(A.cols());
    std::vector<std::size_t> order(m);
    for (std::size_t t = 0; t < A.cols(); ++t) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + depth, order.end(),
                          [&](std::size_t a, std::size_t b) {
                              if (A(a, t) != A(b, t)) return A(a, t) > A(b, t);
                              return a < b;
                          });
        auto& entries = table.topics[t];
        entries.reserve(depth);
        for (std::size_t r = 0; r < depth; ++r) {
            entries.emplace_back(vocab.terms[order[r]], A(order[r], t));
        }
        if (warnings != nullptr && entries.front().second == 0.0) {
            warnings->push_back("topic " + std::to_string(t + 1) +
                                " has an all-zero dictionary column");
        }
    }
    return table;
}

SeedAssignment assign_seeds(const NonnegMatrix& B, std::vector<std::string>* warnings) {
    SeedAssignment out;
    out.assigned_topic.reserve(B.cols());
    out.winning_value.reserve(B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < B.rows(); ++i) {
            if (B(i, j) > B(best, j)) best = i;
        }
        if (warnings != nullptr && B(best, j) == 0.0) {
            warnings->push_back("seed topic " + std::to_string(j + 1) +
                                " has an all-zero supervision column; assigned to topic 1");
        }
        out.assigned_topic.push_back(best);
        out.winning_value.push_back(B(best, j));
    }
    return out;
}

std::vector<double> document_scores(const NonnegMatrix& S, std::size_t topic) {
    if (topic >= S.rows()) {
        throw EvalError("document_scores: topic index " + std::to_string(topic) +
                        " out of range for " + std::to_string(S.rows()) + " topics");
    }
    std::vector<double> scores(S.cols());
    for (std::size_t j = 0; j < S.cols(); ++j) scores[j] = S(topic, j);
    return scores;
}

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size()) {
        throw EvalError("roc_auc: " + std::to_string(scores.size()) + " scores vs " +
                        std::to_string(labels.size()) + " labels");
    }
    std::size_t pos = 0;
    for (bool l : labels) pos += l ? 1 : 0;
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) {
        throw EvalError("roc_auc: need at least one positive and one negative label");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Walk tie groups in descending score order. A positive beats every
    // negative ranked strictly below its group and half-scores against the
    // negatives inside it; integer counts keep this exact.
    unsigned long long wins = 0;
    unsigned long long ties = 0;
    std::size_t negs_seen = 0;
    std::size_t tp = 0, fp = 0;

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::size_t group_pos = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            group_pos += labels[order[j]] ? 1 : 0;
            ++j;
        }
        const std::size_t group_neg = (j - i) - group_pos;
        negs_seen += group_neg;
        wins += static_cast<unsigned long long>(group_pos) * (neg - negs_seen);
        ties += static_cast<unsigned long long>(group_pos) * group_neg;

        tp += group_pos;
        fp += group_neg;
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                                  static_cast<double>(tp) / static_cast<double>(pos));
        i = j;
    }

    curve.auc = (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) /
                (static_cast<double>(pos) * static_cast<double>(neg));
    return curve;
}

std::string report_to_json(const EvaluationReport& report) {
    ordered_json doc;

    doc["topics"] = ordered_json::array();
    for (std::size_t t = 0; t < report.topic_table.topics.size(); ++t) {
        ordered_json topic;
        topic["index"] = t + 1;
        topic["keywords"] = ordered_json::array();
        for (const auto& [term, weight] : report.topic_table.topics[t]) {
            topic["keywords"].push_back({{"term", term}, {"weight", weight}});
        }
        doc["topics"].push_back(std::move(topic));
    }

    doc["assignments"] = ordered_json::array();
    for (std::size_t j = 0; j < report.assignments.assigned_topic.size(); ++j) {
        ordered_json a;
        a["seed_topic"] = j < report.seed_names.size() ? report.seed_names[j]
                                                       : std::to_string(j + 1);
        a["topic"] = report.assignments.assigned_topic[j] + 1;  // 1-based for reading
        a["value"] = report.assignments.winning_value[j];
        doc["assignments"].push_back(std::move(a));
    }

    doc["class_evals"] = ordered_json::array();
    for (const ClassEval& ce : report.class_evals) {
        ordered_json e;
        e["seed_topic"] = ce.seed_topic;
        e["positive_class"] = ce.positive_class;
        e["topic"] = ce.topic_index + 1;
        e["auc"] = ce.roc.auc;
        e["roc"] = ordered_json::array();
        for (const auto& [fpr, tpr] : ce.roc.points) {
            e["roc"].push_back({fpr, tpr});
        }
        doc["class_evals"].push_back(std::move(e));
    }

    doc["warnings"] = report.warnings;
    return doc.dump(2) + "\n";
}

std::string topic_table_text(const TopicTable& table) {
    const std::size_t k = table.topics.size();
    std::vector<std::size_t> width(k);
    std::size_t depth = 0;
    for (std::size_t t = 0; t < k; ++t) {
        width[t] = std::string("Topic ").size() + std::to_string(t + 1).size();
        for (const auto& [term, weight] : table.topics[t]) {
            width[t] = std::max(width[t], term.size());
        }
        depth = std::max(depth, table.topics[t].size());
    }

    std::ostringstream out;
    auto emit_row = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t t = 0; t < k; ++t) {
            if (t > 0) line += "  ";
            line += cells[t];
            if (cells[t].size() < width[t]) line.append(width[t] - cells[t].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    };

    std::vector<std::string> header(k);
    std::vector<std::string> rule(k);
    for (std::size_t t = 0; t < k; ++t) {
        header[t] = "Topic " + std::to_string(t + 1);
        rule[t] = std::string(width[t], '-');
    }
    emit_row(header);
    emit_row(rule);
    for (std::size_t r = 0; r < depth; ++r) {
        std::vector<std::string> cells(k);
        for (std::size_t t = 0; t < k; ++t) {
            if (r < table.topics[t].size()) cells[t] = table.topics[t][r].first;
        }
        emit_row(cells);
    }
    return out.str();
}

} // namespace gnmf
