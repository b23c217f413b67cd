#include "gnmf/text.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace fs = std::filesystem;

namespace gnmf {

namespace {

// English stopword list, stored as the bare alphanumeric forms the tokenizer
// can actually produce: contractions split at the apostrophe ("wasn't" ->
// "wasn") and anything shorter than 3 characters is filtered by the length
// rule before this list is consulted.
const std::unordered_set<std::string>& stopword_set() {
    static const std::unordered_set<std::string> kStopwords = {
        "about", "above", "after", "again", "against", "ain", "all", "and",
        "any", "are", "aren", "because", "been", "before", "being", "below",
        "between", "both", "but", "can", "couldn", "did", "didn", "does",
        "doesn", "doing", "don", "down", "during", "each", "few", "for",
        "from", "further", "had", "hadn", "has", "hasn", "have", "haven",
        "having", "her", "here", "hers", "herself", "him", "himself", "his",
        "how", "into", "isn", "its", "itself", "just", "mightn", "more",
        "most", "mustn", "myself", "needn", "nor", "not", "now", "off",
        "once", "only", "other", "our", "ours", "ourselves", "out", "over",
        "own", "same", "shan", "she", "should", "shouldn", "some", "such",
        "than", "that", "the", "their", "theirs", "them", "themselves",
        "then", "there", "these", "they", "this", "those", "through", "too",
        "under", "until", "very", "was", "wasn", "were", "weren", "what",
        "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "won", "wouldn", "you", "your", "yours", "yourself",
        "yourselves",
    };
    return kStopwords;
}

bool is_token_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower_ascii(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

bool is_pure_numeral(const std::string& token) {
    return std::all_of(token.begin(), token.end(),
                       [](unsigned char c) { return c >= '0' && c <= '9'; });
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower_ascii(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) out.push_back(to_lower_ascii(c));
    return out;
}

// Document frequency per vocabulary term over the corpus.
std::vector<std::size_t> vocab_dfs(const Corpus& corpus, const Vocabulary& vocab) {
    std::vector<std::size_t> df(vocab.size(), 0);
    std::vector<bool> seen(vocab.size());
    for (const Document& doc : corpus.documents) {
        std::fill(seen.begin(), seen.end(), false);
        for (const std::string& tok : tokenize(doc.text)) {
            auto it = vocab.index.find(tok);
            if (it != vocab.index.end()) seen[it->second] = true;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i]) ++df[i];
    }
    return df;
}

void check_corpus(const Corpus& corpus, const std::string& where) {
    if (corpus.documents.empty()) throw PipelineError(where + ": corpus has no documents");
}

} // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (current.size() >= 3 && !is_stopword(current) && !is_pure_numeral(current)) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            current.push_back(to_lower_ascii(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

bool is_stopword(const std::string& token) {
    return stopword_set().count(token) > 0;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df, double max_df_frac) {
    check_corpus(corpus, "build_vocabulary");
    if (!(max_df_frac > 0.0) || max_df_frac > 1.0) {
        throw ConfigError("build_vocabulary: max_df_frac must be in (0, 1], got " +
                          std::to_string(max_df_frac));
    }

    std::unordered_map<std::string, std::size_t> df;
    for (const Document& doc : corpus.documents) {
        std::unordered_set<std::string> seen;
        for (const std::string& tok : tokenize(doc.text)) seen.insert(tok);
        for (const std::string& tok : seen) ++df[tok];
    }

    const double max_df = max_df_frac * static_cast<double>(corpus.documents.size());
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [term, count] : df) {
        if (count >= min_df && static_cast<double>(count) <= max_df) {
            kept.emplace_back(term, count);
        }
    }
    if (kept.empty()) {
        throw PipelineError("build_vocabulary: no term satisfies min_df=" +
                            std::to_string(min_df) + ", max_df_frac=" +
                            std::to_string(max_df_frac));
    }

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    vocab.terms.reserve(kept.size());
    vocab.index.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        vocab.terms.push_back(kept[i].first);
        vocab.index.emplace(kept[i].first, i);
    }
    return vocab;
}

NonnegMatrix build_matrix(const Corpus& corpus, const Vocabulary& vocab) {
    check_corpus(corpus, "build_matrix");
    if (vocab.size() == 0) throw PipelineError("build_matrix: empty vocabulary");

    const std::size_t m = vocab.size();
    const std::size_t n = corpus.documents.size();
    const std::vector<std::size_t> df = vocab_dfs(corpus, vocab);

    std::vector<double> idf(m);
    for (std::size_t i = 0; i < m; ++i) {
        idf[i] = std::log((1.0 + static_cast<double>(n)) /
                          (1.0 + static_cast<double>(df[i]))) + 1.0;
    }

    std::vector<double> values(m * n, 0.0);
    std::unordered_map<std::size_t, double> tf;
    for (std::size_t j = 0; j < n; ++j) {
        tf.clear();
        for (const std::string& tok : tokenize(corpus.documents[j].text)) {
            auto it = vocab.index.find(tok);
            if (it != vocab.index.end()) tf[it->second] += 1.0;
        }
        double norm_sq = 0.0;
        for (const auto& [i, count] : tf) {
            const double v = count * idf[i];
            values[i * n + j] = v;
            norm_sq += v * v;
        }
        if (norm_sq > 0.0) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (const auto& [i, count] : tf) values[i * n + j] *= inv;
        }
    }
    return NonnegMatrix(m, n, std::move(values));
}

SeedMatrix build_seed_matrix(const std::vector<SeedTopic>& topics, const Vocabulary& vocab,
                             std::vector<std::string>* warnings) {
    if (topics.empty()) throw ConfigError("build_seed_matrix: no seed topics given");
    if (vocab.size() == 0) throw PipelineError("build_seed_matrix: empty vocabulary");

    const std::size_t m = vocab.size();
    const std::size_t c = topics.size();
    std::vector<double> values(m * c, 0.0);
    std::vector<std::string> names;
    names.reserve(c);

    for (std::size_t j = 0; j < c; ++j) {
        const SeedTopic& topic = topics[j];
        if (topic.entries.empty()) {
            throw ConfigError("build_seed_matrix: seed topic '" + topic.name + "' has no terms");
        }
        std::unordered_set<std::string> seen_terms;
        std::size_t nonzeros = 0;
        std::vector<std::string> dropped;
        for (const auto& [term, weight] : topic.entries) {
            if (!(weight > 0.0)) {
                throw ConfigError("build_seed_matrix: seed term '" + term + "' in topic '" +
                                  topic.name + "' has nonpositive weight");
            }
            if (!seen_terms.insert(term).second) {
                throw ConfigError("build_seed_matrix: seed term '" + term +
                                  "' repeated in topic '" + topic.name + "'");
            }
            auto it = vocab.index.find(term);
            if (it == vocab.index.end()) {
                dropped.push_back(term);
                continue;
            }
            values[it->second * c + j] = weight;
            ++nonzeros;
        }
        if (nonzeros == 0) {
            throw ConfigError("build_seed_matrix: seed topic '" + topic.name +
                              "' has no in-vocabulary terms");
        }
        if (warnings != nullptr) {
            for (const std::string& term : dropped) {
                warnings->push_back("seed term '" + term + "' in topic '" + topic.name +
                                    "' is not in the vocabulary; dropped");
            }
            if (static_cast<double>(nonzeros) > 0.05 * static_cast<double>(m)) {
                warnings->push_back("seed topic '" + topic.name + "' touches " +
                                    std::to_string(nonzeros) + " of " + std::to_string(m) +
                                    " vocabulary terms; seed topics are expected to be sparse");
            }
        }
        names.push_back(topic.name);
    }
    return SeedMatrix(NonnegMatrix(m, c, std::move(values)), std::move(names));
}

Corpus load_corpus_dir(const std::string& root) {
    if (!fs::is_directory(root)) {
        throw PipelineError("load_corpus_dir: not a directory: " + root);
    }

    std::vector<std::string> classes;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) classes.push_back(entry.path().filename().string());
    }
    std::sort(classes.begin(), classes.end());

    Corpus corpus;
    std::unordered_set<std::string> ids;
    for (const std::string& cls : classes) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(fs::path(root) / cls)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            std::ifstream in(file, std::ios::binary);
            if (!in) throw PipelineError("load_corpus_dir: cannot read " + file.string());
            std::ostringstream text;
            text << in.rdbuf();
            std::string id = file.stem().string();
            if (!ids.insert(id).second) {
                throw PipelineError("load_corpus_dir: duplicate doc_id '" + id + "'");
            }
            corpus.documents.push_back(Document{std::move(id), text.str(), cls});
        }
    }
    check_corpus(corpus, "load_corpus_dir");
    return corpus;
}

namespace {

// RFC-4180-style CSV: fields separated by commas, quoted fields may contain
// commas, newlines and doubled quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& content,
                                                const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char ch = content[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                row_started = true;
                break;
            case ',':
                end_field();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_started || !field.empty() || !row.empty()) end_row();
                break;
            default:
                field.push_back(ch);
                row_started = true;
        }
    }
    if (in_quotes) throw PipelineError("load_corpus_csv: unterminated quote in " + path);
    if (row_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

} // namespace

Corpus load_corpus_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("load_corpus_csv: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();

    const auto rows = parse_csv(buf.str(), path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"doc_id", "text", "label"}) {
        throw PipelineError("load_corpus_csv: " + path +
                            " must start with header doc_id,text,label");
    }

    Corpus corpus;
    std::unordered_set<std::string> ids;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 3) {
            throw PipelineError("load_corpus_csv: row " + std::to_string(r + 1) + " of " +
                                path + " has " + std::to_string(rows[r].size()) +
                                " fields, expected 3");
        }
        const std::string& id = rows[r][0];
        if (id.empty()) {
            throw PipelineError("load_corpus_csv: row " + std::to_string(r + 1) + " of " +
                                path + " has an empty doc_id");
        }
        if (!ids.insert(id).second) {
            throw PipelineError("load_corpus_csv: duplicate doc_id '" + id + "'");
        }
        std::optional<std::string> label;
        if (!rows[r][2].empty()) label = rows[r][2];
        corpus.documents.push_back(Document{id, rows[r][1], std::move(label)});
    }
    check_corpus(corpus, "load_corpus_csv");
    return corpus;
}

Corpus load_corpus(const std::string& path, const std::string& format) {
    if (format == "dir") return load_corpus_dir(path);
    if (format == "csv") return load_corpus_csv(path);
    if (format == "auto") {
        return fs::is_directory(path) ? load_corpus_dir(path) : load_corpus_csv(path);
    }
    throw ConfigError("load_corpus: unknown format '" + format + "' (want auto, dir or csv)");
}

std::vector<SeedTopic> load_seed_topics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PipelineError("load_seed_topics: cannot read " + path);

    std::vector<SeedTopic> topics;
    std::unordered_set<std::string> names;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string at = path + ":" + std::to_string(lineno);
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        const std::size_t colon = stripped.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("load_seed_topics: " + at + ": expected 'name: term, ...'");
        }
        SeedTopic topic;
        topic.name = trim(stripped.substr(0, colon));
        if (topic.name.empty()) {
            throw ConfigError("load_seed_topics: " + at + ": empty topic name");
        }
        if (!names.insert(topic.name).second) {
            throw ConfigError("load_seed_topics: " + at + ": duplicate topic '" +
                              topic.name + "'");
        }

        std::stringstream items(stripped.substr(colon + 1));
        std::string item;
        while (std::getline(items, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            std::string term = item;
            double weight = 1.0;
            const std::size_t sep = item.find(':');
            if (sep != std::string::npos) {
                term = trim(item.substr(0, sep));
                const std::string weight_str = trim(item.substr(sep + 1));
                std::size_t used = 0;
                try {
                    weight = std::stod(weight_str, &used);
                } catch (const std::exception&) {
                    used = std::string::npos;
                }
                if (used != weight_str.size() || !(weight > 0.0)) {
                    throw ConfigError("load_seed_topics: " + at + ": bad weight '" +
                                      weight_str + "' for term '" + term + "'");
                }
            }
            term = lower_ascii(term);
            if (term.empty()) {
                throw ConfigError("load_seed_topics: " + at + ": empty term");
            }
            for (const auto& [existing, w] : topic.entries) {
                if (existing == term) {
                    throw ConfigError("load_seed_topics: " + at + ": duplicate term '" +
                                      term + "' in topic '" + topic.name + "'");
                }
            }
            topic.entries.emplace_back(std::move(term), weight);
        }
        if (topic.entries.empty()) {
            throw ConfigError("load_seed_topics: " + at + ": topic '" + topic.name +
                              "' lists no terms");
        }
        topics.push_back(std::move(topic));
    }
    if (topics.empty()) {
        throw ConfigError("load_seed_topics: " + path + " defines no topics");
    }
    return topics;
}

} // namespace gnmf
