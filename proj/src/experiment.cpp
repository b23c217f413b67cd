#include "gnmf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace fs = std::filesystem;

namespace gnmf {

using ordered_json = nlohmann::ordered_json;

namespace {

void expect_keys(const ordered_json& obj, const std::set<std::string>& known,
                 const std::string& where) {
    for (const auto& item : obj.items()) {
        if (known.count(item.key()) == 0) {
            throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
        }
    }
}

std::size_t get_size(const ordered_json& obj, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj[key];
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ConfigError(std::string("config: '") + key + "' must be an integer");
    }
    if (v.is_number_integer() && v.get<long long>() < 0) {
        throw ConfigError(std::string("config: '") + key + "' must be nonnegative");
    }
    return v.get<std::size_t>();
}

double get_double(const ordered_json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj[key];
    if (!v.is_number()) {
        throw ConfigError(std::string("config: '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::string get_string(const ordered_json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj[key];
    if (!v.is_string()) {
        throw ConfigError(std::string("config: '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

std::vector<std::size_t> get_size_list(const ordered_json& obj, const char* key) {
    if (!obj.contains(key)) return {};
    const auto& v = obj[key];
    if (!v.is_array()) {
        throw ConfigError(std::string("config: '") + key + "' must be a list of integers");
    }
    std::vector<std::size_t> out;
    for (const auto& item : v) {
        if (!item.is_number_integer() && !item.is_number_unsigned()) {
            throw ConfigError(std::string("config: '") + key + "' must be a list of integers");
        }
        if (item.is_number_integer() && item.get<long long>() < 0) {
            throw ConfigError(std::string("config: '") + key + "' entries must be nonnegative");
        }
        out.push_back(item.get<std::size_t>());
    }
    return out;
}

ordered_json config_to_json(const ExperimentConfig& c) {
    ordered_json doc;
    doc["corpus_path"] = c.corpus_path;
    doc["corpus_format"] = c.corpus_format;
    doc["seed_topics_path"] = c.seed_topics_path;
    doc["solver"] = {
        {"rank", c.solver.rank},         {"lambda", c.solver.lambda},
        {"max_iters", c.solver.max_iters}, {"rel_tol", c.solver.rel_tol},
        {"rng_seed", c.solver.rng_seed}, {"eps", c.solver.eps},
    };
    doc["min_df"] = c.min_df;
    doc["max_df_frac"] = c.max_df_frac;
    doc["top_k"] = c.top_k;
    ordered_json pairs = ordered_json::object();
    for (const auto& [seed, cls] : c.eval_pairs) pairs[seed] = cls;
    doc["eval_pairs"] = std::move(pairs);
    doc["output_dir"] = c.output_dir;
    doc["sweep"] = {
        {"ranks", c.sweep_ranks},
        {"seed_counts", c.sweep_seed_counts},
        {"workers", c.sweep_workers},
    };
    return doc;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write " + path.string());
    out << content;
    if (!out) throw PipelineError("write failed for " + path.string());
}

std::string format_auc(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Everything derivable from the corpus alone, shared across sweep cells.
struct PipelineData {
    Corpus corpus;
    Vocabulary vocab;
    NonnegMatrix X;
    std::vector<SeedTopic> topics;  // empty for unsupervised runs
};

PipelineData prepare(const ExperimentConfig& config) {
    if (config.corpus_path.empty()) throw ConfigError("config: corpus_path is required");
    Corpus corpus = load_corpus(config.corpus_path, config.corpus_format);
    Vocabulary vocab = build_vocabulary(corpus, config.min_df, config.max_df_frac);
    NonnegMatrix X = build_matrix(corpus, vocab);
    std::vector<SeedTopic> topics;
    if (!config.seed_topics_path.empty()) {
        topics = load_seed_topics(config.seed_topics_path);
    }
    return PipelineData{std::move(corpus), std::move(vocab), std::move(X), std::move(topics)};
}

void check_eval_pairs(const ExperimentConfig& config, const std::vector<SeedTopic>& topics) {
    if (config.eval_pairs.empty()) return;
    if (topics.empty()) {
        throw ConfigError("config: eval_pairs requires seed topics");
    }
    for (const auto& [seed_name, cls] : config.eval_pairs) {
        const bool known = std::any_of(topics.begin(), topics.end(),
                                       [&](const SeedTopic& t) { return t.name == seed_name; });
        if (!known) {
            throw ConfigError("config: eval pair references unknown seed topic '" +
                              seed_name + "'");
        }
        if (cls.empty()) {
            throw ConfigError("config: eval pair for '" + seed_name +
                              "' names an empty class label");
        }
    }
}

// Core experiment on prebuilt data; pure apart from the factorization itself.
RunResult execute(const ExperimentConfig& config, const PipelineData& data,
                  const std::vector<SeedTopic>& topics) {
    RunResult out;
    std::vector<std::string>& warnings = out.report.warnings;

    if (topics.empty()) {
        FactorizationResult res = nmf(data.X, config.solver);
        out.report.topic_table = top_keywords(res.A, data.vocab, config.top_k, &warnings);
        out.iterations_run = res.iterations_run;
        out.objective_history = std::move(res.objective_history);
    } else {
        const SeedMatrix seed = build_seed_matrix(topics, data.vocab, &warnings);
        FactorizationResult res = guided_nmf(data.X, seed.Y, config.solver);
        out.report.topic_table = top_keywords(res.A, data.vocab, config.top_k, &warnings);
        out.report.assignments = assign_seeds(*res.B, &warnings);
        out.report.seed_names = seed.topic_names;

        for (const auto& [seed_name, cls] : config.eval_pairs) {
            const auto it = std::find(seed.topic_names.begin(), seed.topic_names.end(),
                                      seed_name);
            const std::size_t j =
                static_cast<std::size_t>(it - seed.topic_names.begin());
            const std::size_t topic = out.report.assignments.assigned_topic[j];

            std::vector<bool> labels;
            labels.reserve(data.corpus.documents.size());
            for (const Document& doc : data.corpus.documents) {
                labels.push_back(doc.label.has_value() && *doc.label == cls);
            }
            ClassEval ce;
            ce.seed_topic = seed_name;
            ce.positive_class = cls;
            ce.topic_index = topic;
            ce.roc = roc_auc(document_scores(res.S, topic), labels);
            out.report.class_evals.push_back(std::move(ce));
        }
        out.iterations_run = res.iterations_run;
        out.objective_history = std::move(res.objective_history);
    }
    out.final_objective = out.objective_history.empty() ? 0.0 : out.objective_history.back();
    return out;
}

std::vector<SeedTopic> truncate_topics(const std::vector<SeedTopic>& topics, std::size_t w) {
    std::vector<SeedTopic> out = topics;
    for (SeedTopic& t : out) {
        if (t.entries.size() > w) t.entries.resize(w);
    }
    return out;
}

ordered_json cells_to_json(const std::vector<SweepCell>& cells) {
    ordered_json arr = ordered_json::array();
    for (const SweepCell& cell : cells) {
        ordered_json c;
        c["rank"] = cell.rank;
        c["seed_count"] = cell.seed_count;
        c["ok"] = cell.ok;
        if (!cell.ok) c["error"] = cell.error;
        ordered_json auc = ordered_json::object();
        for (const auto& [cls, v] : cell.auc) auc[cls] = v;
        c["auc"] = std::move(auc);
        arr.push_back(std::move(c));
    }
    return arr;
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: " + path + " must hold a JSON object");

    expect_keys(doc,
                {"corpus_path", "corpus_format", "seed_topics_path", "solver", "min_df",
                 "max_df_frac", "top_k", "eval_pairs", "output_dir", "sweep"},
                "top level");

    ExperimentConfig c;
    c.corpus_path = get_string(doc, "corpus_path", c.corpus_path);
    c.corpus_format = get_string(doc, "corpus_format", c.corpus_format);
    c.seed_topics_path = get_string(doc, "seed_topics_path", c.seed_topics_path);

    if (doc.contains("solver")) {
        const auto& s = doc["solver"];
        if (!s.is_object()) throw ConfigError("config: 'solver' must be an object");
        expect_keys(s, {"rank", "lambda", "max_iters", "rel_tol", "rng_seed", "eps"},
                    "solver");
        c.solver.rank = get_size(s, "rank", c.solver.rank);
        c.solver.lambda = get_double(s, "lambda", c.solver.lambda);
        c.solver.max_iters = get_size(s, "max_iters", c.solver.max_iters);
        c.solver.rel_tol = get_double(s, "rel_tol", c.solver.rel_tol);
        c.solver.rng_seed = get_size(s, "rng_seed", c.solver.rng_seed);
        c.solver.eps = get_double(s, "eps", c.solver.eps);
    }

    c.min_df = get_size(doc, "min_df", c.min_df);
    c.max_df_frac = get_double(doc, "max_df_frac", c.max_df_frac);
    c.top_k = get_size(doc, "top_k", c.top_k);

    if (doc.contains("eval_pairs")) {
        const auto& pairs = doc["eval_pairs"];
        if (!pairs.is_object()) {
            throw ConfigError("config: 'eval_pairs' must map seed topics to class labels");
        }
        for (const auto& item : pairs.items()) {
            if (!item.value().is_string()) {
                throw ConfigError("config: eval_pairs entry '" + item.key() +
                                  "' must name a class label string");
            }
            c.eval_pairs.emplace_back(item.key(), item.value().get<std::string>());
        }
    }

    c.output_dir = get_string(doc, "output_dir", c.output_dir);

    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        if (!s.is_object()) throw ConfigError("config: 'sweep' must be an object");
        expect_keys(s, {"ranks", "seed_counts", "workers"}, "sweep");
        c.sweep_ranks = get_size_list(s, "ranks");
        c.sweep_seed_counts = get_size_list(s, "seed_counts");
        c.sweep_workers = get_size(s, "workers", c.sweep_workers);
    }
    return c;
}

RunResult run_single(const ExperimentConfig& config) {
    const PipelineData data = prepare(config);
    check_eval_pairs(config, data.topics);
    RunResult result = execute(config, data, data.topics);

    fs::create_directories(config.output_dir);
    const fs::path out_dir(config.output_dir);
    write_file(out_dir / "report.json", report_to_json(result.report));
    write_file(out_dir / "topics.txt", topic_table_text(result.report.topic_table));

    ordered_json manifest;
    manifest["mode"] = "run";
    manifest["config"] = config_to_json(config);
    manifest["corpus"] = {{"documents", data.corpus.documents.size()},
                          {"vocabulary", data.vocab.size()}};
    manifest["result"] = {{"iterations_run", result.iterations_run},
                          {"final_objective", result.final_objective},
                          {"objective_history", result.objective_history}};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& config) {
    if (config.sweep_ranks.empty() || config.sweep_seed_counts.empty()) {
        throw ConfigError("config: sweep needs nonempty sweep.ranks and sweep.seed_counts");
    }
    if (config.seed_topics_path.empty()) {
        throw ConfigError("config: sweep requires seed_topics_path");
    }
    if (config.eval_pairs.empty()) {
        throw ConfigError("config: sweep requires eval_pairs to record AUC");
    }
    if (config.sweep_workers == 0) {
        throw ConfigError("config: sweep.workers must be at least 1");
    }

    const PipelineData data = prepare(config);
    check_eval_pairs(config, data.topics);

    std::size_t min_words = data.topics.front().entries.size();
    for (const SeedTopic& t : data.topics) min_words = std::min(min_words, t.entries.size());
    for (std::size_t w : config.sweep_seed_counts) {
        if (w == 0 || w > min_words) {
            throw ConfigError("config: sweep seed count " + std::to_string(w) +
                              " exceeds the smallest seed topic (" +
                              std::to_string(min_words) + " words)");
        }
    }

    std::vector<SweepCell> cells;
    for (std::size_t rank : config.sweep_ranks) {
        for (std::size_t w : config.sweep_seed_counts) {
            SweepCell cell;
            cell.rank = rank;
            cell.seed_count = w;
            cells.push_back(cell);
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            SweepCell& cell = cells[idx];
            try {
                ExperimentConfig sub = config;
                sub.solver.rank = cell.rank;
                const RunResult r =
                    execute(sub, data, truncate_topics(data.topics, cell.seed_count));
                for (const ClassEval& ce : r.report.class_evals) {
                    cell.auc[ce.positive_class] = ce.roc.auc;
                }
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.ok = false;
                cell.error = e.what();
            }
        }
    };

    const std::size_t thread_count = std::min(config.sweep_workers, cells.size());
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    fs::create_directories(config.output_dir);
    const fs::path out_dir(config.output_dir);
    write_file(out_dir / "auc_grid.csv", sweep_grid_csv(cells));
    write_file(out_dir / "auc_table.txt", sweep_grid_text(cells));

    ordered_json manifest;
    manifest["mode"] = "sweep";
    manifest["config"] = config_to_json(config);
    manifest["corpus"] = {{"documents", data.corpus.documents.size()},
                          {"vocabulary", data.vocab.size()}};
    manifest["cells"] = cells_to_json(cells);
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return cells;
}

std::string sweep_grid_csv(const std::vector<SweepCell>& cells) {
    // One row per (class, cell); failed cells keep an empty auc field.
    std::set<std::string> classes;
    for (const SweepCell& cell : cells) {
        for (const auto& [cls, v] : cell.auc) classes.insert(cls);
    }
    std::ostringstream out;
    out << "class,rank,seed_count,auc\n";
    for (const std::string& cls : classes) {
        for (const SweepCell& cell : cells) {
            out << cls << "," << cell.rank << "," << cell.seed_count << ",";
            const auto it = cell.auc.find(cls);
            if (it != cell.auc.end()) out << format_auc(it->second);
            out << "\n";
        }
    }
    return out.str();
}

std::string sweep_grid_text(const std::vector<SweepCell>& cells) {
    std::set<std::string> classes;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> counts;
    for (const SweepCell& cell : cells) {
        for (const auto& [cls, v] : cell.auc) classes.insert(cls);
        if (std::find(ranks.begin(), ranks.end(), cell.rank) == ranks.end()) {
            ranks.push_back(cell.rank);
        }
        if (std::find(counts.begin(), counts.end(), cell.seed_count) == counts.end()) {
            counts.push_back(cell.seed_count);
        }
    }

    auto find_cell = [&](std::size_t rank, std::size_t w) -> const SweepCell* {
        for (const SweepCell& cell : cells) {
            if (cell.rank == rank && cell.seed_count == w) return &cell;
        }
        return nullptr;
    };

    // One block per class, ranks down
    // the side, seed-word counts across the top.
    auto pad = [](std::string s, std::size_t width) {
        if (s.size() < width) s.append(width - s.size(), ' ');
        return s;
    };
    const std::size_t col = 10;  // fits "w=NN" and "0.xxxxxx"

    std::ostringstream out;
    bool first = true;
    for (const std::string& cls : classes) {
        if (!first) out << "\n";
        first = false;
        out << "AUC, class " << cls << "\n";
        std::string line = pad("rank", 6);
        for (std::size_t w : counts) line += pad("w=" + std::to_string(w), col);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
        for (std::size_t rank : ranks) {
            line = pad(std::to_string(rank), 6);
            for (std::size_t w : counts) {
                const SweepCell* cell = find_cell(rank, w);
                std::string v = "-";
                if (cell != nullptr) {
                    const auto it = cell->auc.find(cls);
                    if (it != cell->auc.end()) v = format_auc(it->second);
                }
                line += pad(v, col);
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out << line << "\n";
        }
    }
    return out.str();
}

} // namespace gnmf
