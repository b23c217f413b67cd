#include "gnmf/newsgroups.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include <json.hpp>

#include "gnmf/errors.hpp"

namespace fs = std::filesystem;

namespace gnmf {

const std::vector<std::pair<std::string, std::string>>& newsgroups_class_map() {
    static const std::vector<std::pair<std::string, std::string>> kClasses = {
        {"baseball", "rec.sport.baseball"},
        {"forsale", "misc.forsale"},
        {"graphics", "comp.graphics"},
        {"guns", "talk.politics.guns"},
        {"hardware", "comp.sys.ibm.pc.hardware"},
        {"medicine", "sci.med"},
        {"mideast", "talk.politics.mideast"},
        {"motorcycles", "rec.motorcycles"},
        {"religion", "talk.religion.misc"},
        {"space", "sci.space"},
    };
    return kClasses;
}

std::size_t write_newsgroups_subset(const std::string& jsonl_path,
                                    const std::string& out_dir,
                                    std::size_t per_class,
                                    std::uint64_t seed) {
    if (per_class == 0) throw ConfigError("write_newsgroups_subset: per_class must be >= 1");

    std::ifstream in(jsonl_path, std::ios::binary);
    if (!in) throw PipelineError("write_newsgroups_subset: cannot read " + jsonl_path);

    std::map<std::string, std::string> group_to_class;
    for (const auto& [cls, group] : newsgroups_class_map()) group_to_class[group] = cls;

    // (original line number, document text) per class, in file order.
    std::map<std::string, std::vector<std::pair<std::size_t, std::string>>> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw PipelineError("write_newsgroups_subset: " + jsonl_path + ":" +
                                std::to_string(lineno) + " is not valid JSON");
        }
        if (!row.contains("text") || !row.contains("label_text") ||
            !row["text"].is_string() || !row["label_text"].is_string()) {
            throw PipelineError("write_newsgroups_subset: " + jsonl_path + ":" +
                                std::to_string(lineno) +
                                " lacks string fields 'text' and 'label_text'");
        }
        const auto it = group_to_class.find(row["label_text"].get<std::string>());
        if (it == group_to_class.end()) continue;  // newsgroup outside the ten classes
        docs[it->second].emplace_back(lineno, row["text"].get<std::string>());
    }

    std::size_t written = 0;
    for (const auto& [cls, group] : newsgroups_class_map()) {
        const auto& pool = docs[cls];
        if (pool.size() < per_class) {
            throw PipelineError("write_newsgroups_subset: class '" + cls + "' (" + group +
                                ") has only " + std::to_string(pool.size()) + " of " +
                                std::to_string(per_class) + " requested documents");
        }
        // Fixed Fisher-Yates with a per-class generator: each class's picks
        // depend only on its own pool size and the seed.
        std::vector<std::size_t> order(pool.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(seed);
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(order[i], order[j]);
        }

        const fs::path class_dir = fs::path(out_dir) / cls;
        fs::create_directories(class_dir);
        for (std::size_t r = 0; r < per_class; ++r) {
            const auto& [src_line, text] = pool[order[r]];
            char name[64];
            std::snprintf(name, sizeof(name), "%s_%06zu.txt", cls.c_str(), src_line);
            std::ofstream out(class_dir / name, std::ios::binary);
            if (!out) {
                throw PipelineError("write_newsgroups_subset: cannot write " +
                                    (class_dir / name).string());
            }
            out << text;
            ++written;
        }
    }

    nlohmann::ordered_json manifest;
    manifest["source"] = jsonl_path;
    manifest["per_class"] = per_class;
    manifest["seed"] = seed;
    manifest["documents"] = written;
    std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::binary);
    if (mf) mf << manifest.dump(2) << "\n";

    return written;
}

} // namespace gnmf
