#ifndef GNMF_NEWSGROUPS_HPP
#define GNMF_NEWSGROUPS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gnmf {

// The ten newsgroup classes used by the experiments, as
// (class label, newsgroup name) pairs.
const std::vector<std::pair<std::string, std::string>>& newsgroups_class_map();

// Subsets a 20 Newsgroups JSONL dump (one {"text", "label_text"} object per
// line, newsgroup names as labels) into a directory tree
// out_dir/<class_label>/<doc_id>.txt with per_class documents per class.
// Sampling is deterministic: documents keep file order per class and a
// seeded Fisher-Yates shuffle picks the subset. Returns the number of
// documents written.
std::size_t write_newsgroups_subset(const std::string& jsonl_path,
                                    const std::string& out_dir,
                                    std::size_t per_class,
                                    std::uint64_t seed);

} // namespace gnmf

#endif
