#ifndef GNMF_EXPERIMENT_HPP
#define GNMF_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnmf/evaluation.hpp"
#include "gnmf/solver.hpp"
#include "gnmf/text.hpp"

namespace gnmf {

struct ExperimentConfig {
    std::string corpus_path;
    std::string corpus_format = "auto";  // auto | dir | csv
    std::string seed_topics_path;        // empty -> plain NMF run

    SolverConfig solver;

    std::size_t min_df = 3;
    double max_df_frac = 0.8;
    std::size_t top_k = 10;

    // seed topic name -> positive class label, for ROC/AUC evaluation
    std::vector<std::pair<std::string, std::string>> eval_pairs;

    std::string output_dir = "out";

    // sweep axes; both must be nonempty for run_sweep
    std::vector<std::size_t> sweep_ranks;
    std::vector<std::size_t> sweep_seed_counts;
    std::size_t sweep_workers = 1;
};

// Reads a JSON config file. Unknown keys are rejected; missing keys keep the
// defaults above.
ExperimentConfig load_config(const std::string& path);

struct RunResult {
    EvaluationReport report;
    std::size_t iterations_run = 0;
    double final_objective = 0.0;
    std::vector<double> objective_history;
};

// End-to-end single experiment: load corpus, build X (and Y when seed topics
// are configured), factorize, evaluate. Writes report.json, topics.txt and
// manifest.json into config.output_dir.
RunResult run_single(const ExperimentConfig& config);

struct SweepCell {
    std::size_t rank = 0;
    std::size_t seed_count = 0;
    bool ok = false;
    std::string error;
    // positive class label -> AUC
    std::map<std::string, double> auc;
};

// The rank x seed-count ablation grid. Seed-count w uses the first w words of
// each configured seed topic. Every cell reuses config.solver.rng_seed. A
// failing cell is recorded (ok = false) without aborting the sweep. Writes
// auc_grid.csv, auc_table.txt and manifest.json into config.output_dir.
std::vector<SweepCell> run_sweep(const ExperimentConfig& config);

// Renders the grid as CSV (exact bytes are deterministic for a fixed config
// and corpus) and as an aligned text table, one block per evaluated class.
std::string sweep_grid_csv(const std::vector<SweepCell>& cells);
std::string sweep_grid_text(const std::vector<SweepCell>& cells);

} // namespace gnmf

#endif
