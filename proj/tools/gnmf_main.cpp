#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gnmf/errors.hpp"
#include "gnmf/evaluation.hpp"
#include "gnmf/experiment.hpp"
#include "gnmf/newsgroups.hpp"

#ifdef GNMF_HAVE_CURL
#include <curl/curl.h>
#endif

namespace fs = std::filesystem;

namespace {

constexpr const char* kHubPath = "/datasets/SetFit/20_newsgroups/resolve/main/train.jsonl";
constexpr const char* kDefaultHub = "https://huggingface.co";

struct CliOverrides {
    std::string config_path;
    std::string corpus;
    std::string format;
    std::string seeds;
    std::string out;
    std::size_t rank = 0;
    double lambda = 0.0;
    std::size_t max_iters = 0;
    double rel_tol = 0.0;
    std::uint64_t rng_seed = 0;
    double eps = 0.0;
    std::size_t min_df = 0;
    double max_df_frac = 0.0;
    std::size_t top_k = 0;
    std::vector<std::string> eval_pairs;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> seed_counts;
    std::size_t workers = 0;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file (flags override it)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--corpus", o.corpus, "corpus directory or CSV file");
    cmd->add_option("--format", o.format, "corpus format: auto, dir or csv");
    cmd->add_option("--seeds", o.seeds, "seed-topic file");
    cmd->add_option("--rank", o.rank, "factorization rank k");
    cmd->add_option("--lambda", o.lambda, "supervision weight");
    cmd->add_option("--max-iters", o.max_iters, "maximum update sweeps");
    cmd->add_option("--rel-tol", o.rel_tol, "relative objective-change stop threshold");
    cmd->add_option("--rng-seed", o.rng_seed, "initialization seed");
    cmd->add_option("--eps", o.eps, "division guard");
    cmd->add_option("--min-df", o.min_df, "drop terms in fewer documents");
    cmd->add_option("--max-df-frac", o.max_df_frac, "drop terms in more than this fraction");
    cmd->add_option("--top-k", o.top_k, "keywords per topic");
    cmd->add_option("--eval", o.eval_pairs,
                    "seed_topic=class_label pair for AUC (repeatable)");
    cmd->add_option("--out", o.out, "output directory");
}

gnmf::ExperimentConfig build_config(const CLI::App* cmd, const CliOverrides& o) {
    gnmf::ExperimentConfig config;
    if (!o.config_path.empty()) config = gnmf::load_config(o.config_path);

    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--corpus")) config.corpus_path = o.corpus;
    if (given("--format")) config.corpus_format = o.format;
    if (given("--seeds")) config.seed_topics_path = o.seeds;
    if (given("--rank")) config.solver.rank = o.rank;
    if (given("--lambda")) config.solver.lambda = o.lambda;
    if (given("--max-iters")) config.solver.max_iters = o.max_iters;
    if (given("--rel-tol")) config.solver.rel_tol = o.rel_tol;
    if (given("--rng-seed")) config.solver.rng_seed = o.rng_seed;
    if (given("--eps")) config.solver.eps = o.eps;
    if (given("--min-df")) config.min_df = o.min_df;
    if (given("--max-df-frac")) config.max_df_frac = o.max_df_frac;
    if (given("--top-k")) config.top_k = o.top_k;
    if (given("--out")) config.output_dir = o.out;
    if (given("--eval")) {
        config.eval_pairs.clear();
        for (const std::string& pair : o.eval_pairs) {
            const std::size_t eq = pair.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
                throw gnmf::ConfigError("--eval wants seed_topic=class_label, got '" +
                                        pair + "'");
            }
            config.eval_pairs.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
        }
    }
    if (given("--ranks")) config.sweep_ranks = o.ranks;
    if (given("--seed-counts")) config.sweep_seed_counts = o.seed_counts;
    if (given("--workers")) config.sweep_workers = o.workers;
    return config;
}

int cmd_run(const CLI::App* cmd, const CliOverrides& o) {
    const gnmf::ExperimentConfig config = build_config(cmd, o);
    const gnmf::RunResult result = gnmf::run_single(config);

    std::cout << gnmf::topic_table_text(result.report.topic_table);
    for (std::size_t j = 0; j < result.report.seed_names.size(); ++j) {
        std::cout << "seed topic '" << result.report.seed_names[j] << "' -> topic "
                  << result.report.assignments.assigned_topic[j] + 1 << "\n";
    }
    for (const gnmf::ClassEval& ce : result.report.class_evals) {
        std::printf("AUC %s vs class %s: %.6f\n", ce.seed_topic.c_str(),
                    ce.positive_class.c_str(), ce.roc.auc);
    }
    std::cout << result.iterations_run << " sweeps, final objective "
              << result.final_objective << "\n";
    std::cout << "wrote " << config.output_dir << "/report.json\n";
    for (const std::string& w : result.report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    return 0;
}

int cmd_sweep(const CLI::App* cmd, const CliOverrides& o) {
    const gnmf::ExperimentConfig config = build_config(cmd, o);
    const std::vector<gnmf::SweepCell> cells = gnmf::run_sweep(config);

    std::cout << gnmf::sweep_grid_text(cells);
    std::size_t failed = 0;
    for (const gnmf::SweepCell& cell : cells) {
        if (!cell.ok) {
            ++failed;
            std::cerr << "cell rank=" << cell.rank << " w=" << cell.seed_count
                      << " failed: " << cell.error << "\n";
        }
    }
    std::cout << "wrote " << config.output_dir << "/auc_grid.csv\n";
    return failed == 0 ? 0 : 1;
}

int cmd_topics(const std::string& path, std::size_t top_k) {
    fs::path report_path(path);
    if (fs::is_directory(report_path)) report_path /= "report.json";
    std::ifstream in(report_path);
    if (!in) throw gnmf::PipelineError("cannot read " + report_path.string());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw gnmf::PipelineError(report_path.string() + " is not valid JSON");
    }
    gnmf::TopicTable table;
    for (const auto& topic : doc.at("topics")) {
        std::vector<std::pair<std::string, double>> entries;
        for (const auto& kw : topic.at("keywords")) {
            entries.emplace_back(kw.at("term").get<std::string>(),
                                 kw.at("weight").get<double>());
            if (top_k > 0 && entries.size() == top_k) break;
        }
        table.topics.push_back(std::move(entries));
    }
    std::cout << gnmf::topic_table_text(table);
    return 0;
}

#ifdef GNMF_HAVE_CURL
std::size_t curl_sink(char* ptr, std::size_t size, std::size_t nmemb, void* userdata) {
    auto* out = static_cast<std::ofstream*>(userdata);
    out->write(ptr, static_cast<std::streamsize>(size * nmemb));
    return out->good() ? size * nmemb : 0;
}

void download(const std::string& url, const std::string& dest) {
    fs::create_directories(fs::path(dest).parent_path());
    const std::string partial = dest + ".part";
    std::ofstream out(partial, std::ios::binary);
    if (!out) throw gnmf::PipelineError("cannot write " + partial);

    CURL* curl = curl_easy_init();
    if (curl == nullptr) throw gnmf::PipelineError("curl initialization failed");
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, curl_sink);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, &out);
    curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
    const CURLcode rc = curl_easy_perform(curl);
    long status = 0;
    curl_easy_getinfo(curl, CURLINFO_RESPONSE_CODE, &status);
    curl_easy_cleanup(curl);
    out.close();

    if (rc != CURLE_OK) {
        fs::remove(partial);
        throw gnmf::PipelineError("download of " + url + " failed: " +
                                  curl_easy_strerror(rc) + " (HTTP " +
                                  std::to_string(status) + ")");
    }
    fs::rename(partial, dest);
}
#else
void download(const std::string& url, const std::string&) {
    throw gnmf::PipelineError("built without libcurl; download " + url +
                              " yourself and pass it via --jsonl");
}
#endif

int cmd_fetch(const std::string& url_flag, const std::string& jsonl_flag,
              const std::string& download_to, const std::string& out_dir,
              std::size_t per_class, std::uint64_t sample_seed) {
    std::string jsonl = jsonl_flag;
    if (jsonl.empty()) {
        std::string url = url_flag;
        if (url.empty()) {
            const char* hub = std::getenv("HF_ENDPOINT");
            url = (hub != nullptr && *hub != '\0' ? std::string(hub)
                                                  : std::string(kDefaultHub)) + kHubPath;
        }
        if (fs::exists(download_to)) {
            std::cout << "reusing " << download_to << "\n";
        } else {
            std::cout << "downloading " << url << "\n";
            download(url, download_to);
        }
        jsonl = download_to;
    }
    const std::size_t written =
        gnmf::write_newsgroups_subset(jsonl, out_dir, per_class, sample_seed);
    std::cout << "wrote " << written << " documents to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Guided NMF topic modeling"};
    app.require_subcommand(1);

    CliOverrides run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "single experiment");
    add_common_options(run_cmd, run_opts);

    CliOverrides sweep_opts;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "rank x seed-count ablation grid");
    add_common_options(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--ranks", sweep_opts.ranks, "ranks to sweep");
    sweep_cmd->add_option("--seed-counts", sweep_opts.seed_counts,
                          "seed words per topic to sweep");
    sweep_cmd->add_option("--workers", sweep_opts.workers, "concurrent sweep cells");

    std::string topics_path;
    std::size_t topics_top_k = 0;
    CLI::App* topics_cmd = app.add_subcommand("topics", "print the topic table of a run");
    topics_cmd->add_option("result", topics_path, "output directory or report.json")
        ->required();
    topics_cmd->add_option("--top-k", topics_top_k, "truncate keyword lists");

    std::string fetch_url;
    std::string fetch_jsonl;
    std::string fetch_download_to = "data/raw/20news_train.jsonl";
    std::string fetch_out = "data/20news-100";
    std::size_t fetch_per_class = 100;
    std::uint64_t fetch_sample_seed = 13;
    CLI::App* fetch_cmd =
        app.add_subcommand("fetch-newsgroups", "download and subset 20 Newsgroups");
    fetch_cmd->add_option("--url", fetch_url,
                          "full JSONL URL (default: Hugging Face hub, or $HF_ENDPOINT)");
    fetch_cmd->add_option("--jsonl", fetch_jsonl, "use a local JSONL dump, skip download")
        ->check(CLI::ExistingFile);
    fetch_cmd->add_option("--download-to", fetch_download_to, "where to keep the raw dump");
    fetch_cmd->add_option("--out", fetch_out, "subset output directory");
    fetch_cmd->add_option("--per-class", fetch_per_class, "documents per class");
    fetch_cmd->add_option("--sample-seed", fetch_sample_seed, "subsampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_cmd, run_opts);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_cmd, sweep_opts);
        if (topics_cmd->parsed()) return cmd_topics(topics_path, topics_top_k);
        if (fetch_cmd->parsed()) {
            return cmd_fetch(fetch_url, fetch_jsonl, fetch_download_to, fetch_out,
                             fetch_per_class, fetch_sample_seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
