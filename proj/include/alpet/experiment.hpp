#pragma once

#include "alpet/cluster.hpp"
#include "alpet/data_prep.hpp"
#include "alpet/learner.hpp"
#include "alpet/pool.hpp"
#include "alpet/strategy.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace alpet {

struct ExperimentConfig {
    std::vector<std::string> strategies{"random"};
    std::string language = "synthetic";
    std::size_t per_iteration = 60;
    std::size_t iterations = 100;
    std::size_t budget_per_class = 3000;
    std::size_t shot_min = 50;
    std::size_t shot_max = 500;
    std::size_t shot_step = 50;
    std::size_t rounds = 6;
    std::size_t dev_per_class = 250;
    std::size_t test_per_class = 250;
    std::uint64_t seed = 0;
    TrainConfig learner;
    std::size_t k_neighbors = kDefaultCalNeighbors;
    AnchorConfig anchor;
    double dedup_threshold = kDedupThreshold;

    std::filesystem::path dataset;
    std::filesystem::path embeddings;
    std::filesystem::path surprisal; // optional, required by pool-alps
    std::filesystem::path output_csv;
    std::filesystem::path output_json;

    std::vector<std::size_t> shot_grid() const;
    // Throws unless every count is positive and the grid fits a round.
    void validate() const;
};

// key = value lines, '#' comments. Relative paths resolve against base_dir.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Dev/test carved out per class before selection; the rest is the pool
// strategies may query.
struct DataSplit {
    std::vector<std::size_t> selection;
    IndicesByClass dev;
    IndicesByClass test;
};

DataSplit make_split(const std::vector<SentenceRecord>& records, std::size_t dev_per_class,
                     std::size_t test_per_class, RngStream& rng);

struct SelectionPhaseReport {
    std::string strategy;
    std::size_t iterations_run = 0;
    std::size_t issued = 0;             // indices handed out by the strategy
    std::size_t revealed = 0;           // oracle queries (== issued)
    std::size_t dropped_duplicates = 0;
    std::size_t random_fallbacks = 0;   // warm-start strategies run without a model
    IndicesByClass accepted;            // survivors of dedup, by gold label
    IndicesByClass balanced;            // budget_per_class each
};

// Runs cfg.iterations rounds of select -> dedup -> reveal on `pool`, then
// undersamples the accepted set to cfg.budget_per_class per class. Indices
// are positions in `pool`.
SelectionPhaseReport run_selection_phase(Pool& pool, StrategyId strategy, const ExperimentConfig& cfg,
                                         RngStream& rng, const SurprisalMatrix* surprisal = nullptr);

// Shots-ascending (shots, value) pairs.
using Curve = std::vector<std::pair<std::size_t, double>>;

struct RunCell {
    std::string language;
    std::string strategy;
    std::size_t round = 0;
    std::size_t shots = 0;
    double f1 = 0.0;     // test macro F1
    double dev_f1 = 0.0; // reported, never used for selection
};

struct RunResult {
    std::vector<RunCell> cells;

    std::vector<std::string> languages() const;
    std::vector<std::string> strategies(std::string_view language) const;
    // Mean over rounds per shot size.
    Curve averaged_curve(std::string_view language, std::string_view strategy, bool dev = false) const;
};

// Trains the stand-in learner on every (round, shots) subset of `plan` and
// scores it on `test` (and `dev`). Indices refer to `pool`.
RunResult run_fsl_phase(const RoundPlan& plan, const Pool& pool, const IndicesByClass& dev,
                        const IndicesByClass& test, const ExperimentConfig& cfg,
                        std::string_view strategy);

struct ExperimentOutput {
    RunResult result;
    std::vector<SelectionPhaseReport> selection;
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);
// Same, on an already-loaded pool (all gold-labeled).
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::vector<SentenceRecord>& records,
                                const EmbeddingMatrix& embeddings, const SurprisalMatrix* surprisal);

// delta(s_k) = F1(s_k) - F1(s_{k-1}), one entry per grid point after the first.
Curve incremental_improvement(const Curve& curve);

// F1(to) - F1(from) for each (from, to) range.
using ShotRange = std::pair<std::size_t, std::size_t>;
std::vector<double> range_improvement(const Curve& curve, std::span<const ShotRange> ranges);
std::vector<ShotRange> default_improvement_ranges();

// delta(s) = F1(s) - F1(base_shots).
Curve cumulative_improvement(const Curve& curve, std::size_t base_shots = 50);

// (s* - base) / s* * 100, s* the smallest grid point where the baseline
// reaches the strategy's base-shot F1; nullopt when none does.
std::optional<double> reduction_percentage(const Curve& strategy_curve, const Curve& baseline_curve,
                                           std::size_t base_shots = 50);

struct DiffMatrix {
    std::vector<std::string> strategies; // rows, baseline excluded
    std::vector<std::size_t> shots;      // columns
    std::vector<std::vector<double>> values; // F1(baseline) - F1(strategy)
};

DiffMatrix strategy_vs_random_diff(const std::map<std::string, Curve>& curves,
                                   std::string_view baseline = "random");

// Mean curve per strategy across languages (strategies present in all).
std::map<std::string, Curve> combine_languages(
    const std::map<std::string, std::map<std::string, Curve>>& per_language);

std::map<std::string, std::map<std::string, Curve>> curves_by_language(const RunResult& result);

void write_results_csv(const std::filesystem::path& path, const RunResult& result);
std::string results_csv(const RunResult& result);
RunResult read_results_csv(const std::filesystem::path& path);

// JSON document with averaged curves and every analysis matrix.
std::string summary_json(const ExperimentOutput& output);
std::string analysis_json(const RunResult& result, std::string_view analysis,
                          std::string_view baseline = "random");

} // namespace alpet
