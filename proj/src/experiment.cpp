#include "alpet/experiment.hpp"

#include "alpet/error.hpp"
#include "alpet/matrix_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace alpet {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::size_t parse_count(std::string_view key, std::string_view value) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        fail(Errc::invalid_argument, "config '" + std::string(key) + "': '" + std::string(value) + "' is not a count");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const std::string s(value);
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(Errc::invalid_argument, "config '" + std::string(key) + "': '" + std::string(value) + "' is not a number");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(value)};
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::optional<double> value_at(const Curve& curve, std::size_t shots) {
    for (const auto& [s, v] : curve) {
        if (s == shots) return v;
    }
    return std::nullopt;
}

double require_at(const Curve& curve, std::size_t shots) {
    const auto v = value_at(curve, shots);
    if (!v) fail(Errc::missing_grid_point, "curve has no " + std::to_string(shots) + "-shot point");
    return *v;
}

bool has_both_classes(const IndicesByClass& accepted) {
    const auto a = accepted.find(kNoCitation);
    const auto b = accepted.find(kCitationNeeded);
    return a != accepted.end() && b != accepted.end() && !a->second.empty() && !b->second.empty();
}

Matrix rows_of(const Pool& pool, std::span<const std::size_t> indices) {
    return pool.embeddings().matrix().select_rows(indices);
}

std::vector<Label> labels_of(const Pool& pool, std::span<const std::size_t> indices) {
    std::vector<Label> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        const auto& label = pool.record(i).gold_label;
        if (!label) fail(Errc::missing_label, "record '" + pool.record(i).id + "' has no gold label");
        out.push_back(*label);
    }
    return out;
}

std::vector<std::size_t> flatten(const IndicesByClass& by_class) {
    std::vector<std::size_t> out;
    for (const auto& [label, members] : by_class) out.insert(out.end(), members.begin(), members.end());
    return out;
}

nlohmann::ordered_json curve_json(const Curve& curve) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& [s, v] : curve) out.push_back({s, v});
    return out;
}

nlohmann::ordered_json diff_json(const DiffMatrix& diff) {
    nlohmann::ordered_json out;
    out["shots"] = diff.shots;
    nlohmann::ordered_json rows = nlohmann::ordered_json::object();
    for (std::size_t r = 0; r < diff.strategies.size(); ++r) rows[diff.strategies[r]] = diff.values[r];
    out["rows"] = std::move(rows);
    return out;
}

std::string range_key(const ShotRange& r) { return std::to_string(r.first) + "-" + std::to_string(r.second); }

nlohmann::ordered_json ranges_json(const Curve& curve) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    const auto ranges = default_improvement_ranges();
    for (const auto& r : ranges) {
        if (value_at(curve, r.first) && value_at(curve, r.second)) {
            out[range_key(r)] = require_at(curve, r.second) - require_at(curve, r.first);
        }
    }
    return out;
}

// Cumulative and reduction analyses measure from the smallest grid point
// (50 shots on the default grid).
std::size_t base_shots(const Curve& curve) { return curve.front().first; }

nlohmann::ordered_json reduction_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

// ---------------------------------------------------------------------------
// configuration

std::vector<std::size_t> ExperimentConfig::shot_grid() const {
    std::vector<std::size_t> out;
    if (shot_step == 0) return out;
    for (std::size_t s = shot_min; s <= shot_max; s += shot_step) out.push_back(s);
    return out;
}

void ExperimentConfig::validate() const {
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) fail(Errc::invalid_argument, std::string("config '") + name + "' must be positive");
    };
    positive(per_iteration, "per_iteration");
    positive(iterations, "iterations");
    positive(budget_per_class, "budget_per_class");
    positive(shot_min, "shot_min");
    positive(shot_step, "shot_step");
    positive(rounds, "rounds");
    positive(dev_per_class, "dev_per_class");
    positive(test_per_class, "test_per_class");
    positive(k_neighbors, "k_neighbors");
    positive(anchor.anchors_per_class, "anchors_per_class");
    positive(anchor.subpool_factor, "subpool_factor");
    if (strategies.empty()) fail(Errc::invalid_argument, "config lists no strategies");
    for (const auto& s : strategies) parse_strategy(s);
    // Subsets are cumulative prefixes in equal steps of one round.
    if (shot_min != shot_step || shot_max < shot_min || shot_max % shot_step != 0) {
        fail(Errc::invalid_argument, "shot grid must be shot_step, 2*shot_step, ..., shot_max");
    }
    if (budget_per_class != rounds * shot_max) {
        fail(Errc::invalid_argument, "budget_per_class (" + std::to_string(budget_per_class) +
                                         ") must equal rounds * shot_max (" + std::to_string(rounds * shot_max) + ")");
    }
    if (!(dedup_threshold > 0.0 && dedup_threshold <= 1.0)) fail(Errc::invalid_argument, "dedup_threshold outside (0, 1]");
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(Errc::invalid_argument, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "strategies" || key == "strategy") {
            cfg.strategies.clear();
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                if (!item.empty()) cfg.strategies.emplace_back(item);
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        } else if (key == "language") {
            cfg.language = std::string(value);
        } else if (key == "per_iteration") {
            cfg.per_iteration = parse_count(key, value);
        } else if (key == "iterations") {
            cfg.iterations = parse_count(key, value);
        } else if (key == "budget_per_class") {
            cfg.budget_per_class = parse_count(key, value);
        } else if (key == "shot_min") {
            cfg.shot_min = parse_count(key, value);
        } else if (key == "shot_max") {
            cfg.shot_max = parse_count(key, value);
        } else if (key == "shot_step") {
            cfg.shot_step = parse_count(key, value);
        } else if (key == "rounds") {
            cfg.rounds = parse_count(key, value);
        } else if (key == "dev_per_class") {
            cfg.dev_per_class = parse_count(key, value);
        } else if (key == "test_per_class") {
            cfg.test_per_class = parse_count(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_count(key, value);
        } else if (key == "learning_rate") {
            cfg.learner.learning_rate = parse_real(key, value);
        } else if (key == "epochs") {
            cfg.learner.epochs = parse_count(key, value);
        } else if (key == "l2") {
            cfg.learner.l2 = parse_real(key, value);
        } else if (key == "k_neighbors") {
            cfg.k_neighbors = parse_count(key, value);
        } else if (key == "anchors_per_class") {
            cfg.anchor.anchors_per_class = parse_count(key, value);
        } else if (key == "subpool_factor") {
            cfg.anchor.subpool_factor = parse_count(key, value);
        } else if (key == "anchor_inner") {
            cfg.anchor.inner_strategy = parse_anchor_inner(value);
        } else if (key == "dedup_threshold") {
            cfg.dedup_threshold = parse_real(key, value);
        } else if (key == "dataset") {
            cfg.dataset = resolve(base_dir, value);
        } else if (key == "embeddings") {
            cfg.embeddings = resolve(base_dir, value);
        } else if (key == "surprisal") {
            cfg.surprisal = resolve(base_dir, value);
        } else if (key == "output_csv") {
            cfg.output_csv = resolve(base_dir, value);
        } else if (key == "output_json") {
            cfg.output_json = resolve(base_dir, value);
        } else {
            fail(Errc::invalid_argument, "config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

// ---------------------------------------------------------------------------
// pipeline

DataSplit make_split(const std::vector<SentenceRecord>& records, std::size_t dev_per_class, std::size_t test_per_class,
                     RngStream& rng) {
    IndicesByClass by_class;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].gold_label) fail(Errc::missing_label, "record '" + records[i].id + "' has no gold label");
        by_class[*records[i].gold_label].push_back(i);
    }
    DataSplit split;
    std::vector<unsigned char> held_out(records.size(), 0);
    for (auto& [label, members] : by_class) {
        if (members.size() < dev_per_class + test_per_class) {
            fail(Errc::shortfall, "class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                                      " records, dev + test need " + std::to_string(dev_per_class + test_per_class));
        }
        auto stream = rng.child("class/" + std::to_string(label));
        auto shuffled = members;
        shuffle(shuffled, stream);
        auto& test = split.test[label];
        auto& dev = split.dev[label];
        test.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(test_per_class));
        dev.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(test_per_class),
                   shuffled.begin() + static_cast<std::ptrdiff_t>(test_per_class + dev_per_class));
        std::sort(test.begin(), test.end());
        std::sort(dev.begin(), dev.end());
        for (std::size_t i : test) held_out[i] = 1;
        for (std::size_t i : dev) held_out[i] = 1;
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!held_out[i]) split.selection.push_back(i);
    }
    return split;
}

SelectionPhaseReport run_selection_phase(Pool& pool, StrategyId strategy, const ExperimentConfig& cfg, RngStream& rng,
                                         const SurprisalMatrix* surprisal) {
    SelectionPhaseReport report;
    report.strategy = std::string(to_string(strategy));
    if (pool.size() == 0) fail(Errc::exhausted, "selection pool is empty");
    if (needs_surprisal(strategy) && surprisal == nullptr) {
        fail(Errc::invalid_argument, report.strategy + " needs a surprisal matrix");
    }

    std::vector<std::string> texts;
    texts.reserve(pool.size());
    for (const auto& r : pool.records()) texts.push_back(r.text);
    const auto tfidf = TfidfModel::fit(texts);
    DedupFilter filter(tfidf, cfg.dedup_threshold);

    const bool wants_model = needs_probabilities(strategy) &&
                             !(strategy == StrategyId::pool_anchor && cfg.anchor.inner_strategy == AnchorInner::random);
    const bool wants_classes = needs_probabilities(strategy) || needs_labeled_classes(strategy);

    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        if (pool.unlabeled_count() < cfg.per_iteration) {
            fail(Errc::exhausted, "iteration " + std::to_string(it) + " needs " + std::to_string(cfg.per_iteration) +
                                      " but only " + std::to_string(pool.unlabeled_count()) + " remain unlabeled");
        }
        auto stream = rng.child("iteration/" + std::to_string(it));
        StrategyInputs inputs;
        inputs.k_neighbors = cfg.k_neighbors;
        inputs.anchor = cfg.anchor;
        inputs.surprisal = surprisal;

        StrategyId effective = strategy;
        std::optional<ProbabilityMatrix> probs_unlabeled;
        std::optional<ProbabilityMatrix> probs_labeled;
        if (wants_classes && !has_both_classes(report.accepted)) {
            effective = StrategyId::random;
            ++report.random_fallbacks;
        } else if (wants_model) {
            auto balance_stream = stream.child("train-balance");
            const auto train_set = flatten(balance_undersample(report.accepted, balance_stream));
            const auto model = train(rows_of(pool, train_set), labels_of(pool, train_set), cfg.learner, 2);
            probs_unlabeled = predict_proba(model, pool, pool.unlabeled());
            inputs.probs_unlabeled = &*probs_unlabeled;
            if (needs_labeled_probabilities(strategy)) {
                probs_labeled = predict_proba(model, pool, pool.labeled());
                inputs.probs_labeled = &*probs_labeled;
            }
        }

        auto batch = run_strategy(effective, pool, cfg.per_iteration, inputs, stream);
        batch.iteration = it;
        report.issued += batch.indices.size();
        const auto revealed = pool.reveal_labels(batch);
        report.revealed += revealed.size();
        for (const auto& [index, label] : revealed) {
            if (filter.accept(pool.record(index).text)) {
                report.accepted[label].push_back(index);
            } else {
                ++report.dropped_duplicates;
            }
        }
        ++report.iterations_run;
    }

    if (!has_both_classes(report.accepted)) {
        fail(Errc::shortfall, report.strategy + " accepted instances of only one class");
    }
    auto balance_stream = rng.child("balance");
    report.balanced = undersample_to(report.accepted, cfg.budget_per_class, balance_stream);
    return report;
}

RunResult run_fsl_phase(const RoundPlan& plan, const Pool& pool, const IndicesByClass& dev, const IndicesByClass& test,
                        const ExperimentConfig& cfg, std::string_view strategy) {
    const auto test_idx = flatten(test);
    const auto dev_idx = flatten(dev);
    std::vector<unsigned char> held_out(pool.size(), 0);
    for (std::size_t i : test_idx) held_out.at(i) |= 1;
    for (std::size_t i : dev_idx) {
        if (held_out.at(i) & 1) fail(Errc::leakage, "index " + std::to_string(i) + " is in both dev and test");
        held_out[i] |= 2;
    }
    for (std::size_t r = 0; r < plan.rounds.size(); ++r) {
        for (const auto& [label, members] : plan.rounds[r].members) {
            for (std::size_t i : members) {
                if (held_out.at(i)) {
                    fail(Errc::leakage, "round " + std::to_string(r + 1) + " trains on held-out index " + std::to_string(i));
                }
            }
        }
    }

    const Matrix test_x = rows_of(pool, test_idx);
    const auto test_y = labels_of(pool, test_idx);
    const Matrix dev_x = rows_of(pool, dev_idx);
    const auto dev_y = labels_of(pool, dev_idx);

    RunResult out;
    for (std::size_t r = 0; r < plan.rounds.size(); ++r) {
        for (std::size_t k = 0; k < plan.shot_sizes.size(); ++k) {
            const auto subset = plan.subset(r, k);
            const auto model = train(rows_of(pool, subset), labels_of(pool, subset), cfg.learner, 2);
            RunCell cell;
            cell.language = cfg.language;
            cell.strategy = std::string(strategy);
            cell.round = r + 1;
            cell.shots = plan.shot_sizes[k];
            cell.f1 = macro_f1(predict(model, test_x), test_y);
            cell.dev_f1 = macro_f1(predict(model, dev_x), dev_y);
            out.cells.push_back(std::move(cell));
        }
    }
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::vector<SentenceRecord>& records,
                                const EmbeddingMatrix& embeddings, const SurprisalMatrix* surprisal) {
    cfg.validate();
    const Pool full(records, embeddings);
    if (surprisal && surprisal->rows() != records.size()) {
        fail(Errc::count_mismatch, "surprisal rows do not match the sentence count");
    }
    RngStream root(cfg.seed, "experiment");
    auto split_stream = root.child("split");
    const auto split = make_split(records, cfg.dev_per_class, cfg.test_per_class, split_stream);

    std::vector<SentenceRecord> sub_records;
    sub_records.reserve(split.selection.size());
    for (std::size_t i : split.selection) sub_records.push_back(records[i]);
    const Matrix sub_embeddings = embeddings.matrix().select_rows(split.selection);
    std::optional<SurprisalMatrix> sub_surprisal;
    if (surprisal) sub_surprisal.emplace(surprisal->matrix().select_rows(split.selection));

    PartitionSpec partition;
    partition.rounds = cfg.rounds;
    partition.subsets = cfg.shot_grid().size();

    ExperimentOutput out;
    for (const auto& name : cfg.strategies) {
        const StrategyId id = parse_strategy(name);
        Pool pool(sub_records, EmbeddingMatrix(sub_embeddings));
        auto select_stream = root.child("select/" + name);
        auto report = run_selection_phase(pool, id, cfg, select_stream, sub_surprisal ? &*sub_surprisal : nullptr);

        IndicesByClass balanced;
        for (const auto& [label, members] : report.balanced) {
            auto& dst = balanced[label];
            for (std::size_t i : members) dst.push_back(split.selection[i]);
        }
        auto partition_stream = root.child("partition/" + name);
        const auto plan = partition_rounds(balanced, partition_stream, partition);
        auto cells = run_fsl_phase(plan, full, split.dev, split.test, cfg, name);
        out.result.cells.insert(out.result.cells.end(), cells.cells.begin(), cells.cells.end());
        out.selection.push_back(std::move(report));
    }
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    if (cfg.dataset.empty() || cfg.embeddings.empty()) fail(Errc::invalid_argument, "config needs dataset and embeddings");
    auto records = read_sentences(cfg.dataset);
    EmbeddingMatrix embeddings(read_matrix(cfg.embeddings, MatrixKind::embedding));
    std::optional<SurprisalMatrix> surprisal;
    if (!cfg.surprisal.empty()) surprisal.emplace(read_matrix(cfg.surprisal, MatrixKind::surprisal));
    auto out = run_experiment(cfg, records, embeddings, surprisal ? &*surprisal : nullptr);
    if (!cfg.output_csv.empty()) write_results_csv(cfg.output_csv, out.result);
    if (!cfg.output_json.empty()) {
        std::ofstream json(cfg.output_json, std::ios::binary);
        if (!json) fail(Errc::io, "cannot write " + cfg.output_json.string());
        json << summary_json(out) << '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// results

std::vector<std::string> RunResult::languages() const {
    std::set<std::string> out;
    for (const auto& c : cells) out.insert(c.language);
    return {out.begin(), out.end()};
}

std::vector<std::string> RunResult::strategies(std::string_view language) const {
    std::vector<std::string> out;
    for (const auto& c : cells) {
        if (c.language == language && std::find(out.begin(), out.end(), c.strategy) == out.end()) out.push_back(c.strategy);
    }
    return out;
}

Curve RunResult::averaged_curve(std::string_view language, std::string_view strategy, bool dev) const {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& c : cells) {
        if (c.language != language || c.strategy != strategy) continue;
        auto& slot = acc[c.shots];
        slot.first += dev ? c.dev_f1 : c.f1;
        ++slot.second;
    }
    Curve out;
    for (const auto& [shots, sum] : acc) out.emplace_back(shots, sum.first / static_cast<double>(sum.second));
    return out;
}

std::map<std::string, std::map<std::string, Curve>> curves_by_language(const RunResult& result) {
    std::map<std::string, std::map<std::string, Curve>> out;
    for (const auto& lang : result.languages()) {
        for (const auto& s : result.strategies(lang)) out[lang][s] = result.averaged_curve(lang, s);
    }
    return out;
}

std::string results_csv(const RunResult& result) {
    std::string out = "language,strategy,round,shots,f1\n";
    char buf[64];
    for (const auto& c : result.cells) {
        std::snprintf(buf, sizeof buf, "%.17g", c.f1);
        out += c.language + "," + c.strategy + "," + std::to_string(c.round) + "," + std::to_string(c.shots) + "," + buf + "\n";
    }
    return out;
}

void write_results_csv(const std::filesystem::path& path, const RunResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write " + path.string());
    out << results_csv(result);
    if (!out) fail(Errc::io, "write failed for " + path.string());
}

RunResult read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    RunResult out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "language,strategy,round,shots,f1") fail(Errc::malformed, path.string() + ": unexpected header");
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 5) fail(Errc::malformed, path.string() + ":" + std::to_string(line_no) + ": expected 5 fields");
        RunCell c;
        c.language = fields[0];
        c.strategy = fields[1];
        try {
            c.round = parse_count("round", fields[2]);
            c.shots = parse_count("shots", fields[3]);
            c.f1 = parse_real("f1", fields[4]);
        } catch (const Error& e) {
            fail(Errc::malformed, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (c.f1 < 0.0 || c.f1 > 1.0) fail(Errc::malformed, path.string() + ":" + std::to_string(line_no) + ": F1 outside [0, 1]");
        out.cells.push_back(std::move(c));
    }
    if (line_no == 0) fail(Errc::malformed, path.string() + ": empty results file");
    return out;
}

// ---------------------------------------------------------------------------
// analyses

Curve incremental_improvement(const Curve& curve) {
    Curve out;
    for (std::size_t k = 1; k < curve.size(); ++k) out.emplace_back(curve[k].first, curve[k].second - curve[k - 1].second);
    return out;
}

std::vector<ShotRange> default_improvement_ranges() { return {{50, 100}, {100, 300}, {300, 500}}; }

std::vector<double> range_improvement(const Curve& curve, std::span<const ShotRange> ranges) {
    std::vector<double> out;
    out.reserve(ranges.size());
    for (const auto& [from, to] : ranges) out.push_back(require_at(curve, to) - require_at(curve, from));
    return out;
}

Curve cumulative_improvement(const Curve& curve, std::size_t base_shots) {
    const double base = require_at(curve, base_shots);
    Curve out;
    for (const auto& [s, v] : curve) out.emplace_back(s, v - base);
    return out;
}

std::optional<double> reduction_percentage(const Curve& strategy_curve, const Curve& baseline_curve, std::size_t base_shots) {
    const auto target = value_at(strategy_curve, base_shots);
    if (!target) return std::nullopt;
    for (const auto& [s, v] : baseline_curve) {
        if (s >= base_shots && v >= *target) {
            return static_cast<double>(s - base_shots) / static_cast<double>(s) * 100.0;
        }
    }
    return std::nullopt;
}

DiffMatrix strategy_vs_random_diff(const std::map<std::string, Curve>& curves, std::string_view baseline) {
    const auto base = curves.find(std::string(baseline));
    if (base == curves.end()) fail(Errc::missing_baseline, "no '" + std::string(baseline) + "' curve");
    DiffMatrix out;
    for (const auto& [s, v] : base->second) out.shots.push_back(s);
    for (const auto& [name, curve] : curves) {
        if (name == baseline) continue;
        std::vector<double> row;
        row.reserve(out.shots.size());
        for (const auto& [s, v] : base->second) row.push_back(v - require_at(curve, s));
        out.strategies.push_back(name);
        out.values.push_back(std::move(row));
    }
    return out;
}

std::map<std::string, Curve> combine_languages(const std::map<std::string, std::map<std::string, Curve>>& per_language) {
    std::map<std::string, Curve> out;
    if (per_language.empty()) return out;
    const double n = static_cast<double>(per_language.size());
    for (const auto& [name, first_curve] : per_language.begin()->second) {
        const bool everywhere = std::all_of(per_language.begin(), per_language.end(),
                                            [&](const auto& lang) { return lang.second.count(name) > 0; });
        if (!everywhere) continue;
        Curve mean;
        for (const auto& [s, v] : first_curve) {
            double sum = 0.0;
            for (const auto& [lang, curves] : per_language) sum += require_at(curves.at(name), s);
            mean.emplace_back(s, sum / n);
        }
        out[name] = std::move(mean);
    }
    return out;
}

std::string summary_json(const ExperimentOutput& output) {
    const auto& result = output.result;
    const auto per_language = curves_by_language(result);
    nlohmann::ordered_json doc;
    nlohmann::ordered_json languages = nlohmann::ordered_json::object();
    for (const auto& [lang, curves] : per_language) {
        nlohmann::ordered_json strategies = nlohmann::ordered_json::object();
        const auto random = curves.find("random");
        for (const auto& [name, curve] : curves) {
            nlohmann::ordered_json s;
            s["curve"] = curve_json(curve);
            s["dev_curve"] = curve_json(result.averaged_curve(lang, name, true));
            s["incremental"] = curve_json(incremental_improvement(curve));
            s["ranges"] = ranges_json(curve);
            s["cumulative"] = curve.empty() ? nlohmann::ordered_json(nullptr)
                                            : curve_json(cumulative_improvement(curve, base_shots(curve)));
            s["reduction_vs_random"] = random != curves.end() && !curve.empty()
                                           ? reduction_json(reduction_percentage(curve, random->second, base_shots(curve)))
                                           : nlohmann::ordered_json(nullptr);
            strategies[name] = std::move(s);
        }
        nlohmann::ordered_json entry;
        entry["strategies"] = std::move(strategies);
        entry["vs_random"] = random != curves.end() ? diff_json(strategy_vs_random_diff(curves)) : nlohmann::ordered_json(nullptr);
        languages[lang] = std::move(entry);
    }
    doc["languages"] = std::move(languages);

    const auto combined = combine_languages(per_language);
    nlohmann::ordered_json comb;
    nlohmann::ordered_json comb_curves = nlohmann::ordered_json::object();
    for (const auto& [name, curve] : combined) comb_curves[name] = curve_json(curve);
    comb["curves"] = std::move(comb_curves);
    comb["vs_random"] = combined.count("random") ? diff_json(strategy_vs_random_diff(combined)) : nlohmann::ordered_json(nullptr);
    doc["combined"] = std::move(comb);

    auto selection = nlohmann::ordered_json::array();
    for (const auto& r : output.selection) {
        nlohmann::ordered_json s;
        s["strategy"] = r.strategy;
        s["iterations_run"] = r.iterations_run;
        s["issued"] = r.issued;
        s["revealed"] = r.revealed;
        s["dropped_duplicates"] = r.dropped_duplicates;
        s["random_fallbacks"] = r.random_fallbacks;
        nlohmann::ordered_json accepted = nlohmann::ordered_json::object();
        for (const auto& [label, m] : r.accepted) accepted[std::to_string(label)] = m.size();
        s["accepted_per_class"] = std::move(accepted);
        nlohmann::ordered_json balanced = nlohmann::ordered_json::object();
        for (const auto& [label, m] : r.balanced) balanced[std::to_string(label)] = m.size();
        s["balanced_per_class"] = std::move(balanced);
        selection.push_back(std::move(s));
    }
    doc["selection"] = std::move(selection);
    return doc.dump(2);
}

std::string analysis_json(const RunResult& result, std::string_view analysis, std::string_view baseline) {
    const auto per_language = curves_by_language(result);
    auto groups = per_language;
    if (per_language.size() > 1) groups["combined"] = combine_languages(per_language);

    nlohmann::ordered_json doc;
    doc["analysis"] = std::string(analysis);
    nlohmann::ordered_json body = nlohmann::ordered_json::object();
    for (const auto& [lang, curves] : groups) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::object();
        if (analysis == "incremental") {
            for (const auto& [name, curve] : curves) {
                entry[name] = {{"incremental", curve_json(incremental_improvement(curve))}, {"ranges", ranges_json(curve)}};
            }
        } else if (analysis == "cumulative") {
            for (const auto& [name, curve] : curves) {
                entry[name] = curve.empty() ? nlohmann::ordered_json(nullptr)
                                            : curve_json(cumulative_improvement(curve, base_shots(curve)));
            }
        } else if (analysis == "reduction") {
            const auto base = curves.find(std::string(baseline));
            if (base == curves.end()) fail(Errc::missing_baseline, "no '" + std::string(baseline) + "' curve for " + lang);
            for (const auto& [name, curve] : curves) {
                if (name != baseline && !curve.empty()) {
                    entry[name] = reduction_json(reduction_percentage(curve, base->second, base_shots(curve)));
                }
            }
        } else if (analysis == "vs-random") {
            entry = diff_json(strategy_vs_random_diff(curves, baseline));
        } else {
            fail(Errc::invalid_argument, "unknown analysis '" + std::string(analysis) + "'");
        }
        body[lang] = std::move(entry);
    }
    doc["results"] = std::move(body);
    return doc.dump(2);
}

} // namespace alpet
