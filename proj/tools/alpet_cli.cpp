// alpet: umbrella command line for the selection engine and harness.
//
// Exit 1 marks a usage error; exit 2 marks a data or format error.

#include "alpet/data_prep.hpp"
#include "alpet/error.hpp"
#include "alpet/experiment.hpp"
#include "alpet/matrix_io.hpp"
#include "alpet/pool.hpp"
#include "alpet/strategy.hpp"
#include "alpet/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <algorithm>
#include <fstream>
#include <map>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>

namespace {

using alpet::Errc;
using alpet::fail;
using json = nlohmann::ordered_json;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string config;
    bool quiet = false;
};

void emit(const Globals& g, const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write " + out_path);
    out << text << '\n';
    if (!g.quiet) std::cerr << "wrote " << out_path << '\n';
}

std::vector<std::size_t> read_id_list(const std::string& path, const std::vector<alpet::SentenceRecord>& records) {
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < records.size(); ++i) pos.emplace(records[i].id, i);
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path);
    std::vector<std::size_t> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto it = pos.find(line);
        if (it == pos.end()) fail(Errc::malformed, path + ": unknown id '" + line + "'");
        out.push_back(it->second);
    }
    return out;
}

alpet::IndicesByClass group_by_label(const std::vector<alpet::SentenceRecord>& records) {
    alpet::IndicesByClass out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].gold_label) fail(Errc::missing_label, "record '" + records[i].id + "' has no label");
        out[*records[i].gold_label].push_back(i);
    }
    return out;
}

std::uint64_t seed_of(const Globals& g) { return g.seed.value_or(0); }

// --- subcommands ------------------------------------------------------------

struct IngestArgs {
    std::string sentences, embeddings;
};

void cmd_ingest(const Globals& g, const IngestArgs& a) {
    const auto pool = alpet::ingest_pool(a.sentences, a.embeddings);
    std::map<std::string, std::size_t> per_class;
    std::size_t unlabeled_gold = 0;
    for (const auto& r : pool.records()) {
        if (r.gold_label) {
            ++per_class[std::to_string(*r.gold_label)];
        } else {
            ++unlabeled_gold;
        }
    }
    json doc;
    doc["records"] = pool.size();
    doc["dim"] = pool.embeddings().dim();
    doc["gold_per_class"] = per_class;
    doc["without_gold"] = unlabeled_gold;
    emit(g, "", doc.dump(2));
}

struct SelectArgs {
    std::string sentences, embeddings, strategy, labeled, probs, surprisal, out;
    std::size_t m = 60;
    std::size_t k_neighbors = alpet::kDefaultCalNeighbors;
    std::size_t anchors_per_class = 10;
    std::size_t subpool_factor = 10;
    std::string anchor_inner = "entropy";
};

void cmd_select(const Globals& g, const SelectArgs& a) {
    const auto id = alpet::parse_strategy(a.strategy);
    auto pool = alpet::ingest_pool(a.sentences, a.embeddings);
    if (!a.labeled.empty()) {
        alpet::SelectionBatch seed_batch;
        seed_batch.indices = read_id_list(a.labeled, pool.records());
        pool.reveal_labels(seed_batch);
    }

    alpet::StrategyInputs in;
    in.k_neighbors = a.k_neighbors;
    in.anchor.anchors_per_class = a.anchors_per_class;
    in.anchor.subpool_factor = a.subpool_factor;
    in.anchor.inner_strategy = alpet::parse_anchor_inner(a.anchor_inner);

    std::optional<alpet::ProbabilityMatrix> all, unl, lab;
    if (!a.probs.empty()) {
        auto values = alpet::read_matrix(a.probs, alpet::MatrixKind::probability);
        if (values.rows() != pool.size()) fail(Errc::count_mismatch, "probability rows do not match the pool");
        all.emplace(std::move(values));
        unl.emplace(all->subset(pool.unlabeled()));
        lab.emplace(all->subset(pool.labeled()));
        in.probs_unlabeled = &*unl;
        in.probs_labeled = &*lab;
    } else if (alpet::needs_probabilities(id) &&
               !(id == alpet::StrategyId::pool_anchor && in.anchor.inner_strategy == alpet::AnchorInner::random)) {
        fail(Errc::invalid_argument, a.strategy + " needs --probs");
    }
    std::optional<alpet::SurprisalMatrix> surprisal;
    if (!a.surprisal.empty()) {
        surprisal.emplace(alpet::read_matrix(a.surprisal, alpet::MatrixKind::surprisal));
        in.surprisal = &*surprisal;
    }

    alpet::RngStream rng(seed_of(g), "select");
    const auto batch = alpet::run_strategy(id, pool, a.m, in, rng);
    json doc;
    doc["strategy"] = batch.strategy;
    doc["indices"] = batch.indices;
    auto ids = json::array();
    for (std::size_t i : batch.indices) ids.push_back(pool.record(i).id);
    doc["ids"] = std::move(ids);
    emit(g, a.out, doc.dump(2));
}

struct DedupArgs {
    std::string in, out;
    double threshold = alpet::kDedupThreshold;
};

void cmd_dedup(const Globals& g, const DedupArgs& a) {
    const auto records = alpet::read_sentences(a.in);
    std::vector<std::string> texts;
    texts.reserve(records.size());
    for (const auto& r : records) texts.push_back(r.text);
    const auto kept = alpet::dedup_similar(texts, a.threshold);
    std::vector<alpet::SentenceRecord> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) out.push_back(records[i]);
    alpet::write_sentences(a.out, out);
    if (!g.quiet) std::cerr << "kept " << kept.size() << " of " << records.size() << '\n';
}

struct BalanceArgs {
    std::string in, out;
    std::size_t per_class = 0;
};

void cmd_balance(const Globals& g, const BalanceArgs& a) {
    const auto records = alpet::read_sentences(a.in);
    alpet::RngStream rng(seed_of(g), "balance");
    const auto groups = group_by_label(records);
    const auto kept = a.per_class ? alpet::undersample_to(groups, a.per_class, rng) : alpet::balance_undersample(groups, rng);
    std::vector<std::size_t> order;
    for (const auto& [label, members] : kept) order.insert(order.end(), members.begin(), members.end());
    std::sort(order.begin(), order.end());
    std::vector<alpet::SentenceRecord> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(records[i]);
    alpet::write_sentences(a.out, out);
    if (!g.quiet) std::cerr << "kept " << out.size() << " of " << records.size() << '\n';
}

struct PartitionArgs {
    std::string in, out;
    std::size_t rounds = 6;
    std::size_t subsets = 10;
};

void cmd_partition(const Globals& g, const PartitionArgs& a) {
    const auto records = alpet::read_sentences(a.in);
    alpet::RngStream rng(seed_of(g), "partition");
    const auto plan = alpet::partition_rounds(group_by_label(records), rng, {a.rounds, a.subsets});
    emit(g, a.out, alpet::round_plan_to_json(plan));
}

struct ProfileArgs {
    std::string in, out;
};

void cmd_profile(const Globals& g, const ProfileArgs& a) {
    const auto records = alpet::read_sentences(a.in);
    std::vector<std::string> texts;
    for (const auto& r : records) texts.push_back(r.text);
    const auto p = alpet::linguistic_profile(texts);
    json doc;
    doc["unique_word_count"] = p.unique_word_count;
    doc["total_tokens"] = p.total_tokens;
    doc["type_token_ratio"] = p.type_token_ratio;
    doc["vocabulary_richness"] = p.vocabulary_richness;
    doc["avg_words_per_sentence"] = p.avg_words_per_sentence;
    doc["avg_word_length"] = p.avg_word_length;
    emit(g, a.out, doc.dump(2));
}

void cmd_run(const Globals& g) {
    if (g.config.empty()) fail(Errc::invalid_argument, "run needs --config");
    auto cfg = alpet::load_config(g.config);
    if (g.seed) cfg.seed = *g.seed;
    const auto out = alpet::run_experiment(cfg);
    if (!g.quiet) {
        for (const auto& r : out.selection) {
            std::cerr << r.strategy << ": " << r.iterations_run << " iterations, " << r.issued << " issued, "
                      << r.dropped_duplicates << " duplicates dropped\n";
        }
    }
    if (cfg.output_csv.empty()) std::cout << alpet::results_csv(out.result);
}

struct ReportArgs {
    std::string results, analysis, baseline = "random", out;
};

void cmd_report(const Globals& g, const ReportArgs& a) {
    const auto result = alpet::read_results_csv(a.results);
    emit(g, a.out, alpet::analysis_json(result, a.analysis, a.baseline));
}

struct SynthArgs {
    std::string sentences, embeddings;
    alpet::SyntheticSpec spec;
};

void cmd_synth(const Globals& g, const SynthArgs& a) {
    alpet::RngStream rng(seed_of(g), "synthetic");
    const auto pool = alpet::make_two_gaussian(a.spec, rng);
    alpet::write_sentences(a.sentences, pool.records);
    alpet::write_matrix(a.embeddings, alpet::MatrixKind::embedding, pool.embeddings.matrix());
    if (!g.quiet) std::cerr << "wrote " << pool.records.size() << " records\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpet: active-learning data selection for few-shot citation-worthiness experiments"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Root seed for every random draw")->each([&](const std::string&) { g.seed = seed; });
    app.add_option("--config", g.config, "Experiment config file (key = value)");
    app.add_flag("-q,--quiet", g.quiet, "Suppress progress output");

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Validate a sentence file against its embedding file");
    c_ingest->add_option("--sentences", ingest.sentences)->required();
    c_ingest->add_option("--embeddings", ingest.embeddings)->required();

    SelectArgs select;
    auto* c_select = app.add_subcommand("select", "Run one selection batch");
    c_select->add_option("--sentences", select.sentences)->required();
    c_select->add_option("--embeddings", select.embeddings)->required();
    c_select->add_option("--strategy", select.strategy)->required();
    c_select->add_option("-m,--count", select.m, "Batch size");
    c_select->add_option("--labeled", select.labeled, "File of already-labeled ids, one per line");
    c_select->add_option("--probs", select.probs, "Probability matrix aligned to the sentence file");
    c_select->add_option("--surprisal", select.surprisal, "Surprisal matrix aligned to the sentence file");
    c_select->add_option("--k-neighbors", select.k_neighbors);
    c_select->add_option("--anchors-per-class", select.anchors_per_class);
    c_select->add_option("--subpool-factor", select.subpool_factor);
    c_select->add_option("--anchor-inner", select.anchor_inner)->check(CLI::IsMember({"entropy", "random"}));
    c_select->add_option("-o,--out", select.out);

    DedupArgs dedup;
    auto* c_dedup = app.add_subcommand("dedup", "Drop near-duplicate sentences (TF-IDF cosine)");
    c_dedup->add_option("--in", dedup.in)->required();
    c_dedup->add_option("--out", dedup.out)->required();
    c_dedup->add_option("--threshold", dedup.threshold)->check(CLI::Range(0.0, 1.0));

    BalanceArgs balance;
    auto* c_balance = app.add_subcommand("balance", "Undersample classes to equal size");
    c_balance->add_option("--in", balance.in)->required();
    c_balance->add_option("--out", balance.out)->required();
    c_balance->add_option("--per-class", balance.per_class, "Exact size per class (default: minority size)");

    PartitionArgs partition;
    auto* c_partition = app.add_subcommand("partition", "Cut a balanced file into rounds of nested subsets");
    c_partition->add_option("--in", partition.in)->required();
    c_partition->add_option("--out", partition.out);
    c_partition->add_option("--rounds", partition.rounds);
    c_partition->add_option("--subsets", partition.subsets);

    ProfileArgs profile;
    auto* c_profile = app.add_subcommand("profile", "Linguistic profile of a sentence file");
    c_profile->add_option("--in", profile.in)->required();
    c_profile->add_option("--out", profile.out);

    auto* c_run = app.add_subcommand("run", "Run a full experiment from --config");
    c_run->add_option("--config", g.config, "Experiment config file");

    ReportArgs report;
    auto* c_report = app.add_subcommand("report", "Analyses over a results CSV");
    c_report->add_option("--results", report.results)->required();
    c_report->add_option("--analysis", report.analysis)
        ->required()
        ->check(CLI::IsMember({"incremental", "cumulative", "reduction", "vs-random"}));
    c_report->add_option("--baseline", report.baseline);
    c_report->add_option("-o,--out", report.out);

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Write a two-Gaussian synthetic pool");
    c_synth->add_option("--sentences", synth.sentences)->required();
    c_synth->add_option("--embeddings", synth.embeddings)->required();
    c_synth->add_option("--n", synth.spec.n);
    c_synth->add_option("--dim", synth.spec.dim);
    c_synth->add_option("--offset", synth.spec.offset);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*c_ingest) cmd_ingest(g, ingest);
        else if (*c_select) cmd_select(g, select);
        else if (*c_dedup) cmd_dedup(g, dedup);
        else if (*c_balance) cmd_balance(g, balance);
        else if (*c_partition) cmd_partition(g, partition);
        else if (*c_profile) cmd_profile(g, profile);
        else if (*c_run) cmd_run(g);
        else if (*c_report) cmd_report(g, report);
        else if (*c_synth) cmd_synth(g, synth);
    } catch (const alpet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        // Bad option values (unknown strategy, zero counts) are usage errors.
        return e.code() == Errc::invalid_argument ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
