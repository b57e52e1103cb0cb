// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "alpet/coreset.hpp"
#include "alpet/data_prep.hpp"
#include "alpet/error.hpp"
#include "alpet/experiment.hpp"
#include "alpet/geometry.hpp"
#include "alpet/learner.hpp"
#include "alpet/matrix_io.hpp"
#include "alpet/model_signal.hpp"
#include "alpet/pvp.hpp"
#include "alpet/synthetic.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

using alpet::Metric;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failed condition; later ones are ignored.
struct Checker {
    Outcome out;
    void require(bool ok, const std::string& what) {
        if (!ok && out.pass) {
            out.pass = false;
            out.detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

alpet::ProbabilityMatrix probs(const std::vector<std::size_t>& idx, const std::vector<std::vector<double>>& rows) {
    return alpet::ProbabilityMatrix(idx, alpet::Matrix::from_rows(rows));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome selector_oracles() {
    Checker c;
    const auto t0 = Clock::now();
    fixture::Gen g(8080);
    std::size_t geometry = 0, coreset = 0, uncertainty = 0, cal = 0;
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 2 + g.index(9);
        const auto pts = g.points(n, 1 + g.index(3), t % 2 == 0);
        auto pool = fixture::pool(pts, std::vector<int>(n, 0));
        std::vector<std::size_t> lab;
        for (std::size_t i = 0; i < n; ++i) {
            if (g.index(3) == 0) lab.push_back(i);
        }
        fixture::label(pool, lab);
        const auto cands = pool.unlabeled();
        if (cands.empty()) continue;
        const std::size_t m = 1 + g.index(std::min<std::size_t>(5, cands.size()));

        for (Metric metric : {Metric::euclidean, Metric::cosine}) {
            const bool zero = std::any_of(cands.begin(), cands.end(), [&](std::size_t i) {
                return std::all_of(pts[i].begin(), pts[i].end(), [](double x) { return x == 0.0; });
            });
            if (metric == Metric::cosine && zero) continue;
            const oracle::Dist d = metric == Metric::cosine ? oracle::Dist(oracle::cosine_distance)
                                                            : oracle::Dist(oracle::euclid);
            alpet::RngStream probe(t, "geo");
            const std::size_t first = cands[probe.uniform_index(cands.size())];
            auto run = [&](auto selector) {
                alpet::RngStream r(t, "geo");
                return selector(pool, m, metric, r).indices;
            };
            const auto always = [](oracle::Kind k) { return [k](std::size_t) { return k; }; };
            c.require(run(alpet::select_max_avg) ==
                          oracle::greedy_average(pts, cands, first, m, d, always(oracle::Kind::max)),
                      "max-average differs from oracle");
            c.require(run(alpet::select_min_avg) ==
                          oracle::greedy_average(pts, cands, first, m, d, always(oracle::Kind::min)),
                      "min-average differs from oracle");
            c.require(run(alpet::select_max_min_cycle) ==
                          oracle::greedy_average(pts, cands, first, m, d, [](std::size_t k) {
                              return k % 2 == 1 ? oracle::Kind::max : oracle::Kind::min;
                          }),
                      "max-min cycle differs from oracle");
            ++geometry;
        }

        {
            alpet::RngStream probe(t, "core");
            const std::size_t first = lab.empty() ? cands[probe.uniform_index(cands.size())] : 0;
            alpet::RngStream r(t, "core");
            c.require(alpet::select_greedy_coreset(pool, m, Metric::euclidean, r).indices ==
                          oracle::kcenter_greedy(pts, lab, cands, first, m, oracle::euclid),
                      "greedy coreset differs from oracle");
            ++coreset;
        }

        {
            const std::size_t classes = 2 + g.index(3);
            const auto rows = g.distributions(cands.size(), classes, t % 3 == 0);
            const auto p = probs(cands, rows);
            std::vector<double> h, conf, marg;
            for (const auto& row : rows) {
                h.push_back(oracle::entropy(row));
                conf.push_back(oracle::confidence(row));
                marg.push_back(oracle::margin(row));
            }
            c.require(alpet::select_entropy(p, m).indices == oracle::rank_top(h, cands, m, true), "entropy differs");
            c.require(alpet::select_least_confidence(p, m).indices == oracle::rank_top(conf, cands, m, false),
                      "least-confidence differs");
            c.require(alpet::select_breaking_ties(p, m).indices == oracle::rank_top(marg, cands, m, false),
                      "breaking-ties differs");
            ++uncertainty;
        }

        if (!lab.empty()) {
            const auto rl = g.distributions(lab.size(), 2, t % 3 == 0);
            const auto ru = g.distributions(cands.size(), 2, t % 3 == 0);
            std::map<std::size_t, oracle::Vec> lm;
            for (std::size_t i = 0; i < lab.size(); ++i) lm[lab[i]] = rl[i];
            const std::size_t k = 1 + g.index(4);
            std::vector<double> keys;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                keys.push_back(oracle::cal_score(pts, cands[i], ru[i], lab, lm, k));
            }
            c.require(alpet::select_cal(pool, probs(cands, ru), probs(lab, rl), k, m).indices ==
                          oracle::rank_top(keys, cands, m, true),
                      "CAL differs from oracle");
            ++cal;
        }
    }
    const double secs = seconds_since(t0);
    c.require(geometry >= 200 && coreset >= 200 && uncertainty >= 200 && cal >= 200, "too few pools compared");
    c.require(secs < 60.0, "took " + fmt("%.1f s", secs));
    if (c.out.pass) {
        c.out.detail = std::to_string(geometry) + " geometry, " + std::to_string(coreset) + " coreset, " +
                       std::to_string(uncertainty) + " uncertainty, " + std::to_string(cal) + " CAL pools in " +
                       fmt("%.2f s", secs);
    }
    return c.out;
}

Outcome kcenter_bound() {
    Checker c;
    fixture::Gen g(2718);
    int violations = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 4 + g.index(9);
        const std::size_t m = 1 + g.index(4);
        const auto pts = g.points(n, 2, t % 4 == 0);
        const auto pool = fixture::pool(pts);
        alpet::RngStream r(t, "core");
        const auto centers = alpet::select_greedy_coreset(pool, m, Metric::euclidean, r).indices;
        const double got = alpet::coreset_radius(pool, centers, Metric::euclidean);
        const double best = oracle::optimal_radius(pts, m, oracle::euclid);
        if (got > 2.0 * best + 1e-12) ++violations;
        if (best > 0.0) worst = std::max(worst, got / best);
    }
    c.require(violations == 0, std::to_string(violations) + " violations");
    if (c.out.pass) c.out.detail = "100 pools, worst ratio " + fmt("%.3f", worst);
    return c.out;
}

Outcome lightweight_law() {
    Checker c;
    const auto pool = fixture::pool(fixture::line({0, 0, 3}));
    std::vector<int> counts(3, 0);
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        alpet::RngStream r(static_cast<std::uint64_t>(t), "lightweight");
        ++counts[alpet::select_lightweight_coreset(pool, 1, r).indices.at(0)];
    }
    const double expected[] = {0.25, 0.25, 0.5};
    std::string freq;
    for (int i = 0; i < 3; ++i) {
        const double f = counts[i] / static_cast<double>(trials);
        c.require(std::abs(f - expected[i]) <= 0.01, "frequency " + fmt("%.4f", f));
        freq += (i ? ", " : "") + fmt("%.4f", f);
    }
    if (c.out.pass) c.out.detail = "(" + freq + ")";
    return c.out;
}

Outcome uncertainty_math() {
    Checker c;
    const std::vector<double> half{0.5, 0.5}, sure{1.0, 0.0};
    c.require(std::abs(alpet::prediction_entropy(half) - std::log(2.0)) <= 1e-12, "entropy");
    c.require(std::abs(alpet::kl_divergence(sure, half) - std::log(2.0)) <= 1e-9, "KL");
    fixture::Gen g(1001);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + g.index(40);
        const alpet::ProbabilityMatrix p(alpet::Matrix::from_rows(g.distributions(n, 2, t % 2 == 0)));
        const std::size_t m = 1 + g.index(n);
        c.require(alpet::select_breaking_ties(p, m).indices == alpet::select_least_confidence(p, m).indices,
                  "breaking-ties and least-confidence disagree on matrix " + std::to_string(t));
    }
    if (c.out.pass) c.out.detail = "entropy, KL and 1000 binary matrices";
    return c.out;
}

Outcome learner_correctness() {
    Checker c;
    fixture::Gen g(4242);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t classes = 2 + g.index(3);
        const std::size_t n = 3 + g.index(12), d = 1 + g.index(5);
        const auto x = g.points(n, d, false);
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) y.push_back(static_cast<int>(g.index(classes)));
        auto model = alpet::LinearModel::zeros(classes, d);
        for (auto& w : model.weights.values()) w = g.uniform(-1, 1);
        for (auto& b : model.bias) b = g.uniform(-1, 1);
        const double l2 = t % 2 ? 0.0 : g.uniform(0, 0.5);
        const auto lg = alpet::loss_and_gradient(model, fixture::to_matrix(x), y, l2);

        std::vector<double> w(model.weights.values().begin(), model.weights.values().end());
        std::vector<double> analytic, numeric;
        const double h = 1e-5;
        for (std::size_t i = 0; i < w.size(); ++i) {
            auto wp = w, wm = w;
            wp[i] += h;
            wm[i] -= h;
            numeric.push_back((oracle::softmax_loss(wp, model.bias, x, y, l2) -
                               oracle::softmax_loss(wm, model.bias, x, y, l2)) / (2 * h));
            analytic.push_back(lg.gradient.weights.values()[i]);
        }
        for (std::size_t k = 0; k < classes; ++k) {
            auto bp = model.bias, bm = model.bias;
            bp[k] += h;
            bm[k] -= h;
            numeric.push_back((oracle::softmax_loss(w, bp, x, y, l2) - oracle::softmax_loss(w, bm, x, y, l2)) / (2 * h));
            analytic.push_back(lg.gradient.bias[k]);
        }
        double diff = 0.0, na = 0.0, nn = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
            na += analytic[i] * analytic[i];
            nn += numeric[i] * numeric[i];
        }
        const double rel = std::sqrt(diff) / std::max(std::sqrt(na) + std::sqrt(nn), 1e-12);
        worst = std::max(worst, rel);
    }
    c.require(worst <= 1e-4, "gradient relative error " + fmt("%.2e", worst));
    c.require(alpet::macro_f1(std::vector<int>{1, 1, 0, 0}, std::vector<int>{1, 0, 0, 1}) == 0.5, "F1 fixture 0.5");
    c.require(alpet::macro_f1(std::vector<int>{0, 0, 0, 0}, std::vector<int>{0, 0, 1, 1}) == 1.0 / 3.0,
              "F1 fixture 1/3");
    if (c.out.pass) c.out.detail = "worst gradient relative error " + fmt("%.2e", worst) + ", F1 fixtures exact";
    return c.out;
}

Outcome pipeline_structure() {
    Checker c;
    const alpet::ExperimentConfig cfg; // defaults throughout
    alpet::SyntheticSpec spec;
    // 6000 selectable after 250 + 250 per class are held out.
    spec.n = cfg.iterations * cfg.per_iteration + 2 * (cfg.dev_per_class + cfg.test_per_class);
    alpet::RngStream gen(11, "synthetic");
    const auto data = alpet::make_two_gaussian(spec, gen);

    alpet::RngStream root(cfg.seed, "pipeline");
    auto split_stream = root.child("split");
    const auto split = alpet::make_split(data.records, cfg.dev_per_class, cfg.test_per_class, split_stream);
    for (const auto* part : {&split.dev, &split.test}) {
        for (const auto& [label, idx] : *part) c.require(idx.size() == 250, "held-out class size");
    }

    std::vector<alpet::SentenceRecord> sub;
    for (std::size_t i : split.selection) sub.push_back(data.records[i]);
    alpet::Pool pool(sub, alpet::EmbeddingMatrix(data.embeddings.matrix().select_rows(split.selection)));
    auto select_stream = root.child("select");
    const auto report = alpet::run_selection_phase(pool, alpet::StrategyId::random, cfg, select_stream);
    c.require(report.iterations_run == 100, "iterations");
    c.require(report.issued == 6000 && report.revealed == 6000, "issued " + std::to_string(report.issued));
    for (const auto& [label, idx] : report.balanced) c.require(idx.size() == 3000, "balanced class size");

    auto part_stream = root.child("partition");
    const auto plan = alpet::partition_rounds(report.balanced, part_stream, {cfg.rounds, cfg.shot_grid().size()});
    c.require(plan.rounds.size() == 6, "rounds");
    std::vector<std::size_t> grid;
    for (std::size_t s = 50; s <= 500; s += 50) grid.push_back(s);
    c.require(plan.shot_sizes == grid, "shot grid");
    std::set<std::size_t> across_rounds;
    for (std::size_t r = 0; r < plan.rounds.size(); ++r) {
        for (const auto& [label, members] : plan.rounds[r].members) {
            c.require(members.size() == 500, "round size");
            for (std::size_t i : members) c.require(across_rounds.insert(i).second, "rounds overlap");
        }
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
            const auto small = plan.subset(r, k);
            const auto big = plan.subset(r, k + 1);
            const std::set<std::size_t> bs(big.begin(), big.end());
            c.require(small.size() == 2 * grid[k], "subset size");
            for (std::size_t i : small) c.require(bs.count(i) == 1, "subsets not nested");
        }
    }
    c.require(across_rounds.size() == 6000, "rounds do not cover the balanced set");

    const auto full = alpet::run_experiment(cfg, data.records, data.embeddings, nullptr);
    c.require(full.result.cells.size() == 60, "result cells " + std::to_string(full.result.cells.size()));
    if (c.out.pass) {
        c.out.detail = "100 x 60 issued, 3000/class balanced, 6 rounds x 10 subsets 50..500, dev/test 250/class";
    }
    return c.out;
}

Outcome dedup_contract() {
    Checker c;
    fixture::Gen g(500);
    std::vector<std::string> vocab;
    const char* syl[] = {"ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi", "pe", "su"};
    for (int a = 0; a < 10; ++a) {
        for (int b = 0; b < 10; ++b) {
            for (int d = 0; d < 10; ++d) vocab.push_back(std::string(syl[a]) + syl[b] + syl[d]);
        }
    }
    std::vector<std::string> corpus;
    while (corpus.size() < 400) {
        std::string s;
        for (int w = 0; w < 10; ++w) s += (w ? " " : "") + vocab[g.index(vocab.size())];
        corpus.push_back(s + ".");
    }
    // Planted near-duplicates: one word swapped or punctuation changed.
    while (corpus.size() < 500) {
        auto words = alpet::tokenize(corpus[g.index(400)]);
        if (g.index(2) == 0) words[g.index(words.size())] = vocab[g.index(vocab.size())];
        std::string s;
        for (std::size_t w = 0; w < words.size(); ++w) s += (w ? " " : "") + words[w];
        corpus.push_back(s + (g.index(2) ? "!" : ""));
    }
    const auto kept = alpet::dedup_similar(corpus, 0.8);
    std::vector<std::string> survivors;
    for (std::size_t i : kept) survivors.push_back(corpus[i]);

    // Exhaustive check with the independent dense implementation.
    const auto vecs = oracle::tfidf(corpus);
    std::size_t pairs = 0;
    double worst = 0.0;
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = a + 1; b < kept.size(); ++b) {
            const double s = oracle::sparse_cosine(vecs[kept[a]], vecs[kept[b]]);
            worst = std::max(worst, s);
            ++pairs;
        }
    }
    c.require(worst <= 0.8, "surviving pair at " + fmt("%.4f", worst));
    c.require(kept.size() < corpus.size() && kept.size() >= 400, "kept " + std::to_string(kept.size()));

    const auto model = alpet::TfidfModel::fit(corpus);
    c.require(alpet::dedup_similar(survivors, model, 0.8).size() == survivors.size(), "not idempotent (same model)");
    c.require(alpet::dedup_similar(survivors, 0.8).size() == survivors.size(), "not idempotent (refit)");
    if (c.out.pass) {
        c.out.detail = "kept " + std::to_string(kept.size()) + " of 500, " + std::to_string(pairs) +
                       " pairs checked, max similarity " + fmt("%.4f", worst);
    }
    return c.out;
}

Outcome end_to_end() {
    Checker c;
    const auto t0 = Clock::now();
    alpet::SyntheticSpec spec; // 20000 x 16
    alpet::RngStream gen(7, "synthetic");
    const auto data = alpet::make_two_gaussian(spec, gen);

    alpet::ExperimentConfig cfg;
    cfg.strategies = {"random",          "euclidean-max",    "euclidean-min", "euclidean-cycle",
                      "euclidean-max-min-rand", "cosine-max", "pool-lightweight", "pool-entropy",
                      "pool-bt",         "pool-anchor"};
    // 500 per class in each of the 6 rounds, so 7200 queries leave room for dedup.
    cfg.iterations = 120;
    cfg.seed = 7;
    const auto out = alpet::run_experiment(cfg, data.records, data.embeddings, nullptr);

    const auto curves = alpet::curves_by_language(out.result);
    const auto& lang = curves.at(cfg.language);
    c.require(lang.size() == cfg.strategies.size(), "missing curves");
    for (const auto& [name, curve] : lang) {
        c.require(curve.size() == 10 && curve.front().first == 50 && curve.back().first == 500, name + " grid");
        for (const auto& [s, v] : curve) c.require(v >= 0.0 && v <= 1.0, name + " F1 out of range");
    }
    const double random500 = lang.at("random").back().second;
    c.require(std::abs(random500 - 0.85) <= 0.05, "random F1 at 500 shots " + fmt("%.3f", random500));

    for (const char* analysis : {"incremental", "cumulative", "reduction", "vs-random"}) {
        const auto doc = nlohmann::json::parse(alpet::analysis_json(out.result, analysis));
        const auto& body = doc.at("results").at(cfg.language);
        if (std::string(analysis) == "vs-random") {
            c.require(body.at("rows").size() == cfg.strategies.size() - 1, "vs-random rows");
            for (const auto& row : body.at("rows")) c.require(row.size() == 10, "vs-random columns");
        } else if (std::string(analysis) == "reduction") {
            c.require(body.size() == cfg.strategies.size() - 1, "reduction entries");
            for (const auto& v : body) c.require(v.is_null() || (v.is_number() && v.get<double>() >= 0.0), "reduction value");
        } else if (std::string(analysis) == "cumulative") {
            for (const auto& v : body) c.require(v.size() == 10 && v[0][1].get<double>() == 0.0, "cumulative shape");
        } else {
            for (const auto& v : body) c.require(v.at("incremental").size() == 9 && v.at("ranges").size() == 3, "incremental shape");
        }
    }
    const auto summary = nlohmann::json::parse(alpet::summary_json(out));
    c.require(summary.at("selection").size() == cfg.strategies.size(), "summary selection reports");

    const alpet::Curve strategy{{50, 0.60}, {100, 0.65}};
    const alpet::Curve at150{{50, 0.50}, {100, 0.55}, {150, 0.60}, {200, 0.70}};
    const alpet::Curve at200{{50, 0.50}, {100, 0.55}, {150, 0.59}, {200, 0.61}};
    const auto r150 = alpet::reduction_percentage(strategy, at150);
    const auto r200 = alpet::reduction_percentage(strategy, at200);
    c.require(r150 && std::abs(*r150 - 200.0 / 3.0) <= 1e-12, "reduction at s* = 150");
    c.require(r200 && *r200 == 75.0, "reduction at s* = 200");

    const double secs = seconds_since(t0);
    c.require(secs < 300.0, "took " + fmt("%.1f s", secs));
    if (c.out.pass) {
        c.out.detail = std::to_string(lang.size()) + " curves, random F1@500 " + fmt("%.3f", random500) +
                       ", reductions " + fmt("%.2f%%", *r150) + " / " + fmt("%.0f%%", *r200) + ", " +
                       fmt("%.1f s", secs);
    }
    return c.out;
}

Outcome determinism() {
    Checker c;
    fixture::TempDir dir("determinism");
    alpet::SyntheticSpec spec;
    spec.n = 1600;
    spec.dim = 4;
    alpet::RngStream gen(5, "synthetic");
    const auto data = alpet::make_two_gaussian(spec, gen);
    alpet::write_sentences(dir / "s.jsonl", data.records);
    alpet::write_matrix(dir / "e.bin", alpet::MatrixKind::embedding, data.embeddings.matrix());
    // Nonnegative stand-in for per-token surprisal features.
    alpet::Matrix surprisal(spec.n, 6, 0.0);
    fixture::Gen g(6);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (auto& v : surprisal.row(i)) v = static_cast<float>(g.uniform(0.0, 8.0));
    }
    alpet::write_matrix(dir / "x.bin", alpet::MatrixKind::surprisal, surprisal);

    std::string strategies;
    for (auto id : alpet::all_strategies()) strategies += (strategies.empty() ? "" : ", ") + std::string(alpet::to_string(id));
    auto write_config = [&](const std::string& tag) {
        std::ofstream(dir / (tag + ".cfg")) << "strategies = " << strategies << "\n"
                                            << "per_iteration = 20\niterations = 20\n"
                                               "shot_min = 10\nshot_step = 10\nshot_max = 50\nrounds = 2\n"
                                               "budget_per_class = 100\ndev_per_class = 40\ntest_per_class = 60\n"
                                               "epochs = 50\nseed = 99\n"
                                               "dataset = s.jsonl\nembeddings = e.bin\nsurprisal = x.bin\n"
                                            << "output_csv = " << tag << ".csv\noutput_json = " << tag << ".json\n";
    };
    write_config("a");
    write_config("b");
    alpet::run_experiment(alpet::load_config(dir / "a.cfg"));
    alpet::run_experiment(alpet::load_config(dir / "b.cfg"));
    const auto csv = slurp(dir / "a.csv");
    const auto json = slurp(dir / "a.json");
    c.require(!csv.empty() && csv == slurp(dir / "b.csv"), "results CSV differs");
    c.require(!json.empty() && json == slurp(dir / "b.json"), "summary JSON differs");
    if (c.out.pass) {
        c.out.detail = std::to_string(alpet::all_strategies().size()) + " strategies, " + std::to_string(csv.size()) +
                       " CSV bytes and " + std::to_string(json.size()) + " JSON bytes identical";
    }
    return c.out;
}

Outcome pet_mechanics() {
    Checker c;
    namespace pvp = alpet::pvp;
    const auto& cat = pvp::PatternCatalog::builtin();
    c.require(cat.patterns().size() == 15, "catalog size");
    for (const auto& p : cat.patterns()) {
        const std::string text = "Teksti i provës.";
        const auto cloze = pvp::build_cloze(p, text);
        std::size_t masks = 0;
        for (auto pos = cloze.find(pvp::kMaskToken); pos != std::string::npos; pos = cloze.find(pvp::kMaskToken, pos + 1)) {
            ++masks;
        }
        c.require(masks == 1 && cloze.find(text) != std::string::npos,
                  p.language + " pattern " + std::to_string(p.pattern_id) + " cloze");
    }
    c.require(pvp::build_cloze(cat.pattern("sq", 1), "X.") == "X. Kjo fjali duhet të jetë [mask] citim.",
              "sq pattern 1 string");

    fixture::Gen g(1000);
    for (int t = 0; t < 1000; ++t) {
        const auto& p = cat.patterns()[g.index(cat.patterns().size())];
        const auto& v = cat.verbalizer(p.language);
        const std::vector<double> raw{g.index(5) == 0 ? 0.0 : g.uniform(0, 1), g.uniform(0, 1)};
        auto provider = [raw](std::string_view, std::span<const std::string>) { return raw; };
        const double k = std::ldexp(g.uniform(0.5, 1.0), static_cast<int>(g.index(40)) - 20);
        auto scaled = [raw, k](std::string_view, std::span<const std::string>) {
            return std::vector<double>{raw[0] * k, raw[1] * k};
        };
        const auto s = pvp::score_labels(p, v, "Text.", provider);
        c.require(s[0] >= 0.0 && s[1] >= 0.0 && std::abs(s[0] + s[1] - 1.0) <= 1e-12, "normalization");
        const auto label = pvp::predict_label(p, v, "Text.", provider);
        c.require(label == pvp::predict_label(p, v, "Text.", scaled), "argmax changed under scaling");
        c.require(label == (raw[1] > raw[0] ? 1 : 0), "argmax");
    }
    if (c.out.pass) c.out.detail = "15 clozes, sq pattern 1 verbatim, 1000 provider outputs";
    return c.out;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"selector-oracle equivalence", selector_oracles},
        {"greedy k-center 2-approximation", kcenter_bound},
        {"lightweight coreset sampling law", lightweight_law},
        {"uncertainty math", uncertainty_math},
        {"learner correctness", learner_correctness},
        {"pipeline structure", pipeline_structure},
        {"dedup contract", dedup_contract},
        {"end-to-end synthetic experiment", end_to_end},
        {"determinism", determinism},
        {"PET mechanics", pet_mechanics},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
