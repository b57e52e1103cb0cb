#include "alpet/coreset.hpp"
#include "alpet/data_prep.hpp"
#include "alpet/error.hpp"
#include "alpet/experiment.hpp"
#include "alpet/learner.hpp"
#include "alpet/matrix_io.hpp"
#include "alpet/pvp.hpp"
#include "alpet/strategy.hpp"
#include "alpet/synthetic.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

alpet::Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) throw alpet::Error(alpet::Errc::dimension_mismatch, "expected a 2-d array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return alpet::Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const alpet::Matrix& m) {
    Array out({m.rows(), m.cols()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

std::vector<alpet::SentenceRecord> make_records(const std::vector<std::string>& ids, const std::vector<std::string>& texts,
                                                const std::optional<std::vector<alpet::Label>>& labels,
                                                const std::string& language) {
    if (ids.size() != texts.size() || (labels && labels->size() != ids.size())) {
        throw alpet::Error(alpet::Errc::count_mismatch, "ids, texts and labels must have equal length");
    }
    std::vector<alpet::SentenceRecord> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out[i].id = ids[i];
        out[i].text = texts[i];
        if (labels) out[i].gold_label = (*labels)[i];
        out[i].language = language;
    }
    return out;
}

// Probability rows belong to pool indices `rows_for`.
std::optional<alpet::ProbabilityMatrix> probability(const std::optional<Array>& a, std::vector<std::size_t> rows_for) {
    if (!a) return std::nullopt;
    return alpet::ProbabilityMatrix(std::move(rows_for), to_matrix(*a));
}

std::vector<std::size_t> select_batch(const alpet::Pool& pool, const std::string& strategy, std::size_t m, std::uint64_t seed,
                                const std::optional<Array>& probs_unlabeled, const std::optional<Array>& probs_labeled,
                                const std::optional<Array>& surprisal, std::size_t k_neighbors) {
    const auto id = alpet::parse_strategy(strategy);
    const auto pu = probability(probs_unlabeled, pool.unlabeled());
    const auto pl = probability(probs_labeled, pool.labeled());
    std::optional<alpet::SurprisalMatrix> sm;
    if (surprisal) sm.emplace(to_matrix(*surprisal));
    alpet::StrategyInputs in;
    in.probs_unlabeled = pu ? &*pu : nullptr;
    in.probs_labeled = pl ? &*pl : nullptr;
    in.surprisal = sm ? &*sm : nullptr;
    in.k_neighbors = k_neighbors;
    alpet::RngStream rng(seed, "select");
    return alpet::run_strategy(id, pool, m, in, rng).indices;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Active-learning data selection for few-shot citation-need detection";

    static py::exception<alpet::Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const alpet::Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
            exc.attr("code") = std::string(alpet::to_string(e.code()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<alpet::Pool>(m, "Pool")
        .def(py::init([](const std::vector<std::string>& ids, const std::vector<std::string>& texts, const Array& embeddings,
                         const std::optional<std::vector<alpet::Label>>& labels, const std::string& language) {
                 return alpet::Pool(make_records(ids, texts, labels, language), alpet::EmbeddingMatrix(to_matrix(embeddings)));
             }),
             py::arg("ids"), py::arg("texts"), py::arg("embeddings"), py::arg("labels") = py::none(),
             py::arg("language") = "synthetic")
        .def_static("from_files", &alpet::ingest_pool, py::arg("sentences"), py::arg("embeddings"))
        .def("__len__", &alpet::Pool::size)
        .def("labeled", &alpet::Pool::labeled)
        .def("unlabeled", &alpet::Pool::unlabeled)
        .def("is_labeled", &alpet::Pool::is_labeled)
        .def("ids", [](const alpet::Pool& p) {
            std::vector<std::string> out;
            for (const auto& r : p.records()) out.push_back(r.id);
            return out;
        })
        .def("reveal", [](alpet::Pool& p, std::vector<std::size_t> indices) {
            alpet::SelectionBatch b;
            b.indices = std::move(indices);
            return p.reveal_labels(b);
        }, py::arg("indices"))
        .def("select", &select_batch, py::arg("strategy"), py::arg("m"), py::arg("seed") = 0,
             py::arg("probs_unlabeled") = py::none(), py::arg("probs_labeled") = py::none(),
             py::arg("surprisal") = py::none(), py::arg("k_neighbors") = alpet::kDefaultCalNeighbors,
             "One batch of pool indices; probability rows follow unlabeled() and labeled() order.");

    m.def("strategies", [] {
        std::vector<std::string> out;
        for (auto id : alpet::all_strategies()) out.emplace_back(alpet::to_string(id));
        return out;
    });

    m.def("entropy", [](std::vector<double> p) { return alpet::prediction_entropy(p); });
    m.def("kl_divergence", [](std::vector<double> p, std::vector<double> q) { return alpet::kl_divergence(p, q); });
    m.def("macro_f1", [](std::vector<alpet::Label> pred, std::vector<alpet::Label> gold) { return alpet::macro_f1(pred, gold); });
    m.def("lightweight_weights", [](const alpet::Pool& p) {
        const auto w = alpet::lightweight_weights(p);
        return std::make_pair(w.indices, w.q);
    });
    m.def("coreset_radius", [](const alpet::Pool& p, std::vector<std::size_t> centers, const std::string& metric) {
        return alpet::coreset_radius(p, centers, metric == "cosine" ? alpet::Metric::cosine : alpet::Metric::euclidean);
    }, py::arg("pool"), py::arg("centers"), py::arg("metric") = "euclidean");

    m.def("tokenize", &alpet::tokenize);
    m.def("dedup_similar", [](const std::vector<std::string>& texts, double threshold) {
        return alpet::dedup_similar(texts, threshold);
    }, py::arg("texts"), py::arg("threshold") = alpet::kDedupThreshold);
    m.def("balance_undersample", [](const alpet::IndicesByClass& by_class, std::uint64_t seed) {
        alpet::RngStream rng(seed, "balance");
        return alpet::balance_undersample(by_class, rng);
    }, py::arg("indices_by_class"), py::arg("seed") = 0);
    m.def("partition_rounds", [](const alpet::IndicesByClass& balanced, std::uint64_t seed, std::size_t rounds,
                                 std::size_t subsets) {
        alpet::RngStream rng(seed, "partition");
        return py::module_::import("json").attr("loads")(
            alpet::round_plan_to_json(alpet::partition_rounds(balanced, rng, {rounds, subsets})));
    }, py::arg("balanced"), py::arg("seed") = 0, py::arg("rounds") = 6, py::arg("subsets") = 10);
    m.def("linguistic_profile", [](const std::vector<std::string>& texts) {
        const auto p = alpet::linguistic_profile(texts);
        py::dict d;
        d["unique_word_count"] = p.unique_word_count;
        d["total_tokens"] = p.total_tokens;
        d["type_token_ratio"] = p.type_token_ratio;
        d["vocabulary_richness"] = p.vocabulary_richness;
        d["avg_words_per_sentence"] = p.avg_words_per_sentence;
        d["avg_word_length"] = p.avg_word_length;
        return d;
    });

    m.def("build_cloze", [](const std::string& language, int pattern_id, const std::string& text) {
        return alpet::pvp::build_cloze(alpet::pvp::PatternCatalog::builtin().pattern(language, pattern_id), text);
    }, py::arg("language"), py::arg("pattern_id"), py::arg("text"));

    m.def("make_two_gaussian", [](std::size_t n, std::size_t dim, double offset, std::uint64_t seed) {
        alpet::SyntheticSpec spec;
        spec.n = n;
        spec.dim = dim;
        spec.offset = offset;
        alpet::RngStream rng(seed, "synthetic");
        const auto pool = alpet::make_two_gaussian(spec, rng);
        py::list texts, labels, ids;
        for (const auto& r : pool.records) {
            ids.append(r.id);
            texts.append(r.text);
            labels.append(*r.gold_label);
        }
        return py::make_tuple(ids, texts, labels, to_array(pool.embeddings.matrix()));
    }, py::arg("n") = 2000, py::arg("dim") = 16, py::arg("offset") = 0.26, py::arg("seed") = 0,
       "Returns (ids, texts, labels, embeddings).");

    m.def("write_matrix", [](const std::filesystem::path& path, const std::string& kind, const Array& values) {
        alpet::MatrixKind k = alpet::MatrixKind::embedding;
        if (kind == "surprisal") k = alpet::MatrixKind::surprisal;
        else if (kind == "probability") k = alpet::MatrixKind::probability;
        else if (kind != "embedding") throw alpet::Error(alpet::Errc::invalid_argument, "unknown matrix kind '" + kind + "'");
        alpet::write_matrix(path, k, to_matrix(values));
    }, py::arg("path"), py::arg("kind"), py::arg("values"));
    m.def("read_matrix", [](const std::filesystem::path& path) {
        const auto f = alpet::read_matrix(path);
        return to_array(f.matrix);
    }, py::arg("path"));

    m.def("run_experiment", [](const std::filesystem::path& config) {
        const auto out = alpet::run_experiment(alpet::load_config(config));
        return py::make_tuple(alpet::results_csv(out.result), alpet::summary_json(out));
    }, py::arg("config"), "Runs a config file; returns (results_csv, summary_json).");
    m.def("analysis", [](const std::filesystem::path& results, const std::string& analysis, const std::string& baseline) {
        return alpet::analysis_json(alpet::read_results_csv(results), analysis, baseline);
    }, py::arg("results"), py::arg("analysis"), py::arg("baseline") = "random");
    m.def("reduction_percentage", [](const alpet::Curve& strategy, const alpet::Curve& baseline, std::size_t base) {
        return alpet::reduction_percentage(strategy, baseline, base);
    }, py::arg("strategy_curve"), py::arg("baseline_curve"), py::arg("base_shots") = 50);
}
