#include "alpet/learner.hpp"

#include "alpet/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace alpet {
namespace {

void check_features(const Matrix& features, std::span<const Label> labels) {
    if (features.rows() != labels.size()) {
        fail(Errc::count_mismatch, std::to_string(features.rows()) + " feature rows for " +
                                       std::to_string(labels.size()) + " labels");
    }
    if (!features.all_finite()) fail(Errc::non_finite, "training features contain a non-finite value");
}

void logits_into(const LinearModel& model, std::span<const double> x, std::span<double> out) {
    for (std::size_t c = 0; c < model.classes(); ++c) {
        const auto w = model.weights.row(c);
        double z = model.bias[c];
        for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * x[j];
        out[c] = z;
    }
}

} // namespace

LinearModel LinearModel::zeros(std::size_t classes, std::size_t dim) {
    return {Matrix(classes, dim, 0.0), std::vector<double>(classes, 0.0)};
}

void softmax_inplace(std::span<double> logits) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& z : logits) {
        z = std::exp(z - top);
        sum += z;
    }
    for (double& z : logits) z /= sum;
}

LossAndGradient loss_and_gradient(const LinearModel& model, const Matrix& features, std::span<const Label> labels,
                                  double l2) {
    check_features(features, labels);
    if (features.cols() != model.dim()) fail(Errc::dimension_mismatch, "features do not match the model dimension");
    const std::size_t n = features.rows();
    const std::size_t classes = model.classes();
    const std::size_t d = model.dim();
    if (n == 0) fail(Errc::empty_set, "loss over an empty training set");

    LossAndGradient out{0.0, LinearModel::zeros(classes, d)};
    std::vector<double> z(classes);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = features.row(i);
        const auto y = static_cast<std::size_t>(labels[i]);
        if (labels[i] < 0 || y >= classes) fail(Errc::invalid_argument, "label outside the model's classes");
        logits_into(model, x, z);
        const double top = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double v : z) sum += std::exp(v - top);
        out.loss += std::log(sum) + top - z[y];
        for (std::size_t c = 0; c < classes; ++c) {
            const double residual = std::exp(z[c] - top) / sum - (c == y ? 1.0 : 0.0);
            auto g = out.gradient.weights.row(c);
            for (std::size_t j = 0; j < d; ++j) g[j] += residual * x[j];
            out.gradient.bias[c] += residual;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    out.loss *= inv_n;
    double penalty = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        auto g = out.gradient.weights.row(c);
        const auto w = model.weights.row(c);
        for (std::size_t j = 0; j < d; ++j) {
            g[j] = g[j] * inv_n + l2 * w[j];
            penalty += w[j] * w[j];
        }
        out.gradient.bias[c] *= inv_n;
    }
    out.loss += 0.5 * l2 * penalty;
    return out;
}

LinearModel train(const Matrix& features, std::span<const Label> labels, const TrainConfig& cfg, std::size_t classes) {
    return train(features, labels, cfg, classes, nullptr);
}

LinearModel train(const Matrix& features, std::span<const Label> labels, const TrainConfig& cfg, std::size_t classes,
                  std::vector<double>* loss_trace) {
    check_features(features, labels);
    if (!(cfg.learning_rate > 0.0)) fail(Errc::invalid_argument, "learning_rate must be positive");
    if (!(cfg.l2 >= 0.0)) fail(Errc::invalid_argument, "l2 must be non-negative");
    const std::set<Label> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2) fail(Errc::single_class, "training needs at least two classes");
    if (*distinct.begin() < 0) fail(Errc::invalid_argument, "negative label");
    const auto inferred = static_cast<std::size_t>(*distinct.rbegin()) + 1;
    if (classes == 0) classes = inferred;
    if (classes < inferred) fail(Errc::invalid_argument, "label outside the requested class count");

    auto model = LinearModel::zeros(classes, features.cols());
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto step = loss_and_gradient(model, features, labels, cfg.l2);
        if (loss_trace) loss_trace->push_back(step.loss);
        for (std::size_t c = 0; c < classes; ++c) {
            auto w = model.weights.row(c);
            const auto g = step.gradient.weights.row(c);
            for (std::size_t j = 0; j < w.size(); ++j) w[j] -= cfg.learning_rate * g[j];
            model.bias[c] -= cfg.learning_rate * step.gradient.bias[c];
        }
    }
    if (loss_trace) loss_trace->push_back(loss_and_gradient(model, features, labels, cfg.l2).loss);
    return model;
}

Matrix predict_logits(const LinearModel& model, const Matrix& features) {
    if (features.cols() != model.dim()) {
        fail(Errc::dimension_mismatch, "features have " + std::to_string(features.cols()) + " columns, model expects " +
                                           std::to_string(model.dim()));
    }
    Matrix out(features.rows(), model.classes());
    for (std::size_t i = 0; i < features.rows(); ++i) logits_into(model, features.row(i), out.row(i));
    return out;
}

ProbabilityMatrix predict_proba(const LinearModel& model, const Matrix& features) {
    Matrix out = predict_logits(model, features);
    for (std::size_t i = 0; i < out.rows(); ++i) softmax_inplace(out.row(i));
    return ProbabilityMatrix(std::move(out));
}

ProbabilityMatrix predict_proba(const LinearModel& model, const Pool& pool, std::span<const std::size_t> indices) {
    Matrix out = predict_logits(model, pool.embeddings().matrix().select_rows(indices));
    for (std::size_t i = 0; i < out.rows(); ++i) softmax_inplace(out.row(i));
    return ProbabilityMatrix({indices.begin(), indices.end()}, std::move(out));
}

std::vector<Label> predict(const LinearModel& model, const Matrix& features) {
    const Matrix logits = predict_logits(model, features);
    std::vector<Label> out(logits.rows());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const auto row = logits.row(i);
        out[i] = static_cast<Label>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

double macro_f1(std::span<const Label> predicted, std::span<const Label> gold) {
    if (predicted.size() != gold.size()) {
        fail(Errc::count_mismatch, std::to_string(predicted.size()) + " predictions for " +
                                       std::to_string(gold.size()) + " gold labels");
    }
    if (gold.empty()) fail(Errc::empty_set, "macro F1 of an empty evaluation set");
    std::set<Label> classes(gold.begin(), gold.end());
    classes.insert(predicted.begin(), predicted.end());
    double total = 0.0;
    for (Label c : classes) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            const bool p = predicted[i] == c;
            const bool g = gold[i] == c;
            tp += p && g;
            fp += p && !g;
            fn += !p && g;
        }
        // 2PR/(P+R) == 2tp / (2tp + fp + fn); zero when tp == 0.
        if (tp > 0) total += 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    }
    return total / static_cast<double>(classes.size());
}

} // namespace alpet
