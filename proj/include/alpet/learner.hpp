#pragma once

#include "alpet/matrix.hpp"
#include "alpet/model_signal.hpp"
#include "alpet/pool.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace alpet {

// Multiclass linear softmax classifier over embedding features.
struct LinearModel {
    Matrix weights;            // C x d
    std::vector<double> bias;  // C

    std::size_t classes() const noexcept { return weights.rows(); }
    std::size_t dim() const noexcept { return weights.cols(); }

    static LinearModel zeros(std::size_t classes, std::size_t dim);
};

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 200;
    double l2 = 1e-4;
};

struct LossAndGradient {
    double loss = 0.0;
    LinearModel gradient;
};

// mean cross-entropy of softmax(Wx + b) + (l2 / 2) * |W|^2 (bias unpenalized)
LossAndGradient loss_and_gradient(const LinearModel& model, const Matrix& features,
                                  std::span<const Label> labels, double l2);

// Full-batch gradient descent from a zero model. `classes` = 0 infers
// max(label) + 1. Needs at least two distinct labels.
LinearModel train(const Matrix& features, std::span<const Label> labels, const TrainConfig& cfg,
                  std::size_t classes = 0);

// Same, also recording the training loss before each epoch and after the last.
LinearModel train(const Matrix& features, std::span<const Label> labels, const TrainConfig& cfg,
                  std::size_t classes, std::vector<double>* loss_trace);

Matrix predict_logits(const LinearModel& model, const Matrix& features);
ProbabilityMatrix predict_proba(const LinearModel& model, const Matrix& features);
// Rows aligned to the given pool indices.
ProbabilityMatrix predict_proba(const LinearModel& model, const Pool& pool,
                                std::span<const std::size_t> indices);
std::vector<Label> predict(const LinearModel& model, const Matrix& features);

void softmax_inplace(std::span<double> logits);

// Unweighted mean of per-class F1 over the classes seen in either list.
double macro_f1(std::span<const Label> predicted, std::span<const Label> gold);

} // namespace alpet
