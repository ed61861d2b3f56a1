#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "infoneck/matrix.hpp"
#include "infoneck/rng.hpp"

namespace infoneck {

// ---------------------------------------------------------------------------
// Standardization

// Per-column affine transform fitted on training rows. Columns whose std
// falls below kConstantStd are mean-centered only and flagged constant.
struct Standardizer {
    static constexpr double kConstantStd = 1e-8;

    std::vector<float> mean;
    std::vector<float> scale;              // 1/std, or 1 for constant columns
    std::vector<uint8_t> constant_column;  // 1 where std < kConstantStd

    int64_t cols() const { return static_cast<int64_t>(mean.size()); }
    Matrix transform(const Matrix& x) const;
};

// Fits on train (>= 2 rows) and returns the transformed training matrix.
std::pair<Standardizer, Matrix> standardize(const Matrix& train);

// ---------------------------------------------------------------------------
// PCA

struct PcaModel {
    std::vector<float> mean;                     // cols
    Matrix components;                           // k x cols, row-orthonormal
    std::vector<float> explained_variance_ratio; // k, non-increasing, sums <= 1

    int64_t num_components() const { return components.rows; }
    // coefficients of (x - mean) on the components: n x k
    Matrix project(const Matrix& x) const;
    // mean + coeffs * components: n x cols
    Matrix reconstruct(const Matrix& coeffs) const;
};

// Principal directions of the mean-centered data, by decreasing variance.
// Computed through an SVD of the centered matrix (not the covariance), with
// the sign convention that each component's largest-magnitude entry is
// non-negative. Components with negligible variance are dropped.
PcaModel fit_pca(const Matrix& data, int64_t max_components);

// Smallest k with cumulative explained variance ratio >= threshold;
// 0 for zero-variance data.
int64_t effective_dimensionality(const Matrix& representations, double threshold = 0.95);

// ---------------------------------------------------------------------------
// Ridge regression (closed form; the independent oracle for the trainer)

struct LinearMap {
    Matrix weights;        // in_dim x out_dim
    bool min_norm = false; // set when lambda == 0 met a rank-deficient system
};

// W minimizing ||X W - Y||^2 + lambda ||W||^2. lambda == 0 on a
// rank-deficient X returns the minimum-norm solution, flagged.
LinearMap ridge_solve(const Matrix& x, const Matrix& y, double lambda);

// ---------------------------------------------------------------------------
// Minibatch AdamW

struct TrainerConfig {
    int64_t batch_size = 128;
    double learning_rate = 0.01;
    double weight_decay = 0.1;
    int64_t epochs = 100;
    uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Differentiable loss over a flat parameter vector, evaluated on batches of
// example indices. Implementations must be deterministic.
class GradientProblem {
public:
    virtual ~GradientProblem() = default;
    virtual int64_t num_examples() const = 0;
    virtual int64_t num_params() const = 0;
    virtual void init_params(std::span<float> params, Rng& rng) const = 0;
    // Mean loss over the batch; writes d(loss)/d(params) into grad (pre-zeroed).
    virtual double batch_loss_grad(std::span<const float> params,
                                   std::span<const int64_t> batch,
                                   std::span<float> grad) const = 0;
    // Held-out loss used for checkpoint selection.
    virtual double validation_loss(std::span<const float> params) const = 0;
};

struct EpochStats {
    double train_loss = 0.0;  // mean of minibatch losses over the epoch
    double val_loss = 0.0;
};

struct TrainResult {
    std::vector<float> params;  // snapshot with the minimum validation loss
    double best_validation_loss = 0.0;
    int64_t best_epoch = 0;     // earliest epoch attaining the best loss
    std::vector<EpochStats> curve;
};

// Decoupled-weight-decay Adam over shuffled minibatches. Checkpoints at every
// epoch boundary and returns the earliest snapshot with minimal validation
// loss. Throws TrainingDiverged on a non-finite loss.
TrainResult train_adamw(const GradientProblem& problem, const TrainerConfig& config);

}  // namespace infoneck
