#include "infoneck/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace infoneck {

using EMatD = Eigen::MatrixXd;
using EVecD = Eigen::VectorXd;

namespace {

EMatD to_double(const Matrix& m) {
    EMatD out(m.rows, m.cols);
    for (int64_t r = 0; r < m.rows; ++r)
        for (int64_t c = 0; c < m.cols; ++c) out(r, c) = m.at(r, c);
    return out;
}

Matrix to_matrix(const EMatD& m) {
    Matrix out(m.rows(), m.cols());
    for (int64_t r = 0; r < m.rows(); ++r)
        for (int64_t c = 0; c < m.cols(); ++c) out.at(r, c) = static_cast<float>(m(r, c));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Standardization

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols != cols()) {
        throw ShapeError("Standardizer: expected " + std::to_string(cols()) +
                         " columns, got " + std::to_string(x.cols));
    }
    Matrix out(x.rows, x.cols);
    for (int64_t r = 0; r < x.rows; ++r) {
        for (int64_t c = 0; c < x.cols; ++c) {
            out.at(r, c) = (x.at(r, c) - mean[c]) * scale[c];
        }
    }
    return out;
}

std::pair<Standardizer, Matrix> standardize(const Matrix& train) {
    if (train.rows < 2) {
        throw InsufficientData("standardize: need at least 2 rows, got " +
                               std::to_string(train.rows));
    }
    Standardizer s;
    s.mean.resize(train.cols);
    s.scale.resize(train.cols);
    s.constant_column.resize(train.cols);
    const double n = static_cast<double>(train.rows);
    for (int64_t c = 0; c < train.cols; ++c) {
        double sum = 0.0;
        for (int64_t r = 0; r < train.rows; ++r) sum += train.at(r, c);
        const double mu = sum / n;
        double ss = 0.0;
        for (int64_t r = 0; r < train.rows; ++r) {
            const double d = train.at(r, c) - mu;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / n);
        s.mean[c] = static_cast<float>(mu);
        if (sd < Standardizer::kConstantStd) {
            s.scale[c] = 1.0f;
            s.constant_column[c] = 1;
        } else {
            s.scale[c] = static_cast<float>(1.0 / sd);
            s.constant_column[c] = 0;
        }
    }
    return {s, s.transform(train)};
}

// ---------------------------------------------------------------------------
// PCA

Matrix PcaModel::project(const Matrix& x) const {
    if (x.cols != static_cast<int64_t>(mean.size())) {
        throw ShapeError("PcaModel::project: column count mismatch");
    }
    Matrix centered(x.rows, x.cols);
    for (int64_t r = 0; r < x.rows; ++r)
        for (int64_t c = 0; c < x.cols; ++c) centered.at(r, c) = x.at(r, c) - mean[c];
    // coeffs = centered * components^T
    Matrix out(x.rows, components.rows);
    for (int64_t r = 0; r < x.rows; ++r) {
        for (int64_t k = 0; k < components.rows; ++k) {
            double acc = 0.0;
            for (int64_t c = 0; c < x.cols; ++c)
                acc += static_cast<double>(centered.at(r, c)) * components.at(k, c);
            out.at(r, k) = static_cast<float>(acc);
        }
    }
    return out;
}

Matrix PcaModel::reconstruct(const Matrix& coeffs) const {
    if (coeffs.cols != components.rows) {
        throw ShapeError("PcaModel::reconstruct: coefficient count mismatch");
    }
    Matrix out(coeffs.rows, static_cast<int64_t>(mean.size()));
    for (int64_t r = 0; r < coeffs.rows; ++r) {
        for (int64_t c = 0; c < out.cols; ++c) {
            double acc = mean[c];
            for (int64_t k = 0; k < components.rows; ++k)
                acc += static_cast<double>(coeffs.at(r, k)) * components.at(k, c);
            out.at(r, c) = static_cast<float>(acc);
        }
    }
    return out;
}

PcaModel fit_pca(const Matrix& data, int64_t max_components) {
    if (data.rows < 2) {
        throw InsufficientData("fit_pca: need at least 2 rows, got " +
                               std::to_string(data.rows));
    }
    EMatD x = to_double(data);
    EVecD mu = x.colwise().mean();
    x.rowwise() -= mu.transpose();

    Eigen::BDCSVD<EMatD> svd(x, Eigen::ComputeThinV);
    const EVecD& sv = svd.singularValues();

    const double n = static_cast<double>(data.rows);
    double total_var = 0.0;
    for (int64_t i = 0; i < sv.size(); ++i) total_var += sv(i) * sv(i) / n;

    const int64_t max_rank = std::min<int64_t>({max_components, sv.size(), data.cols});
    // drop directions carrying no meaningful variance
    const double eps = std::max(1e-12, 1e-10 * total_var);
    int64_t k = 0;
    while (k < max_rank && sv(k) * sv(k) / n > eps) ++k;

    PcaModel model;
    model.mean.resize(data.cols);
    for (int64_t c = 0; c < data.cols; ++c) model.mean[c] = static_cast<float>(mu(c));
    model.components = Matrix(k, data.cols);
    model.explained_variance_ratio.resize(k);
    for (int64_t i = 0; i < k; ++i) {
        EVecD v = svd.matrixV().col(i);
        // sign convention: largest-magnitude entry non-negative
        int64_t arg = 0;
        for (int64_t c = 1; c < v.size(); ++c)
            if (std::abs(v(c)) > std::abs(v(arg))) arg = c;
        if (v(arg) < 0) v = -v;
        for (int64_t c = 0; c < data.cols; ++c)
            model.components.at(i, c) = static_cast<float>(v(c));
        model.explained_variance_ratio[i] =
            total_var > 0 ? static_cast<float>(sv(i) * sv(i) / n / total_var) : 0.0f;
    }
    return model;
}

int64_t effective_dimensionality(const Matrix& representations, double threshold) {
    if (representations.rows < 2) {
        throw InsufficientData("effective_dimensionality: need at least 2 rows");
    }
    PcaModel pca = fit_pca(representations, representations.cols);
    if (pca.num_components() == 0) return 0;  // zero-variance data
    double cum = 0.0;
    for (int64_t k = 0; k < pca.num_components(); ++k) {
        cum += pca.explained_variance_ratio[k];
        if (cum >= threshold - 1e-12) return k + 1;
    }
    return pca.num_components();
}

// ---------------------------------------------------------------------------
// Ridge

LinearMap ridge_solve(const Matrix& x, const Matrix& y, double lambda) {
    if (x.rows != y.rows) {
        throw ShapeError("ridge_solve: X and Y row counts disagree");
    }
    if (lambda < 0) throw ConfigError("ridge_solve: lambda must be non-negative");
    EMatD xd = to_double(x);
    EMatD yd = to_double(y);
    LinearMap result;
    if (lambda > 0) {
        EMatD gram = xd.transpose() * xd;
        gram.diagonal().array() += lambda;
        result.weights = to_matrix(gram.ldlt().solve(xd.transpose() * yd));
        return result;
    }
    // lambda == 0: detect rank deficiency and fall back to the minimum-norm
    // least-squares solution via SVD.
    Eigen::BDCSVD<EMatD> svd(xd, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const EVecD& sv = svd.singularValues();
    const double tol =
        std::max(x.rows, x.cols) * (sv.size() ? sv(0) : 0.0) * 1e-12;
    int64_t rank = 0;
    for (int64_t i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    EMatD pinv_sv = EMatD::Zero(sv.size(), sv.size());
    for (int64_t i = 0; i < rank; ++i) pinv_sv(i, i) = 1.0 / sv(i);
    result.weights = to_matrix(svd.matrixV() * pinv_sv * svd.matrixU().transpose() * yd);
    result.min_norm = rank < std::min(x.rows, x.cols);
    return result;
}

// ---------------------------------------------------------------------------
// AdamW

TrainResult train_adamw(const GradientProblem& problem, const TrainerConfig& config) {
    if (config.batch_size < 1) throw ConfigError("train_adamw: batch_size must be >= 1");
    if (config.epochs < 1) throw ConfigError("train_adamw: epochs must be >= 1");

    const int64_t n = problem.num_examples();
    const int64_t p = problem.num_params();

    std::vector<float> params(p);
    Rng init_rng(derive_seed(config.seed, "adamw-init"));
    problem.init_params(params, init_rng);

    std::vector<double> m(p, 0.0), v(p, 0.0);
    std::vector<float> grad(p, 0.0f);

    std::vector<int64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(config.seed, "adamw-shuffle"));

    TrainResult result;
    result.best_validation_loss = std::numeric_limits<double>::infinity();
    result.params = params;

    int64_t step = 0;
    for (int64_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        int64_t num_batches = 0;
        for (int64_t start = 0; start < n; start += config.batch_size) {
            const int64_t len = std::min(config.batch_size, n - start);
            std::span<const int64_t> batch(order.data() + start, static_cast<size_t>(len));
            std::fill(grad.begin(), grad.end(), 0.0f);
            const double loss = problem.batch_loss_grad(params, batch, grad);
            if (!std::isfinite(loss)) {
                throw TrainingDiverged(
                    "train_adamw: non-finite loss at epoch " + std::to_string(epoch),
                    static_cast<int>(epoch));
            }
            epoch_loss += loss;
            ++num_batches;
            ++step;
            const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (int64_t i = 0; i < p; ++i) {
                const double g = grad[i];
                m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
                v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                double w = params[i];
                w -= config.learning_rate * config.weight_decay * w;  // decoupled decay
                w -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
                params[i] = static_cast<float>(w);
            }
        }
        const double val = problem.validation_loss(params);
        if (!std::isfinite(val)) {
            throw TrainingDiverged(
                "train_adamw: non-finite validation loss at epoch " + std::to_string(epoch),
                static_cast<int>(epoch));
        }
        result.curve.push_back({epoch_loss / std::max<int64_t>(num_batches, 1), val});
        // strict improvement keeps the earliest snapshot on ties
        if (val < result.best_validation_loss) {
            result.best_validation_loss = val;
            result.best_epoch = epoch;
            result.params = params;
        }
    }
    return result;
}

}  // namespace infoneck
