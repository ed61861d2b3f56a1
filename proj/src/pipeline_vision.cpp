#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "infoneck/pipelines.hpp"
#include "infoneck/rng.hpp"

namespace infoneck {

namespace {

Matrix subset_images(const StimulusSet& stimuli, std::span<const int64_t> rows) {
    return stimuli.images.take_rows(rows);
}

}  // namespace

StimulusSet compute_ceiling(const ReconstructionPipeline& pipeline,
                            const StimulusSet& stimuli, std::span<const int64_t> rows) {
    if (!pipeline.fitted()) throw NotFitted("compute_ceiling: pipeline not fitted");
    StimulusSet subset = [&] {
        StimulusSet s = stimuli;
        if (stimuli.kind == StimulusKind::Image) {
            s.images = subset_images(stimuli, rows);
            if (stimuli.class_labels) {
                std::vector<int32_t> labels;
                for (int64_t r : rows) labels.push_back((*stimuli.class_labels)[r]);
                s.class_labels = std::move(labels);
            }
        } else {
            // rows must cover whole sequences, in order
            const int64_t t = stimuli.sequence_length;
            if (rows.size() % t != 0)
                throw ShapeError("text ceiling rows must cover whole sequences");
            s.texts.clear();
            for (size_t i = 0; i < rows.size(); i += t) {
                const int64_t seq = rows[i] / t;
                for (int64_t step = 0; step < t; ++step)
                    if (rows[i + step] != seq * t + step)
                        throw ShapeError("text ceiling rows must be contiguous sequences");
                s.texts.push_back(stimuli.texts[seq]);
            }
        }
        return s;
    }();
    std::vector<LatentTarget> targets = pipeline.latent_targets(subset);
    std::vector<Matrix> latents;
    for (auto& t : targets) latents.push_back(std::move(t.values));
    return pipeline.reconstruct(latents);
}

void PcaPriorVisionPipeline::fit(const PairedDataset& dataset) {
    const StimulusSet& stimuli = dataset.stimuli;
    if (stimuli.kind != StimulusKind::Image)
        throw ConfigError("pca_vision pipeline needs image stimuli");
    height_ = stimuli.height;
    width_ = stimuli.width;
    channels_ = stimuli.channels;

    Matrix train = subset_images(stimuli, dataset.splits.train);
    const int64_t k = std::min<int64_t>(config_.pca_k, std::min(train.rows - 1, train.cols));
    pca_ = fit_pca(train, k);

    std::vector<int32_t> labels(train.rows, 0);
    num_classes_ = 1;
    if (stimuli.class_labels) {
        for (size_t i = 0; i < dataset.splits.train.size(); ++i)
            labels[i] = (*stimuli.class_labels)[dataset.splits.train[i]];
        num_classes_ = *std::max_element(stimuli.class_labels->begin(),
                                         stimuli.class_labels->end()) +
                       1;
    }

    // fixed seeded prototype embedding per class, unit norm
    class_prototypes_ = Matrix(num_classes_, config_.semantic_dim);
    Rng proto_rng(derive_seed(config_.seed, "semantic-prototypes"));
    for (int64_t c = 0; c < num_classes_; ++c) {
        double ss = 0;
        for (int64_t j = 0; j < config_.semantic_dim; ++j) {
            const double v = proto_rng.next_normal();
            class_prototypes_.at(c, j) = static_cast<float>(v);
            ss += v * v;
        }
        const float inv = static_cast<float>(1.0 / std::sqrt(std::max(ss, 1e-30)));
        for (int64_t j = 0; j < config_.semantic_dim; ++j) class_prototypes_.at(c, j) *= inv;
    }

    // per-class mean residual image on the train split; the semantic head
    // adds this back at reconstruction time, which is what gives the
    // pipeline a prior beyond the coarse coefficients
    class_residuals_ = Matrix(num_classes_, train.cols);
    std::vector<int64_t> counts(num_classes_, 0);
    for (int64_t r = 0; r < train.rows; ++r) {
        const int32_t c = labels[r];
        ++counts[c];
        for (int64_t j = 0; j < train.cols; ++j)
            class_residuals_.at(c, j) += train.at(r, j);
    }
    for (int64_t c = 0; c < num_classes_; ++c) {
        if (counts[c] == 0) continue;
        for (int64_t j = 0; j < train.cols; ++j)
            class_residuals_.at(c, j) =
                class_residuals_.at(c, j) / counts[c] - pca_.mean[j];
    }

    // gaussian fit over the train latents, used by prior_sample
    fitted_ = true;
    std::vector<LatentTarget> train_targets;
    {
        StimulusSet train_stimuli = stimuli;
        train_stimuli.images = train;
        if (stimuli.class_labels) train_stimuli.class_labels = labels;
        train_targets = latent_targets(train_stimuli);
    }
    Matrix all = hcat({train_targets[0].values, train_targets[1].values});
    latent_mean_.assign(all.cols, 0.0f);
    latent_std_.assign(all.cols, 0.0f);
    for (int64_t j = 0; j < all.cols; ++j) {
        double mean = 0;
        for (int64_t r = 0; r < all.rows; ++r) mean += all.at(r, j);
        mean /= all.rows;
        double ss = 0;
        for (int64_t r = 0; r < all.rows; ++r) {
            const double d = all.at(r, j) - mean;
            ss += d * d;
        }
        latent_mean_[j] = static_cast<float>(mean);
        latent_std_[j] = static_cast<float>(std::sqrt(ss / all.rows));
    }
}

std::vector<LatentTarget> PcaPriorVisionPipeline::latent_targets(
    const StimulusSet& stimuli) const {
    if (!fitted_) throw NotFitted("pca_vision pipeline: latent_targets before fit");
    if (stimuli.kind != StimulusKind::Image)
        throw ShapeError("pca_vision pipeline: expected image stimuli");
    if (stimuli.images.cols != static_cast<int64_t>(pca_.mean.size()))
        throw ShapeError("pca_vision pipeline: image size changed since fit");

    LatentTarget coarse{"coarse", pca_.project(stimuli.images)};

    Matrix semantic(stimuli.images.rows, config_.semantic_dim);
    if (stimuli.class_labels) {
        for (int64_t r = 0; r < semantic.rows; ++r) {
            const int32_t c = (*stimuli.class_labels)[r];
            if (c < 0 || c >= num_classes_)
                throw ShapeError("pca_vision pipeline: class label out of range");
            for (int64_t j = 0; j < semantic.cols; ++j)
                semantic.at(r, j) = class_prototypes_.at(c, j);
        }
    }
    return {std::move(coarse), LatentTarget{"semantic", std::move(semantic)}};
}

StimulusSet PcaPriorVisionPipeline::reconstruct(
    const std::vector<Matrix>& predicted_latents) const {
    if (!fitted_) throw NotFitted("pca_vision pipeline: reconstruct before fit");
    if (predicted_latents.size() != 2)
        throw ShapeError("pca_vision pipeline: expected [coarse, semantic] latents");
    const Matrix& coarse = predicted_latents[0];
    const Matrix& semantic = predicted_latents[1];
    if (coarse.cols != pca_.num_components())
        throw ShapeError("pca_vision pipeline: coarse latent has " +
                         std::to_string(coarse.cols) + " dims, expected " +
                         std::to_string(pca_.num_components()));
    if (semantic.cols != config_.semantic_dim)
        throw ShapeError("pca_vision pipeline: semantic latent dim mismatch");
    if (coarse.rows != semantic.rows)
        throw ShapeError("pca_vision pipeline: latent row counts disagree");

    Matrix images = pca_.reconstruct(coarse);
    for (int64_t r = 0; r < images.rows; ++r) {
        // nearest prototype by cosine; its residual image scaled by the
        // (clamped) similarity fills in detail the coarse latents lack
        double norm = 0;
        for (int64_t j = 0; j < semantic.cols; ++j)
            norm += static_cast<double>(semantic.at(r, j)) * semantic.at(r, j);
        norm = std::sqrt(norm);
        if (norm > 1e-12) {
            int64_t best = 0;
            double best_cos = -2.0;
            for (int64_t c = 0; c < num_classes_; ++c) {
                double dot = 0;
                for (int64_t j = 0; j < semantic.cols; ++j)
                    dot += static_cast<double>(semantic.at(r, j)) *
                           class_prototypes_.at(c, j);
                const double cosine = dot / norm;  // prototypes are unit norm
                if (cosine > best_cos) {
                    best_cos = cosine;
                    best = c;
                }
            }
            const float s = static_cast<float>(std::clamp(best_cos, 0.0, 1.0));
            for (int64_t j = 0; j < images.cols; ++j)
                images.at(r, j) += s * class_residuals_.at(best, j);
        }
        for (int64_t j = 0; j < images.cols; ++j)
            images.at(r, j) = std::clamp(images.at(r, j), 0.0f, 1.0f);
    }

    StimulusSet out;
    out.kind = StimulusKind::Image;
    out.images = std::move(images);
    out.height = height_;
    out.width = width_;
    out.channels = channels_;
    return out;
}

StimulusSet PcaPriorVisionPipeline::prior_sample(uint64_t seed, int64_t n) const {
    if (!fitted_) throw NotFitted("pca_vision pipeline: prior_sample before fit");
    const int64_t k = pca_.num_components();
    Matrix coarse(n, k);
    Matrix semantic(n, config_.semantic_dim);
    Rng rng(derive_seed(seed, "vision-prior"));
    for (int64_t r = 0; r < n; ++r) {
        for (int64_t j = 0; j < k; ++j)
            coarse.at(r, j) = static_cast<float>(latent_mean_[j] +
                                                 latent_std_[j] * rng.next_normal());
        for (int64_t j = 0; j < config_.semantic_dim; ++j)
            semantic.at(r, j) =
                static_cast<float>(latent_mean_[k + j] +
                                   latent_std_[k + j] * rng.next_normal());
    }
    return reconstruct({coarse, semantic});
}

}  // namespace infoneck
