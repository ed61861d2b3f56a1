#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "infoneck/bottleneck.hpp"
#include "infoneck/datamodel.hpp"
#include "infoneck/numerics.hpp"

#include <nlohmann/json_fwd.hpp>

namespace infoneck {

// A reconstruction method seen from the outside: stimuli in, latent targets
// out; predicted latents in, reconstructed stimuli out; plus samples from
// the method's own generative prior.
class ReconstructionPipeline {
public:
    virtual ~ReconstructionPipeline() = default;
    virtual std::string id() const = 0;

    // Fits pipeline internals (PCA basis, class prototypes, proposer counts)
    // on the dataset's train split. Recordings are never touched.
    virtual void fit(const PairedDataset& dataset) = 0;
    virtual bool fitted() const = 0;

    // Latent target matrices for every dataset row, in a stable order.
    virtual std::vector<LatentTarget> latent_targets(const StimulusSet& stimuli) const = 0;

    // Reconstruction from predicted latents (same order as latent_targets).
    virtual StimulusSet reconstruct(const std::vector<Matrix>& predicted_latents) const = 0;

    // Stimuli drawn from the pipeline's prior, with no input at all.
    virtual StimulusSet prior_sample(uint64_t seed, int64_t n) const = 0;

    // Per-target loss weights a sweep uses unless overridden.
    virtual std::vector<double> default_loss_weights() const = 0;

    // True when the ceiling is a defined surrogate rather than the method's
    // own generator run on perfect latents (text has no native ceiling).
    virtual bool ceiling_is_surrogate() const { return false; }
};

// reconstruct(latent_targets(true stimuli)) on the given rows: the score a
// method reaches with perfect latent prediction.
StimulusSet compute_ceiling(const ReconstructionPipeline& pipeline,
                            const StimulusSet& stimuli, std::span<const int64_t> rows);

// ---------------------------------------------------------------------------
// Vision reference pipeline: PCA coarse latents plus a class-prototype
// semantic latent whose decoded prototype residual acts as the prior.

struct VisionPipelineConfig {
    int64_t pca_k = 64;
    int64_t semantic_dim = 16;
    uint64_t seed = 0;
};

class PcaPriorVisionPipeline final : public ReconstructionPipeline {
public:
    explicit PcaPriorVisionPipeline(VisionPipelineConfig config) : config_(config) {}

    std::string id() const override { return "pca_vision"; }
    void fit(const PairedDataset& dataset) override;
    bool fitted() const override { return fitted_; }
    std::vector<LatentTarget> latent_targets(const StimulusSet& stimuli) const override;
    StimulusSet reconstruct(const std::vector<Matrix>& predicted_latents) const override;
    StimulusSet prior_sample(uint64_t seed, int64_t n) const override;
    std::vector<double> default_loss_weights() const override { return {1.0, 2.0}; }

    const PcaModel& pca() const { return pca_; }
    const Matrix& class_prototypes() const { return class_prototypes_; }

private:
    VisionPipelineConfig config_;
    bool fitted_ = false;
    PcaModel pca_;
    Matrix class_prototypes_;     // num_classes x semantic_dim, unit rows
    Matrix class_residuals_;      // num_classes x pixels (class mean - global mean)
    std::vector<float> latent_mean_, latent_std_;  // train-latent gaussian fit
    int64_t height_ = 0, width_ = 0, channels_ = 0, num_classes_ = 0;
};

// ---------------------------------------------------------------------------
// Text reference pipeline: n-gram proposer + linear encoding map scoring,
// beam-searched autoregressive decoding.

struct TextPipelineConfig {
    int64_t embedding_dim = 16;
    int64_t hidden_dim = 12;
    int order = 2;           // proposer n-gram order
    double add_k = 0.1;      // additive smoothing
    int top_p = 8;           // candidates nominated per step
    int beam_width = 4;
    int context_window = 4;  // tokens averaged into the encoding context
    uint64_t seed = 0;
};

class EncodingModelTextPipeline final : public ReconstructionPipeline {
public:
    // The embedding table and encoding map are frozen functions of
    // (vocab size, dims, seed); fit() only estimates the proposer.
    EncodingModelTextPipeline(TextPipelineConfig config, int64_t vocab_size);

    std::string id() const override { return "encoding_text"; }
    void fit(const PairedDataset& dataset) override;
    bool fitted() const override { return fitted_; }
    std::vector<LatentTarget> latent_targets(const StimulusSet& stimuli) const override;
    StimulusSet reconstruct(const std::vector<Matrix>& predicted_latents) const override;
    StimulusSet prior_sample(uint64_t seed, int64_t n) const override;
    std::vector<double> default_loss_weights() const override { return {1.0}; }
    bool ceiling_is_surrogate() const override { return true; }

    // Beam search over proposer candidates, each extension scored by the
    // negative squared distance between the encoded candidate context and
    // the step's hidden vector. Deterministic; ties break toward lower ids.
    std::vector<int32_t> decode(const Matrix& hidden_sequence) const;

    // Per-step encoding of a token prefix: enc(mean embedding of the last
    // context_window tokens ending at each step). rows = prefix length.
    Matrix encode_prefix(const std::vector<int32_t>& tokens) const;

    // Proposer distribution over the next token for a given history.
    std::vector<double> proposer_distribution(const std::vector<int32_t>& history) const;

    std::vector<int32_t> sample_sequence(Rng& rng, int64_t length) const;

    void set_vocab(std::vector<std::string> vocab) { vocab_ = std::move(vocab); }
    const std::vector<std::string>& vocab() const { return vocab_; }
    int64_t vocab_size() const { return vocab_size_; }
    int64_t sequence_length() const { return sequence_length_; }
    const TextPipelineConfig& config() const { return config_; }

private:
    TextPipelineConfig config_;
    int64_t vocab_size_ = 0;
    bool fitted_ = false;
    Matrix embeddings_;   // vocab x embedding_dim, frozen
    Matrix encoder_;      // embedding_dim x hidden_dim, frozen
    int64_t sequence_length_ = 0;
    std::vector<std::string> vocab_;
    // proposer counts: context id -> per-token counts; context id hashes the
    // last (order-1) tokens, with a dedicated start context
    std::vector<std::vector<double>> context_counts_;
    std::vector<double> context_totals_;
    int64_t context_id(const std::vector<int32_t>& history) const;
};

// Registry keyed by string id; params come from harness config files.
std::unique_ptr<ReconstructionPipeline> make_pipeline(const std::string& pipeline_id,
                                                      const nlohmann::json& params,
                                                      const PairedDataset& dataset);

}  // namespace infoneck
