#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "infoneck/pipelines.hpp"
#include "infoneck/rng.hpp"

namespace infoneck {

EncodingModelTextPipeline::EncodingModelTextPipeline(TextPipelineConfig config,
                                                     int64_t vocab_size)
    : config_(config), vocab_size_(vocab_size) {
    if (vocab_size_ < 2) throw ConfigError("encoding_text pipeline: vocabulary too small");
    if (config_.order < 1) throw ConfigError("encoding_text pipeline: order must be >= 1");
    embeddings_ = Matrix(vocab_size_, config_.embedding_dim);
    Rng emb_rng(derive_seed(config_.seed, "token-embeddings"));
    for (auto& v : embeddings_.values) v = static_cast<float>(emb_rng.next_normal());
    encoder_ = Matrix(config_.embedding_dim, config_.hidden_dim);
    Rng enc_rng(derive_seed(config_.seed, "encoding-map"));
    const double scale = 1.0 / std::sqrt(static_cast<double>(config_.embedding_dim));
    for (auto& v : encoder_.values) v = static_cast<float>(scale * enc_rng.next_normal());
}

int64_t EncodingModelTextPipeline::context_id(const std::vector<int32_t>& history) const {
    // last (order-1) tokens, left-padded with a start marker
    const int64_t base = vocab_size_ + 1;
    int64_t id = 0;
    for (int i = 0; i < config_.order - 1; ++i) {
        const int64_t pos = static_cast<int64_t>(history.size()) - (config_.order - 1) + i;
        const int64_t tok = pos >= 0 ? history[static_cast<size_t>(pos)] : vocab_size_;
        id = id * base + tok;
    }
    return id;
}

void EncodingModelTextPipeline::fit(const PairedDataset& dataset) {
    const StimulusSet& stimuli = dataset.stimuli;
    if (stimuli.kind != StimulusKind::Text)
        throw ConfigError("encoding_text pipeline needs text stimuli");
    sequence_length_ = stimuli.sequence_length;
    vocab_ = stimuli.vocab;
    if (static_cast<int64_t>(vocab_.size()) != vocab_size_)
        throw ConfigError("encoding_text pipeline: vocabulary size changed since construction");

    int64_t contexts = 1;
    for (int i = 0; i < config_.order - 1; ++i) contexts *= vocab_size_ + 1;
    context_counts_.assign(static_cast<size_t>(contexts),
                           std::vector<double>(static_cast<size_t>(vocab_size_), 0.0));
    context_totals_.assign(static_cast<size_t>(contexts), 0.0);

    // train sequences are the ones whose rows all sit in the train split
    std::vector<char> in_train(static_cast<size_t>(dataset.num_examples()), 0);
    for (int64_t r : dataset.splits.train) in_train[static_cast<size_t>(r)] = 1;
    for (size_t s = 0; s < stimuli.texts.size(); ++s) {
        bool train_seq = true;
        for (int64_t step = 0; step < sequence_length_; ++step)
            if (!in_train[static_cast<size_t>(static_cast<int64_t>(s) * sequence_length_ +
                                              step)])
                train_seq = false;
        if (!train_seq) continue;
        std::vector<int32_t> history;
        for (int32_t tok : stimuli.texts[s]) {
            const int64_t ctx = context_id(history);
            context_counts_[static_cast<size_t>(ctx)][static_cast<size_t>(tok)] += 1.0;
            context_totals_[static_cast<size_t>(ctx)] += 1.0;
            history.push_back(tok);
        }
    }
    fitted_ = true;
}

std::vector<double> EncodingModelTextPipeline::proposer_distribution(
    const std::vector<int32_t>& history) const {
    if (!fitted_) throw NotFitted("encoding_text pipeline: proposer before fit");
    const int64_t ctx = context_id(history);
    const auto& counts = context_counts_[static_cast<size_t>(ctx)];
    const double total = context_totals_[static_cast<size_t>(ctx)];
    std::vector<double> dist(static_cast<size_t>(vocab_size_));
    const double denom = total + config_.add_k * static_cast<double>(vocab_size_);
    for (int64_t w = 0; w < vocab_size_; ++w)
        dist[static_cast<size_t>(w)] = (counts[static_cast<size_t>(w)] + config_.add_k) / denom;
    return dist;
}

Matrix EncodingModelTextPipeline::encode_prefix(const std::vector<int32_t>& tokens) const {
    const int64_t t_len = static_cast<int64_t>(tokens.size());
    Matrix hidden(t_len, config_.hidden_dim);
    std::vector<double> mean_emb(static_cast<size_t>(config_.embedding_dim));
    for (int64_t t = 0; t < t_len; ++t) {
        const int64_t lo = std::max<int64_t>(0, t + 1 - config_.context_window);
        std::fill(mean_emb.begin(), mean_emb.end(), 0.0);
        for (int64_t p = lo; p <= t; ++p)
            for (int64_t j = 0; j < config_.embedding_dim; ++j)
                mean_emb[static_cast<size_t>(j)] += embeddings_.at(tokens[static_cast<size_t>(p)], j);
        const double inv = 1.0 / static_cast<double>(t - lo + 1);
        for (int64_t h = 0; h < config_.hidden_dim; ++h) {
            double acc = 0.0;
            for (int64_t j = 0; j < config_.embedding_dim; ++j)
                acc += mean_emb[static_cast<size_t>(j)] * inv * encoder_.at(j, h);
            hidden.at(t, h) = static_cast<float>(acc);
        }
    }
    return hidden;
}

std::vector<LatentTarget> EncodingModelTextPipeline::latent_targets(
    const StimulusSet& stimuli) const {
    if (stimuli.kind != StimulusKind::Text)
        throw ShapeError("encoding_text pipeline: expected text stimuli");
    const int64_t t_len = stimuli.sequence_length;
    Matrix hidden(static_cast<int64_t>(stimuli.texts.size()) * t_len, config_.hidden_dim);
    int64_t row = 0;
    for (const auto& seq : stimuli.texts) {
        if (static_cast<int64_t>(seq.size()) != t_len)
            throw ShapeError("encoding_text pipeline: ragged sequence lengths");
        Matrix h = encode_prefix(seq);
        std::copy(h.values.begin(), h.values.end(),
                  hidden.values.begin() + row * config_.hidden_dim);
        row += t_len;
    }
    return {LatentTarget{"hidden", std::move(hidden)}};
}

std::vector<int32_t> EncodingModelTextPipeline::decode(const Matrix& hidden_sequence) const {
    if (!fitted_) throw NotFitted("encoding_text pipeline: decode before fit");
    if (vocab_.empty() && vocab_size_ == 0)
        throw ConfigError("encoding_text pipeline: empty vocabulary");
    if (hidden_sequence.cols != config_.hidden_dim)
        throw ShapeError("encoding_text pipeline: hidden dim mismatch");

    struct Beam {
        std::vector<int32_t> tokens;
        double score = 0.0;
    };
    std::vector<Beam> beams{Beam{}};
    std::vector<Beam> extensions;
    for (int64_t t = 0; t < hidden_sequence.rows; ++t) {
        extensions.clear();
        for (const Beam& beam : beams) {
            std::vector<double> dist = proposer_distribution(beam.tokens);
            // top-p candidate nomination, ties toward lower ids
            std::vector<int32_t> cand(static_cast<size_t>(vocab_size_));
            std::iota(cand.begin(), cand.end(), 0);
            const size_t keep = std::min<size_t>(static_cast<size_t>(config_.top_p),
                                                 cand.size());
            std::partial_sort(cand.begin(), cand.begin() + static_cast<int64_t>(keep),
                              cand.end(), [&](int32_t a, int32_t b) {
                                  if (dist[static_cast<size_t>(a)] != dist[static_cast<size_t>(b)])
                                      return dist[static_cast<size_t>(a)] > dist[static_cast<size_t>(b)];
                                  return a < b;
                              });
            for (size_t ci = 0; ci < keep; ++ci) {
                Beam next = beam;
                next.tokens.push_back(cand[ci]);
                // encoding-model likelihood: negative squared distance between
                // the encoded candidate context and this step's hidden vector
                const int64_t lo =
                    std::max<int64_t>(0, static_cast<int64_t>(next.tokens.size()) -
                                             config_.context_window);
                double dist2 = 0.0;
                for (int64_t h = 0; h < config_.hidden_dim; ++h) {
                    double acc = 0.0;
                    for (int64_t j = 0; j < config_.embedding_dim; ++j) {
                        double memb = 0.0;
                        for (size_t p = static_cast<size_t>(lo); p < next.tokens.size(); ++p)
                            memb += embeddings_.at(next.tokens[p], j);
                        memb /= static_cast<double>(next.tokens.size() - static_cast<size_t>(lo));
                        acc += memb * encoder_.at(j, h);
                    }
                    const double diff = acc - hidden_sequence.at(t, h);
                    dist2 += diff * diff;
                }
                next.score -= dist2;
                extensions.push_back(std::move(next));
            }
        }
        std::sort(extensions.begin(), extensions.end(), [](const Beam& a, const Beam& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.tokens < b.tokens;
        });
        const size_t keep = std::min<size_t>(static_cast<size_t>(config_.beam_width),
                                             extensions.size());
        beams.assign(extensions.begin(), extensions.begin() + static_cast<int64_t>(keep));
    }
    return beams.front().tokens;
}

StimulusSet EncodingModelTextPipeline::reconstruct(
    const std::vector<Matrix>& predicted_latents) const {
    if (!fitted_) throw NotFitted("encoding_text pipeline: reconstruct before fit");
    if (predicted_latents.size() != 1)
        throw ShapeError("encoding_text pipeline: expected one hidden latent");
    const Matrix& hidden = predicted_latents[0];
    if (hidden.rows % sequence_length_ != 0)
        throw ShapeError("encoding_text pipeline: rows are not whole sequences");

    StimulusSet out;
    out.kind = StimulusKind::Text;
    out.vocab = vocab_;
    out.sequence_length = sequence_length_;
    for (int64_t s = 0; s < hidden.rows / sequence_length_; ++s) {
        Matrix block(sequence_length_, hidden.cols);
        std::copy(hidden.values.begin() + s * sequence_length_ * hidden.cols,
                  hidden.values.begin() + (s + 1) * sequence_length_ * hidden.cols,
                  block.values.begin());
        out.texts.push_back(decode(block));
    }
    return out;
}

StimulusSet EncodingModelTextPipeline::prior_sample(uint64_t seed, int64_t n) const {
    if (!fitted_) throw NotFitted("encoding_text pipeline: prior_sample before fit");
    StimulusSet out;
    out.kind = StimulusKind::Text;
    out.vocab = vocab_;
    out.sequence_length = sequence_length_;
    Rng rng(derive_seed(seed, "text-prior"));
    for (int64_t s = 0; s < n; ++s)
        out.texts.push_back(sample_sequence(rng, sequence_length_));
    return out;
}

std::vector<int32_t> EncodingModelTextPipeline::sample_sequence(Rng& rng,
                                                                int64_t length) const {
    if (!fitted_) throw NotFitted("encoding_text pipeline: sampling before fit");
    std::vector<int32_t> tokens;
    for (int64_t t = 0; t < length; ++t) {
        std::vector<double> dist = proposer_distribution(tokens);
        double u = rng.next_double();
        int32_t pick = static_cast<int32_t>(vocab_size_ - 1);
        for (int64_t w = 0; w < vocab_size_; ++w) {
            u -= dist[static_cast<size_t>(w)];
            if (u <= 0) {
                pick = static_cast<int32_t>(w);
                break;
            }
        }
        tokens.push_back(pick);
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// Registry

std::unique_ptr<ReconstructionPipeline> make_pipeline(const std::string& pipeline_id,
                                                      const nlohmann::json& params,
                                                      const PairedDataset& dataset) {
    auto get = [&](const char* key, auto fallback) {
        using T = decltype(fallback);
        return params.contains(key) ? params.at(key).get<T>() : fallback;
    };
    if (pipeline_id == "pca_vision") {
        VisionPipelineConfig cfg;
        cfg.pca_k = get("pca_k", cfg.pca_k);
        cfg.semantic_dim = get("semantic_dim", cfg.semantic_dim);
        cfg.seed = get("seed", derive_seed(dataset.seed, "vision-pipeline"));
        return std::make_unique<PcaPriorVisionPipeline>(cfg);
    }
    if (pipeline_id == "encoding_text") {
        TextPipelineConfig cfg;
        cfg.embedding_dim = get("embedding_dim", cfg.embedding_dim);
        cfg.hidden_dim = get("hidden_dim", cfg.hidden_dim);
        cfg.order = get("order", cfg.order);
        cfg.add_k = get("add_k", cfg.add_k);
        cfg.top_p = get("top_p", cfg.top_p);
        cfg.beam_width = get("beam_width", cfg.beam_width);
        cfg.context_window = get("context_window", cfg.context_window);
        // matches the derivation text worlds use, so pipeline targets line
        // up with the signal mixed into the recordings
        cfg.seed = get("seed", derive_seed(dataset.seed, "text-pipeline"));
        return std::make_unique<EncodingModelTextPipeline>(
            cfg, static_cast<int64_t>(dataset.stimuli.vocab.size()));
    }
    throw ConfigError("unknown pipeline id '" + pipeline_id + "'");
}

}  // namespace infoneck
