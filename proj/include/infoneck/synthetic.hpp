#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "infoneck/datamodel.hpp"

#include <nlohmann/json_fwd.hpp>

namespace infoneck {

// Forward-model world generator: recordings with a known informative channel
// set and known intrinsic dimensionality, paired with procedural stimuli.
// Everything a sweep claims about bottleneck widths is checkable against the
// generating parameters.
struct SyntheticWorldConfig {
    std::string kind = "shapes-image";  // or "ngram-text"
    int64_t latent_dim = 8;             // k (vision) / hidden target dim (text)
    int64_t num_channels = 256;
    int64_t num_informative = 32;       // informative channels are [0, num_informative)
    double noise_std = 0.05;
    int64_t num_examples = 2000;        // text: total decoding steps
    int64_t num_classes = 4;
    int64_t image_size = 32;            // square grayscale stimuli
    double class_code_scale = 2.0;      // scale of the one-hot code in the mix
    int64_t vocab_size = 50;
    int64_t sequence_length = 10;
    bool identity_mixing = false;       // text: recordings == hidden targets
    double train_fraction = 0.7, validation_fraction = 0.15, test_fraction = 0.15;
    uint64_t seed = 0;

    void validate() const;
};

SyntheticWorldConfig world_config_from_json(const nlohmann::json& j);

struct GroundTruth {
    std::string kind;
    int64_t latent_dim = 0;
    int64_t num_classes = 0;
    double noise_std = 0.0;
    double class_code_scale = 0.0;
    int64_t num_informative = 0;
    uint64_t seed = 0;

    Matrix latents;              // vision: n x k draws; text: n_steps x hidden_dim targets
    Matrix mixing;               // informative_channels x code_dim
    std::vector<int32_t> class_labels;  // vision only

    // Training target for oracle-equivalence runs: [z, scale * one_hot(class)]
    // for vision worlds, the hidden targets themselves for text worlds.
    Matrix latent_code() const;
};

struct SyntheticWorld {
    PairedDataset dataset;
    GroundTruth truth;
};

SyntheticWorld generate_vision_world(const SyntheticWorldConfig& config);
SyntheticWorld generate_text_world(const SyntheticWorldConfig& config);
SyntheticWorld generate_world(const SyntheticWorldConfig& config);

// Mean-per-element MSE of the best rank-L affine predictor of the latent
// code from the recordings, computed in closed form from the generating
// covariances. Defined for vision worlds, where those covariances are known
// analytically. Non-increasing in L; reaches the noise floor at
// L >= latent_dim + num_classes.
double oracle_best_linear(const GroundTruth& truth, int64_t rank);

// Ground truth is stored next to the dataset under truth/ and is read only
// by oracle tests, never by training code.
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& dir);
GroundTruth load_ground_truth(const std::filesystem::path& dir);

}  // namespace infoneck
