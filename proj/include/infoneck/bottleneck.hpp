#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "infoneck/datamodel.hpp"
#include "infoneck/numerics.hpp"

namespace infoneck {

// A named latent target matrix, row-aligned with the dataset examples.
struct LatentTarget {
    std::string name;
    Matrix values;  // examples x target_dim
};

// out = x * weight + bias
struct AffineMap {
    Matrix weight;            // in_dim x out_dim
    std::vector<float> bias;  // out_dim (empty when the map has no bias)

    int64_t in_dim() const { return weight.rows; }
    int64_t out_dim() const { return weight.cols; }
    Matrix apply(const Matrix& x) const;
};

struct BottleneckSpec {
    int64_t width = 8;  // L, shared by all streams
    bool compression_bias = true;
    bool readout_bias = true;
    std::vector<double> loss_weights;  // one per latent target
    TrainerConfig trainer;
    bool standardize_inputs = true;
    // With multiple streams each target must name the stream it reads from;
    // with a single stream this may stay empty.
    std::vector<std::string> target_streams;
    // L >= channels stops restricting information; opt in to proceed anyway
    // (needed for the unrestricted full-input reference run).
    bool allow_width_at_or_above_input = false;
};

// One stream's trained compression plus the readouts it feeds.
struct StreamBottleneck {
    std::string stream_name;
    Standardizer standardizer;       // always fitted on train rows
    bool inputs_standardized = true; // whether the forward pass applies it
    AffineMap compress;              // channels -> L
    std::vector<int> target_indices; // indices into the training target list
    std::vector<AffineMap> readouts; // L -> target dim, aligned with target_indices
    std::vector<EpochStats> training_curve;
    double best_validation_loss = 0.0;
    int64_t best_epoch = 0;
};

struct TrainedBottleneck {
    int64_t width = 0;
    uint64_t seed = 0;
    std::vector<double> loss_weights;
    std::vector<std::string> target_names;
    std::vector<StreamBottleneck> streams;
    double best_validation_loss = 0.0;  // summed over streams
    double train_loss_at_best = 0.0;    // full-batch train loss of the returned maps
    bool random_floor = false;          // trained on noise instead of recordings

    const StreamBottleneck& stream(const std::string& name) const;
};

struct BottleneckOutput {
    Matrix hidden;                         // examples x (L * num_streams)
    std::vector<Matrix> predicted_latents; // aligned with target_names
};

// Joint training of the compression map and all readouts against weighted
// MSE on the latent targets, with per-epoch best-validation checkpointing.
TrainedBottleneck train_bottleneck(const PairedDataset& dataset,
                                   const std::vector<LatentTarget>& targets,
                                   const BottleneckSpec& spec);

// Identical procedure with every recording row replaced by a frozen
// standard-normal draw: the resulting predictions carry only the targets'
// prior, no example identity.
TrainedBottleneck train_random_floor(const PairedDataset& dataset,
                                     const std::vector<LatentTarget>& targets,
                                     const BottleneckSpec& spec);

// The frozen noise recordings a floor run trains and evaluates on,
// reproducible from the trainer seed.
std::vector<RecordingStream> make_floor_recordings(const PairedDataset& dataset,
                                                   uint64_t trainer_seed);

BottleneckOutput apply_bottleneck(const TrainedBottleneck& tb,
                                  const std::vector<RecordingStream>& recordings);

// Mean weighted-MSE of the trained maps on the given rows (used to re-check
// the recorded training loss and to score test-split latent prediction).
double evaluate_loss(const TrainedBottleneck& tb, const PairedDataset& dataset,
                     const std::vector<LatentTarget>& targets,
                     const std::vector<int64_t>& rows);

// Per-channel relevance: the norm of the channel's compression weights in
// train-standard-deviation units (bias excluded).
struct SaliencyReport {
    std::vector<std::string> stream_names;
    std::vector<std::vector<double>> per_channel;  // one vector per stream
    // present when a stream carries channel labels
    std::vector<std::map<std::string, double>> by_region;
};
SaliencyReport export_saliency(const TrainedBottleneck& tb);

// Container serialization (manifest + f32 payloads).
void save_bottleneck(const TrainedBottleneck& tb, const std::filesystem::path& dir);
TrainedBottleneck load_bottleneck(const std::filesystem::path& dir);

}  // namespace infoneck
