#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "infoneck/matrix.hpp"

namespace infoneck {

// One named block of recording channels. Multiple streams model inputs that
// are bottlenecked separately (e.g. per-region recordings).
struct RecordingStream {
    std::string name;
    Matrix data;  // examples x channels
    std::optional<std::vector<std::string>> channel_labels;
};

enum class StimulusKind { Image, Text };

// Either an image tensor or a token corpus; never both.
struct StimulusSet {
    StimulusKind kind = StimulusKind::Image;

    // images: flattened examples x (height*width*channels), values in [0,1]
    Matrix images;
    int64_t height = 0, width = 0, channels = 0;

    // text: rows of the dataset are decoding steps; sequences are fixed-length
    // contiguous runs of rows. texts[s] is the reference token sequence s.
    std::vector<std::vector<int32_t>> texts;
    std::vector<std::string> vocab;  // token id -> token string
    int64_t sequence_length = 0;

    std::optional<std::vector<int32_t>> class_labels;  // per example

    int64_t num_examples() const {
        return kind == StimulusKind::Image
                   ? images.rows
                   : static_cast<int64_t>(texts.size()) * sequence_length;
    }
    int64_t image_dim() const { return height * width * channels; }
};

struct Splits {
    std::vector<int64_t> train, validation, test;
};

struct PairedDataset {
    std::vector<RecordingStream> streams;
    StimulusSet stimuli;
    Splits splits;
    uint64_t seed = 0;

    int64_t num_examples() const { return streams.empty() ? 0 : streams[0].data.rows; }
    const RecordingStream& stream(const std::string& name) const;
    void validate() const;  // shape/alignment invariants
};

// Deterministic shuffled partition of [0, n). Fractions must be positive and
// sum to 1; sizes follow largest-remainder rounding. Throws SplitTooSmall if
// any split rounds to empty.
Splits split_dataset(int64_t n, double train_fraction, double validation_fraction,
                     double test_fraction, uint64_t seed);

// On-disk container: manifest.json plus raw little-endian float payloads
// (<stream>.f32, images.f32) and newline-delimited token text (texts.tok,
// vocab.txt). Round-trips are bitwise lossless for float payloads.
std::filesystem::path save_dataset(const PairedDataset& dataset,
                                   const std::filesystem::path& directory);
PairedDataset load_dataset(const std::filesystem::path& directory);

// Payload helpers shared with other serialized artifacts (bottlenecks,
// ground truth, sweep cells).
void write_f32_payload(const std::filesystem::path& path, const Matrix& m);
Matrix read_f32_payload(const std::filesystem::path& path, int64_t rows, int64_t cols);
uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace infoneck
