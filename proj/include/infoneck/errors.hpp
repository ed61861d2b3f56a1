#pragma once

#include <stdexcept>
#include <string>

namespace infoneck {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientData : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct AlignmentError : Error {
    using Error::Error;
};
struct TrainingDiverged : Error {
    int epoch;
    TrainingDiverged(const std::string& msg, int epoch_index)
        : Error(msg), epoch(epoch_index) {}
};
struct WidthExceedsInput : Error {
    using Error::Error;
};
struct SplitTooSmall : Error {
    using Error::Error;
};
struct CorruptDataset : Error {
    using Error::Error;
};
struct UnsupportedVersion : Error {
    using Error::Error;
};
struct NotFitted : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct UndefinedCorrelation : Error {
    using Error::Error;
};
struct UndefinedSimilarity : Error {
    using Error::Error;
};
struct UndefinedWER : Error {
    using Error::Error;
};
struct MissingRun : Error {
    using Error::Error;
};
struct RefusesToMix : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

}  // namespace infoneck
