#include "infoneck/bottleneck.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "infoneck/rng.hpp"

namespace infoneck {

using json = nlohmann::json;
namespace fs = std::filesystem;

using EMatF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapF = Eigen::Map<EMatF>;
using CMapF = Eigen::Map<const EMatF>;
using VecMapF = Eigen::Map<Eigen::VectorXf>;
using CVecMapF = Eigen::Map<const Eigen::VectorXf>;

Matrix AffineMap::apply(const Matrix& x) const {
    if (x.cols != weight.rows)
        throw ShapeError("AffineMap: input has " + std::to_string(x.cols) +
                         " columns, map expects " + std::to_string(weight.rows));
    Matrix out(x.rows, weight.cols);
    MapF o(out.values.data(), out.rows, out.cols);
    o = CMapF(x.values.data(), x.rows, x.cols) *
        CMapF(weight.values.data(), weight.rows, weight.cols);
    if (!bias.empty())
        o.rowwise() += CVecMapF(bias.data(), static_cast<int64_t>(bias.size())).transpose();
    return out;
}

const StreamBottleneck& TrainedBottleneck::stream(const std::string& name) const {
    for (const auto& s : streams)
        if (s.stream_name == name) return s;
    throw ShapeError("bottleneck has no stream named '" + name + "'");
}

namespace {

// Flat parameter layout per stream: [G (c x L)] [g_b (L)] then one
// [F_t (L x D_t)] [f_b (D_t)] block per target fed by the stream.
struct ParamLayout {
    int64_t channels = 0, width = 0;
    bool g_bias = false, f_bias = false;
    std::vector<int64_t> target_dims;

    int64_t g_offset() const { return 0; }
    int64_t gb_offset() const { return channels * width; }
    int64_t readout_offset(size_t t) const {
        int64_t off = channels * width + (g_bias ? width : 0);
        for (size_t i = 0; i < t; ++i)
            off += width * target_dims[i] + (f_bias ? target_dims[i] : 0);
        return off;
    }
    int64_t fb_offset(size_t t) const { return readout_offset(t) + width * target_dims[t]; }
    int64_t total() const {
        return readout_offset(target_dims.size());
    }
};

class BottleneckProblem final : public GradientProblem {
public:
    BottleneckProblem(Matrix train_x, Matrix val_x, std::vector<Matrix> train_t,
                      std::vector<Matrix> val_t, std::vector<double> weights,
                      ParamLayout layout)
        : train_x_(std::move(train_x)),
          val_x_(std::move(val_x)),
          train_t_(std::move(train_t)),
          val_t_(std::move(val_t)),
          weights_(std::move(weights)),
          layout_(layout) {}

    int64_t num_examples() const override { return train_x_.rows; }
    int64_t num_params() const override { return layout_.total(); }

    void init_params(std::span<float> params, Rng& rng) const override {
        std::fill(params.begin(), params.end(), 0.0f);
        const double g_scale = 1.0 / std::sqrt(static_cast<double>(layout_.channels));
        for (int64_t i = 0; i < layout_.channels * layout_.width; ++i)
            params[layout_.g_offset() + i] = static_cast<float>(g_scale * rng.next_normal());
        const double f_scale = 1.0 / std::sqrt(static_cast<double>(layout_.width));
        for (size_t t = 0; t < layout_.target_dims.size(); ++t) {
            const int64_t count = layout_.width * layout_.target_dims[t];
            for (int64_t i = 0; i < count; ++i)
                params[layout_.readout_offset(t) + i] =
                    static_cast<float>(f_scale * rng.next_normal());
        }
    }

    double batch_loss_grad(std::span<const float> params, std::span<const int64_t> batch,
                           std::span<float> grad) const override {
        const int64_t b = static_cast<int64_t>(batch.size());
        const int64_t c = layout_.channels, L = layout_.width;

        xb_.resize(b, c);
        for (int64_t r = 0; r < b; ++r)
            xb_.row(r) = CMapF(train_x_.values.data(), train_x_.rows, c).row(batch[r]);

        CMapF g(params.data() + layout_.g_offset(), c, L);
        hid_.resize(b, L);
        hid_ = xb_ * g;
        if (layout_.g_bias)
            hid_.rowwise() += CVecMapF(params.data() + layout_.gb_offset(), L).transpose();

        dhid_.setZero(b, L);
        double loss = 0.0;
        for (size_t t = 0; t < layout_.target_dims.size(); ++t) {
            const int64_t d = layout_.target_dims[t];
            CMapF f(params.data() + layout_.readout_offset(t), L, d);
            pred_.resize(b, d);
            pred_ = hid_ * f;
            if (layout_.f_bias)
                pred_.rowwise() += CVecMapF(params.data() + layout_.fb_offset(t), d).transpose();
            for (int64_t r = 0; r < b; ++r)
                pred_.row(r) -= CMapF(train_t_[t].values.data(), train_t_[t].rows, d)
                                    .row(batch[r]);
            // pred_ now holds the residual
            loss += weights_[t] * static_cast<double>(pred_.squaredNorm()) /
                    static_cast<double>(b * d);
            const float scale = static_cast<float>(2.0 * weights_[t] / static_cast<double>(b * d));
            pred_ *= scale;  // dL/dP
            MapF df(grad.data() + layout_.readout_offset(t), L, d);
            df.noalias() += hid_.transpose() * pred_;
            if (layout_.f_bias)
                VecMapF(grad.data() + layout_.fb_offset(t), d).noalias() +=
                    pred_.colwise().sum().transpose();
            dhid_.noalias() += pred_ * f.transpose();
        }
        MapF dg(grad.data() + layout_.g_offset(), c, L);
        dg.noalias() += xb_.transpose() * dhid_;
        if (layout_.g_bias)
            VecMapF(grad.data() + layout_.gb_offset(), L).noalias() +=
                dhid_.colwise().sum().transpose();
        return loss;
    }

    double validation_loss(std::span<const float> params) const override {
        return loss_only(params, val_x_, val_t_);
    }

    double loss_only(std::span<const float> params, const Matrix& x,
                     const std::vector<Matrix>& targets) const {
        const int64_t n = x.rows, c = layout_.channels, L = layout_.width;
        CMapF g(params.data() + layout_.g_offset(), c, L);
        EMatF hid = CMapF(x.values.data(), n, c) * g;
        if (layout_.g_bias)
            hid.rowwise() += CVecMapF(params.data() + layout_.gb_offset(), L).transpose();
        double loss = 0.0;
        for (size_t t = 0; t < layout_.target_dims.size(); ++t) {
            const int64_t d = layout_.target_dims[t];
            CMapF f(params.data() + layout_.readout_offset(t), L, d);
            EMatF pred = hid * f;
            if (layout_.f_bias)
                pred.rowwise() += CVecMapF(params.data() + layout_.fb_offset(t), d).transpose();
            pred -= CMapF(targets[t].values.data(), n, d);
            loss += weights_[t] * static_cast<double>(pred.squaredNorm()) /
                    static_cast<double>(n * d);
        }
        return loss;
    }

    const ParamLayout& layout() const { return layout_; }

private:
    Matrix train_x_, val_x_;
    std::vector<Matrix> train_t_, val_t_;
    std::vector<double> weights_;
    ParamLayout layout_;
    mutable EMatF xb_, hid_, dhid_, pred_;
};

std::vector<int64_t> all_rows(int64_t n) {
    std::vector<int64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

// Assigns each target to the stream that feeds it. Single-stream datasets
// default to that stream; multi-stream runs must name the mapping.
std::vector<std::vector<int>> group_targets_by_stream(
    const PairedDataset& dataset, const std::vector<LatentTarget>& targets,
    const BottleneckSpec& spec) {
    std::vector<std::vector<int>> groups(dataset.streams.size());
    if (dataset.streams.size() == 1 && spec.target_streams.empty()) {
        for (int t = 0; t < static_cast<int>(targets.size()); ++t) groups[0].push_back(t);
        return groups;
    }
    if (spec.target_streams.size() != targets.size())
        throw ConfigError(
            "multi-stream training needs one target_streams entry per latent target");
    for (int t = 0; t < static_cast<int>(targets.size()); ++t) {
        bool found = false;
        for (size_t s = 0; s < dataset.streams.size(); ++s) {
            if (dataset.streams[s].name == spec.target_streams[t]) {
                groups[s].push_back(t);
                found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError("target '" + targets[t].name +
                              "' names unknown stream '" + spec.target_streams[t] + "'");
    }
    return groups;
}

TrainedBottleneck train_impl(const PairedDataset& dataset,
                             const std::vector<LatentTarget>& targets,
                             const BottleneckSpec& spec, bool floor) {
    dataset.validate();
    if (spec.width < 1) throw ConfigError("bottleneck width must be >= 1");
    if (targets.empty()) throw ConfigError("no latent targets given");
    std::vector<double> weights = spec.loss_weights;
    if (weights.empty()) weights.assign(targets.size(), 1.0);
    if (weights.size() != targets.size())
        throw ConfigError("need one loss weight per latent target");
    for (double w : weights)
        if (w < 0) throw ConfigError("loss weights must be non-negative");

    const int64_t n = dataset.num_examples();
    for (const auto& t : targets) {
        if (t.values.rows != n)
            throw AlignmentError("latent target '" + t.name + "' has " +
                                 std::to_string(t.values.rows) +
                                 " rows, dataset has " + std::to_string(n));
    }

    TrainedBottleneck tb;
    tb.width = spec.width;
    tb.seed = spec.trainer.seed;
    tb.loss_weights = weights;
    tb.random_floor = floor;
    for (const auto& t : targets) tb.target_names.push_back(t.name);

    auto groups = group_targets_by_stream(dataset, targets, spec);

    for (size_t s = 0; s < dataset.streams.size(); ++s) {
        const RecordingStream& rs = dataset.streams[s];
        if (spec.width >= rs.data.cols && !spec.allow_width_at_or_above_input)
            throw WidthExceedsInput("width " + std::to_string(spec.width) +
                                    " >= " + std::to_string(rs.data.cols) +
                                    " channels of stream '" + rs.name +
                                    "'; it no longer restricts information");
        if (groups[s].empty()) continue;

        Matrix data = rs.data;
        if (floor) {
            // frozen per-example standard-normal substitute for the recordings
            Rng noise_rng(derive_seed(spec.trainer.seed, "floor-noise", s));
            for (auto& v : data.values) v = static_cast<float>(noise_rng.next_normal());
        }

        Matrix train_raw = data.take_rows(dataset.splits.train);
        auto [standardizer, train_std] = standardize(train_raw);
        Matrix train_x = spec.standardize_inputs ? std::move(train_std)
                                                 : std::move(train_raw);
        Matrix val_raw = data.take_rows(dataset.splits.validation);
        Matrix val_x =
            spec.standardize_inputs ? standardizer.transform(val_raw) : std::move(val_raw);

        ParamLayout layout;
        layout.channels = rs.data.cols;
        layout.width = spec.width;
        layout.g_bias = spec.compression_bias;
        layout.f_bias = spec.readout_bias;
        std::vector<Matrix> train_t, val_t;
        std::vector<double> w;
        for (int ti : groups[s]) {
            layout.target_dims.push_back(targets[ti].values.cols);
            train_t.push_back(targets[ti].values.take_rows(dataset.splits.train));
            val_t.push_back(targets[ti].values.take_rows(dataset.splits.validation));
            w.push_back(weights[ti]);
        }

        BottleneckProblem problem(std::move(train_x), std::move(val_x), std::move(train_t),
                                  std::move(val_t), std::move(w), layout);
        TrainerConfig trainer = spec.trainer;
        trainer.seed = derive_seed(spec.trainer.seed, "stream", s);
        TrainResult result = train_adamw(problem, trainer);

        StreamBottleneck sb;
        sb.stream_name = rs.name;
        sb.standardizer = standardizer;
        sb.inputs_standardized = spec.standardize_inputs;
        sb.compress.weight = Matrix(layout.channels, layout.width);
        std::copy_n(result.params.data() + layout.g_offset(),
                    layout.channels * layout.width, sb.compress.weight.values.data());
        if (layout.g_bias)
            sb.compress.bias.assign(result.params.data() + layout.gb_offset(),
                                    result.params.data() + layout.gb_offset() + layout.width);
        for (size_t t = 0; t < layout.target_dims.size(); ++t) {
            AffineMap f;
            f.weight = Matrix(layout.width, layout.target_dims[t]);
            std::copy_n(result.params.data() + layout.readout_offset(t),
                        layout.width * layout.target_dims[t], f.weight.values.data());
            if (layout.f_bias)
                f.bias.assign(result.params.data() + layout.fb_offset(t),
                              result.params.data() + layout.fb_offset(t) +
                                  layout.target_dims[t]);
            sb.readouts.push_back(std::move(f));
            sb.target_indices.push_back(groups[s][t]);
        }
        sb.training_curve = result.curve;
        sb.best_validation_loss = result.best_validation_loss;
        sb.best_epoch = result.best_epoch;
        tb.best_validation_loss += result.best_validation_loss;
        tb.streams.push_back(std::move(sb));
    }
    if (tb.streams.empty()) throw ConfigError("no stream feeds any latent target");

    // full-batch train loss of the returned (best-validation) maps, recorded
    // so a later apply() can be checked against it
    if (!floor) {
        tb.train_loss_at_best = evaluate_loss(tb, dataset, targets, dataset.splits.train);
    } else {
        PairedDataset noisy = dataset;
        noisy.streams = make_floor_recordings(dataset, spec.trainer.seed);
        tb.train_loss_at_best = evaluate_loss(tb, noisy, targets, dataset.splits.train);
    }
    return tb;
}

}  // namespace

TrainedBottleneck train_bottleneck(const PairedDataset& dataset,
                                   const std::vector<LatentTarget>& targets,
                                   const BottleneckSpec& spec) {
    return train_impl(dataset, targets, spec, false);
}

TrainedBottleneck train_random_floor(const PairedDataset& dataset,
                                     const std::vector<LatentTarget>& targets,
                                     const BottleneckSpec& spec) {
    return train_impl(dataset, targets, spec, true);
}

std::vector<RecordingStream> make_floor_recordings(const PairedDataset& dataset,
                                                   uint64_t trainer_seed) {
    std::vector<RecordingStream> out;
    for (size_t s = 0; s < dataset.streams.size(); ++s) {
        RecordingStream rs;
        rs.name = dataset.streams[s].name;
        rs.data = Matrix(dataset.streams[s].data.rows, dataset.streams[s].data.cols);
        Rng noise_rng(derive_seed(trainer_seed, "floor-noise", s));
        for (auto& v : rs.data.values) v = static_cast<float>(noise_rng.next_normal());
        out.push_back(std::move(rs));
    }
    return out;
}

BottleneckOutput apply_bottleneck(const TrainedBottleneck& tb,
                                  const std::vector<RecordingStream>& recordings) {
    BottleneckOutput out;
    out.predicted_latents.resize(tb.target_names.size());
    std::vector<Matrix> hiddens;
    for (const auto& sb : tb.streams) {
        const RecordingStream* rec = nullptr;
        for (const auto& r : recordings)
            if (r.name == sb.stream_name) rec = &r;
        if (!rec) throw ShapeError("apply_bottleneck: no recording stream named '" +
                                   sb.stream_name + "'");
        if (rec->data.cols != sb.compress.weight.rows)
            throw ShapeError("apply_bottleneck: stream '" + sb.stream_name + "' has " +
                             std::to_string(rec->data.cols) + " channels, trained with " +
                             std::to_string(sb.compress.weight.rows));
        Matrix x = sb.inputs_standardized ? sb.standardizer.transform(rec->data) : rec->data;
        Matrix hidden = sb.compress.apply(x);
        for (size_t t = 0; t < sb.readouts.size(); ++t)
            out.predicted_latents[static_cast<size_t>(sb.target_indices[t])] =
                sb.readouts[t].apply(hidden);
        hiddens.push_back(std::move(hidden));
    }
    out.hidden = hcat(hiddens);
    return out;
}

double evaluate_loss(const TrainedBottleneck& tb, const PairedDataset& dataset,
                     const std::vector<LatentTarget>& targets,
                     const std::vector<int64_t>& rows) {
    std::vector<RecordingStream> subset;
    for (const auto& s : dataset.streams)
        subset.push_back({s.name, s.data.take_rows(rows), {}});
    BottleneckOutput out = apply_bottleneck(tb, subset);
    double loss = 0.0;
    for (size_t t = 0; t < targets.size(); ++t) {
        const Matrix& pred = out.predicted_latents[t];
        if (pred.rows == 0) continue;  // target not fed by any stream
        Matrix truth = targets[t].values.take_rows(rows);
        double sse = 0.0;
        for (size_t i = 0; i < pred.values.size(); ++i) {
            const double d = static_cast<double>(pred.values[i]) - truth.values[i];
            sse += d * d;
        }
        loss += tb.loss_weights[t] * sse / static_cast<double>(pred.rows * pred.cols);
    }
    return loss;
}

SaliencyReport export_saliency(const TrainedBottleneck& tb) {
    SaliencyReport report;
    for (const auto& sb : tb.streams) {
        const int64_t channels = sb.compress.weight.rows;
        std::vector<double> sal(static_cast<size_t>(channels), 0.0);
        for (int64_t c = 0; c < channels; ++c) {
            double ss = 0.0;
            for (int64_t l = 0; l < sb.compress.weight.cols; ++l) {
                const double w = sb.compress.weight.at(c, l);
                ss += w * w;
            }
            double norm = std::sqrt(ss);
            if (!sb.inputs_standardized) {
                // convert raw-unit weights to per-train-std units so both
                // modes report on the same scale
                norm *= (sb.standardizer.constant_column[c]
                             ? 0.0
                             : 1.0 / sb.standardizer.scale[c]);
            }
            sal[static_cast<size_t>(c)] = norm;
        }
        report.stream_names.push_back(sb.stream_name);
        report.per_channel.push_back(std::move(sal));
        report.by_region.emplace_back();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr int kBottleneckSchemaVersion = 1;

Matrix vec_as_row(const std::vector<float>& v) {
    Matrix m(1, static_cast<int64_t>(v.size()));
    m.values = v;
    return m;
}

}  // namespace

void save_bottleneck(const TrainedBottleneck& tb, const fs::path& dir) {
    fs::create_directories(dir);
    json manifest;
    manifest["schema_version"] = kBottleneckSchemaVersion;
    manifest["kind"] = "bottleneck";
    manifest["width"] = tb.width;
    manifest["seed"] = tb.seed;
    manifest["loss_weights"] = tb.loss_weights;
    manifest["target_names"] = tb.target_names;
    manifest["best_validation_loss"] = tb.best_validation_loss;
    manifest["train_loss_at_best"] = tb.train_loss_at_best;
    manifest["random_floor"] = tb.random_floor;

    json streams = json::array();
    for (size_t s = 0; s < tb.streams.size(); ++s) {
        const StreamBottleneck& sb = tb.streams[s];
        const std::string prefix = "s" + std::to_string(s);
        json entry;
        entry["name"] = sb.stream_name;
        entry["inputs_standardized"] = sb.inputs_standardized;
        entry["channels"] = sb.compress.weight.rows;
        entry["target_indices"] = sb.target_indices;
        entry["best_validation_loss"] = sb.best_validation_loss;
        entry["best_epoch"] = sb.best_epoch;

        Matrix std_block(3, static_cast<int64_t>(sb.standardizer.mean.size()));
        for (size_t c = 0; c < sb.standardizer.mean.size(); ++c) {
            std_block.at(0, static_cast<int64_t>(c)) = sb.standardizer.mean[c];
            std_block.at(1, static_cast<int64_t>(c)) = sb.standardizer.scale[c];
            std_block.at(2, static_cast<int64_t>(c)) =
                static_cast<float>(sb.standardizer.constant_column[c]);
        }
        write_f32_payload(dir / (prefix + "_std.f32"), std_block);
        write_f32_payload(dir / (prefix + "_gw.f32"), sb.compress.weight);
        entry["g_bias"] = !sb.compress.bias.empty();
        if (!sb.compress.bias.empty())
            write_f32_payload(dir / (prefix + "_gb.f32"), vec_as_row(sb.compress.bias));
        json readouts = json::array();
        for (size_t t = 0; t < sb.readouts.size(); ++t) {
            const std::string rp = prefix + "_r" + std::to_string(t);
            write_f32_payload(dir / (rp + "_w.f32"), sb.readouts[t].weight);
            json r{{"out_dim", sb.readouts[t].weight.cols},
                   {"bias", !sb.readouts[t].bias.empty()}};
            if (!sb.readouts[t].bias.empty())
                write_f32_payload(dir / (rp + "_b.f32"), vec_as_row(sb.readouts[t].bias));
            readouts.push_back(std::move(r));
        }
        entry["readouts"] = std::move(readouts);
        json curve = json::array();
        for (const auto& e : sb.training_curve)
            curve.push_back({{"train", e.train_loss}, {"val", e.val_loss}});
        entry["curve"] = std::move(curve);
        streams.push_back(std::move(entry));
    }
    manifest["streams"] = std::move(streams);
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

TrainedBottleneck load_bottleneck(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw CorruptDataset("no bottleneck manifest at " + dir.string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw CorruptDataset("unreadable bottleneck manifest: " + std::string(e.what()));
    }
    if (manifest.value("schema_version", -1) != kBottleneckSchemaVersion)
        throw UnsupportedVersion("unknown bottleneck schema version");
    if (manifest.value("kind", "") != "bottleneck")
        throw CorruptDataset("manifest is not a bottleneck manifest");

    TrainedBottleneck tb;
    tb.width = manifest.at("width").get<int64_t>();
    tb.seed = manifest.at("seed").get<uint64_t>();
    tb.loss_weights = manifest.at("loss_weights").get<std::vector<double>>();
    tb.target_names = manifest.at("target_names").get<std::vector<std::string>>();
    tb.best_validation_loss = manifest.at("best_validation_loss").get<double>();
    tb.train_loss_at_best = manifest.at("train_loss_at_best").get<double>();
    tb.random_floor = manifest.value("random_floor", false);

    size_t s = 0;
    for (const auto& entry : manifest.at("streams")) {
        const std::string prefix = "s" + std::to_string(s++);
        StreamBottleneck sb;
        sb.stream_name = entry.at("name").get<std::string>();
        sb.inputs_standardized = entry.at("inputs_standardized").get<bool>();
        sb.target_indices = entry.at("target_indices").get<std::vector<int>>();
        sb.best_validation_loss = entry.at("best_validation_loss").get<double>();
        sb.best_epoch = entry.at("best_epoch").get<int64_t>();
        const int64_t channels = entry.at("channels").get<int64_t>();

        Matrix std_block = read_f32_payload(dir / (prefix + "_std.f32"), 3, channels);
        sb.standardizer.mean.resize(channels);
        sb.standardizer.scale.resize(channels);
        sb.standardizer.constant_column.resize(channels);
        for (int64_t c = 0; c < channels; ++c) {
            sb.standardizer.mean[c] = std_block.at(0, c);
            sb.standardizer.scale[c] = std_block.at(1, c);
            sb.standardizer.constant_column[c] = std_block.at(2, c) != 0.0f;
        }
        sb.compress.weight = read_f32_payload(dir / (prefix + "_gw.f32"), channels, tb.width);
        if (entry.at("g_bias").get<bool>()) {
            Matrix b = read_f32_payload(dir / (prefix + "_gb.f32"), 1, tb.width);
            sb.compress.bias = b.values;
        }
        size_t t = 0;
        for (const auto& r : entry.at("readouts")) {
            const std::string rp = prefix + "_r" + std::to_string(t++);
            AffineMap f;
            const int64_t d = r.at("out_dim").get<int64_t>();
            f.weight = read_f32_payload(dir / (rp + "_w.f32"), tb.width, d);
            if (r.at("bias").get<bool>()) {
                Matrix b = read_f32_payload(dir / (rp + "_b.f32"), 1, d);
                f.bias = b.values;
            }
            sb.readouts.push_back(std::move(f));
        }
        for (const auto& e : entry.at("curve"))
            sb.training_curve.push_back(
                {e.at("train").get<double>(), e.at("val").get<double>()});
        tb.streams.push_back(std::move(sb));
    }
    return tb;
}

}  // namespace infoneck
