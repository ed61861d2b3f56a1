#include "infoneck/synthetic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "infoneck/pipelines.hpp"
#include "infoneck/rng.hpp"

namespace infoneck {

using json = nlohmann::json;
namespace fs = std::filesystem;

void SyntheticWorldConfig::validate() const {
    if (kind != "shapes-image" && kind != "ngram-text")
        throw ConfigError("unknown world kind '" + kind + "'");
    if (latent_dim < 1) throw ConfigError("latent_dim must be >= 1");
    if (num_informative < 1 || num_informative > num_channels)
        throw ConfigError("informative channels must fit inside num_channels");
    if (noise_std < 0) throw ConfigError("noise_std must be non-negative");
    if (kind == "shapes-image") {
        if (image_size < 16)
            throw ConfigError("image too small for shape stimuli (need >= 16x16)");
        if (num_classes < 1) throw ConfigError("need at least one class");
        if (latent_dim + num_classes > num_informative)
            throw ConfigError("latent_dim + num_classes must fit in informative channels");
    } else {
        if (vocab_size < 8) throw ConfigError("text worlds need a vocabulary of >= 8");
        if (sequence_length < 2) throw ConfigError("sequence_length must be >= 2");
        if (num_examples % sequence_length != 0)
            throw ConfigError("num_examples must be a multiple of sequence_length");
    }
}

SyntheticWorldConfig world_config_from_json(const json& j) {
    SyntheticWorldConfig cfg;
    static const std::vector<std::string> known = {
        "kind",          "latent_dim",       "num_channels",    "num_informative",
        "noise_std",     "num_examples",     "num_classes",     "image_size",
        "class_code_scale", "vocab_size",    "sequence_length", "identity_mixing",
        "train_fraction", "validation_fraction", "test_fraction", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown world config key '" + it.key() + "'");
    }
    auto get = [&](const char* key, auto fallback) {
        using T = decltype(fallback);
        return j.contains(key) ? j.at(key).get<T>() : fallback;
    };
    cfg.kind = get("kind", cfg.kind);
    cfg.latent_dim = get("latent_dim", cfg.latent_dim);
    cfg.num_channels = get("num_channels", cfg.num_channels);
    cfg.num_informative = get("num_informative", cfg.num_informative);
    cfg.noise_std = get("noise_std", cfg.noise_std);
    cfg.num_examples = get("num_examples", cfg.num_examples);
    cfg.num_classes = get("num_classes", cfg.num_classes);
    cfg.image_size = get("image_size", cfg.image_size);
    cfg.class_code_scale = get("class_code_scale", cfg.class_code_scale);
    cfg.vocab_size = get("vocab_size", cfg.vocab_size);
    cfg.sequence_length = get("sequence_length", cfg.sequence_length);
    cfg.identity_mixing = get("identity_mixing", cfg.identity_mixing);
    cfg.train_fraction = get("train_fraction", cfg.train_fraction);
    cfg.validation_fraction = get("validation_fraction", cfg.validation_fraction);
    cfg.test_fraction = get("test_fraction", cfg.test_fraction);
    cfg.seed = get("seed", cfg.seed);
    cfg.validate();
    return cfg;
}

Matrix GroundTruth::latent_code() const {
    if (kind == "ngram-text") return latents;
    Matrix code(latents.rows, latent_dim + num_classes);
    for (int64_t r = 0; r < latents.rows; ++r) {
        for (int64_t k = 0; k < latent_dim; ++k) code.at(r, k) = latents.at(r, k);
        code.at(r, latent_dim + class_labels[static_cast<size_t>(r)]) =
            static_cast<float>(class_code_scale);
    }
    return code;
}

namespace {

// orthonormal-column mixing matrix (rows x cols, rows >= cols)
Matrix orthonormal_mixing(int64_t rows, int64_t cols, uint64_t seed) {
    Eigen::MatrixXd g(rows, cols);
    Rng rng(seed);
    for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < cols; ++c) g(r, c) = rng.next_normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    Matrix out(rows, cols);
    for (int64_t c = 0; c < cols; ++c) {
        // fix each column's sign for cross-run stability
        int64_t arg = 0;
        for (int64_t r = 1; r < rows; ++r)
            if (std::abs(q(r, c)) > std::abs(q(arg, c))) arg = r;
        const double flip = q(arg, c) < 0 ? -1.0 : 1.0;
        for (int64_t r = 0; r < rows; ++r)
            out.at(r, c) = static_cast<float>(flip * q(r, c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shape rendering

struct ShapeParams {
    double cx, cy;       // center
    double radius;
    double aspect;       // x stretch
    double rotation;     // radians
    int type;            // 0 disk, 1 square, 2 diamond, 3 ring
};

bool inside_shape(const ShapeParams& s, double px, double py) {
    // into the shape frame
    const double dx = px - s.cx, dy = py - s.cy;
    const double c = std::cos(-s.rotation), sn = std::sin(-s.rotation);
    const double rx = (dx * c - dy * sn) / s.aspect;
    const double ry = dx * sn + dy * c;
    switch (s.type) {
        case 0: return rx * rx + ry * ry <= s.radius * s.radius;
        case 1: return std::max(std::abs(rx), std::abs(ry)) <= s.radius * 0.9;
        case 2: return std::abs(rx) + std::abs(ry) <= s.radius * 1.25;
        default: {
            const double d2 = rx * rx + ry * ry;
            const double inner = s.radius * 0.55;
            return d2 <= s.radius * s.radius && d2 >= inner * inner;
        }
    }
}

// latent roles; latents beyond latent_dim are treated as zero
double role(const Matrix& z, int64_t row, int64_t index) {
    return index < z.cols ? z.at(row, index) : 0.0;
}

void render_example(const Matrix& z, int64_t row, int32_t cls, int64_t size,
                    int64_t num_classes, float* out) {
    const double squash = 1.5;
    const double bg = 0.5 + 0.12 * std::tanh(role(z, row, 0) / squash);
    const double ramp_amp = 0.06 * std::tanh(role(z, row, 1) / squash);
    const double jitter = 0.155 * size;
    ShapeParams shape;
    // archetype grid: classes cycle over four quadrant anchors
    const double anchors[4][2] = {{0.32, 0.32}, {0.68, 0.32}, {0.32, 0.68}, {0.68, 0.68}};
    const auto& anchor = anchors[cls % 4];
    shape.cx = anchor[0] * size + jitter * std::tanh(role(z, row, 2) / squash);
    shape.cy = anchor[1] * size + jitter * std::tanh(role(z, row, 3) / squash);
    shape.radius = 0.16 * size * (1.0 + 0.35 * std::tanh(role(z, row, 4) / squash));
    const double fg_delta = 0.25 + 0.15 * std::tanh(role(z, row, 5) / squash);
    shape.aspect = 1.0 + 0.25 * std::tanh(role(z, row, 6) / squash);
    shape.rotation = 0.45 * std::tanh(role(z, row, 7) / squash);
    shape.type = static_cast<int>(cls % std::min<int64_t>(num_classes, 4));

    const int ss = 4;  // supersampling factor
    for (int64_t y = 0; y < size; ++y) {
        for (int64_t x = 0; x < size; ++x) {
            int hits = 0;
            for (int i = 0; i < ss; ++i)
                for (int j = 0; j < ss; ++j) {
                    const double py = y + (i + 0.5) / ss;
                    const double px = x + (j + 0.5) / ss;
                    if (inside_shape(shape, px, py)) ++hits;
                }
            const double coverage = static_cast<double>(hits) / (ss * ss);
            const double ramp =
                ramp_amp * (2.0 * static_cast<double>(x) / (size - 1) - 1.0);
            const double value = bg + ramp + coverage * fg_delta;
            out[y * size + x] = static_cast<float>(std::clamp(value, 0.0, 1.0));
        }
    }
}

std::vector<std::string> region_labels(int64_t channels) {
    // eight contiguous tag groups; with default sizing the first group is
    // exactly the informative block
    std::vector<std::string> labels(static_cast<size_t>(channels));
    const int64_t per = std::max<int64_t>(1, channels / 8);
    for (int64_t c = 0; c < channels; ++c)
        labels[static_cast<size_t>(c)] = "r0" + std::to_string(std::min<int64_t>(c / per, 7));
    return labels;
}

Matrix mix_recordings(const Matrix& code, const Matrix& mixing, int64_t num_channels,
                      int64_t num_informative, double noise_std, uint64_t seed) {
    const int64_t n = code.rows;
    Matrix recordings(n, num_channels);
    Rng noise(derive_seed(seed, "recording-noise"));
    for (int64_t r = 0; r < n; ++r) {
        for (int64_t c = 0; c < num_channels; ++c) {
            double v = noise_std * noise.next_normal();
            if (c < num_informative) {
                for (int64_t u = 0; u < code.cols; ++u)
                    v += static_cast<double>(code.at(r, u)) * mixing.at(c, u);
            }
            recordings.at(r, c) = static_cast<float>(v);
        }
    }
    return recordings;
}

}  // namespace

SyntheticWorld generate_vision_world(const SyntheticWorldConfig& config) {
    config.validate();
    if (config.kind != "shapes-image")
        throw ConfigError("generate_vision_world: config kind is '" + config.kind + "'");
    const int64_t n = config.num_examples;
    const int64_t k = config.latent_dim;
    const int64_t c_count = config.num_classes;

    Matrix z(n, k);
    Rng z_rng(derive_seed(config.seed, "latents"));
    for (auto& v : z.values) v = static_cast<float>(z_rng.next_normal());

    std::vector<int32_t> classes(static_cast<size_t>(n));
    Rng class_rng(derive_seed(config.seed, "classes"));
    for (auto& c : classes) c = static_cast<int32_t>(class_rng.next_below(
        static_cast<uint64_t>(c_count)));

    StimulusSet stimuli;
    stimuli.kind = StimulusKind::Image;
    stimuli.height = config.image_size;
    stimuli.width = config.image_size;
    stimuli.channels = 1;
    stimuli.images = Matrix(n, config.image_size * config.image_size);
    for (int64_t r = 0; r < n; ++r)
        render_example(z, r, classes[static_cast<size_t>(r)], config.image_size, c_count,
                       stimuli.images.values.data() + r * stimuli.images.cols);
    stimuli.class_labels = classes;

    GroundTruth truth;
    truth.kind = config.kind;
    truth.latent_dim = k;
    truth.num_classes = c_count;
    truth.noise_std = config.noise_std;
    truth.class_code_scale = config.class_code_scale;
    truth.num_informative = config.num_informative;
    truth.seed = config.seed;
    truth.latents = z;
    truth.class_labels = classes;
    truth.mixing = orthonormal_mixing(config.num_informative, k + c_count,
                                      derive_seed(config.seed, "mixing"));

    PairedDataset dataset;
    dataset.seed = config.seed;
    RecordingStream stream;
    stream.name = "recordings";
    stream.data = mix_recordings(truth.latent_code(), truth.mixing, config.num_channels,
                                 config.num_informative, config.noise_std, config.seed);
    stream.channel_labels = region_labels(config.num_channels);
    dataset.streams.push_back(std::move(stream));
    dataset.stimuli = std::move(stimuli);
    dataset.splits =
        split_dataset(n, config.train_fraction, config.validation_fraction,
                      config.test_fraction, derive_seed(config.seed, "splits"));
    dataset.validate();
    return {std::move(dataset), std::move(truth)};
}

SyntheticWorld generate_text_world(const SyntheticWorldConfig& config) {
    config.validate();
    if (config.kind != "ngram-text")
        throw ConfigError("generate_text_world: config kind is '" + config.kind + "'");
    const int64_t n_seq = config.num_examples / config.sequence_length;
    const int64_t v = config.vocab_size;

    // concentrated seeded bigram source: softmax of gaussian logits per context
    std::vector<std::vector<double>> source(static_cast<size_t>(v + 1),
                                            std::vector<double>(static_cast<size_t>(v)));
    Rng logit_rng(derive_seed(config.seed, "source-logits"));
    for (auto& row : source) {
        double mx = -1e30;
        for (auto& p : row) {
            p = 2.0 * logit_rng.next_normal();
            mx = std::max(mx, p);
        }
        double sum = 0;
        for (auto& p : row) {
            p = std::exp(p - mx);
            sum += p;
        }
        for (auto& p : row) p /= sum;
    }

    StimulusSet stimuli;
    stimuli.kind = StimulusKind::Text;
    stimuli.sequence_length = config.sequence_length;
    for (int64_t w = 0; w < v; ++w) stimuli.vocab.push_back("w" + std::to_string(w));
    Rng sample_rng(derive_seed(config.seed, "source-sample"));
    for (int64_t s = 0; s < n_seq; ++s) {
        std::vector<int32_t> seq;
        int64_t prev = v;  // start context
        for (int64_t t = 0; t < config.sequence_length; ++t) {
            double u = sample_rng.next_double();
            int32_t pick = static_cast<int32_t>(v - 1);
            for (int64_t w = 0; w < v; ++w) {
                u -= source[static_cast<size_t>(prev)][static_cast<size_t>(w)];
                if (u <= 0) {
                    pick = static_cast<int32_t>(w);
                    break;
                }
            }
            seq.push_back(pick);
            prev = pick;
        }
        stimuli.texts.push_back(std::move(seq));
    }

    // hidden targets through the same frozen encoding construction the
    // pipeline will use on this dataset
    TextPipelineConfig pipe_cfg;
    pipe_cfg.hidden_dim = config.latent_dim;
    pipe_cfg.seed = derive_seed(config.seed, "text-pipeline");
    EncodingModelTextPipeline encoder(pipe_cfg, v);
    Matrix clean = encoder.latent_targets(stimuli)[0].values;

    GroundTruth truth;
    truth.kind = config.kind;
    truth.latent_dim = config.latent_dim;
    truth.num_classes = 0;
    truth.noise_std = config.noise_std;
    truth.num_informative = config.num_informative;
    truth.seed = config.seed;
    truth.latents = clean;

    Matrix noisy = clean;
    if (config.noise_std > 0) {
        Rng noise(derive_seed(config.seed, "target-noise"));
        for (auto& x : noisy.values)
            x += static_cast<float>(config.noise_std * noise.next_normal());
    }

    PairedDataset dataset;
    dataset.seed = config.seed;
    RecordingStream stream;
    stream.name = "recordings";
    if (config.identity_mixing) {
        if (config.num_channels != config.latent_dim)
            throw ConfigError("identity mixing needs num_channels == latent_dim");
        truth.mixing = Matrix(config.latent_dim, config.latent_dim);
        for (int64_t i = 0; i < config.latent_dim; ++i) truth.mixing.at(i, i) = 1.0f;
        stream.data = noisy;
    } else {
        truth.mixing = orthonormal_mixing(config.num_informative, config.latent_dim,
                                          derive_seed(config.seed, "mixing"));
        stream.data = mix_recordings(noisy, truth.mixing, config.num_channels,
                                     config.num_informative, 0.0, config.seed);
    }
    dataset.streams.push_back(std::move(stream));
    dataset.stimuli = std::move(stimuli);

    // split whole sequences, then expand to step rows
    Splits seq_splits =
        split_dataset(n_seq, config.train_fraction, config.validation_fraction,
                      config.test_fraction, derive_seed(config.seed, "splits"));
    auto expand = [&](const std::vector<int64_t>& seqs) {
        std::vector<int64_t> rows;
        for (int64_t s : seqs)
            for (int64_t t = 0; t < config.sequence_length; ++t)
                rows.push_back(s * config.sequence_length + t);
        return rows;
    };
    dataset.splits.train = expand(seq_splits.train);
    dataset.splits.validation = expand(seq_splits.validation);
    dataset.splits.test = expand(seq_splits.test);
    dataset.validate();
    return {std::move(dataset), std::move(truth)};
}

SyntheticWorld generate_world(const SyntheticWorldConfig& config) {
    return config.kind == "shapes-image" ? generate_vision_world(config)
                                         : generate_text_world(config);
}

double oracle_best_linear(const GroundTruth& truth, int64_t rank) {
    if (truth.kind != "shapes-image")
        throw ConfigError("oracle_best_linear is defined for vision worlds");
    if (rank < 0) throw ConfigError("rank must be non-negative");
    const int64_t k = truth.latent_dim, c = truth.num_classes;
    const int64_t dim = k + c;
    const int64_t m = truth.num_informative;
    const double beta2 = truth.class_code_scale * truth.class_code_scale;

    // covariance of the latent code u = [z, beta*onehot]
    Eigen::MatrixXd sigma_uu = Eigen::MatrixXd::Zero(dim, dim);
    for (int64_t i = 0; i < k; ++i) sigma_uu(i, i) = 1.0;
    const double p = 1.0 / static_cast<double>(c);
    for (int64_t i = 0; i < c; ++i)
        for (int64_t j = 0; j < c; ++j)
            sigma_uu(k + i, k + j) = beta2 * ((i == j ? p : 0.0) - p * p);

    Eigen::MatrixXd a(m, dim);
    for (int64_t r = 0; r < m; ++r)
        for (int64_t u = 0; u < dim; ++u) a(r, u) = truth.mixing.at(r, u);

    Eigen::MatrixXd sigma_xx =
        a * sigma_uu * a.transpose() +
        truth.noise_std * truth.noise_std * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd sigma_ux = sigma_uu * a.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_xx);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double tol = std::max(1e-14, ev.maxCoeff() * m * 1e-13);
    Eigen::MatrixXd inv_sqrt = Eigen::MatrixXd::Zero(m, m);
    for (int64_t i = 0; i < m; ++i)
        if (ev(i) > tol)
            inv_sqrt += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
                        std::sqrt(ev(i));

    Eigen::MatrixXd whitened = sigma_ux * inv_sqrt;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
    double mse = sigma_uu.trace();
    for (int64_t i = 0; i < std::min<int64_t>(rank, svd.singularValues().size()); ++i)
        mse -= svd.singularValues()(i) * svd.singularValues()(i);
    return std::max(mse, 0.0) / static_cast<double>(dim);
}

// ---------------------------------------------------------------------------
// Ground-truth container

void save_ground_truth(const GroundTruth& truth, const fs::path& dir) {
    fs::create_directories(dir);
    json manifest;
    manifest["schema_version"] = 1;
    manifest["kind"] = "ground_truth";
    manifest["world_kind"] = truth.kind;
    manifest["latent_dim"] = truth.latent_dim;
    manifest["num_classes"] = truth.num_classes;
    manifest["noise_std"] = truth.noise_std;
    manifest["class_code_scale"] = truth.class_code_scale;
    manifest["num_informative"] = truth.num_informative;
    manifest["seed"] = truth.seed;
    manifest["latents_rows"] = truth.latents.rows;
    manifest["latents_cols"] = truth.latents.cols;
    manifest["mixing_rows"] = truth.mixing.rows;
    manifest["mixing_cols"] = truth.mixing.cols;
    manifest["class_labels"] = truth.class_labels;
    write_f32_payload(dir / "latents.f32", truth.latents);
    write_f32_payload(dir / "mixing.f32", truth.mixing);
    manifest["latents_crc32"] = file_crc32(dir / "latents.f32");
    manifest["mixing_crc32"] = file_crc32(dir / "mixing.f32");
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

GroundTruth load_ground_truth(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw CorruptDataset("no ground-truth manifest at " + dir.string());
    json manifest;
    in >> manifest;
    if (manifest.value("kind", "") != "ground_truth")
        throw CorruptDataset("manifest is not a ground-truth manifest");
    GroundTruth truth;
    truth.kind = manifest.at("world_kind").get<std::string>();
    truth.latent_dim = manifest.at("latent_dim").get<int64_t>();
    truth.num_classes = manifest.at("num_classes").get<int64_t>();
    truth.noise_std = manifest.at("noise_std").get<double>();
    truth.class_code_scale = manifest.at("class_code_scale").get<double>();
    truth.num_informative = manifest.at("num_informative").get<int64_t>();
    truth.seed = manifest.at("seed").get<uint64_t>();
    truth.class_labels = manifest.at("class_labels").get<std::vector<int32_t>>();
    const auto lr = manifest.at("latents_rows").get<int64_t>();
    const auto lc = manifest.at("latents_cols").get<int64_t>();
    if (file_crc32(dir / "latents.f32") != manifest.at("latents_crc32").get<uint32_t>())
        throw CorruptDataset("checksum mismatch for ground-truth latents");
    truth.latents = read_f32_payload(dir / "latents.f32", lr, lc);
    const auto mr = manifest.at("mixing_rows").get<int64_t>();
    const auto mc = manifest.at("mixing_cols").get<int64_t>();
    if (file_crc32(dir / "mixing.f32") != manifest.at("mixing_crc32").get<uint32_t>())
        throw CorruptDataset("checksum mismatch for ground-truth mixing");
    truth.mixing = read_f32_payload(dir / "mixing.f32", mr, mc);
    return truth;
}

}  // namespace infoneck
