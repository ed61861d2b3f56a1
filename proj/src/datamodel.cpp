#include "infoneck/datamodel.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "infoneck/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "payload format is little-endian; big-endian hosts need byte swaps");

namespace infoneck {

using json = nlohmann::json;

namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Types

const RecordingStream& PairedDataset::stream(const std::string& name) const {
    for (const auto& s : streams)
        if (s.name == name) return s;
    throw ShapeError("dataset has no stream named '" + name + "'");
}

void PairedDataset::validate() const {
    if (streams.empty()) throw ShapeError("dataset has no recording streams");
    const int64_t n = streams[0].data.rows;
    for (const auto& s : streams) {
        if (s.data.rows != n)
            throw AlignmentError("stream '" + s.name + "' has " +
                                 std::to_string(s.data.rows) + " examples, expected " +
                                 std::to_string(n));
        if (s.channel_labels &&
            static_cast<int64_t>(s.channel_labels->size()) != s.data.cols)
            throw ShapeError("stream '" + s.name + "': channel label count mismatch");
    }
    if (stimuli.num_examples() != n)
        throw AlignmentError("stimuli cover " + std::to_string(stimuli.num_examples()) +
                             " examples, recordings have " + std::to_string(n));
    if (stimuli.kind == StimulusKind::Image &&
        stimuli.images.cols != stimuli.image_dim())
        throw ShapeError("image tensor shape disagrees with height*width*channels");
    if (stimuli.class_labels &&
        static_cast<int64_t>(stimuli.class_labels->size()) != n)
        throw AlignmentError("class label count mismatch");

    std::vector<int64_t> seen;
    for (const auto* split : {&splits.train, &splits.validation, &splits.test}) {
        if (split->empty()) throw SplitTooSmall("dataset has an empty split");
        for (int64_t i : *split) {
            if (i < 0 || i >= n) throw ShapeError("split index out of range");
            seen.push_back(i);
        }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw ShapeError("splits overlap");
}

// ---------------------------------------------------------------------------
// Splits

Splits split_dataset(int64_t n, double train_fraction, double validation_fraction,
                     double test_fraction, uint64_t seed) {
    const double fr[3] = {train_fraction, validation_fraction, test_fraction};
    double sum = 0;
    for (double f : fr) {
        if (f <= 0) throw ConfigError("split fractions must be positive");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1");
    if (n < 3) throw SplitTooSmall("need at least 3 examples to split");

    // largest-remainder apportionment
    int64_t sizes[3];
    double remainders[3];
    int64_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = fr[i] * static_cast<double>(n);
        sizes[i] = static_cast<int64_t>(std::floor(exact));
        remainders[i] = exact - static_cast<double>(sizes[i]);
        assigned += sizes[i];
    }
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) {
        if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
        return a < b;
    });
    for (int i = 0; assigned < n; ++i, ++assigned) sizes[order[i % 3]] += 1;
    for (int64_t s : sizes)
        if (s == 0) throw SplitTooSmall("a split is empty after rounding");

    std::vector<int64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, "dataset-split"));
    rng.shuffle(idx);

    Splits out;
    out.train.assign(idx.begin(), idx.begin() + sizes[0]);
    out.validation.assign(idx.begin() + sizes[0], idx.begin() + sizes[0] + sizes[1]);
    out.test.assign(idx.begin() + sizes[0] + sizes[1], idx.end());
    return out;
}

// ---------------------------------------------------------------------------
// Payload io

void write_f32_payload(const fs::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorruptDataset("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(m.values.data()),
              static_cast<std::streamsize>(m.values.size() * sizeof(float)));
    if (!out) throw CorruptDataset("short write: " + path.string());
}

Matrix read_f32_payload(const fs::path& path, int64_t rows, int64_t cols) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw CorruptDataset("missing payload file: " + path.string());
    const auto bytes = static_cast<uint64_t>(in.tellg());
    const uint64_t expected = static_cast<uint64_t>(rows) * cols * sizeof(float);
    if (bytes != expected)
        throw CorruptDataset("payload " + path.string() + " has " + std::to_string(bytes) +
                             " bytes, expected " + std::to_string(expected));
    Matrix m(rows, cols);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(m.values.data()),
            static_cast<std::streamsize>(expected));
    if (!in) throw CorruptDataset("short read: " + path.string());
    return m;
}

uint32_t file_crc32(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptDataset("missing payload file: " + path.string());
    uLong crc = crc32(0L, Z_NULL, 0);
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buf),
                    static_cast<uInt>(in.gcount()));
        if (in.eof()) break;
    }
    return static_cast<uint32_t>(crc);
}

namespace {

void check_crc(const fs::path& path, uint32_t expected, const std::string& what) {
    const uint32_t actual = file_crc32(path);
    if (actual != expected)
        throw CorruptDataset("checksum mismatch for " + what + " (" + path.string() + ")");
}

json splits_to_json(const Splits& s) {
    return json{{"train", s.train}, {"validation", s.validation}, {"test", s.test}};
}

Splits splits_from_json(const json& j) {
    Splits s;
    s.train = j.at("train").get<std::vector<int64_t>>();
    s.validation = j.at("validation").get<std::vector<int64_t>>();
    s.test = j.at("test").get<std::vector<int64_t>>();
    return s;
}

}  // namespace

fs::path save_dataset(const PairedDataset& dataset, const fs::path& directory) {
    dataset.validate();
    fs::create_directories(directory);

    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["kind"] = "dataset";
    manifest["seed"] = dataset.seed;
    manifest["num_examples"] = dataset.num_examples();

    json streams = json::array();
    for (const auto& s : dataset.streams) {
        const std::string file = s.name + ".f32";
        write_f32_payload(directory / file, s.data);
        json entry{{"name", s.name},
                   {"file", file},
                   {"rows", s.data.rows},
                   {"cols", s.data.cols},
                   {"crc32", file_crc32(directory / file)}};
        if (s.channel_labels) entry["channel_labels"] = *s.channel_labels;
        streams.push_back(std::move(entry));
    }
    manifest["streams"] = std::move(streams);

    json stim;
    if (dataset.stimuli.kind == StimulusKind::Image) {
        stim["kind"] = "image";
        stim["file"] = "images.f32";
        stim["shape"] = {dataset.stimuli.images.rows, dataset.stimuli.height,
                         dataset.stimuli.width, dataset.stimuli.channels};
        write_f32_payload(directory / "images.f32", dataset.stimuli.images);
        stim["crc32"] = file_crc32(directory / "images.f32");
    } else {
        stim["kind"] = "text";
        stim["file"] = "texts.tok";
        stim["vocab_file"] = "vocab.txt";
        stim["sequence_length"] = dataset.stimuli.sequence_length;
        stim["num_sequences"] = dataset.stimuli.texts.size();
        {
            std::ofstream tok(directory / "texts.tok");
            for (const auto& seq : dataset.stimuli.texts) {
                for (size_t i = 0; i < seq.size(); ++i) {
                    if (i) tok << ' ';
                    tok << dataset.stimuli.vocab.at(static_cast<size_t>(seq[i]));
                }
                tok << '\n';
            }
        }
        {
            std::ofstream voc(directory / "vocab.txt");
            for (const auto& t : dataset.stimuli.vocab) voc << t << '\n';
        }
        stim["crc32"] = file_crc32(directory / "texts.tok");
    }
    if (dataset.stimuli.class_labels) stim["class_labels"] = *dataset.stimuli.class_labels;
    manifest["stimuli"] = std::move(stim);
    manifest["splits"] = splits_to_json(dataset.splits);

    const fs::path manifest_path = directory / "manifest.json";
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << '\n';
    return manifest_path;
}

PairedDataset load_dataset(const fs::path& directory) {
    const fs::path manifest_path = directory / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw CorruptDataset("no manifest at " + manifest_path.string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw CorruptDataset("unreadable manifest: " + std::string(e.what()));
    }
    if (manifest.value("schema_version", -1) != kSchemaVersion)
        throw UnsupportedVersion("unknown dataset schema version");
    if (manifest.value("kind", "") != "dataset")
        throw CorruptDataset("manifest is not a dataset manifest");

    PairedDataset d;
    d.seed = manifest.value("seed", 0ull);
    for (const auto& entry : manifest.at("streams")) {
        RecordingStream s;
        s.name = entry.at("name").get<std::string>();
        const fs::path payload = directory / entry.at("file").get<std::string>();
        if (!fs::exists(payload))
            throw CorruptDataset("manifest references missing stream file for '" +
                                 s.name + "': " + payload.string());
        check_crc(payload, entry.at("crc32").get<uint32_t>(), "stream '" + s.name + "'");
        s.data = read_f32_payload(payload, entry.at("rows").get<int64_t>(),
                                  entry.at("cols").get<int64_t>());
        if (entry.contains("channel_labels"))
            s.channel_labels = entry.at("channel_labels").get<std::vector<std::string>>();
        d.streams.push_back(std::move(s));
    }

    const json& stim = manifest.at("stimuli");
    if (stim.at("kind") == "image") {
        d.stimuli.kind = StimulusKind::Image;
        const auto shape = stim.at("shape").get<std::vector<int64_t>>();
        d.stimuli.height = shape.at(1);
        d.stimuli.width = shape.at(2);
        d.stimuli.channels = shape.at(3);
        const fs::path payload = directory / stim.at("file").get<std::string>();
        if (!fs::exists(payload))
            throw CorruptDataset("manifest references missing stimulus file: " +
                                 payload.string());
        check_crc(payload, stim.at("crc32").get<uint32_t>(), "images");
        d.stimuli.images = read_f32_payload(payload, shape.at(0), d.stimuli.image_dim());
    } else if (stim.at("kind") == "text") {
        d.stimuli.kind = StimulusKind::Text;
        d.stimuli.sequence_length = stim.at("sequence_length").get<int64_t>();
        std::ifstream voc(directory / stim.at("vocab_file").get<std::string>());
        if (!voc) throw CorruptDataset("missing vocabulary file");
        std::string token;
        while (std::getline(voc, token))
            if (!token.empty()) d.stimuli.vocab.push_back(token);
        std::unordered_map<std::string, int32_t> token_to_id;
        for (size_t i = 0; i < d.stimuli.vocab.size(); ++i)
            token_to_id[d.stimuli.vocab[i]] = static_cast<int32_t>(i);

        const fs::path payload = directory / stim.at("file").get<std::string>();
        if (!fs::exists(payload))
            throw CorruptDataset("manifest references missing stimulus file: " +
                                 payload.string());
        check_crc(payload, stim.at("crc32").get<uint32_t>(), "texts");
        std::ifstream tok(payload);
        std::string line;
        while (std::getline(tok, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::vector<int32_t> seq;
            while (ls >> token) {
                auto it = token_to_id.find(token);
                if (it == token_to_id.end())
                    throw CorruptDataset("token '" + token + "' not in vocabulary");
                seq.push_back(it->second);
            }
            d.stimuli.texts.push_back(std::move(seq));
        }
        if (d.stimuli.texts.size() != stim.at("num_sequences").get<size_t>())
            throw CorruptDataset("sequence count disagrees with manifest");
    } else {
        throw CorruptDataset("unknown stimulus kind in manifest");
    }
    if (stim.contains("class_labels"))
        d.stimuli.class_labels = stim.at("class_labels").get<std::vector<int32_t>>();

    d.splits = splits_from_json(manifest.at("splits"));
    d.validate();
    return d;
}

}  // namespace infoneck
