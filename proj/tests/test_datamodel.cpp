#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "infoneck/datamodel.hpp"
#include "infoneck/rng.hpp"

using namespace infoneck;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("infoneck_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

PairedDataset tiny_image_dataset() {
    PairedDataset d;
    d.seed = 42;
    RecordingStream s;
    s.name = "recordings";
    s.data = Matrix(4, 3);
    Rng rng(7);
    for (auto& v : s.data.values) v = static_cast<float>(rng.next_normal());
    s.channel_labels = std::vector<std::string>{"a", "a", "b"};
    d.streams.push_back(std::move(s));

    d.stimuli.kind = StimulusKind::Image;
    d.stimuli.height = 2;
    d.stimuli.width = 2;
    d.stimuli.channels = 1;
    d.stimuli.images = Matrix(4, 4);
    for (auto& v : d.stimuli.images.values) v = static_cast<float>(rng.next_double());
    d.stimuli.class_labels = std::vector<int32_t>{0, 1, 0, 1};

    d.splits.train = {0, 1};
    d.splits.validation = {2};
    d.splits.test = {3};
    return d;
}

PairedDataset tiny_text_dataset() {
    PairedDataset d;
    d.seed = 5;
    d.stimuli.kind = StimulusKind::Text;
    d.stimuli.vocab = {"wa", "wb", "wc", "wd"};
    d.stimuli.sequence_length = 3;
    d.stimuli.texts = {{0, 1, 2}, {3, 3, 0}};
    RecordingStream s;
    s.name = "recordings";
    s.data = Matrix(6, 2);
    Rng rng(8);
    for (auto& v : s.data.values) v = static_cast<float>(rng.next_normal());
    d.streams.push_back(std::move(s));
    d.splits.train = {0, 1, 2};
    d.splits.validation = {3};
    d.splits.test = {4, 5};
    return d;
}

}  // namespace

TEST_CASE("split_dataset: n=10 at (0.8, 0.1, 0.1) gives sizes (8, 1, 1)") {
    Splits s = split_dataset(10, 0.8, 0.1, 0.1, 7);
    CHECK(s.train.size() == 8);
    CHECK(s.validation.size() == 1);
    CHECK(s.test.size() == 1);
}

TEST_CASE("split_dataset: n=3 minimal case gives (1, 1, 1)") {
    Splits s = split_dataset(3, 0.34, 0.33, 0.33, 1);
    CHECK(s.train.size() == 1);
    CHECK(s.validation.size() == 1);
    CHECK(s.test.size() == 1);
}

TEST_CASE("split_dataset: same inputs give identical index lists") {
    Splits a = split_dataset(100, 0.7, 0.15, 0.15, 99);
    Splits b = split_dataset(100, 0.7, 0.15, 0.15, 99);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(a.test == b.test);
}

TEST_CASE("split_dataset: partitions are disjoint and cover [0, n) across random cases") {
    Rng rng(512);
    for (int trial = 0; trial < 50; ++trial) {
        const int64_t n = 3 + static_cast<int64_t>(rng.next_below(200));
        double a = 0.1 + rng.next_double(), b = 0.1 + rng.next_double(),
               c = 0.1 + rng.next_double();
        const double sum = a + b + c;
        a /= sum;
        b /= sum;
        c = 1.0 - a - b;
        Splits s;
        try {
            s = split_dataset(n, a, b, c, rng.next_u64());
        } catch (const SplitTooSmall&) {
            continue;
        }
        std::vector<int64_t> all;
        all.insert(all.end(), s.train.begin(), s.train.end());
        all.insert(all.end(), s.validation.begin(), s.validation.end());
        all.insert(all.end(), s.test.begin(), s.test.end());
        CHECK(static_cast<int64_t>(all.size()) == n);
        std::sort(all.begin(), all.end());
        for (int64_t i = 0; i < n; ++i) CHECK(all[static_cast<size_t>(i)] == i);
    }
}

TEST_CASE("split_dataset: rejects bad fractions and tiny n") {
    CHECK_THROWS_AS(split_dataset(10, 0.5, 0.5, 0.5, 1), ConfigError);
    CHECK_THROWS_AS(split_dataset(2, 0.34, 0.33, 0.33, 1), SplitTooSmall);
    // a fraction that rounds to zero examples
    CHECK_THROWS_AS(split_dataset(4, 0.9, 0.05, 0.05, 1), SplitTooSmall);
}

TEST_CASE("save/load: image dataset round-trips bitwise") {
    const fs::path dir = temp_dir("roundtrip_image");
    PairedDataset d = tiny_image_dataset();
    save_dataset(d, dir);
    PairedDataset loaded = load_dataset(dir);
    CHECK(loaded.streams.size() == 1);
    CHECK(loaded.streams[0].data == d.streams[0].data);
    CHECK(loaded.streams[0].channel_labels == d.streams[0].channel_labels);
    CHECK(loaded.stimuli.images == d.stimuli.images);
    CHECK(loaded.stimuli.class_labels == d.stimuli.class_labels);
    CHECK(loaded.splits.train == d.splits.train);
    CHECK(loaded.splits.validation == d.splits.validation);
    CHECK(loaded.splits.test == d.splits.test);
    CHECK(loaded.seed == d.seed);
    fs::remove_all(dir);
}

TEST_CASE("save/load: text dataset round-trips") {
    const fs::path dir = temp_dir("roundtrip_text");
    PairedDataset d = tiny_text_dataset();
    save_dataset(d, dir);
    PairedDataset loaded = load_dataset(dir);
    CHECK(loaded.stimuli.kind == StimulusKind::Text);
    CHECK(loaded.stimuli.texts == d.stimuli.texts);
    CHECK(loaded.stimuli.vocab == d.stimuli.vocab);
    CHECK(loaded.stimuli.sequence_length == d.stimuli.sequence_length);
    CHECK(loaded.streams[0].data == d.streams[0].data);
    fs::remove_all(dir);
}

TEST_CASE("load: truncated payload is reported as corrupt") {
    const fs::path dir = temp_dir("truncated");
    PairedDataset d = tiny_image_dataset();
    save_dataset(d, dir);
    fs::resize_file(dir / "recordings.f32", 5);
    CHECK_THROWS_AS(load_dataset(dir), CorruptDataset);
    fs::remove_all(dir);
}

TEST_CASE("load: flipped payload byte is a checksum mismatch") {
    const fs::path dir = temp_dir("crc");
    PairedDataset d = tiny_image_dataset();
    save_dataset(d, dir);
    {
        std::fstream f(dir / "images.f32", std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(3);
        char c;
        f.seekg(3);
        f.get(c);
        f.seekp(3);
        f.put(static_cast<char>(c ^ 0x40));
    }
    CHECK_THROWS_AS(load_dataset(dir), CorruptDataset);
    fs::remove_all(dir);
}

TEST_CASE("load: manifest naming a missing stream file reports the stream") {
    const fs::path dir = temp_dir("missing_stream");
    PairedDataset d = tiny_image_dataset();
    save_dataset(d, dir);
    fs::remove(dir / "recordings.f32");
    try {
        load_dataset(dir);
        FAIL("expected CorruptDataset");
    } catch (const CorruptDataset& e) {
        CHECK(std::string(e.what()).find("recordings") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("load: unknown schema version is rejected") {
    const fs::path dir = temp_dir("version");
    PairedDataset d = tiny_image_dataset();
    save_dataset(d, dir);
    // bump the version field in place
    std::ifstream in(dir / "manifest.json");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    in.close();
    const auto pos = text.find("\"schema_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "\"schema_version\": 9");
    std::ofstream out(dir / "manifest.json");
    out << text;
    out.close();
    CHECK_THROWS_AS(load_dataset(dir), UnsupportedVersion);
    fs::remove_all(dir);
}

TEST_CASE("validate: overlapping splits are rejected") {
    PairedDataset d = tiny_image_dataset();
    d.splits.validation = {1};  // also in train
    CHECK_THROWS_AS(d.validate(), ShapeError);
}

TEST_CASE("validate: misaligned stimuli are rejected") {
    PairedDataset d = tiny_image_dataset();
    d.stimuli.images = Matrix(3, 4);
    CHECK_THROWS_AS(d.validate(), AlignmentError);
}
