#include "doctest.h"

#include "peco/embedding_io.hpp"
#include "peco/error.hpp"

#include <random>
#include <sstream>

using namespace peco;

namespace {

EmbeddingDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t dim, bool ids) {
    std::uniform_int_distribution<int> lab(0, 2);
    std::uniform_real_distribution<float> val(-1e6f, 1e6f);
    std::vector<Label> labels(n);
    for (auto& l : labels) l = static_cast<Label>(lab(rng));
    std::vector<float> v(n * dim);
    for (auto& x : v) x = val(rng);
    std::optional<std::vector<std::string>> id;
    if (ids) {
        id.emplace();
        for (std::size_t i = 0; i < n; ++i) id->push_back(i % 3 == 0 ? "" : "ex-" + std::to_string(i) + "-\xc3\xa9");
    }
    return EmbeddingDataset(std::move(labels), std::move(v), dim, std::move(id));
}

}  // namespace

TEST_CASE("empty dataset encodes to header plus id flag") {
    const EmbeddingDataset ds({}, {}, 4);
    const auto bytes = encode_embeddings(ds);
    // 8 magic + 4 version + 8 n + 4 dim + 1 label_count, then the flag byte.
    CHECK(kEmbeddingHeaderSize == 25);
    CHECK(bytes.size() == 26);
    CHECK(bytes.substr(0, 8) == "PECOEMB1");
    CHECK(bytes.back() == '\0');
}

TEST_CASE("byte layout of a one-row file") {
    const EmbeddingDataset ds({Label::Contradiction}, {1.0f}, 1, std::vector<std::string>{"ab"});
    const auto b = encode_embeddings(ds);
    REQUIRE(b.size() == 25 + 1 + 4 + 1 + 4 + 2);
    CHECK(static_cast<unsigned char>(b[8]) == 1);     // version LSB
    CHECK(static_cast<unsigned char>(b[12]) == 1);    // n LSB
    CHECK(static_cast<unsigned char>(b[20]) == 1);    // dim LSB
    CHECK(static_cast<unsigned char>(b[24]) == 3);    // label_count
    CHECK(static_cast<unsigned char>(b[25]) == 2);    // label code
    CHECK(static_cast<unsigned char>(b[29]) == 0x3f);  // 1.0f = 0x3f800000 little-endian
    CHECK(static_cast<unsigned char>(b[30]) == 1);    // id flag
    CHECK(static_cast<unsigned char>(b[31]) == 2);    // id length
    CHECK(b.substr(35) == "ab");
}

TEST_CASE("read(write(d)) is the identity, and writing is deterministic") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = trial % 5 == 0 ? 0 : static_cast<std::size_t>(rng() % 40);
        const std::size_t dim = trial % 3 == 0 ? 1 : 1 + static_cast<std::size_t>(rng() % 9);
        const auto ds = random_dataset(rng, n, dim, trial % 2 == 0);
        std::stringstream s1, s2;
        const auto written = write_embeddings(ds, s1);
        write_embeddings(ds, s2);
        CHECK(s1.str() == s2.str());
        CHECK(written == s1.str().size());
        const auto back = read_embeddings(s1);
        CHECK(back.same_content(ds));
    }
}

TEST_CASE("corrupt inputs produce typed errors") {
    const EmbeddingDataset ds({Label::Entailment, Label::Neutral, Label::Contradiction},
                              {1, 2, 3, 4, 5, 6}, 2);
    const auto good = encode_embeddings(ds);
    CHECK(decode_embeddings(good).size() == 3);

    auto bad_magic = good;
    bad_magic.replace(0, 8, "XXXXXXXX");
    CHECK_THROWS_AS(decode_embeddings(bad_magic), FormatError);

    // Claim n=10 while only 3 rows of data follow.
    auto lying = good;
    lying[12] = 10;
    CHECK_THROWS_AS(decode_embeddings(lying), TruncationError);

    auto bad_label = good;
    bad_label[26] = 7;
    CHECK_THROWS_AS(decode_embeddings(bad_label), LabelCodeError);

    auto bad_version = good;
    bad_version[8] = 2;
    CHECK_THROWS_AS(decode_embeddings(bad_version), FormatError);

    CHECK_THROWS_AS(decode_embeddings(good.substr(0, good.size() - 1)), TruncationError);
    CHECK_THROWS_AS(decode_embeddings(good + "x"), FormatError);
    CHECK_THROWS_AS(decode_embeddings(std::string("PECO")), TruncationError);

    // Huge n must not trigger a huge allocation.
    auto huge = good;
    for (int i = 12; i < 20; ++i) huge[i] = '\xff';
    CHECK_THROWS_AS(decode_embeddings(huge), TruncationError);
}

TEST_CASE("decoding arbitrary bytes never escapes as anything but a typed error") {
    std::mt19937_64 rng(5);
    const auto seed_file = encode_embeddings(random_dataset(rng, 4, 3, true));
    for (int trial = 0; trial < 2000; ++trial) {
        std::string bytes = seed_file;
        const int flips = 1 + static_cast<int>(rng() % 4);
        for (int f = 0; f < flips; ++f) bytes[rng() % bytes.size()] = static_cast<char>(rng());
        if (trial % 7 == 0) bytes.resize(rng() % bytes.size());
        try {
            (void)decode_embeddings(bytes);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("CSV ingestion") {
    std::istringstream in("id,label,v0,v1\na,neutral,0.5,-1.0\n");
    const auto ds = read_csv(in);
    REQUIRE(ds.size() == 1);
    CHECK(ds.dim() == 2);
    CHECK(ds.labels()[0] == Label::Neutral);
    CHECK(ds.row(0)[1] == -1.0f);
    CHECK((*ds.ids())[0] == "a");

    std::istringstream maybe("label,v0\nmaybe,1\n");
    CHECK_THROWS_AS(read_csv(maybe), LabelCodeError);
    std::istringstream ragged("label,v0,v1\n0,1\n");
    CHECK_THROWS_AS(read_csv(ragged), FormatError);
    std::istringstream nonfinite("label,v0\n0,inf\n");
    CHECK_THROWS_AS(read_csv(nonfinite), ValueError);
    std::istringstream overflow("label,v0\n0,1e50\n");
    CHECK_THROWS_AS(read_csv(overflow), ValueError);
}

TEST_CASE("CSV, JSONL and binary encodings of the same data agree") {
    std::istringstream csv(
        "id,label,v0,v1,v2\n"
        "x1,Entailment,0.1,0.2,0.3\n"
        "x2,2,-4.5,1e-3,7\n"
        "x3,NEUTRAL,3.25,0,-0.0625\n");
    std::istringstream jsonl(
        R"({"id":"x1","label":"entailment","vector":[0.1,0.2,0.3]})" "\n"
        R"({"id":"x2","label":2,"vector":[-4.5,0.001,7]})" "\n"
        R"({"id":"x3","label":"neutral","vector":[3.25,0,-0.0625]})" "\n");
    const auto a = read_csv(csv);
    const auto b = read_jsonl(jsonl);
    CHECK(a.same_content(b));
    std::stringstream bin;
    write_embeddings(a, bin);
    CHECK(read_embeddings(bin).same_content(a));

    std::istringstream bad(R"({"label":"maybe","vector":[1]})");
    CHECK_THROWS_AS(read_jsonl(bad), LabelCodeError);
}

TEST_CASE("load_dataset reports a missing file as IoError") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/peco/file.bin"), IoError);
}
