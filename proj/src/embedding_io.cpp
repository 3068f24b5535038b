#include "peco/embedding_io.hpp"

#include "peco/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace peco {

namespace {

static_assert(std::endian::native == std::endian::little,
              "PECOEMB1 encoding assumes a little-endian host");

template <typename T>
void put(std::string& out, T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.append(buf, sizeof(T));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const char> bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }

    template <typename T>
    T get(const char* what) {
        need(sizeof(T), what);
        T value;
        std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::span<const char> take(std::size_t count, const char* what) {
        need(count, what);
        auto s = bytes_.subspan(pos_, count);
        pos_ += count;
        return s;
    }

private:
    void need(std::size_t count, const char* what) const {
        if (remaining() < count) {
            throw TruncationError(std::string("file ends inside ") + what);
        }
    }

    std::span<const char> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

float parse_float(std::string_view text) {
    text = trim(text);
    float value = 0.0F;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
        throw ValueError("value out of float range: '" + std::string(text) + "'");
    }
    if (ec != std::errc() || ptr != last) {
        throw FormatError("not a number: '" + std::string(text) + "'");
    }
    if (!std::isfinite(value)) throw ValueError("non-finite value: '" + std::string(text) + "'");
    return value;
}

}  // namespace

std::string encode_embeddings(const EmbeddingDataset& dataset) {
    std::string out;
    const std::size_t n = dataset.size();
    out.reserve(kEmbeddingHeaderSize + n + n * dataset.dim() * 4 + 1);
    out.append(kEmbeddingMagic, sizeof(kEmbeddingMagic));
    put<std::uint32_t>(out, kEmbeddingVersion);
    put<std::uint64_t>(out, n);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.dim()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(kNumLabels));
    for (Label l : dataset.labels()) put<std::uint8_t>(out, static_cast<std::uint8_t>(code(l)));
    for (float v : dataset.vectors()) put<float>(out, v);
    if (const auto& ids = dataset.ids()) {
        put<std::uint8_t>(out, 1);
        for (const auto& id : *ids) {
            put<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
            out.append(id);
        }
    } else {
        put<std::uint8_t>(out, 0);
    }
    return out;
}

EmbeddingDataset decode_embeddings(std::span<const char> bytes) {
    ByteReader reader(bytes);
    const auto magic = reader.take(sizeof(kEmbeddingMagic), "header");
    if (std::memcmp(magic.data(), kEmbeddingMagic, sizeof(kEmbeddingMagic)) != 0) {
        throw FormatError("bad magic, expected PECOEMB1");
    }
    EmbeddingFileHeader header;
    header.version = reader.get<std::uint32_t>("header");
    header.n = reader.get<std::uint64_t>("header");
    header.dim = reader.get<std::uint32_t>("header");
    header.label_count = reader.get<std::uint8_t>("header");
    if (header.version != kEmbeddingVersion) {
        throw FormatError("unsupported version " + std::to_string(header.version));
    }
    if (header.label_count != kNumLabels) {
        throw FormatError("label_count must be 3, got " + std::to_string(header.label_count));
    }
    if (header.dim == 0) throw FormatError("dim must be at least 1");

    // The label and vector blocks plus the id flag must all be present before
    // anything proportional to n is allocated or parsed.
    const std::uint64_t row_bytes = 1 + 4ULL * header.dim;
    if (header.n > (reader.remaining() - std::min<std::size_t>(reader.remaining(), 1)) / row_bytes ||
        header.n * row_bytes + 1 > reader.remaining()) {
        throw TruncationError("file holds fewer than n=" + std::to_string(header.n) + " rows");
    }
    const auto label_bytes = reader.take(static_cast<std::size_t>(header.n), "label block");
    std::vector<Label> labels;
    labels.reserve(label_bytes.size());
    for (char b : label_bytes) labels.push_back(label_from_code(static_cast<std::uint8_t>(b)));

    const std::uint64_t floats = header.n * header.dim;
    const auto vec_bytes = reader.take(static_cast<std::size_t>(floats) * 4, "vector block");
    std::vector<float> vectors(static_cast<std::size_t>(floats));
    if (!vectors.empty()) std::memcpy(vectors.data(), vec_bytes.data(), vec_bytes.size());

    const auto flag = reader.get<std::uint8_t>("id flag");
    std::optional<std::vector<std::string>> ids;
    if (flag == 1) {
        ids.emplace();
        ids->reserve(static_cast<std::size_t>(header.n));
        for (std::uint64_t i = 0; i < header.n; ++i) {
            const auto len = reader.get<std::uint32_t>("id block");
            const auto s = reader.take(len, "id block");
            ids->emplace_back(s.data(), s.size());
        }
    } else if (flag != 0) {
        throw FormatError("id flag must be 0 or 1");
    }
    if (reader.remaining() != 0) throw FormatError("trailing bytes after id block");

    return EmbeddingDataset(std::move(labels), std::move(vectors), header.dim, std::move(ids));
}

std::size_t write_embeddings(const EmbeddingDataset& dataset, std::ostream& out) {
    const std::string bytes = encode_embeddings(dataset);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("failed to write embedding stream");
    return bytes.size();
}

EmbeddingDataset read_embeddings(std::istream& in) {
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed to read embedding stream");
    return decode_embeddings(bytes);
}

EmbeddingDataset read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("CSV is missing a header row");
    const auto header = split_commas(line);
    int id_col = -1;
    int label_col = -1;
    std::vector<int> vec_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = trim(header[c]);
        if (name == "id") {
            id_col = static_cast<int>(c);
        } else if (name == "label") {
            label_col = static_cast<int>(c);
        } else if (name.size() > 1 && name[0] == 'v') {
            std::size_t idx = 0;
            const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
            if (ec != std::errc() || ptr != name.data() + name.size()) {
                throw FormatError("unexpected CSV column '" + std::string(name) + "'");
            }
            if (idx != vec_cols.size()) throw FormatError("vector columns must be v0..v{D-1} in order");
            vec_cols.push_back(static_cast<int>(c));
        } else {
            throw FormatError("unexpected CSV column '" + std::string(name) + "'");
        }
    }
    if (label_col < 0) throw FormatError("CSV has no label column");
    if (vec_cols.empty()) throw FormatError("CSV has no vector columns");

    std::vector<Label> labels;
    std::vector<float> vectors;
    std::optional<std::vector<std::string>> ids;
    if (id_col >= 0) ids.emplace();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw FormatError("ragged CSV row at line " + std::to_string(line_no));
        }
        labels.push_back(parse_label(trim(fields[static_cast<std::size_t>(label_col)])));
        for (int c : vec_cols) vectors.push_back(parse_float(fields[static_cast<std::size_t>(c)]));
        if (ids) ids->emplace_back(trim(fields[static_cast<std::size_t>(id_col)]));
    }
    if (in.bad()) throw IoError("failed to read CSV stream");
    return EmbeddingDataset(std::move(labels), std::move(vectors), vec_cols.size(), std::move(ids));
}

EmbeddingDataset read_jsonl(std::istream& in) {
    using nlohmann::json;
    std::vector<Label> labels;
    std::vector<float> vectors;
    std::vector<std::string> ids;
    std::size_t with_id = 0;
    std::size_t dim = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FormatError("JSONL line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!rec.is_object() || !rec.contains("label") || !rec.contains("vector") ||
            !rec["vector"].is_array()) {
            throw FormatError("JSONL line " + std::to_string(line_no) +
                              " needs \"label\" and \"vector\" fields");
        }
        const auto& lab = rec["label"];
        if (lab.is_string()) {
            labels.push_back(parse_label(lab.get<std::string>()));
        } else if (lab.is_number_integer() || lab.is_number_unsigned()) {
            const auto v = lab.get<std::int64_t>();
            if (v < 0) throw LabelCodeError("negative label code");
            labels.push_back(label_from_code(static_cast<std::uint64_t>(v)));
        } else {
            throw LabelCodeError("label must be a string or integer code");
        }
        const auto& vec = rec["vector"];
        if (dim == 0) dim = vec.size();
        if (vec.size() != dim || dim == 0) {
            throw FormatError("ragged vector at JSONL line " + std::to_string(line_no));
        }
        for (const auto& x : vec) {
            if (!x.is_number()) throw FormatError("vector entries must be numbers");
            const auto f = static_cast<float>(x.get<double>());
            if (!std::isfinite(f)) throw ValueError("non-finite vector entry");
            vectors.push_back(f);
        }
        if (rec.contains("id")) {
            const auto& id = rec["id"];
            ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
            ++with_id;
        } else {
            ids.emplace_back();
        }
    }
    if (in.bad()) throw IoError("failed to read JSONL stream");
    if (with_id != 0 && with_id != labels.size()) {
        throw FormatError("either every JSONL record or none must carry an id");
    }
    std::optional<std::vector<std::string>> id_opt;
    if (with_id != 0) id_opt = std::move(ids);
    return EmbeddingDataset(std::move(labels), std::move(vectors), dim == 0 ? 1 : dim,
                            std::move(id_opt));
}

EmbeddingDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    const auto ext = path.extension().string();
    EmbeddingDataset ds = ext == ".csv"     ? read_csv(in)
                          : ext == ".jsonl" ? read_jsonl(in)
                                            : read_embeddings(in);
    ds.set_name(path.stem().string());
    return ds;
}

std::size_t save_embeddings(const EmbeddingDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return write_embeddings(dataset, out);
}

}  // namespace peco
