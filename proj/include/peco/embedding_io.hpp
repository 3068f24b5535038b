#pragma once

#include "peco/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace peco {

// PECOEMB1 layout (little-endian):
//   magic "PECOEMB1" | u32 version=1 | u64 n | u32 dim | u8 label_count=3
//   n x u8 label codes
//   n x dim f32, row-major
//   u8 id flag; if 1: n x (u32 length, UTF-8 bytes)
inline constexpr char kEmbeddingMagic[8] = {'P', 'E', 'C', 'O', 'E', 'M', 'B', '1'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 8 + 4 + 8 + 4 + 1;

struct EmbeddingFileHeader {
    std::uint32_t version = kEmbeddingVersion;
    std::uint64_t n = 0;
    std::uint32_t dim = 0;
    std::uint8_t label_count = 3;
};

std::string encode_embeddings(const EmbeddingDataset& dataset);
EmbeddingDataset decode_embeddings(std::span<const char> bytes);

/// Returns the number of bytes written. Throws IoError on stream failure.
std::size_t write_embeddings(const EmbeddingDataset& dataset, std::ostream& out);
EmbeddingDataset read_embeddings(std::istream& in);

EmbeddingDataset read_csv(std::istream& in);
EmbeddingDataset read_jsonl(std::istream& in);

/// Dispatch on extension: .csv, .jsonl, anything else is PECOEMB1. The
/// dataset name defaults to the file stem.
EmbeddingDataset load_dataset(const std::filesystem::path& path);
std::size_t save_embeddings(const EmbeddingDataset& dataset, const std::filesystem::path& path);

}  // namespace peco
