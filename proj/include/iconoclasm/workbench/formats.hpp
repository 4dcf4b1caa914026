#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "iconoclasm/ans.hpp"
#include "iconoclasm/codecs.hpp"
#include "iconoclasm/hmm.hpp"
#include "iconoclasm/workbench/corpus.hpp"

namespace iconoclasm::workbench {

// CRC-32 (IEEE 802.3 polynomial, as in zlib/PNG).
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

// Model file, little-endian:
//   "ICLM" | u32 version | u32 K | u32 V | u8 flags (bit 0: alphabet present)
//   | [V x u32 code points] | K f64 pi | K*K f64 A | K*V f64 B | u32 crc32(all preceding bytes)
struct ModelFile {
  static constexpr std::uint32_t kVersion = 1;

  Hmm model;
  std::optional<Alphabet> alphabet;  // present for models of text
};

std::vector<std::uint8_t> encode_model(const ModelFile& file);
// Throws FormatError on bad magic/version/size/checksum; ContractViolation on invalid parameters.
ModelFile decode_model(std::span<const std::uint8_t> bytes);
// The trailing CRC of encode_model(file); compressed files record it.
std::uint32_t model_checksum(const ModelFile& file);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

// Compressed file, little-endian:
//   "ICLC" | u32 version | u8 codec | u8 precision | u32 init_words | u64 init_seed
//   | u64 T | u32 model checksum | u32 n | n bytes serialized Message | u32 crc32(all preceding bytes)
struct CompressedFile {
  static constexpr std::uint32_t kVersion = 1;

  Codec codec = Codec::iconoclasm;
  CodecConfig config;
  std::uint64_t length = 0;
  std::uint32_t model_checksum = 0;
  Message message;
};

std::vector<std::uint8_t> encode_compressed(const CompressedFile& file);
CompressedFile decode_compressed(std::span<const std::uint8_t> bytes);

void save_compressed(const std::filesystem::path& path, const CompressedFile& file);
CompressedFile load_compressed(const std::filesystem::path& path);

}  // namespace iconoclasm::workbench
