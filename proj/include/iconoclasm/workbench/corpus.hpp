#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iconoclasm/hmm.hpp"

namespace iconoclasm::workbench {

// Sorted, duplicate-free code points; symbol i is code_points()[i].
class Alphabet {
 public:
  Alphabet() = default;
  // Throws ContractViolation unless `code_points` is strictly increasing.
  explicit Alphabet(std::vector<char32_t> code_points);

  static Alphabet of(std::u32string_view text);

  std::size_t size() const noexcept { return code_points_.size(); }
  const std::vector<char32_t>& code_points() const noexcept { return code_points_; }

  // Throws ContractViolation for a code point outside the alphabet.
  Symbol index_of(char32_t cp) const;
  ObservedSequence encode(std::u32string_view text) const;
  std::u32string decode(std::span<const Symbol> symbols) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<char32_t> code_points_;
};

struct Corpus {
  Alphabet alphabet;          // from the entire file
  ObservedSequence sequence;  // possibly truncated
};

Corpus corpus_from_text(std::u32string_view text, std::optional<std::size_t> limit = std::nullopt);

// The alphabet always covers the whole file, so later sections introduce no
// unseen symbols; only the sequence is truncated to `limit` characters.
Corpus load_corpus(const std::filesystem::path& path, std::optional<std::size_t> limit = std::nullopt);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace iconoclasm::workbench
