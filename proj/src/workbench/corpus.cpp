#include "iconoclasm/workbench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/workbench/utf8.hpp"

namespace iconoclasm::workbench {

Alphabet::Alphabet(std::vector<char32_t> code_points) : code_points_(std::move(code_points)) {
  for (std::size_t i = 1; i < code_points_.size(); ++i) {
    if (code_points_[i - 1] >= code_points_[i]) throw ContractViolation("alphabet must be sorted and duplicate-free");
  }
}

Alphabet Alphabet::of(std::u32string_view text) {
  std::vector<char32_t> cps(text.begin(), text.end());
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return Alphabet(std::move(cps));
}

Symbol Alphabet::index_of(char32_t cp) const {
  const auto it = std::lower_bound(code_points_.begin(), code_points_.end(), cp);
  if (it == code_points_.end() || *it != cp) {
    throw ContractViolation("character U+" + [cp] {
      std::ostringstream os;
      os << std::hex << std::uppercase << static_cast<std::uint32_t>(cp);
      return os.str();
    }() + " is not in the model alphabet");
  }
  return static_cast<Symbol>(it - code_points_.begin());
}

ObservedSequence Alphabet::encode(std::u32string_view text) const {
  ObservedSequence out;
  out.reserve(text.size());
  for (char32_t cp : text) out.push_back(index_of(cp));
  return out;
}

std::u32string Alphabet::decode(std::span<const Symbol> symbols) const {
  std::u32string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (s >= code_points_.size()) throw ContractViolation("symbol outside alphabet");
    out.push_back(code_points_[s]);
  }
  return out;
}

Corpus corpus_from_text(std::u32string_view text, std::optional<std::size_t> limit) {
  if (text.empty()) throw ContractViolation("corpus is empty");
  Corpus c;
  c.alphabet = Alphabet::of(text);
  const std::size_t n = limit ? std::min(*limit, text.size()) : text.size();
  c.sequence = c.alphabet.encode(text.substr(0, n));
  return c;
}

Corpus load_corpus(const std::filesystem::path& path, std::optional<std::size_t> limit) {
  const std::string bytes = read_file(path);
  if (bytes.empty()) throw ContractViolation("corpus file " + path.string() + " is empty");
  return corpus_from_text(decode_utf8(bytes), limit);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to " + path.string() + " failed");
}

}  // namespace iconoclasm::workbench
