#include "iconoclasm/workbench/formats.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <string>

#include "iconoclasm/errors.hpp"

namespace iconoclasm::workbench {

namespace {

constexpr std::uint8_t kModelMagic[4] = {'I', 'C', 'L', 'M'};
constexpr std::uint8_t kCompressedMagic[4] = {'I', 'C', 'L', 'C'};
constexpr std::uint8_t kHasAlphabet = 0x01;

class ByteWriter {
 public:
  void raw(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }

  void seal() { u32(crc32(out_)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, const char* what) : bytes_(bytes), what_(what) {}

  // Checks the trailing CRC and hides it from subsequent reads.
  void verify_seal() {
    if (bytes_.size() < 4) fail("truncated");
    const auto body = bytes_.first(bytes_.size() - 4);
    ByteReader tail(bytes_.subspan(bytes_.size() - 4), what_);
    if (tail.u32() != crc32(body)) fail("checksum mismatch (file is corrupted)");
    bytes_ = body;
  }

  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }

  void expect_magic(const std::uint8_t (&magic)[4]) {
    const auto m = raw(4);
    if (std::memcmp(m.data(), magic, 4) != 0) fail("bad magic");
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) fail("trailing bytes");
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void fail(const std::string& why) const { throw FormatError(std::string(what_) + ": " + why); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) fail("truncated");
  }
  std::uint64_t le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  const char* what_;
};

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  const std::string s = read_file(path);
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    crc = ::crc32(crc, bytes.data() + off, static_cast<uInt>(n));
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_model(const ModelFile& file) {
  const Hmm& hmm = file.model;
  hmm.validate();
  const std::size_t k = hmm.states();
  const std::size_t v = hmm.symbols();
  if (file.alphabet && file.alphabet->size() != v) {
    throw ContractViolation("model file: alphabet size " + std::to_string(file.alphabet->size()) +
                            " does not match V = " + std::to_string(v));
  }
  ByteWriter w;
  w.raw(kModelMagic);
  w.u32(ModelFile::kVersion);
  w.u32(static_cast<std::uint32_t>(k));
  w.u32(static_cast<std::uint32_t>(v));
  w.u8(file.alphabet ? kHasAlphabet : 0);
  if (file.alphabet) {
    for (char32_t cp : file.alphabet->code_points()) w.u32(static_cast<std::uint32_t>(cp));
  }
  for (double p : hmm.initial) w.f64(p);
  for (double p : hmm.transition.data()) w.f64(p);
  for (double p : hmm.emission.data()) w.f64(p);
  w.seal();
  return w.take();
}

ModelFile decode_model(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "model file");
  r.verify_seal();
  r.expect_magic(kModelMagic);
  if (const auto version = r.u32(); version != ModelFile::kVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  const std::size_t k = r.u32();
  const std::size_t v = r.u32();
  const std::uint8_t flags = r.u8();
  if (k == 0 || v == 0) r.fail("K and V must be positive");
  if ((flags & ~kHasAlphabet) != 0) r.fail("unknown flags");
  const std::size_t expect = (flags & kHasAlphabet ? 4 * v : 0) + 8 * (k + k * k + k * v);
  if (r.remaining() != expect) r.fail("size does not match K=" + std::to_string(k) + ", V=" + std::to_string(v));

  ModelFile file;
  if (flags & kHasAlphabet) {
    std::vector<char32_t> cps(v);
    for (auto& cp : cps) cp = static_cast<char32_t>(r.u32());
    file.alphabet = Alphabet(std::move(cps));
  }
  Hmm& hmm = file.model;
  hmm.initial.resize(k);
  hmm.transition = Matrix(k, k);
  hmm.emission = Matrix(k, v);
  for (double& p : hmm.initial) p = r.f64();
  for (double& p : hmm.transition.data()) p = r.f64();
  for (double& p : hmm.emission.data()) p = r.f64();
  r.expect_end();
  hmm.validate();
  return file;
}

std::uint32_t model_checksum(const ModelFile& file) {
  const auto bytes = encode_model(file);
  ByteReader r(std::span<const std::uint8_t>(bytes).subspan(bytes.size() - 4), "model file");
  return r.u32();
}

void save_model(const std::filesystem::path& path, const ModelFile& file) { write_bytes(path, encode_model(file)); }

ModelFile load_model(const std::filesystem::path& path) { return decode_model(read_bytes(path)); }

std::vector<std::uint8_t> encode_compressed(const CompressedFile& file) {
  file.config.validate();
  const auto msg = file.message.serialize();
  ByteWriter w;
  w.raw(kCompressedMagic);
  w.u32(CompressedFile::kVersion);
  w.u8(static_cast<std::uint8_t>(file.codec));
  w.u8(static_cast<std::uint8_t>(file.config.precision));
  w.u32(static_cast<std::uint32_t>(file.config.init_words));
  w.u64(file.config.init_seed);
  w.u64(file.length);
  w.u32(file.model_checksum);
  w.u32(static_cast<std::uint32_t>(msg.size()));
  w.raw(msg);
  w.seal();
  return w.take();
}

CompressedFile decode_compressed(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "compressed file");
  r.verify_seal();
  r.expect_magic(kCompressedMagic);
  if (const auto version = r.u32(); version != CompressedFile::kVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  CompressedFile file;
  const std::uint8_t codec = r.u8();
  if (codec > static_cast<std::uint8_t>(Codec::naive_bbans)) r.fail("unknown codec id " + std::to_string(codec));
  file.codec = static_cast<Codec>(codec);
  file.config.precision = r.u8();
  file.config.init_words = r.u32();
  file.config.init_seed = r.u64();
  file.length = r.u64();
  file.model_checksum = r.u32();
  const std::size_t n = r.u32();
  file.message = Message::deserialize(r.raw(n));
  r.expect_end();
  try {
    file.config.validate();
  } catch (const ContractViolation& e) {
    r.fail(e.what());
  }
  if (file.length == 0) r.fail("zero-length sequence");
  return file;
}

void save_compressed(const std::filesystem::path& path, const CompressedFile& file) {
  write_bytes(path, encode_compressed(file));
}

CompressedFile load_compressed(const std::filesystem::path& path) { return decode_compressed(read_bytes(path)); }

}  // namespace iconoclasm::workbench
