#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iconoclasm/codecs.hpp"
#include "iconoclasm/workbench/experiments.hpp"

// The CLI subcommands as plain functions. Each writes its report to `out` and
// throws iconoclasm::Error on failure.
namespace iconoclasm::workbench {

std::string rate_report_json(const RateReport& r, Codec codec);
void print_rate_report(std::ostream& out, const RateReport& r, Codec codec, bool json);

struct TrainArgs {
  std::filesystem::path input;
  std::filesystem::path output;
  std::size_t states = 64;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
  double smoothing = 1e-6;
  std::size_t train_chars = 100000;
};
EmResult cmd_train(const TrainArgs& args, std::ostream& out);

struct CompressArgs {
  std::filesystem::path model;
  std::filesystem::path input;
  std::filesystem::path output;
  Codec codec = Codec::iconoclasm;
  CodecConfig config;
  bool json = false;
};
RateReport cmd_compress(const CompressArgs& args, std::ostream& out);

struct DecompressArgs {
  std::filesystem::path model;
  std::filesystem::path input;
  std::filesystem::path output;
};
void cmd_decompress(const DecompressArgs& args, std::ostream& out);

// Writes a Dirichlet-sampled model (with a synthetic alphabet) and a text sampled from it.
struct SampleArgs {
  std::size_t states = 64;
  std::size_t symbols = 64;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::size_t length = 100000;
  std::filesystem::path model_output;
  std::filesystem::path text_output;
};
void cmd_sample(const SampleArgs& args, std::ostream& out);

// V consecutive printable code points starting at '!', continuing at U+00A1.
Alphabet synthetic_alphabet(std::size_t symbols);

// csv == "-" writes the CSV to `out`.
std::vector<ExperimentRecord> cmd_experiment_perfect(const PerfectModelOptions& options, const std::string& csv,
                                                     std::ostream& out);

struct TextExperimentArgs {
  std::filesystem::path corpus;
  TextExperimentOptions options;
  std::string csv = "-";
};
TextExperimentResult cmd_experiment_text(const TextExperimentArgs& args, std::ostream& out);

}  // namespace iconoclasm::workbench
