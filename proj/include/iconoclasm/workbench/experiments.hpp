#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "iconoclasm/codecs.hpp"
#include "iconoclasm/em.hpp"
#include "iconoclasm/workbench/corpus.hpp"

namespace iconoclasm::workbench {

// One point of a compression-rate-versus-length curve.
struct ExperimentRecord {
  std::size_t length = 0;
  double l_init_bits = 0.0;
  double l_final_bits = 0.0;
  double h_bits = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;  // not part of the CSV schema
};

inline constexpr const char* kCsvHeader = "T,l_init_bits,l_final_bits,h_bits,ratio";

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

struct PerfectModelOptions {
  std::size_t states = 64;
  std::size_t symbols = 64;
  double alpha = 1.0;
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::size_t> lengths{100, 316, 1000, 3162, 10000, 31623, 100000};
  Codec codec = Codec::iconoclasm;
  CodecConfig config;
  bool verify = true;  // decode every cell and check x and the base message
};

// For every seed: sample a Dirichlet(alpha) model and one sequence of the largest
// length; each (seed, T) cell compresses the length-T prefix. Cells run in
// parallel. Rows are ordered by seed, then by the order of `lengths`.
std::vector<ExperimentRecord> run_perfect_model_experiment(const PerfectModelOptions& options);

// Model and sequence seeds derived from an experiment seed.
std::uint64_t model_seed(std::uint64_t experiment_seed);
std::uint64_t sequence_seed(std::uint64_t experiment_seed);

struct TextExperimentOptions {
  std::size_t train_chars = 100000;
  std::vector<std::size_t> test_lengths{100, 316, 1000, 3162, 10000, 31623, 50000};
  EmOptions em;
  Codec codec = Codec::iconoclasm;
  CodecConfig config;
  bool verify = true;
};

struct TextExperimentResult {
  std::vector<ExperimentRecord> records;
  std::vector<double> log_likelihood_trace;
  std::size_t alphabet_size = 0;
  std::size_t train_begin = 0, train_end = 0;  // [begin, end)
  std::size_t test_begin = 0, test_end = 0;    // longest test span
  Hmm model;
};

// Trains on characters [0, train_chars) and compresses spans starting at
// train_chars, one row per test length.
TextExperimentResult run_text_experiment(const Corpus& corpus, const TextExperimentOptions& options);
TextExperimentResult run_text_experiment(const std::filesystem::path& corpus_path,
                                         const TextExperimentOptions& options);

}  // namespace iconoclasm::workbench
