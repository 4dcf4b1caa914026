#include "iconoclasm/workbench/experiments.hpp"

#include <algorithm>
#include <exception>
#include <iomanip>
#include <string>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/rng.hpp"

namespace iconoclasm::workbench {

namespace {

ExperimentRecord run_cell(Codec codec, const Hmm& hmm, std::span<const Symbol> x, const CodecConfig& cfg, bool verify,
                          std::uint64_t seed) {
  Encoded enc = encode(codec, hmm, x, cfg);
  if (verify) {
    const Decoded dec = decode(codec, hmm, x.size(), enc.message, cfg);
    if (!std::equal(dec.observed.begin(), dec.observed.end(), x.begin(), x.end())) {
      throw Error(std::string(to_string(codec)) + ": decoded sequence differs at T=" + std::to_string(x.size()));
    }
    if (dec.message != cfg.base_message()) {
      throw Error(std::string(to_string(codec)) + ": decoder did not restore the base message at T=" +
                  std::to_string(x.size()));
    }
  }
  const RateReport& r = enc.report;
  return ExperimentRecord{r.length, r.l_init_bits, r.l_final_bits, r.h_model_bits, r.ratio, seed};
}

// Runs f(i) for i in [0, n) on all threads, rethrowing the first failure.
template <class F>
void parallel_cells(std::size_t n, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.length << ',' << std::fixed << std::setprecision(0) << r.l_init_bits << ',' << r.l_final_bits << ','
        << std::setprecision(6) << r.h_bits << ',' << std::setprecision(8) << r.ratio << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

std::uint64_t model_seed(std::uint64_t experiment_seed) { return SplitMix64(experiment_seed)(); }

std::uint64_t sequence_seed(std::uint64_t experiment_seed) {
  SplitMix64 rng(experiment_seed);
  rng();
  return rng();
}

std::vector<ExperimentRecord> run_perfect_model_experiment(const PerfectModelOptions& options) {
  if (options.lengths.empty()) throw ContractViolation("perfect-model experiment: no lengths given");
  if (options.seeds.empty()) throw ContractViolation("perfect-model experiment: no seeds given");
  const std::size_t max_len = *std::max_element(options.lengths.begin(), options.lengths.end());
  if (max_len == 0) throw ContractViolation("perfect-model experiment: lengths must be >= 1");

  std::vector<Hmm> models(options.seeds.size());
  std::vector<ObservedSequence> data(options.seeds.size());
  parallel_cells(options.seeds.size(), [&](std::size_t s) {
    models[s] = sample_hmm_params(options.states, options.symbols, options.alpha, model_seed(options.seeds[s]));
    data[s] = sample_sequence(models[s], max_len, sequence_seed(options.seeds[s])).observed;
  });

  const std::size_t per_seed = options.lengths.size();
  std::vector<ExperimentRecord> records(options.seeds.size() * per_seed);
  parallel_cells(records.size(), [&](std::size_t cell) {
    const std::size_t s = cell / per_seed;
    const std::size_t len = options.lengths[cell % per_seed];
    if (len == 0) throw ContractViolation("perfect-model experiment: lengths must be >= 1");
    records[cell] = run_cell(options.codec, models[s], std::span(data[s]).first(len), options.config, options.verify,
                             options.seeds[s]);
  });
  return records;
}

TextExperimentResult run_text_experiment(const Corpus& corpus, const TextExperimentOptions& options) {
  if (options.test_lengths.empty()) throw ContractViolation("text experiment: no test lengths given");
  const std::size_t max_len = *std::max_element(options.test_lengths.begin(), options.test_lengths.end());
  const std::size_t n = corpus.sequence.size();
  if (options.train_chars < 2 || options.train_chars + max_len > n) {
    throw ContractViolation("text experiment: corpus has " + std::to_string(n) + " characters, need " +
                            std::to_string(options.train_chars) + " for training plus " + std::to_string(max_len) +
                            " for the longest test span");
  }

  TextExperimentResult result;
  result.alphabet_size = corpus.alphabet.size();
  result.train_begin = 0;
  result.train_end = options.train_chars;
  result.test_begin = options.train_chars;
  result.test_end = options.train_chars + max_len;

  EmOptions em = options.em;
  em.symbols = corpus.alphabet.size();
  const std::span<const Symbol> all(corpus.sequence);
  EmResult fit = em_fit(all.subspan(result.train_begin, result.train_end - result.train_begin), em);
  result.model = std::move(fit.model);
  result.log_likelihood_trace = std::move(fit.log_likelihood_trace);

  result.records.resize(options.test_lengths.size());
  parallel_cells(options.test_lengths.size(), [&](std::size_t i) {
    const std::size_t len = options.test_lengths[i];
    if (len == 0) throw ContractViolation("text experiment: test lengths must be >= 1");
    result.records[i] =
        run_cell(options.codec, result.model, all.subspan(result.test_begin, len), options.config, options.verify,
                 options.em.seed);
  });
  return result;
}

TextExperimentResult run_text_experiment(const std::filesystem::path& corpus_path,
                                         const TextExperimentOptions& options) {
  return run_text_experiment(load_corpus(corpus_path), options);
}

}  // namespace iconoclasm::workbench
