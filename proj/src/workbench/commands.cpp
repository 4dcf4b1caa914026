#include "iconoclasm/workbench/commands.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/workbench/formats.hpp"
#include "iconoclasm/workbench/utf8.hpp"

namespace iconoclasm::workbench {

namespace {

void emit_csv(const std::string& csv, const std::vector<ExperimentRecord>& records, std::ostream& out) {
  if (csv.empty() || csv == "-") {
    write_csv(out, records);
    return;
  }
  std::ofstream f(csv, std::ios::trunc);
  if (!f) throw Error("cannot write " + csv);
  write_csv(f, records);
  out << "wrote " << records.size() << " rows to " << csv << '\n';
}

}  // namespace

std::string rate_report_json(const RateReport& r, Codec codec) {
  nlohmann::json j = {
      {"codec", std::string(to_string(codec))},
      {"T", r.length},
      {"l_init_bits", r.l_init_bits},
      {"l_final_bits", r.l_final_bits},
      {"net_bits", r.net_bits()},
      {"h_bits", r.h_model_bits},
      {"ratio", r.ratio},
      {"init_words_consumed", r.init_words_consumed},
  };
  return j.dump();
}

void print_rate_report(std::ostream& out, const RateReport& r, Codec codec, bool json) {
  if (json) {
    out << rate_report_json(r, codec) << '\n';
    return;
  }
  out << "codec          " << to_string(codec) << '\n'
      << "T              " << r.length << '\n'
      << "l_init  (bits) " << std::fixed << std::setprecision(0) << r.l_init_bits << '\n'
      << "l_final (bits) " << r.l_final_bits << '\n'
      << "net     (bits) " << r.net_bits() << '\n'
      << "h(x)    (bits) " << std::setprecision(3) << r.h_model_bits << '\n'
      << "ratio          " << std::setprecision(6) << r.ratio << '\n';
  out.unsetf(std::ios::floatfield);
}

EmResult cmd_train(const TrainArgs& args, std::ostream& out) {
  const Corpus corpus = load_corpus(args.input, args.train_chars);
  EmOptions em;
  em.states = args.states;
  em.iterations = args.iterations;
  em.seed = args.seed;
  em.smoothing = args.smoothing;
  em.symbols = corpus.alphabet.size();
  out << "training K=" << em.states << " V=" << em.symbols << " on " << corpus.sequence.size() << " characters, "
      << em.iterations << " EM iterations\n";
  EmResult fit = em_fit(corpus.sequence, em);
  out << std::setprecision(12);
  for (std::size_t i = 0; i < fit.log_likelihood_trace.size(); ++i) {
    out << "iter " << i << " log_likelihood " << fit.log_likelihood_trace[i] << '\n';
  }
  out << "smoothed log_likelihood " << fit.smoothed_log_likelihood << '\n';
  out << std::setprecision(6);
  save_model(args.output, ModelFile{fit.model, corpus.alphabet});
  out << "wrote " << args.output.string() << '\n';
  return fit;
}

RateReport cmd_compress(const CompressArgs& args, std::ostream& out) {
  const ModelFile model = load_model(args.model);
  if (!model.alphabet) throw ContractViolation("model " + args.model.string() + " has no alphabet; cannot code text");
  const ObservedSequence x = model.alphabet->encode(decode_utf8(read_file(args.input)));
  if (x.empty()) throw ContractViolation("input " + args.input.string() + " is empty");

  Encoded enc = [&] {
    try {
      return encode(args.codec, model.model, x, args.config);
    } catch (const TailUnderflow& e) {
      throw TailUnderflow(std::string(e.what()) + "; rerun with --init-words " +
                              std::to_string(e.required_init_words()),
                          e.required_init_words());
    }
  }();
  save_compressed(args.output,
                  CompressedFile{args.codec, args.config, x.size(), model_checksum(model), std::move(enc.message)});
  print_rate_report(out, enc.report, args.codec, args.json);
  return enc.report;
}

void cmd_decompress(const DecompressArgs& args, std::ostream& out) {
  const CompressedFile file = load_compressed(args.input);
  const ModelFile model = load_model(args.model);
  if (model_checksum(model) != file.model_checksum) {
    throw FormatError("model checksum mismatch: " + args.input.string() + " was compressed with a different model than " +
                      args.model.string());
  }
  if (!model.alphabet) throw ContractViolation("model " + args.model.string() + " has no alphabet; cannot decode text");
  const Decoded dec = decode(file.codec, model.model, file.length, file.message, file.config);
  if (dec.message != file.config.base_message()) {
    throw FormatError("decoder did not end on the base message; the input is corrupted or inconsistent");
  }
  write_file(args.output, encode_utf8(model.alphabet->decode(dec.observed)));
  out << "decoded " << dec.observed.size() << " characters to " << args.output.string() << '\n';
}

Alphabet synthetic_alphabet(std::size_t symbols) {
  std::vector<char32_t> cps;
  cps.reserve(symbols);
  for (char32_t cp = U'!'; cps.size() < symbols; ++cp) {
    if (cp == 0x7F) cp = 0xA1;
    cps.push_back(cp);
  }
  return Alphabet(std::move(cps));
}

void cmd_sample(const SampleArgs& args, std::ostream& out) {
  const Hmm hmm = sample_hmm_params(args.states, args.symbols, args.alpha, args.seed);
  const Alphabet alphabet = synthetic_alphabet(args.symbols);
  const auto sample = sample_sequence(hmm, args.length, args.seed + 1);
  save_model(args.model_output, ModelFile{hmm, alphabet});
  write_file(args.text_output, encode_utf8(alphabet.decode(sample.observed)));
  out << "wrote model " << args.model_output.string() << " and " << args.length << " sampled characters to "
      << args.text_output.string() << '\n';
}

std::vector<ExperimentRecord> cmd_experiment_perfect(const PerfectModelOptions& options, const std::string& csv,
                                                     std::ostream& out) {
  auto records = run_perfect_model_experiment(options);
  emit_csv(csv, records, out);
  return records;
}

TextExperimentResult cmd_experiment_text(const TextExperimentArgs& args, std::ostream& out) {
  TextExperimentResult result = run_text_experiment(args.corpus, args.options);
  if (args.csv != "-" && !args.csv.empty()) {
    out << "alphabet size V=" << result.alphabet_size << ", train [" << result.train_begin << ", "
        << result.train_end << "), test [" << result.test_begin << ", " << result.test_end << ")\n";
  }
  emit_csv(args.csv, result.records, out);
  return result;
}

}  // namespace iconoclasm::workbench
