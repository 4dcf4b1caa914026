// iconoclasm: lossless text compression with hidden Markov models and
// interleaved bits-back ANS.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iconoclasm/errors.hpp"
#include "iconoclasm/workbench/commands.hpp"

using namespace iconoclasm;
using namespace iconoclasm::workbench;

namespace {

void add_codec_config(CLI::App* cmd, CodecConfig& cfg) {
  cmd->add_option("--precision", cfg.precision, "Quantization precision in bits")
      ->check(CLI::Range(8, 24))
      ->capture_default_str();
  cmd->add_option("--init-words", cfg.init_words, "32-bit words in the base message")->capture_default_str();
  cmd->add_option("--init-seed", cfg.init_seed, "Seed for the base message words")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossless compression with hidden Markov models and interleaved bits-back ANS"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit an HMM to the first N characters of a UTF-8 text with EM");
  train_cmd->add_option("--input", train.input, "UTF-8 training text")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--output", train.output, "Model file to write")->required();
  train_cmd->add_option("--states", train.states, "Hidden states K")->capture_default_str();
  train_cmd->add_option("--iters", train.iterations, "EM iterations")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Seed for the Dirichlet(1) initialization")->capture_default_str();
  train_cmd->add_option("--smoothing", train.smoothing, "Added to every probability after training")
      ->capture_default_str();
  train_cmd->add_option("--train-chars", train.train_chars, "Characters used for training")->capture_default_str();

  CompressArgs compress;
  std::string compress_codec = "iconoclasm";
  auto* compress_cmd = app.add_subcommand("compress", "Compress a UTF-8 text with a trained model");
  compress_cmd->add_option("--model", compress.model, "Model file")->required()->check(CLI::ExistingFile);
  compress_cmd->add_option("--input", compress.input, "UTF-8 text")->required()->check(CLI::ExistingFile);
  compress_cmd->add_option("--output", compress.output, "Compressed file to write")->required();
  compress_cmd->add_option("--codec", compress_codec, "iconoclasm | vanilla | naive-bbans")
      ->check(CLI::IsMember({"iconoclasm", "vanilla", "naive-bbans"}))
      ->capture_default_str();
  add_codec_config(compress_cmd, compress.config);
  compress_cmd->add_flag("--json", compress.json, "Print the rate report as JSON");

  DecompressArgs decompress;
  auto* decompress_cmd = app.add_subcommand("decompress", "Restore the text from a compressed file");
  decompress_cmd->add_option("--model", decompress.model, "Model file used for compression")
      ->required()
      ->check(CLI::ExistingFile);
  decompress_cmd->add_option("--input", decompress.input, "Compressed file")->required()->check(CLI::ExistingFile);
  decompress_cmd->add_option("--output", decompress.output, "Text file to write")->required();

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Write a random Dirichlet HMM and a text sampled from it");
  sample_cmd->add_option("--states", sample.states)->capture_default_str();
  sample_cmd->add_option("--obs", sample.symbols)->capture_default_str();
  sample_cmd->add_option("--alpha", sample.alpha)->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed)->capture_default_str();
  sample_cmd->add_option("--length", sample.length)->capture_default_str();
  sample_cmd->add_option("--model-output", sample.model_output)->required();
  sample_cmd->add_option("--text-output", sample.text_output)->required();

  PerfectModelOptions perfect;
  std::string perfect_csv = "-";
  std::string perfect_codec = "iconoclasm";
  bool perfect_no_verify = false;
  auto* perfect_cmd =
      app.add_subcommand("experiment-perfect", "Compression ratio vs T on data sampled from random HMMs");
  perfect_cmd->add_option("--states", perfect.states)->capture_default_str();
  perfect_cmd->add_option("--obs", perfect.symbols)->capture_default_str();
  perfect_cmd->add_option("--alpha", perfect.alpha)->capture_default_str();
  perfect_cmd->add_option("--seeds", perfect.seeds)->delimiter(',')->capture_default_str();
  perfect_cmd->add_option("--lengths", perfect.lengths)->delimiter(',')->capture_default_str();
  perfect_cmd->add_option("--codec", perfect_codec)
      ->check(CLI::IsMember({"iconoclasm", "vanilla", "naive-bbans"}))
      ->capture_default_str();
  perfect_cmd->add_option("--csv", perfect_csv, "Output path, or - for stdout")->capture_default_str();
  perfect_cmd->add_flag("--no-verify", perfect_no_verify, "Skip decoding each cell");
  add_codec_config(perfect_cmd, perfect.config);

  TextExperimentArgs text;
  std::string text_codec = "iconoclasm";
  bool text_no_verify = false;
  auto* text_cmd = app.add_subcommand("experiment-text", "Train on a text prefix, compress the following spans");
  text_cmd->add_option("--corpus", text.corpus)->required()->check(CLI::ExistingFile);
  text_cmd->add_option("--train-chars", text.options.train_chars)->capture_default_str();
  text_cmd->add_option("--test-lengths", text.options.test_lengths)->delimiter(',')->capture_default_str();
  text_cmd->add_option("--states", text.options.em.states)->capture_default_str();
  text_cmd->add_option("--iters", text.options.em.iterations)->capture_default_str();
  text_cmd->add_option("--seed", text.options.em.seed)->capture_default_str();
  text_cmd->add_option("--smoothing", text.options.em.smoothing)->capture_default_str();
  text_cmd->add_option("--codec", text_codec)
      ->check(CLI::IsMember({"iconoclasm", "vanilla", "naive-bbans"}))
      ->capture_default_str();
  text_cmd->add_option("--csv", text.csv, "Output path, or - for stdout")->capture_default_str();
  text_cmd->add_flag("--no-verify", text_no_verify, "Skip decoding each cell");
  add_codec_config(text_cmd, text.options.config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      cmd_train(train, std::cout);
    } else if (*compress_cmd) {
      compress.codec = parse_codec(compress_codec);
      cmd_compress(compress, std::cout);
    } else if (*decompress_cmd) {
      cmd_decompress(decompress, std::cout);
    } else if (*sample_cmd) {
      cmd_sample(sample, std::cout);
    } else if (*perfect_cmd) {
      perfect.codec = parse_codec(perfect_codec);
      perfect.verify = !perfect_no_verify;
      cmd_experiment_perfect(perfect, perfect_csv, std::cout);
    } else if (*text_cmd) {
      text.options.codec = parse_codec(text_codec);
      text.options.verify = !text_no_verify;
      cmd_experiment_text(text, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "iconoclasm: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
