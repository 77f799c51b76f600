// parsec: evolve, apply and evaluate part-of-speech compressors.
//
//   parsec evolve   --corpus books.tagged --lexicon lexicon.tsv --out runs/
//   parsec compress --model runs/books/model.json --corpus books.tagged
//   parsec evaluate --corpus a.tagged --corpus b.tagged --model-dir runs/
//   parsec report   --rows results.csv --format table
//
// Settings come from an optional --config file, then from flags, so a flag
// always wins. Exit codes: 0 ok, 2 configuration, 3 infeasible bounds,
// 4 input/output or parse failure.

#include <deque>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "parsec/compressor.h"
#include "parsec/corpus.h"
#include "parsec/evolution.h"
#include "parsec/experiment.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flag values in command-line order, applied on top of the config file.
struct Overrides {
  std::string config_path;
  // A deque keeps the bound vectors at stable addresses.
  std::deque<std::pair<std::string, std::vector<std::string>>> flags;
  std::vector<std::string> sets;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help, bool multi = false) {
    auto& values = flags.emplace_back(key, std::vector<std::string>{}).second;
    auto* opt = app->add_option(flag, values, help);
    if (!multi) opt->expected(1);
  }

  parsec::ExperimentConfig resolve() const {
    parsec::ExperimentConfig config;
    if (!config_path.empty()) config = parsec::read_config_file(config_path);
    for (const auto& [key, values] : flags) {
      for (const auto& v : values) parsec::apply_setting(config, key, v);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw parsec::ConfigError("set", "expected key=value, got '" + s + "'");
      parsec::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    return config;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "key = value settings file");
  app->add_option("--set", o.sets, "extra setting as key=value (repeatable)");
}

void add_sentiment(CLI::App* app, Overrides& o) {
  o.add(app, "--lexicon", "lexicon", "word<TAB>score lexicon");
  o.add(app, "--negations", "negations", "negation word list (default: built-in)");
}

void add_split(CLI::App* app, Overrides& o) {
  o.add(app, "--seed", "seed", "random seed (also fixes the train/test split)");
  o.add(app, "--train-fraction", "train_fraction", "share of each label used for training");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Evolve part-of-speech compressors that keep sentiment intact"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Overrides evolve_o, compress_o, evaluate_o, report_o;

  auto* evolve = app.add_subcommand("evolve", "Evolve one compressor per corpus");
  add_common(evolve, evolve_o);
  evolve_o.add(evolve, "--corpus", "corpus", "tagged corpus (repeatable)", true);
  add_sentiment(evolve, evolve_o);
  evolve_o.add(evolve, "--lcb", "lcb", "lowest allowed compression rate, %");
  evolve_o.add(evolve, "--ucb", "ucb", "highest allowed compression rate, %");
  evolve_o.add(evolve, "--rules-min", "rules_min", "fewest rules per compressor");
  evolve_o.add(evolve, "--rules-max", "rules_max", "most rules per compressor");
  evolve_o.add(evolve, "--tags-min", "tags_min", "shortest rule pattern");
  evolve_o.add(evolve, "--tags-max", "tags_max", "longest rule pattern");
  evolve_o.add(evolve, "--pop", "population_size", "population size");
  evolve_o.add(evolve, "--gens", "generations", "number of generations");
  evolve_o.add(evolve, "--crossover-rate", "crossover_rate", "crossover probability");
  evolve_o.add(evolve, "--mutation-rate", "mutation_rate", "mutation probability");
  evolve_o.add(evolve, "--threads", "threads", "worker threads, 0 = all cores");
  add_split(evolve, evolve_o);
  evolve_o.add(evolve, "--out", "out", "output directory");

  auto* compress = app.add_subcommand("compress", "Apply a model to a tagged corpus");
  add_common(compress, compress_o);
  compress_o.add(compress, "--model", "model", "model file");
  compress_o.add(compress, "--corpus", "corpus", "tagged corpus");
  compress_o.add(compress, "--out", "out", "output file (default: stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Original vs compressed accuracy per corpus");
  add_common(evaluate, evaluate_o);
  evaluate_o.add(evaluate, "--corpus", "corpus", "tagged corpus (repeatable)", true);
  evaluate_o.add(evaluate, "--model", "model", "model file, one or one per corpus", true);
  evaluate_o.add(evaluate, "--model-dir", "model_dir", "evolve output directory");
  add_sentiment(evaluate, evaluate_o);
  add_split(evaluate, evaluate_o);
  evaluate_o.add(evaluate, "--split", "split", "'test' (held-out part) or 'all'");
  evaluate_o.add(evaluate, "--format", "format", "csv or table");
  evaluate_o.add(evaluate, "--out", "out", "output file (default: stdout)");

  auto* report = app.add_subcommand("report", "Format evaluate CSV output");
  std::vector<std::string> row_files;
  add_common(report, report_o);
  report->add_option("--rows", row_files, "CSV written by evaluate --format csv")->required();
  report_o.add(report, "--format", "format", "csv or table");
  report_o.add(report, "--out", "out", "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (evolve->parsed()) {
      const auto config = evolve_o.resolve();
      parsec::cmd_evolve(config, std::cerr);
    } else if (compress->parsed()) {
      const auto config = compress_o.resolve();
      if (config.model_paths.size() != 1) throw parsec::ConfigError("model", "give exactly one model");
      if (config.corpus_paths.size() != 1) throw parsec::ConfigError("corpus", "give exactly one corpus");
      std::ostringstream text;
      parsec::cmd_compress(config.model_paths[0], config.corpus_paths[0], text);
      write_output(config.out, text.str());
    } else if (evaluate->parsed()) {
      const auto config = evaluate_o.resolve();
      const auto rows = parsec::cmd_evaluate(config);
      write_output(config.out, parsec::cmd_report(rows, config.format));
    } else if (report->parsed()) {
      const auto config = report_o.resolve();
      std::vector<parsec::AccuracyDelta> rows;
      for (const auto& path : row_files) {
        for (auto& r : parsec::parse_csv(read_file(path))) rows.push_back(std::move(r));
      }
      write_output(config.out, parsec::cmd_report(rows, config.format));
    }
  } catch (const parsec::ConfigError& e) {
    std::cerr << "parsec: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parsec: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const parsec::InitializationFailure& e) {
    std::cerr << "parsec: infeasible bounds: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const parsec::CorpusError& e) {
    std::cerr << "parsec: corpus error: " << e.what() << '\n';
    return kExitIo;
  } catch (const parsec::ModelError& e) {
    std::cerr << "parsec: model error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "parsec: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
