// Experiment harness behind the `parsec` command line tool: configuration,
// the evolve / compress / evaluate / report commands, run manifests and the
// accuracy-change tables.

#ifndef PARSEC_EXPERIMENT_H_
#define PARSEC_EXPERIMENT_H_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parsec/compressor.h"
#include "parsec/corpus.h"
#include "parsec/evolution.h"
#include "parsec/sentiment.h"

namespace parsec {

enum class ReportFormat { kTable, kCsv };

struct ExperimentConfig {
  std::vector<std::string> corpus_paths;
  std::string lexicon_path;
  // Empty: the built-in negation list.
  std::string negations_path;
  std::vector<std::string> model_paths;
  // evaluate: when no model paths are given, <model_dir>/<corpus>/model.json.
  std::string model_dir;
  // evolve: output directory. compress / evaluate / report: output file,
  // empty for stdout.
  std::string out;
  ReportFormat format = ReportFormat::kTable;
  std::string analyzer = "baseline";
  // "test" evaluates on the held-out split, "all" on the whole corpus.
  std::string split = "test";
  double train_fraction = 0.7;
  EvolutionParams params;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Applies one `key = value` setting. List keys (corpus, model) append.
// Throws ConfigError for unknown keys and unparsable values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Flat key-value text: one `key = value` per line, '#' comments.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig read_config_file(const std::string& path, ExperimentConfig base = {});

// Checks params and that every referenced input file exists. `need_lexicon`
// is false for commands that do not score text.
void validate(const ExperimentConfig& config, bool need_lexicon);

struct AccuracyDelta {
  std::string dataset;
  std::string analyzer;
  double original_accuracy = 0.0;
  double compressed_accuracy = 0.0;
  double delta = 0.0;

  friend bool operator==(const AccuracyDelta&, const AccuracyDelta&) = default;
};

AccuracyDelta make_delta(std::string dataset, std::string analyzer, double original,
                         double compressed);

inline constexpr std::string_view kAverageRow = "Average";

// Appends one "Average" row per analyzer that has more than one dataset row
// and no Average row yet. Averages are means of the per-dataset accuracies.
std::vector<AccuracyDelta> with_average_rows(std::vector<AccuracyDelta> rows);

// CSV keeps full precision and round-trips exactly; the table prints one
// decimal place.
std::string format_csv(const std::vector<AccuracyDelta>& rows);
std::string format_table(const std::vector<AccuracyDelta>& rows);
std::vector<AccuracyDelta> parse_csv(std::string_view text);

struct LoadedSentiment {
  Lexicon lexicon;
  NegationList negations;
  std::vector<std::string> warnings;
};

LoadedSentiment load_sentiment(const ExperimentConfig& config);

struct EvolveOutcome {
  std::string corpus_name;
  std::string model_path;
  std::string manifest_path;
  std::string history_path;
  Individual best;
  double test_compression_rate = 0.0;
};

// Evolves one model per corpus on its training split and writes
// <out>/<corpus>/{model.json, manifest.json, history.csv}.
std::vector<EvolveOutcome> cmd_evolve(const ExperimentConfig& config, std::ostream& log);

// Compresses a corpus file with a model and writes it in the same format.
void cmd_compress(const std::string& model_path, const std::string& corpus_path,
                  std::ostream& out);

// Original and compressed accuracy per corpus, plus Average rows.
std::vector<AccuracyDelta> cmd_evaluate(const ExperimentConfig& config);

std::string cmd_report(const std::vector<AccuracyDelta>& rows, ReportFormat format);

nlohmann::json params_to_json(const EvolutionParams& params);
nlohmann::json report_to_json(const FitnessReport& report);
nlohmann::json stats_to_json(const GenerationStats& stats);
std::string history_csv(const std::vector<GenerationStats>& history);

}  // namespace parsec

#endif  // PARSEC_EXPERIMENT_H_
