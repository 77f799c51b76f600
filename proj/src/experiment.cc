#include "parsec/experiment.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace parsec {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string shortest(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string one_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

double parse_double(std::string_view field, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view field, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::string fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Resolves the model to use for the corpus at `index`.
std::string model_for(const ExperimentConfig& config, std::size_t index,
                      const std::string& corpus_name) {
  if (config.model_paths.size() == 1) return config.model_paths.front();
  if (config.model_paths.size() == config.corpus_paths.size()) return config.model_paths[index];
  if (config.model_paths.empty() && !config.model_dir.empty()) {
    return (fs::path(config.model_dir) / corpus_name / "model.json").string();
  }
  throw ConfigError("model", "give one model, one model per corpus, or model_dir");
}

}  // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const std::string k(trim(key));
  const std::string_view v = trim(value);
  auto& p = config.params;
  if (k == "corpus") {
    for (auto& item : split_list(v)) config.corpus_paths.push_back(std::move(item));
  } else if (k == "model") {
    for (auto& item : split_list(v)) config.model_paths.push_back(std::move(item));
  } else if (k == "lexicon") {
    config.lexicon_path = v;
  } else if (k == "negations") {
    config.negations_path = v;
  } else if (k == "model_dir") {
    config.model_dir = v;
  } else if (k == "out") {
    config.out = v;
  } else if (k == "format") {
    if (v == "table") {
      config.format = ReportFormat::kTable;
    } else if (v == "csv") {
      config.format = ReportFormat::kCsv;
    } else {
      throw ConfigError(k, "expected 'table' or 'csv', got '" + std::string(v) + "'");
    }
  } else if (k == "analyzer") {
    config.analyzer = v;
  } else if (k == "split") {
    if (v != "test" && v != "all") {
      throw ConfigError(k, "expected 'test' or 'all', got '" + std::string(v) + "'");
    }
    config.split = v;
  } else if (k == "train_fraction") {
    config.train_fraction = parse_double(k, v);
  } else if (k == "population_size" || k == "pop") {
    p.population_size = parse_unsigned(k, v);
  } else if (k == "generations" || k == "gens") {
    p.generations = parse_unsigned(k, v);
  } else if (k == "crossover_rate") {
    p.crossover_rate = parse_double(k, v);
  } else if (k == "mutation_rate") {
    p.mutation_rate = parse_double(k, v);
  } else if (k == "lcb") {
    p.lcb = parse_double(k, v);
  } else if (k == "ucb") {
    p.ucb = parse_double(k, v);
  } else if (k == "rules_min") {
    p.rules_min = parse_unsigned(k, v);
  } else if (k == "rules_max") {
    p.rules_max = parse_unsigned(k, v);
  } else if (k == "tags_min") {
    p.tags_min = parse_unsigned(k, v);
  } else if (k == "tags_max") {
    p.tags_max = parse_unsigned(k, v);
  } else if (k == "tournament_size") {
    p.tournament_size = parse_unsigned(k, v);
  } else if (k == "elitism") {
    p.elitism = parse_unsigned(k, v);
  } else if (k == "length_weight") {
    p.fitness_weights.length_weight = parse_double(k, v);
  } else if (k == "rules_weight") {
    p.fitness_weights.rules_weight = parse_double(k, v);
  } else if (k == "max_repair_attempts") {
    p.max_repair_attempts = parse_unsigned(k, v);
  } else if (k == "init_repair_cap") {
    p.init_repair_cap = parse_unsigned(k, v);
  } else if (k == "seed") {
    p.seed = parse_unsigned(k, v);
  } else if (k == "threads") {
    p.threads = parse_unsigned(k, v);
  } else {
    throw ConfigError(k, "unknown setting");
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    ++line_no;
    if (!line.empty() && line.front() != '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("config", "line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return base;
}

ExperimentConfig read_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

void validate(const ExperimentConfig& config, bool need_lexicon) {
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw ConfigError("train_fraction", "must lie in (0, 1)");
  }
  if (config.corpus_paths.empty()) throw ConfigError("corpus", "no corpus given");
  for (const auto& p : config.corpus_paths) {
    if (!fs::is_regular_file(p)) throw ConfigError("corpus", "file '" + p + "' does not exist");
  }
  if (need_lexicon) {
    if (config.lexicon_path.empty()) throw ConfigError("lexicon", "no lexicon path given");
    if (!fs::is_regular_file(config.lexicon_path)) {
      throw ConfigError("lexicon", "file '" + config.lexicon_path + "' does not exist");
    }
    if (!config.negations_path.empty() && !fs::is_regular_file(config.negations_path)) {
      throw ConfigError("negations", "file '" + config.negations_path + "' does not exist");
    }
  }
  for (const auto& p : config.model_paths) {
    if (!fs::is_regular_file(p)) throw ConfigError("model", "file '" + p + "' does not exist");
  }
  if (config.analyzer != "baseline") {
    throw ConfigError("analyzer", "only the 'baseline' analyzer is built in, got '" +
                                      config.analyzer + "'");
  }
}

AccuracyDelta make_delta(std::string dataset, std::string analyzer, double original,
                         double compressed) {
  return AccuracyDelta{std::move(dataset), std::move(analyzer), original, compressed,
                       compressed - original};
}

std::vector<AccuracyDelta> with_average_rows(std::vector<AccuracyDelta> rows) {
  // Analyzers in first-appearance order.
  std::vector<std::string> analyzers;
  for (const auto& r : rows) {
    if (std::find(analyzers.begin(), analyzers.end(), r.analyzer) == analyzers.end()) {
      analyzers.push_back(r.analyzer);
    }
  }
  std::vector<AccuracyDelta> averages;
  for (const auto& a : analyzers) {
    double original = 0.0;
    double compressed = 0.0;
    std::size_t n = 0;
    bool has_average = false;
    for (const auto& r : rows) {
      if (r.analyzer != a) continue;
      if (r.dataset == kAverageRow) {
        has_average = true;
        continue;
      }
      original += r.original_accuracy;
      compressed += r.compressed_accuracy;
      ++n;
    }
    if (has_average || n < 2) continue;
    averages.push_back(make_delta(std::string(kAverageRow), a, original / static_cast<double>(n),
                                  compressed / static_cast<double>(n)));
  }
  rows.insert(rows.end(), averages.begin(), averages.end());
  return rows;
}

std::string format_csv(const std::vector<AccuracyDelta>& rows) {
  std::string out = "dataset,analyzer,original_accuracy,compressed_accuracy,delta\n";
  for (const auto& r : rows) {
    out += csv_field(r.dataset) + ',' + csv_field(r.analyzer) + ',' +
           shortest(r.original_accuracy) + ',' + shortest(r.compressed_accuracy) + ',' +
           shortest(r.delta) + '\n';
  }
  return out;
}

std::string format_table(const std::vector<AccuracyDelta>& rows) {
  const std::vector<std::string> header = {"Dataset", "Analyzer", "Original", "Compressed",
                                           "Change"};
  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const auto& r : rows) {
    cells.push_back({r.dataset, r.analyzer, one_decimal(r.original_accuracy),
                     one_decimal(r.compressed_accuracy), one_decimal(r.delta)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      // Text columns left-aligned, numbers right-aligned.
      line += c < 2 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::vector<AccuracyDelta> parse_csv(std::string_view text) {
  std::vector<AccuracyDelta> rows;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      if (header) {
        header = false;
      } else {
        const auto f = split_csv_line(line);
        if (f.size() != 5) {
          throw std::runtime_error("report CSV: expected 5 fields in '" + std::string(line) + "'");
        }
        AccuracyDelta r;
        r.dataset = f[0];
        r.analyzer = f[1];
        r.original_accuracy = parse_double("original_accuracy", f[2]);
        r.compressed_accuracy = parse_double("compressed_accuracy", f[3]);
        r.delta = parse_double("delta", f[4]);
        rows.push_back(std::move(r));
      }
    }
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return rows;
}

LoadedSentiment load_sentiment(const ExperimentConfig& config) {
  std::vector<std::string> warnings;
  Lexicon lexicon = read_lexicon_file(config.lexicon_path, &warnings);
  NegationList negations = config.negations_path.empty()
                               ? default_negations()
                               : read_negations_file(config.negations_path);
  for (const auto& w : make_disjoint(lexicon, negations)) {
    warnings.push_back("lexicon entry '" + w + "' is a negation word; dropped from the lexicon");
  }
  return LoadedSentiment{std::move(lexicon), std::move(negations), std::move(warnings)};
}

json params_to_json(const EvolutionParams& p) {
  return json{{"population_size", p.population_size},
              {"generations", p.generations},
              {"crossover_rate", p.crossover_rate},
              {"mutation_rate", p.mutation_rate},
              {"lcb", p.lcb},
              {"ucb", p.ucb},
              {"rules_min", p.rules_min},
              {"rules_max", p.rules_max},
              {"tags_min", p.tags_min},
              {"tags_max", p.tags_max},
              {"tournament_size", p.tournament_size},
              {"elitism", p.elitism},
              {"length_weight", p.fitness_weights.length_weight},
              {"rules_weight", p.fitness_weights.rules_weight},
              {"max_repair_attempts", p.max_repair_attempts},
              {"init_repair_cap", p.init_repair_cap},
              {"seed", p.seed}};
}

json report_to_json(const FitnessReport& r) {
  return json{{"raw_fitness", r.raw_fitness},
              {"average_change", r.average_change},
              {"num_rules", r.num_rules},
              {"total", r.total},
              {"compression_rate", r.compression_rate}};
}

json stats_to_json(const GenerationStats& s) {
  return json{{"generation", s.generation},
              {"best", report_to_json(s.best)},
              {"mean_raw_fitness", s.mean_raw_fitness},
              {"mean_average_change", s.mean_average_change},
              {"mean_num_rules", s.mean_num_rules},
              {"mean_total", s.mean_total},
              {"mean_compression_rate", s.mean_compression_rate},
              {"min_compression_rate", s.min_compression_rate},
              {"max_compression_rate", s.max_compression_rate},
              {"min_rules", s.min_rules},
              {"max_rules", s.max_rules}};
}

std::string history_csv(const std::vector<GenerationStats>& history) {
  std::string out =
      "generation,best_total,best_raw_fitness,best_average_change,best_num_rules,"
      "best_compression_rate,mean_total,mean_compression_rate,min_compression_rate,"
      "max_compression_rate,min_rules,max_rules\n";
  for (const auto& s : history) {
    out += std::to_string(s.generation) + ',' + shortest(s.best.total) + ',' +
           std::to_string(s.best.raw_fitness) + ',' + shortest(s.best.average_change) + ',' +
           std::to_string(s.best.num_rules) + ',' + shortest(s.best.compression_rate) + ',' +
           shortest(s.mean_total) + ',' + shortest(s.mean_compression_rate) + ',' +
           shortest(s.min_compression_rate) + ',' + shortest(s.max_compression_rate) + ',' +
           std::to_string(s.min_rules) + ',' + std::to_string(s.max_rules) + '\n';
  }
  return out;
}

std::vector<EvolveOutcome> cmd_evolve(const ExperimentConfig& config, std::ostream& log) {
  validate(config, /*need_lexicon=*/true);
  if (config.out.empty()) throw ConfigError("out", "no output directory given");
  const LoadedSentiment sentiment = load_sentiment(config);
  for (const auto& w : sentiment.warnings) log << "warning: " << w << '\n';

  std::vector<EvolveOutcome> outcomes;
  for (const auto& corpus_path : config.corpus_paths) {
    const Corpus corpus = read_corpus_file(corpus_path);
    auto [train, test] = split_train_test(corpus, config.train_fraction, config.params.seed);
    log << corpus.name << ": " << train.size() << " train / " << test.size()
        << " test instances\n";

    const FitnessEvaluator evaluator(train, sentiment.lexicon, sentiment.negations,
                                     config.params.fitness_weights);
    const EvolutionResult result =
        evolve(config.params, evaluator,
               [&](std::size_t generation, std::span<const Individual> population) {
                 const GenerationStats s = summarize(generation, population);
                 log << corpus.name << " gen " << generation << ": best " << s.best.total
                     << " (raw " << s.best.raw_fitness << ", rate " << s.best.compression_rate
                     << "%, " << s.best.num_rules << " rules), mean " << s.mean_total << '\n';
               });

    const BaselineAnalyzer analyzer(sentiment.lexicon, sentiment.negations);
    const double test_rate = compression_rate(result.best.compressor, test);
    const double test_original = accuracy(test, analyzer);
    const double test_compressed = accuracy(test, analyzer, &result.best.compressor);

    const fs::path dir = fs::path(config.out) / corpus.name;
    fs::create_directories(dir);
    EvolveOutcome outcome;
    outcome.corpus_name = corpus.name;
    outcome.model_path = (dir / "model.json").string();
    outcome.manifest_path = (dir / "manifest.json").string();
    outcome.history_path = (dir / "history.csv").string();
    outcome.best = result.best;
    outcome.test_compression_rate = test_rate;

    const std::string model_text = serialize_model(result.best.compressor);
    write_text(outcome.model_path, model_text);
    write_text(outcome.history_path, history_csv(result.history));

    json history = json::array();
    for (const auto& s : result.history) history.push_back(stats_to_json(s));
    json negations = json::array();
    for (const auto& w : sentiment.negations.words()) negations.push_back(w);
    const json manifest = {
        {"format", "parsec-run-manifest/1"},
        {"corpus",
         {{"name", corpus.name},
          {"path", corpus_path},
          {"digest", corpus_digest(corpus)},
          {"instances", corpus.size()},
          {"words", corpus_word_count(corpus)},
          {"train_fraction", config.train_fraction},
          {"train_instances", train.size()},
          {"test_instances", test.size()}}},
        {"lexicon",
         {{"path", config.lexicon_path},
          {"digest", fnv1a(read_text(config.lexicon_path, "lexicon"))},
          {"entries", sentiment.lexicon.size()}}},
        {"negations", negations},
        {"params", params_to_json(config.params)},
        {"result",
         {{"fitness", report_to_json(result.best.report)},
          {"model", json::parse(model_text)},
          {"model_digest", fnv1a(model_text)},
          {"test",
           {{"compression_rate", test_rate},
            {"original_accuracy", test_original},
            {"compressed_accuracy", test_compressed},
            {"delta", test_compressed - test_original}}}}},
        {"history", history}};
    write_text(outcome.manifest_path, manifest.dump(2) + "\n");
    log << corpus.name << ": wrote " << outcome.model_path << " (train rate "
        << result.best.report.compression_rate << "%, test rate " << test_rate << "%)\n";
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

void cmd_compress(const std::string& model_path, const std::string& corpus_path,
                  std::ostream& out) {
  const Compressor compressor = read_model_file(model_path);
  const Corpus corpus = read_corpus_file(corpus_path);
  write_tagged_corpus(out, apply_compressor(compressor, corpus));
}

std::vector<AccuracyDelta> cmd_evaluate(const ExperimentConfig& config) {
  validate(config, /*need_lexicon=*/true);
  const LoadedSentiment sentiment = load_sentiment(config);
  const BaselineAnalyzer analyzer(sentiment.lexicon, sentiment.negations);
  std::vector<AccuracyDelta> rows;
  for (std::size_t i = 0; i < config.corpus_paths.size(); ++i) {
    const Corpus corpus = read_corpus_file(config.corpus_paths[i]);
    const Compressor compressor = read_model_file(model_for(config, i, corpus.name));
    const Corpus scored =
        config.split == "all"
            ? corpus
            : split_train_test(corpus, config.train_fraction, config.params.seed).second;
    rows.push_back(make_delta(corpus.name, analyzer.name(), accuracy(scored, analyzer),
                              accuracy(scored, analyzer, &compressor)));
  }
  return with_average_rows(std::move(rows));
}

std::string cmd_report(const std::vector<AccuracyDelta>& rows, ReportFormat format) {
  const auto all = with_average_rows(rows);
  return format == ReportFormat::kCsv ? format_csv(all) : format_table(all);
}

}  // namespace parsec
