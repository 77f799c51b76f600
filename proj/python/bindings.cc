#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <tuple>
#include <string>
#include <vector>

#include "parsec/compressor.h"
#include "parsec/corpus.h"
#include "parsec/evolution.h"
#include "parsec/experiment.h"
#include "parsec/sentiment.h"
#include "parsec/synthetic.h"

namespace py = pybind11;
using namespace parsec;

namespace {

std::vector<std::string> tag_names(const std::vector<PosTag>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (PosTag t : tags) out.emplace_back(tag_name(t));
  return out;
}

std::vector<PosTag> tags_from_names(const std::vector<std::string>& names, bool allow_wildcard) {
  std::vector<PosTag> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    const auto t = parse_tag(n, allow_wildcard);
    if (!t) throw py::value_error("unknown tag '" + n + "'");
    out.push_back(*t);
  }
  return out;
}

Label label_from_name(const std::string& name) {
  if (name == "positive") return Label::kPositive;
  if (name == "negative") return Label::kNegative;
  throw py::value_error("label must be 'positive' or 'negative', got '" + name + "'");
}

Lexicon lexicon_from(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return read_lexicon_file(obj.cast<std::string>());
  std::map<std::string, double> entries;
  for (const auto& [k, v] : obj.cast<py::dict>()) {
    entries[to_lower(k.cast<std::string>())] = v.cast<double>();
  }
  return Lexicon(entries);
}

NegationList negations_from(const py::object& obj) {
  if (obj.is_none()) return default_negations();
  if (py::isinstance<py::str>(obj)) return read_negations_file(obj.cast<std::string>());
  return NegationList(obj.cast<std::vector<std::string>>());
}

EvolutionParams params_from(const py::kwargs& kwargs) {
  ExperimentConfig config;
  for (const auto& [k, v] : kwargs) {
    apply_setting(config, k.cast<std::string>(), py::str(v).cast<std::string>());
  }
  return config.params;
}

py::dict report_dict(const FitnessReport& r) {
  py::dict d;
  d["raw_fitness"] = r.raw_fitness;
  d["average_change"] = r.average_change;
  d["num_rules"] = r.num_rules;
  d["total"] = r.total;
  d["compression_rate"] = r.compression_rate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_parsec, m) {
  m.doc() = "Evolved part-of-speech compressors that preserve sentiment";

  py::register_exception<CorpusError>(m, "CorpusError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<InitializationFailure>(m, "InitializationFailure", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<TaggedSentence>(m, "Sentence")
      .def(py::init([](std::vector<std::string> words, const std::vector<std::string>& tags) {
             if (words.size() != tags.size()) throw py::value_error("words and tags differ in length");
             return TaggedSentence{std::move(words), tags_from_names(tags, false)};
           }),
           py::arg("words"), py::arg("tags"))
      .def_readonly("words", &TaggedSentence::words)
      .def_property_readonly("tags", [](const TaggedSentence& s) { return tag_names(s.tags); })
      .def("__len__", &TaggedSentence::size)
      .def("__eq__", [](const TaggedSentence& a, const TaggedSentence& b) { return a == b; })
      .def("__repr__", [](const TaggedSentence& s) {
        std::string out = "Sentence(";
        for (std::size_t i = 0; i < s.size(); ++i) {
          out += (i ? " " : "") + s.words[i] + "/" + std::string(tag_name(s.tags[i]));
        }
        return out + ")";
      });

  py::class_<LabeledInstance>(m, "Instance")
      .def(py::init([](std::vector<TaggedSentence> sentences, const std::string& label) {
             return LabeledInstance{std::move(sentences), label_from_name(label)};
           }),
           py::arg("sentences"), py::arg("label"))
      .def_readonly("sentences", &LabeledInstance::sentences)
      .def_property_readonly("label", [](const LabeledInstance& i) { return std::string(label_name(i.label)); })
      .def("word_count", &LabeledInstance::word_count)
      .def("text", &instance_text);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init([](std::vector<LabeledInstance> instances, std::string name) {
             Corpus c{std::move(name), std::move(instances)};
             validate(c);
             return c;
           }),
           py::arg("instances"), py::arg("name") = "")
      .def_readonly("name", &Corpus::name)
      .def_readonly("instances", &Corpus::instances)
      .def("__len__", &Corpus::size)
      .def("__eq__", [](const Corpus& a, const Corpus& b) { return a == b; })
      .def("word_count", &corpus_word_count)
      .def("digest", &corpus_digest)
      .def("serialize", &serialize_corpus);

  m.def("parse_corpus",
        [](const std::string& text, std::string name, bool allow_empty_instances) {
          ParseOptions o;
          o.allow_empty_instances = allow_empty_instances;
          return parse_tagged_corpus(std::string_view(text), std::move(name), o);
        },
        py::arg("text"), py::arg("name") = "", py::arg("allow_empty_instances") = false);
  m.def("read_corpus", [](const std::string& path) { return read_corpus_file(path); }, py::arg("path"));
  m.def("split_train_test", &split_train_test, py::arg("corpus"), py::arg("train_fraction") = 0.7,
        py::arg("seed") = 1);

  py::class_<Compressor>(m, "Compressor")
      .def(py::init([](const std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>>& rules) {
             Compressor c;
             for (const auto& [tags, decisions] : rules) {
               c.rules.push_back(Rule{tags_from_names(tags, true), decisions});
             }
             validate(c);
             return c;
           }),
           py::arg("rules"), "Rules as (tags, deleted offsets) pairs; '*' is the wildcard.")
      .def_static("from_json", [](const std::string& text) { return deserialize_model(text); })
      .def_static("load", [](const std::string& path) { return read_model_file(path); })
      .def("to_json", &serialize_model)
      .def("save", [](const Compressor& c, const std::string& path) { write_model_file(path, c); })
      .def_property_readonly("rules",
                             [](const Compressor& c) {
                               std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> out;
                               for (const auto& r : c.rules) out.emplace_back(tag_names(r.tags), r.decisions);
                               return out;
                             })
      .def("__len__", &Compressor::size)
      .def("__eq__", [](const Compressor& a, const Compressor& b) { return a == b; })
      .def("__repr__", [](const Compressor& c) {
        std::string out = "Compressor(";
        for (std::size_t i = 0; i < c.rules.size(); ++i) out += (i ? ", " : "") + to_string(c.rules[i]);
        return out + ")";
      })
      .def("compress",
           py::overload_cast<const Compressor&, const TaggedSentence&>(&apply_compressor),
           py::arg("sentence"))
      .def("compress_corpus", py::overload_cast<const Compressor&, const Corpus&>(&apply_compressor),
           py::arg("corpus"))
      .def("compression_rate", &compression_rate, py::arg("corpus"));

  py::class_<BaselineAnalyzer>(m, "Analyzer")
      .def(py::init([](const py::object& lexicon, const py::object& negations) {
             Lexicon lex = lexicon_from(lexicon);
             NegationList neg = negations_from(negations);
             make_disjoint(lex, neg);
             return BaselineAnalyzer(std::move(lex), std::move(neg));
           }),
           py::arg("lexicon"), py::arg("negations") = py::none(),
           "Lexicon scorer. `lexicon` is a word->value dict or a lexicon file path; "
           "`negations` a word list, a file path, or None for the defaults.")
      .def("score",
           [](const BaselineAnalyzer& a, const std::vector<std::string>& words) {
             return score_sentence(words, a.lexicon(), a.negations());
           },
           py::arg("words"))
      .def("score_instance",
           [](const BaselineAnalyzer& a, const LabeledInstance& i) {
             return score_instance(i, a.lexicon(), a.negations());
           },
           py::arg("instance"))
      .def("classify",
           [](const BaselineAnalyzer& a, const std::string& text) {
             return std::string(label_name(a.classify_text(text)));
           },
           py::arg("text"))
      .def("accuracy",
           [](const BaselineAnalyzer& a, const Corpus& c, const Compressor* compressor) {
             return accuracy(c, a, compressor);
           },
           py::arg("corpus"), py::arg("compressor") = nullptr);

  m.def("fitness",
        [](const Compressor& c, const Corpus& corpus, const BaselineAnalyzer& a) {
          return report_dict(FitnessEvaluator(corpus, a.lexicon(), a.negations()).evaluate(c));
        },
        py::arg("compressor"), py::arg("corpus"), py::arg("analyzer"));

  m.def("evolve",
        [](const Corpus& corpus, const BaselineAnalyzer& a, const py::kwargs& kwargs) {
          const EvolutionParams params = params_from(kwargs);
          params.validate();
          const FitnessEvaluator evaluator(corpus, a.lexicon(), a.negations(), params.fitness_weights);
          EvolutionResult result;
          {
            py::gil_scoped_release release;
            result = evolve(params, evaluator);
          }
          py::list history;
          for (const auto& s : result.history) {
            py::dict d;
            d["generation"] = s.generation;
            d["best"] = report_dict(s.best);
            d["mean_total"] = s.mean_total;
            d["min_compression_rate"] = s.min_compression_rate;
            d["max_compression_rate"] = s.max_compression_rate;
            history.append(d);
          }
          return py::make_tuple(result.best.compressor, report_dict(result.best.report), history);
        },
        py::arg("corpus"), py::arg("analyzer"),
        "Evolve a compressor on `corpus`. Keyword arguments use the config keys "
        "(lcb, ucb, rules_min, rules_max, pop, gens, seed, ...). Returns "
        "(compressor, fitness report, per-generation history).");

  m.def("format_report",
        [](const std::vector<std::tuple<std::string, double, double>>& rows, const std::string& format) {
          std::vector<AccuracyDelta> deltas;
          for (const auto& [dataset, original, compressed] : rows) {
            deltas.push_back(make_delta(dataset, "baseline", original, compressed));
          }
          if (format != "table" && format != "csv") throw py::value_error("format must be 'table' or 'csv'");
          return cmd_report(deltas, format == "csv" ? ReportFormat::kCsv : ReportFormat::kTable);
        },
        py::arg("rows"), py::arg("format") = "table",
        "Rows are (dataset, original accuracy, compressed accuracy); an Average row is added.");

  m.def("generate_synthetic",
        [](std::size_t instances, std::string domain, std::uint64_t seed, std::string name,
           double sentiment_fraction, double noise, double negation, std::size_t min_words,
           std::size_t max_words) {
          synthetic::Options o;
          o.instances = instances;
          o.domain = std::move(domain);
          o.seed = seed;
          o.name = std::move(name);
          o.sentiment_fraction = sentiment_fraction;
          o.noise = noise;
          o.negation = negation;
          o.min_words = min_words;
          o.max_words = max_words;
          return synthetic::generate(o);
        },
        py::arg("instances") = 200, py::arg("domain") = "products", py::arg("seed") = 1,
        py::arg("name") = "synthetic", py::arg("sentiment_fraction") = 0.10, py::arg("noise") = 0.15,
        py::arg("negation") = 0.2, py::arg("min_words") = 25, py::arg("max_words") = 45,
        "Template-built labeled reviews with a fixed polar vocabulary.");
  m.def("synthetic_lexicon", &synthetic::lexicon_text,
        "The generator's polar adjectives as word<TAB>value lexicon text.");
}
