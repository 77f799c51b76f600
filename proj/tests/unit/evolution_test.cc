#include "parsec/evolution.h"

#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "parsec/synthetic.h"
#include "test_util.h"

namespace parsec {
namespace {

using testing::rule;
using testing::sentence;
using testing::split_ws;

struct Fixture {
  Fixture(std::size_t instances = 60, std::uint64_t seed = 3)
      : lexicon(parse_lexicon(synthetic::lexicon_text())), negations(default_negations()) {
    synthetic::Options o;
    o.instances = instances;
    o.seed = seed;
    corpus = synthetic::generate(o);
  }
  FitnessEvaluator evaluator() const { return FitnessEvaluator(corpus, lexicon, negations); }

  Lexicon lexicon;
  NegationList negations;
  Corpus corpus;
};

EvolutionParams small_params() {
  EvolutionParams p;
  p.population_size = 12;
  p.generations = 4;
  p.lcb = 10;
  p.ucb = 13;
  p.rules_min = 5;
  p.rules_max = 50;
  p.seed = 17;
  p.threads = 1;
  return p;
}

double mean_and_count(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

TEST(CreatePosTags, LengthTwoHasNoWildcard) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto tags = create_pos_tags(2, 2, rng);
    ASSERT_EQ(tags.size(), 2u);
    for (PosTag t : tags) EXPECT_TRUE(is_word_tag(t));
  }
}

TEST(CreatePosTags, InteriorWildcardFrequency) {
  Rng rng(2);
  const int n = 100000;
  int wildcards = 0;
  for (int i = 0; i < n; ++i) {
    const auto tags = create_pos_tags(3, 3, rng);
    ASSERT_EQ(tags.size(), 3u);
    ASSERT_NE(tags[0], PosTag::kWildcard);
    ASSERT_NE(tags[2], PosTag::kWildcard);
    for (PosTag t : tags) ASSERT_FALSE(is_punctuation(t));
    wildcards += tags[1] == PosTag::kWildcard;
  }
  // 36 word tags plus the wildcard, drawn uniformly.
  const double p = 1.0 / 37.0;
  const double sigma = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(wildcards) / n, p, 3 * sigma);
}

TEST(CreatePosTags, LengthIsUniformInRange) {
  Rng rng(3);
  std::map<std::size_t, int> counts;
  for (int i = 0; i < 40000; ++i) ++counts[create_pos_tags(2, 5, rng).size()];
  ASSERT_EQ(counts.size(), 4u);
  for (auto [len, c] : counts) {
    EXPECT_GE(len, 2u);
    EXPECT_LE(len, 5u);
    EXPECT_NEAR(c, 10000, 3 * std::sqrt(40000 * 0.25 * 0.75));
  }
}

TEST(CreateDecisions, SingleTagAlwaysDeletesIt) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(create_decisions(1, rng), (std::vector<std::uint32_t>{0}));
  }
}

TEST(CreateDecisions, MeanSizeForThreeTags) {
  // Sizes 0..3 with weights 1,3,3,1 out of 8; size 0 is repaired to 1.
  const std::map<int, double> pmf = {{1, 4.0 / 8}, {2, 3.0 / 8}, {3, 1.0 / 8}};
  double mean = 0, second = 0;
  for (auto [k, p] : pmf) {
    mean += k * p;
    second += k * k * p;
  }
  ASSERT_DOUBLE_EQ(mean, 1.625);
  const double sigma = std::sqrt(second - mean * mean);

  Rng rng(5);
  const int n = 100000;
  std::vector<double> sizes;
  sizes.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto d = create_decisions(3, rng);
    ASSERT_FALSE(d.empty());
    for (auto x : d) ASSERT_LT(x, 3u);
    ASSERT_TRUE(std::is_sorted(d.begin(), d.end()));
    sizes.push_back(static_cast<double>(d.size()));
  }
  EXPECT_NEAR(mean_and_count(sizes), mean, 3 * sigma / std::sqrt(n));
}

TEST(CreateCompressor, RuleCountBounds) {
  EvolutionParams p;
  Rng rng(6);
  p.rules_min = 1;
  p.rules_max = 1;
  for (int i = 0; i < 200; ++i) EXPECT_EQ(create_compressor(p, rng).size(), 1u);
  p.rules_min = 5;
  p.rules_max = 50;
  for (int i = 0; i < 500; ++i) {
    const auto c = create_compressor(p, rng);
    EXPECT_GE(c.size(), 5u);
    EXPECT_LE(c.size(), 50u);
    EXPECT_EQ(compressor_violation(c, p.limits()), "");
  }
}

TEST(CreateCompressor, MeanRuleCount) {
  EvolutionParams p;
  p.rules_min = 1;
  p.rules_max = 10;
  // k fair coins, and the all-tails case becomes one rule.
  const double k = 10;
  const double mean = k / 2 + std::pow(0.5, k);
  const double sigma = std::sqrt(k / 4);
  Rng rng(7);
  const int n = 20000;
  std::vector<double> counts;
  for (int i = 0; i < n; ++i) counts.push_back(static_cast<double>(create_compressor(p, rng).size()));
  EXPECT_NEAR(mean_and_count(counts), mean, 3 * sigma / std::sqrt(n) + 1e-3);
}

TEST(BoundDistance, ZeroInsideWindow) {
  EvolutionParams p;
  p.lcb = 10;
  p.ucb = 13;
  EXPECT_EQ(bound_distance(10, p), 0);
  EXPECT_EQ(bound_distance(13, p), 0);
  EXPECT_DOUBLE_EQ(bound_distance(8.5, p), 1.5);
  EXPECT_DOUBLE_EQ(bound_distance(15, p), 2);
}

TEST(Params, Validation) {
  EvolutionParams p;
  EXPECT_NO_THROW(p.validate());
  auto broken = [](auto edit) {
    EvolutionParams q;
    edit(q);
    return q;
  };
  EXPECT_THROW(broken([](auto& q) { q.lcb = 13, q.ucb = 10; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.lcb = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.ucb = 101; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.rules_min = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.rules_min = 60; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.tags_min = 6; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.crossover_rate = 1.5; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](auto& q) { q.population_size = 0; }).validate(), std::invalid_argument);
}

TEST(Fitness, TotalFormula) {
  EXPECT_DOUBLE_EQ(fitness_total(5, 4.0, 10, FitnessWeights{}), 6.0);
  EXPECT_DOUBLE_EQ(fitness_total(-2, 0.0, 1, FitnessWeights{}), -2.1);
}

TEST(Fitness, IdentityCompressor) {
  const Fixture f;
  const auto report = f.evaluator().evaluate(Compressor{{rule("UH UH", {0})}});
  EXPECT_EQ(report.raw_fitness, 0);
  EXPECT_EQ(report.average_change, 0.0);
  EXPECT_EQ(report.num_rules, 1u);
  EXPECT_EQ(report.compression_rate, 0.0);
  EXPECT_DOUBLE_EQ(report.total, -0.1);
}

// One instance goes from wrong to right, one from right to wrong, one is
// untouched by the compressor.
TEST(Fitness, ToyCorpusBalancesOut) {
  const Lexicon lex({{"good", 2}, {"bad", -2}});
  Corpus c;
  auto add = [&](const char* words, const char* tags, Label gold) {
    LabeledInstance inst;
    inst.label = gold;
    inst.sentences.push_back(sentence(words, tags));
    c.instances.push_back(inst);
  };
  add("bad good", "FW JJ", Label::kPositive);        // 0 -> +2: now right
  add("good good bad", "FW JJ JJ", Label::kPositive);  // +2 -> 0: now wrong
  add("bad phone", "JJ NN", Label::kNegative);        // unchanged
  const FitnessEvaluator ev(c, lex, default_negations());
  const auto r = ev.evaluate(Compressor{{rule("FW", {0})}});
  EXPECT_EQ(r.raw_fitness, 0);
  EXPECT_DOUBLE_EQ(r.average_change, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.total, 0.5 * 2.0 / 3.0 - 0.1);
  EXPECT_DOUBLE_EQ(r.compression_rate, 100.0 * 2 / 7);
}

// Straight transcription of the fitness pseudocode, scoring with a plain
// loop rather than the library scorer.
double reference_fitness(const Compressor& compressor, const Corpus& corpus,
                         const std::map<std::string, double>& dictionary,
                         const std::set<std::string>& negation_words) {
  auto sentiment_of = [&](const LabeledInstance& inst) {
    double total = 0;
    for (const auto& s : inst.sentences) {
      double sentiment = 0;
      bool negation = false;
      for (const auto& word : s.words) {
        if (dictionary.count(word) && negation) sentiment += -1 * dictionary.at(word);
        if (dictionary.count(word) && !negation) sentiment += dictionary.at(word);
        negation = negation_words.count(word) ? !negation : false;
      }
      total += sentiment;
    }
    return total > 0 ? Label::kPositive : total < 0 ? Label::kNegative : Label::kNeutral;
  };
  double raw_fitness = 0;
  double average_change = 0;
  for (const auto& inst : corpus.instances) {
    const LabeledInstance compressed = apply_compressor(compressor, inst);
    const Label compressed_sentiment = sentiment_of(compressed);
    if (compressed_sentiment != sentiment_of(inst)) {
      if (compressed_sentiment == inst.label) {
        raw_fitness = raw_fitness + 1;
      } else {
        raw_fitness = raw_fitness - 1;
      }
    }
    average_change = average_change + static_cast<double>(inst.word_count() - compressed.word_count());
  }
  const double number_of_sentences = static_cast<double>(corpus.size());
  return raw_fitness + 0.5 * (average_change / number_of_sentences) - 0.1 * compressor.size();
}

TEST(Fitness, MatchesReferenceOnTinyCorpora) {
  const std::map<std::string, double> dict = {{"good", 2}, {"bad", -3}, {"ok", 1}};
  const Lexicon lex(dict);
  const NegationList neg({"not"});
  const std::vector<std::string> words = {"good", "bad", "ok", "not", "it", "is"};
  const std::vector<PosTag> tags = testing::tags_of("JJ NN RB DT VB");
  Rng rng(31);
  EvolutionParams p;
  p.tags_min = 1;
  p.tags_max = 3;
  for (int trial = 0; trial < 300; ++trial) {
    Corpus c;
    const std::size_t n = rng.between(1, 5);
    for (std::size_t i = 0; i < n; ++i) {
      LabeledInstance inst;
      inst.label = rng.chance(0.5) ? Label::kPositive : Label::kNegative;
      for (std::size_t s = rng.between(1, 2); s > 0; --s) {
        TaggedSentence ts;
        for (std::size_t k = rng.between(1, 7); k > 0; --k) {
          ts.words.push_back(words[rng.below(words.size())]);
          ts.tags.push_back(tags[rng.below(tags.size())]);
        }
        inst.sentences.push_back(ts);
      }
      c.instances.push_back(inst);
    }
    Compressor comp;
    for (std::size_t r = rng.between(1, 3); r > 0; --r) {
      Rule rl;
      for (std::size_t k = rng.between(1, 3); k > 0; --k) rl.tags.push_back(tags[rng.below(tags.size())]);
      rl.decisions = create_decisions(rl.tags.size(), rng);
      comp.rules.push_back(rl);
    }
    const FitnessEvaluator ev(c, lex, neg);
    const auto report = ev.evaluate(comp);
    ASSERT_NEAR(report.total, reference_fitness(comp, c, dict, neg.words()), 1e-12);
    ASSERT_EQ(report.total, fitness_total(report.raw_fitness, report.average_change,
                                          report.num_rules, FitnessWeights{}));
    ASSERT_DOUBLE_EQ(report.compression_rate, compression_rate(comp, c));
  }
}

TEST(Evaluator, SamplePatternComesFromTheCorpus) {
  const Fixture f;
  const auto ev = f.evaluator();
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto pattern = ev.sample_pattern(2, 4, rng);
    ASSERT_TRUE(pattern.has_value());
    ASSERT_GE(pattern->size(), 2u);
    ASSERT_LE(pattern->size(), 4u);
    const Rule r{*pattern, {0}};
    EXPECT_GT(compression_rate(Compressor{{r}}, f.corpus), 0.0) << to_string(r);
  }
}

TEST(InitPopulation, AllIndividualsFeasible) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.population_size = 20;
  for (const auto& ind : init_population(p, ev)) {
    EXPECT_TRUE(is_feasible(ind, p));
    EXPECT_GE(ind.report.compression_rate, 10.0);
    EXPECT_LE(ind.report.compression_rate, 13.0);
    EXPECT_EQ(ind.report, ev.evaluate(ind.compressor));
  }
}

TEST(InitPopulation, HighRateWithManyRules) {
  const Fixture f(30);
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.population_size = 3;
  p.lcb = 50;
  p.ucb = 53;
  p.rules_min = 350;
  p.rules_max = 500;
  for (const auto& ind : init_population(p, ev)) {
    EXPECT_TRUE(is_feasible(ind, p));
    EXPECT_GE(ind.compressor.size(), 350u);
  }
}

TEST(InitPopulation, InfeasibleBoundsThrow) {
  Corpus c;
  for (int i = 0; i < 4; ++i) {
    LabeledInstance inst;
    inst.label = i % 2 ? Label::kNegative : Label::kPositive;
    inst.sentences = {sentence("good", "JJ"), sentence("bad", "JJ")};
    c.instances.push_back(inst);
  }
  const FitnessEvaluator ev(c, parse_lexicon(synthetic::lexicon_text()), default_negations());
  EvolutionParams p = small_params();
  p.lcb = 99;
  p.ucb = 100;
  p.init_repair_cap = 200;
  EXPECT_THROW(init_population(p, ev), InitializationFailure);
}

TEST(Crossover, CutAtZeroSwapsParents) {
  const Compressor a{{rule("JJ", {0}), rule("NN", {0})}};
  const Compressor b{{rule("DT", {0})}};
  const auto [x, y] = crossover_rules(a, b, 0, 0);
  EXPECT_EQ(x, b);
  EXPECT_EQ(y, a);
}

TEST(Crossover, SinglePoint) {
  const Compressor a{{rule("JJ", {0}), rule("NN", {0}), rule("VB", {0})}};
  const Compressor b{{rule("DT", {0}), rule("IN", {0})}};
  const auto [x, y] = crossover_rules(a, b, 1, 1);
  EXPECT_EQ(x, (Compressor{{rule("JJ", {0}), rule("IN", {0})}}));
  EXPECT_EQ(y, (Compressor{{rule("DT", {0}), rule("NN", {0}), rule("VB", {0})}}));
}

TEST(Crossover, ChildrenStayFeasible) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.rules_max = 8;
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Individual a = create_individual(p, ev, rng);
    Individual b = create_individual(p, ev, rng);
    const auto [x, y] = crossover(a, b, rng, p, ev);
    for (const auto* child : {&x, &y}) {
      EXPECT_TRUE(is_feasible(*child, p));
      EXPECT_LE(child->compressor.size(), 8u);
      EXPECT_EQ(child->report, ev.evaluate(child->compressor));
    }
  }
}

TEST(Mutate, RawEdits) {
  EvolutionParams p;
  Rng rng(10);
  const Compressor one{{rule("JJ NN", {0})}};
  EXPECT_EQ(mutate_rules(one, MutationKind::kAddRule, rng, p).size(), 2u);
  EXPECT_EQ(mutate_rules(one, MutationKind::kRemoveRule, rng, p).size(), 0u);
  const auto retagged = mutate_rules(one, MutationKind::kReplaceTag, rng, p);
  EXPECT_EQ(retagged.rules[0].tags.size(), 2u);
  EXPECT_EQ(rule_violation(retagged.rules[0]), "");
  const auto redrawn = mutate_rules(one, MutationKind::kRegenerateDecisions, rng, p);
  EXPECT_EQ(rule_violation(redrawn.rules[0]), "");
}

TEST(Mutate, OutputRespectsBounds) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.rules_min = 1;
  p.rules_max = 6;
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Individual ind = create_individual(p, ev, rng);
    const Individual out = mutate(ind, rng, p, ev);
    EXPECT_TRUE(is_feasible(out, p));
    EXPECT_GE(out.compressor.size(), 1u);
    EXPECT_LE(out.compressor.size(), 6u);
  }
}

TEST(Select, FullTournamentPicksTheBest) {
  const std::vector<double> totals = {1.0, 5.0, -2.0, 3.0, 4.9};
  Rng rng(12);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(select(totals, rng, totals.size()), 1u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(select(totals, rng, 100), 1u);
}

TEST(Select, TiesForTheBestAreBrokenUniformly) {
  const std::vector<double> totals = {5.0, 1.0, 5.0};
  Rng rng(13);
  int first = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto s = select(totals, rng, 3);
    ASSERT_NE(s, 1u);
    first += s == 0;
  }
  EXPECT_NEAR(first, n / 2, 3 * std::sqrt(n * 0.25));
}

void expect_uniform(std::size_t tournament) {
  const std::size_t k = 8;
  const std::vector<double> totals(k, 2.5);
  Rng rng(14 + tournament);
  const int n = 40000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[select(totals, rng, tournament)];
  const double p = 1.0 / k;
  for (int c : counts) EXPECT_NEAR(c, n * p, 3.5 * std::sqrt(n * p * (1 - p)));
}

TEST(Select, EqualFitnessIsUniform) { expect_uniform(4); }
TEST(Select, TournamentOfOneIsUniform) {
  expect_uniform(1);
  const std::vector<double> totals = {0.0, 100.0};
  Rng rng(15);
  int low = 0;
  for (int i = 0; i < 4000; ++i) low += select(totals, rng, 1) == 0;
  EXPECT_NEAR(low, 2000, 3 * std::sqrt(1000.0));
}

TEST(Evolve, ZeroGenerationsReturnsInitialBest) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.generations = 0;
  const auto initial = init_population(p, ev);
  const auto result = evolve(p, ev);
  double best = -1e300;
  for (const auto& ind : initial) best = std::max(best, ind.report.total);
  EXPECT_EQ(result.best.report.total, best);
  ASSERT_EQ(result.history.size(), 1u);
  EXPECT_EQ(result.history[0].best.total, best);
}

TEST(Evolve, BoundsElitismAndDeterminism) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.generations = 6;
  std::size_t generations_seen = 0;
  const auto result = evolve(p, ev, [&](std::size_t, std::span<const Individual> pop) {
    ++generations_seen;
    EXPECT_EQ(pop.size(), p.population_size);
    for (const auto& ind : pop) EXPECT_TRUE(is_feasible(ind, p));
  });
  EXPECT_EQ(generations_seen, p.generations + 1);
  ASSERT_EQ(result.history.size(), p.generations + 1);
  for (std::size_t g = 1; g < result.history.size(); ++g) {
    EXPECT_GE(result.history[g].best.total, result.history[g - 1].best.total);
  }
  EXPECT_EQ(result.best.report, result.history.back().best);

  const auto again = evolve(p, ev);
  EXPECT_EQ(again.history, result.history);
  EXPECT_EQ(again.best.compressor, result.best.compressor);
}

TEST(Evolve, ResultDoesNotDependOnThreadCount) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.generations = 3;
  p.threads = 1;
  const auto one = evolve(p, ev);
  p.threads = 4;
  const auto four = evolve(p, ev);
  EXPECT_EQ(one.history, four.history);
  EXPECT_EQ(one.best.compressor, four.best.compressor);
}

TEST(Evolve, SeedChangesTheRun) {
  const Fixture f;
  const auto ev = f.evaluator();
  EvolutionParams p = small_params();
  p.generations = 1;
  const auto a = evolve(p, ev);
  p.seed += 1;
  const auto b = evolve(p, ev);
  EXPECT_NE(a.history, b.history);
}

TEST(Summarize, Statistics) {
  std::vector<Individual> pop(2);
  pop[0].compressor = Compressor{{rule("JJ", {0})}};
  pop[0].report = {1, 2.0, 1, 1.9, 10.0};
  pop[1].compressor = Compressor{{rule("JJ", {0}), rule("NN", {0})}};
  pop[1].report = {-1, 4.0, 2, 0.8, 20.0};
  const auto s = summarize(3, pop);
  EXPECT_EQ(s.generation, 3u);
  EXPECT_EQ(s.best, pop[0].report);
  EXPECT_DOUBLE_EQ(s.mean_raw_fitness, 0.0);
  EXPECT_DOUBLE_EQ(s.mean_average_change, 3.0);
  EXPECT_DOUBLE_EQ(s.mean_compression_rate, 15.0);
  EXPECT_DOUBLE_EQ(s.min_compression_rate, 10.0);
  EXPECT_DOUBLE_EQ(s.max_compression_rate, 20.0);
  EXPECT_EQ(s.min_rules, 1u);
  EXPECT_EQ(s.max_rules, 2u);
}

}  // namespace
}  // namespace parsec
