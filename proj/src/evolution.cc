#include "parsec/evolution.h"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace parsec {
namespace {

// Stream identifiers for derive_seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kOffspringStream = 2;

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is assigned by
// index, so results written to slot i do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

PosTag random_word_tag(Rng& rng) { return tag_from_index(rng.below(kNumWordTags)); }

PosTag random_word_tag_or_wildcard(Rng& rng) {
  const std::size_t i = rng.below(kNumWordTags + 1);
  return i == kNumWordTags ? PosTag::kWildcard : tag_from_index(i);
}

Rule make_rule(std::vector<PosTag> tags, Rng& rng) {
  Rule rule;
  rule.decisions = create_decisions(tags.size(), rng);
  rule.tags = std::move(tags);
  return rule;
}

// Chance that repair keeps a step that moves away from the bounds.
constexpr double kUphillStep = 0.05;

// Rule for repair steps that need more deletions: half the time a pattern
// taken from the corpus (so it is known to match), otherwise a random one.

Rule repair_rule(const EvolutionParams& params, const FitnessEvaluator& evaluator, Rng& rng) {
  if (rng.chance(0.5)) {
    if (auto pattern = evaluator.sample_pattern(params.tags_min, params.tags_max, rng)) {
      return make_rule(std::move(*pattern), rng);
    }
  }
  return create_rule(params, rng);
}

void erase_random_rule(Compressor& c, Rng& rng) {
  c.rules.erase(c.rules.begin() + static_cast<std::ptrdiff_t>(rng.below(c.rules.size())));
}

void insert_random(Compressor& c, Rule rule, Rng& rng) {
  const std::size_t pos = rng.below(c.rules.size() + 1);
  c.rules.insert(c.rules.begin() + static_cast<std::ptrdiff_t>(pos), std::move(rule));
}

// Adds one position to a rule's deletion set; false if it is already full.
bool widen_decisions(Rule& rule, Rng& rng) {
  std::vector<std::uint32_t> missing;
  for (std::uint32_t i = 0; i < rule.tags.size(); ++i) {
    if (!std::binary_search(rule.decisions.begin(), rule.decisions.end(), i)) missing.push_back(i);
  }
  if (missing.empty()) return false;
  const std::uint32_t add = missing[rng.below(missing.size())];
  rule.decisions.insert(std::lower_bound(rule.decisions.begin(), rule.decisions.end(), add), add);
  return true;
}

// Drops one position from a rule's deletion set; false if only one is left.
bool narrow_decisions(Rule& rule, Rng& rng) {
  if (rule.decisions.size() < 2) return false;
  rule.decisions.erase(rule.decisions.begin() +
                       static_cast<std::ptrdiff_t>(rng.below(rule.decisions.size())));
  return true;
}

// Extends the pattern by one word tag at either end, so it matches less.
bool specialize(Rule& rule, std::size_t tags_max, Rng& rng) {
  if (rule.tags.size() >= tags_max) return false;
  if (rng.chance(0.5)) {
    rule.tags.push_back(random_word_tag(rng));
  } else {
    rule.tags.insert(rule.tags.begin(), random_word_tag(rng));
    for (auto& d : rule.decisions) ++d;
  }
  return true;
}

// Turns one interior tag into the wildcard, so the pattern matches more.
bool generalize(Rule& rule, Rng& rng) {
  std::vector<std::size_t> interior;
  for (std::size_t i = 1; i + 1 < rule.tags.size(); ++i) {
    if (rule.tags[i] != PosTag::kWildcard) interior.push_back(i);
  }
  if (interior.empty()) return false;
  rule.tags[interior[rng.below(interior.size())]] = PosTag::kWildcard;
  return true;
}

std::string bounds_text(const EvolutionParams& p) {
  return "lcb=" + std::to_string(p.lcb) + " ucb=" + std::to_string(p.ucb) +
         " rules_min=" + std::to_string(p.rules_min) + " rules_max=" +
         std::to_string(p.rules_max);
}

}  // namespace

void EvolutionParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (population_size == 0) fail("population_size must be at least 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation_rate must lie in [0, 1]");
  if (!(lcb > 0.0)) fail("lcb must be greater than 0");
  if (!(lcb < ucb)) fail("lcb must be less than ucb");
  if (!(ucb <= 100.0)) fail("ucb must be at most 100");
  if (rules_min < 1) fail("rules_min must be at least 1");
  if (rules_min > rules_max) fail("rules_min must not exceed rules_max");
  if (tags_min < 1) fail("tags_min must be at least 1");
  if (tags_min > tags_max) fail("tags_min must not exceed tags_max");
  if (tournament_size < 1) fail("tournament_size must be at least 1");
  if (elitism > population_size) fail("elitism must not exceed population_size");
}

RuleLimits EvolutionParams::limits() const {
  return RuleLimits{tags_min, tags_max, rules_min, rules_max};
}

double fitness_total(std::int64_t raw_fitness, double average_change, std::size_t num_rules,
                     const FitnessWeights& weights) {
  return static_cast<double>(raw_fitness) + weights.length_weight * average_change -
         weights.rules_weight * static_cast<double>(num_rules);
}

PrecomputedBaseline precompute_baseline(const Corpus& corpus, const Lexicon& lexicon,
                                        const NegationList& negations) {
  PrecomputedBaseline b;
  for (const auto& instance : corpus.instances) {
    b.original_labels.push_back(classify(score_instance(instance, lexicon, negations)));
    b.gold_labels.push_back(instance.label);
    b.original_lengths.push_back(instance.word_count());
  }
  return b;
}

FitnessEvaluator::FitnessEvaluator(const Corpus& corpus, const Lexicon& lexicon,
                                   const NegationList& negations, FitnessWeights weights)
    : FitnessEvaluator(corpus, lexicon, negations,
                       precompute_baseline(corpus, lexicon, negations), weights) {}

FitnessEvaluator::FitnessEvaluator(const Corpus& corpus, const Lexicon& lexicon,
                                   const NegationList& negations, PrecomputedBaseline baseline,
                                   FitnessWeights weights)
    : weights_(weights), baseline_(std::move(baseline)) {
  if (corpus.instances.empty()) throw std::invalid_argument("fitness corpus is empty");
  if (baseline_.original_labels.size() != corpus.size() ||
      baseline_.gold_labels.size() != corpus.size() ||
      baseline_.original_lengths.size() != corpus.size()) {
    throw std::invalid_argument("baseline does not match the corpus");
  }
  flatten(corpus, lexicon, negations);
}

void FitnessEvaluator::flatten(const Corpus& corpus, const Lexicon& lexicon,
                               const NegationList& negations) {
  sentence_begin_.push_back(0);
  instance_begin_.push_back(0);
  for (const auto& instance : corpus.instances) {
    for (const auto& s : instance.sentences) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        tags_.push_back(s.tags[j]);
        polarities_.push_back(token_polarity(s.words[j], lexicon, negations));
      }
      sentence_begin_.push_back(tags_.size());
    }
    instance_begin_.push_back(sentence_begin_.size() - 1);
  }
}

FitnessReport FitnessEvaluator::evaluate(const Compressor& compressor) const {
  SentenceCompressor sc;
  const std::span<const PosTag> all_tags(tags_);
  const std::span<const TokenPolarity> all_polarities(polarities_);
  std::int64_t raw = 0;
  std::size_t removed = 0;
  const std::size_t n = num_instances();
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    std::size_t kept = 0;
    for (std::size_t k = instance_begin_[i]; k < instance_begin_[i + 1]; ++k) {
      const std::size_t b = sentence_begin_[k];
      const std::size_t len = sentence_begin_[k + 1] - b;
      const auto survivors = sc.survivors(compressor, all_tags.subspan(b, len));
      kept += survivors.size();
      score += score_polarities(all_polarities.subspan(b, len), survivors);
    }
    const Label compressed = classify(score);
    if (compressed != baseline_.original_labels[i]) {
      raw += compressed == baseline_.gold_labels[i] ? 1 : -1;
    }
    removed += baseline_.original_lengths[i] - kept;
  }
  FitnessReport report;
  report.raw_fitness = raw;
  report.average_change = static_cast<double>(removed) / static_cast<double>(n);
  report.num_rules = compressor.rules.size();
  report.total = fitness_total(report.raw_fitness, report.average_change, report.num_rules, weights_);
  report.compression_rate =
      tags_.empty() ? 0.0
                    : 100.0 * static_cast<double>(removed) / static_cast<double>(tags_.size());
  return report;
}

double FitnessEvaluator::compression_rate(const Compressor& compressor) const {
  if (tags_.empty()) return 0.0;
  SentenceCompressor sc;
  const std::span<const PosTag> all_tags(tags_);
  std::size_t kept = 0;
  for (std::size_t k = 0; k + 1 < sentence_begin_.size(); ++k) {
    const std::size_t b = sentence_begin_[k];
    kept += sc.survivors(compressor, all_tags.subspan(b, sentence_begin_[k + 1] - b)).size();
  }
  return 100.0 * static_cast<double>(tags_.size() - kept) / static_cast<double>(tags_.size());
}

std::optional<std::vector<PosTag>> FitnessEvaluator::sample_pattern(std::size_t tags_min,
                                                                    std::size_t tags_max,
                                                                    Rng& rng) const {
  const std::size_t n_sentences = sentence_begin_.size() - 1;
  if (n_sentences == 0) return std::nullopt;
  for (int attempt = 0; attempt < 32; ++attempt) {
    const std::size_t k = rng.below(n_sentences);
    const std::size_t b = sentence_begin_[k];
    const std::size_t e = sentence_begin_[k + 1];
    const std::size_t len = rng.between(tags_min, tags_max);
    if (e - b < len) continue;
    const std::size_t start = b + rng.below(e - b - len + 1);
    const auto first = tags_.begin() + static_cast<std::ptrdiff_t>(start);
    const auto last = first + static_cast<std::ptrdiff_t>(len);
    if (std::any_of(first, last, [](PosTag t) { return is_punctuation(t); })) continue;
    return std::vector<PosTag>(first, last);
  }
  return std::nullopt;
}

FitnessReport fitness(const Compressor& compressor, const FitnessEvaluator& evaluator) {
  return evaluator.evaluate(compressor);
}

std::vector<PosTag> create_pos_tags(std::size_t tags_min, std::size_t tags_max, Rng& rng) {
  const std::size_t n = rng.between(tags_min, tags_max);
  std::vector<PosTag> tags;
  tags.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || i == n - 1) {
      tags.push_back(random_word_tag(rng));
    } else {
      tags.push_back(random_word_tag_or_wildcard(rng));
    }
  }
  return tags;
}

std::vector<std::uint32_t> create_decisions(std::size_t n_tags, Rng& rng) {
  std::vector<std::uint32_t> decisions;
  for (std::size_t i = 0; i < n_tags; ++i) {
    if (rng.uniform() < 0.5) decisions.push_back(static_cast<std::uint32_t>(i));
  }
  if (decisions.empty() && n_tags > 0) {
    decisions.push_back(static_cast<std::uint32_t>(rng.below(n_tags)));
  }
  return decisions;
}

Rule create_rule(const EvolutionParams& params, Rng& rng) {
  return make_rule(create_pos_tags(params.tags_min, params.tags_max, rng), rng);
}

Compressor create_compressor(const EvolutionParams& params, Rng& rng) {
  Compressor c;
  for (std::size_t slot = 0; slot < params.rules_max; ++slot) {
    if (rng.uniform() < 0.5) c.rules.push_back(create_rule(params, rng));
  }
  if (c.rules.empty()) c.rules.push_back(create_rule(params, rng));
  while (c.rules.size() < params.rules_min) c.rules.push_back(create_rule(params, rng));
  return c;
}

double bound_distance(double rate, const EvolutionParams& params) {
  if (rate < params.lcb) return params.lcb - rate;
  if (rate > params.ucb) return rate - params.ucb;
  return 0.0;
}

bool is_feasible(const Individual& individual, const EvolutionParams& params) {
  const std::size_t n = individual.compressor.rules.size();
  return n >= params.rules_min && n <= params.rules_max &&
         bound_distance(individual.report.compression_rate, params) == 0.0;
}

std::optional<Individual> repair(Compressor compressor, const FitnessEvaluator& evaluator,
                                 const EvolutionParams& params, Rng& rng,
                                 std::size_t max_steps) {
  while (compressor.rules.size() > params.rules_max) erase_random_rule(compressor, rng);
  while (compressor.rules.size() < params.rules_min) {
    insert_random(compressor, create_rule(params, rng), rng);
  }
  double rate = evaluator.compression_rate(compressor);
  double distance = bound_distance(rate, params);
  for (std::size_t step = 0; step < max_steps && distance > 0.0; ++step) {
    Compressor candidate = compressor;
    const std::size_t n = candidate.rules.size();
    Rule& target = candidate.rules[rng.below(n)];
    const std::size_t move = rng.below(4);
    bool edited = false;
    if (rate < params.lcb) {
      if (move == 0) edited = widen_decisions(target, rng);
      if (move == 1) edited = generalize(target, rng);
      if (!edited && n < params.rules_max) {
        insert_random(candidate, repair_rule(params, evaluator, rng), rng);
      } else if (!edited) {
        target = repair_rule(params, evaluator, rng);
      }
    } else {
      if (move == 0) edited = narrow_decisions(target, rng);
      if (move == 1) edited = specialize(target, params.tags_max, rng);
      if (move == 2 && n > params.rules_min) {
        erase_random_rule(candidate, rng);
        edited = true;
      }
      if (!edited) target = create_rule(params, rng);
    }
    const double candidate_rate = evaluator.compression_rate(candidate);
    const double candidate_distance = bound_distance(candidate_rate, params);
    // An occasional uphill step gets the search out of local minima where
    // every single edit overshoots the window.
    if (candidate_distance <= distance || rng.chance(kUphillStep)) {
      compressor = std::move(candidate);
      rate = candidate_rate;
      distance = candidate_distance;
    }
  }
  if (distance > 0.0) return std::nullopt;
  Individual out{std::move(compressor), {}};
  out.report = evaluator.evaluate(out.compressor);
  return out;
}

Individual create_individual(const EvolutionParams& params, const FitnessEvaluator& evaluator,
                             Rng& rng) {
  Compressor closest;
  double closest_distance = std::numeric_limits<double>::infinity();
  const std::size_t draws = std::max<std::size_t>(1, params.max_repair_attempts);
  for (std::size_t attempt = 0; attempt < draws; ++attempt) {
    Compressor c = create_compressor(params, rng);
    const double d = bound_distance(evaluator.compression_rate(c), params);
    if (d == 0.0 && c.rules.size() <= params.rules_max) {
      Individual out{std::move(c), {}};
      out.report = evaluator.evaluate(out.compressor);
      return out;
    }
    if (d < closest_distance) {
      closest_distance = d;
      closest = std::move(c);
    }
  }
  if (auto repaired = repair(std::move(closest), evaluator, params, rng, params.init_repair_cap)) {
    return std::move(*repaired);
  }
  throw InitializationFailure("could not create a compressor within the bounds (" +
                              bounds_text(params) + ") after " +
                              std::to_string(params.init_repair_cap) + " repair steps");
}

std::vector<Individual> init_population(const EvolutionParams& params,
                                        const FitnessEvaluator& evaluator) {
  params.validate();
  std::vector<Individual> population(params.population_size);
  parallel_for(params.population_size, params.threads, [&](std::size_t i) {
    Rng rng(params.seed, {kInitStream, i});
    population[i] = create_individual(params, evaluator, rng);
  });
  return population;
}

std::pair<Compressor, Compressor> crossover_rules(const Compressor& a, const Compressor& b,
                                                  std::size_t cut_a, std::size_t cut_b) {
  cut_a = std::min(cut_a, a.rules.size());
  cut_b = std::min(cut_b, b.rules.size());
  Compressor first;
  Compressor second;
  first.rules.assign(a.rules.begin(), a.rules.begin() + static_cast<std::ptrdiff_t>(cut_a));
  first.rules.insert(first.rules.end(), b.rules.begin() + static_cast<std::ptrdiff_t>(cut_b),
                     b.rules.end());
  second.rules.assign(b.rules.begin(), b.rules.begin() + static_cast<std::ptrdiff_t>(cut_b));
  second.rules.insert(second.rules.end(), a.rules.begin() + static_cast<std::ptrdiff_t>(cut_a),
                      a.rules.end());
  return {std::move(first), std::move(second)};
}

std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, Rng& rng,
                                            const EvolutionParams& params,
                                            const FitnessEvaluator& evaluator) {
  const std::size_t cut_a = rng.below(a.compressor.rules.size() + 1);
  const std::size_t cut_b = rng.below(b.compressor.rules.size() + 1);
  auto [first, second] = crossover_rules(a.compressor, b.compressor, cut_a, cut_b);
  auto child_a = repair(std::move(first), evaluator, params, rng, params.max_repair_attempts);
  auto child_b = repair(std::move(second), evaluator, params, rng, params.max_repair_attempts);
  return {child_a ? std::move(*child_a) : a, child_b ? std::move(*child_b) : b};
}

Compressor mutate_rules(const Compressor& compressor, MutationKind kind, Rng& rng,
                        const EvolutionParams& params) {
  Compressor c = compressor;
  switch (kind) {
    case MutationKind::kAddRule:
      insert_random(c, create_rule(params, rng), rng);
      break;
    case MutationKind::kRemoveRule:
      if (!c.rules.empty()) erase_random_rule(c, rng);
      break;
    case MutationKind::kReplaceTag: {
      if (c.rules.empty()) break;
      Rule& rule = c.rules[rng.below(c.rules.size())];
      const std::size_t n = rule.tags.size();
      const std::size_t pos = rng.below(n);
      rule.tags[pos] = (pos == 0 || pos == n - 1) ? random_word_tag(rng)
                                                  : random_word_tag_or_wildcard(rng);
      break;
    }
    case MutationKind::kRegenerateDecisions: {
      if (c.rules.empty()) break;
      Rule& rule = c.rules[rng.below(c.rules.size())];
      rule.decisions = create_decisions(rule.tags.size(), rng);
      break;
    }
  }
  return c;
}

Individual mutate(const Individual& individual, Rng& rng, const EvolutionParams& params,
                  const FitnessEvaluator& evaluator) {
  const auto kind = static_cast<MutationKind>(rng.below(4));
  Compressor edited = mutate_rules(individual.compressor, kind, rng, params);
  if (auto repaired = repair(std::move(edited), evaluator, params, rng, params.max_repair_attempts)) {
    return std::move(*repaired);
  }
  return individual;
}

std::size_t select(std::span<const double> totals, Rng& rng, std::size_t tournament_size) {
  if (totals.empty()) throw std::invalid_argument("cannot select from an empty population");
  const std::size_t k = std::clamp<std::size_t>(tournament_size, 1, totals.size());
  // Partial Fisher-Yates over a lazily materialized permutation.
  std::vector<std::size_t> pool(totals.size());
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> best;
  double best_total = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    const std::size_t idx = pool[i];
    if (best.empty() || totals[idx] > best_total) {
      best.assign(1, idx);
      best_total = totals[idx];
    } else if (totals[idx] == best_total) {
      best.push_back(idx);
    }
  }
  return best.size() == 1 ? best.front() : best[rng.below(best.size())];
}

GenerationStats summarize(std::size_t generation, std::span<const Individual> population) {
  GenerationStats s;
  s.generation = generation;
  if (population.empty()) return s;
  const Individual* best = &population.front();
  s.min_compression_rate = std::numeric_limits<double>::infinity();
  s.max_compression_rate = -std::numeric_limits<double>::infinity();
  s.min_rules = std::numeric_limits<std::size_t>::max();
  for (const auto& ind : population) {
    const auto& r = ind.report;
    if (r.total > best->report.total) best = &ind;
    s.mean_raw_fitness += static_cast<double>(r.raw_fitness);
    s.mean_average_change += r.average_change;
    s.mean_num_rules += static_cast<double>(r.num_rules);
    s.mean_total += r.total;
    s.mean_compression_rate += r.compression_rate;
    s.min_compression_rate = std::min(s.min_compression_rate, r.compression_rate);
    s.max_compression_rate = std::max(s.max_compression_rate, r.compression_rate);
    s.min_rules = std::min(s.min_rules, ind.compressor.rules.size());
    s.max_rules = std::max(s.max_rules, ind.compressor.rules.size());
  }
  const double n = static_cast<double>(population.size());
  s.best = best->report;
  s.mean_raw_fitness /= n;
  s.mean_average_change /= n;
  s.mean_num_rules /= n;
  s.mean_total /= n;
  s.mean_compression_rate /= n;
  return s;
}

EvolutionResult evolve(const EvolutionParams& params, const FitnessEvaluator& evaluator,
                       const GenerationObserver& observer) {
  params.validate();
  std::vector<Individual> population = init_population(params, evaluator);

  EvolutionResult result;
  bool have_best = false;
  auto record = [&](std::size_t generation) {
    result.history.push_back(summarize(generation, population));
    for (const auto& ind : population) {
      if (!have_best || ind.report.total > result.best.report.total) {
        result.best = ind;
        have_best = true;
      }
    }
    if (observer) observer(generation, population);
  };
  record(0);

  const std::size_t n = params.population_size;
  std::vector<double> totals(n);
  for (std::size_t generation = 1; generation <= params.generations; ++generation) {
    for (std::size_t i = 0; i < n; ++i) totals[i] = population[i].report.total;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return totals[a] > totals[b]; });

    std::vector<Individual> next;
    next.reserve(n);
    for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(population[order[e]]);

    const std::size_t remaining = n - next.size();
    const std::size_t pairs = (remaining + 1) / 2;
    std::vector<std::pair<Individual, Individual>> offspring(pairs);
    parallel_for(pairs, params.threads, [&](std::size_t k) {
      Rng rng(params.seed, {kOffspringStream, generation, k});
      const Individual& a = population[select(totals, rng, params.tournament_size)];
      const Individual& b = population[select(totals, rng, params.tournament_size)];
      std::pair<Individual, Individual> children =
          rng.chance(params.crossover_rate) ? crossover(a, b, rng, params, evaluator)
                                            : std::make_pair(a, b);
      if (rng.chance(params.mutation_rate)) {
        children.first = mutate(children.first, rng, params, evaluator);
      }
      if (rng.chance(params.mutation_rate)) {
        children.second = mutate(children.second, rng, params, evaluator);
      }
      offspring[k] = std::move(children);
    });
    for (auto& [first, second] : offspring) {
      if (next.size() < n) next.push_back(std::move(first));
      if (next.size() < n) next.push_back(std::move(second));
    }
    population = std::move(next);
    record(generation);
  }
  return result;
}

}  // namespace parsec
