// Evolutionary search for compressors.
//
// Every individual in every generation is kept feasible: its compression
// rate on the training corpus lies in [lcb, ucb] and its rule count in
// [rules_min, rules_max]. Offspring that cannot be repaired into the feasible
// region fall back to their parents.

#ifndef PARSEC_EVOLUTION_H_
#define PARSEC_EVOLUTION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parsec/compressor.h"
#include "parsec/corpus.h"
#include "parsec/random.h"
#include "parsec/sentiment.h"

namespace parsec {

struct FitnessWeights {
  double length_weight = 0.5;
  double rules_weight = 0.1;
};

struct EvolutionParams {
  std::size_t population_size = 250;
  std::size_t generations = 100;
  double crossover_rate = 0.60;
  double mutation_rate = 0.40;
  double lcb = 10.0;
  double ucb = 13.0;
  std::size_t rules_min = 5;
  std::size_t rules_max = 50;
  std::size_t tags_min = 2;
  std::size_t tags_max = 5;
  std::size_t tournament_size = 4;
  std::size_t elitism = 1;
  FitnessWeights fitness_weights;
  // Repair steps allowed for offspring, and rejection-sampling draws per
  // initial individual before falling back to repair.
  std::size_t max_repair_attempts = 50;
  // Repair steps allowed for an initial individual before the bounds are
  // declared infeasible.
  std::size_t init_repair_cap = 5000;
  std::uint64_t seed = 1;
  // Worker threads for offspring creation and evaluation; 0 = hardware
  // concurrency. Results do not depend on this value.
  std::size_t threads = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  RuleLimits limits() const;
};

struct FitnessReport {
  std::int64_t raw_fitness = 0;
  // Words removed per instance.
  double average_change = 0.0;
  std::size_t num_rules = 0;
  double total = 0.0;
  double compression_rate = 0.0;

  friend bool operator==(const FitnessReport&, const FitnessReport&) = default;
};

// raw + length_weight * average_change - rules_weight * num_rules
double fitness_total(std::int64_t raw_fitness, double average_change,
                     std::size_t num_rules, const FitnessWeights& weights);

struct PrecomputedBaseline {
  std::vector<Label> original_labels;
  std::vector<Label> gold_labels;
  std::vector<std::size_t> original_lengths;
};

PrecomputedBaseline precompute_baseline(const Corpus& corpus, const Lexicon& lexicon,
                                        const NegationList& negations);

// Scores compressors against one corpus. Holds a flattened copy of the
// corpus tags and token polarities; evaluate() is const and safe to call
// from several threads.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const Corpus& corpus, const Lexicon& lexicon,
                   const NegationList& negations, FitnessWeights weights = {});
  FitnessEvaluator(const Corpus& corpus, const Lexicon& lexicon,
                   const NegationList& negations, PrecomputedBaseline baseline,
                   FitnessWeights weights);

  FitnessReport evaluate(const Compressor& compressor) const;
  double compression_rate(const Compressor& compressor) const;

  // A pattern copied from a random punctuation-free window of the corpus,
  // with length in [tags_min, tags_max]; nullopt if none was found.
  std::optional<std::vector<PosTag>> sample_pattern(std::size_t tags_min,
                                                    std::size_t tags_max, Rng& rng) const;

  const PrecomputedBaseline& baseline() const { return baseline_; }
  const FitnessWeights& weights() const { return weights_; }
  std::size_t num_instances() const { return instance_begin_.size() - 1; }
  std::size_t num_words() const { return tags_.size(); }

 private:
  void flatten(const Corpus& corpus, const Lexicon& lexicon, const NegationList& negations);

  FitnessWeights weights_;
  PrecomputedBaseline baseline_;
  std::vector<PosTag> tags_;
  std::vector<TokenPolarity> polarities_;
  // Sentence k spans [sentence_begin_[k], sentence_begin_[k + 1]).
  std::vector<std::size_t> sentence_begin_;
  // Instance i owns sentences [instance_begin_[i], instance_begin_[i + 1]).
  std::vector<std::size_t> instance_begin_;
};

FitnessReport fitness(const Compressor& compressor, const FitnessEvaluator& evaluator);

struct Individual {
  Compressor compressor;
  FitnessReport report;
};

class InitializationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pattern of uniform length in [tags_min, tags_max]; the first and last tags
// are word tags, interior tags are word tags or the wildcard.
std::vector<PosTag> create_pos_tags(std::size_t tags_min, std::size_t tags_max, Rng& rng);

// Each index kept with probability 0.5; an empty result gets one uniform
// index so that no rule is a no-op.
std::vector<std::uint32_t> create_decisions(std::size_t n_tags, Rng& rng);

Rule create_rule(const EvolutionParams& params, Rng& rng);

// rules_max coin flips at 0.5, at least one rule, then padded to rules_min.
Compressor create_compressor(const EvolutionParams& params, Rng& rng);

// |rate - window|, zero inside [lcb, ucb].
double bound_distance(double rate, const EvolutionParams& params);

bool is_feasible(const Individual& individual, const EvolutionParams& params);

// Hill-climbs `compressor` into the feasible region: rule counts are clamped
// first, then each step adds (rate too low) or removes (rate too high) a
// rule, or makes a smaller edit to one rule: widening or narrowing its
// deletion set, or adding a context tag or a wildcard to its pattern. A step
// is kept unless it moves the rate further from the window, except that one
// step in twenty is kept regardless. Returns nullopt if still infeasible
// after `max_steps` steps.
std::optional<Individual> repair(Compressor compressor, const FitnessEvaluator& evaluator,
                                 const EvolutionParams& params, Rng& rng,
                                 std::size_t max_steps);

// Rejection sampling, then repair. Throws InitializationFailure.
Individual create_individual(const EvolutionParams& params, const FitnessEvaluator& evaluator,
                             Rng& rng);

std::vector<Individual> init_population(const EvolutionParams& params,
                                        const FitnessEvaluator& evaluator);

// Single-point crossover: a[0, cut_a) + b[cut_b, end) and b[0, cut_b) + a[cut_a, end).
std::pair<Compressor, Compressor> crossover_rules(const Compressor& a, const Compressor& b,
                                                  std::size_t cut_a, std::size_t cut_b);

// Uniform cut points, then repair; a child that cannot be repaired is
// replaced by the corresponding parent.
std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, Rng& rng,
                                            const EvolutionParams& params,
                                            const FitnessEvaluator& evaluator);

enum class MutationKind { kAddRule, kRemoveRule, kReplaceTag, kRegenerateDecisions };

// The raw edit, without repair.
Compressor mutate_rules(const Compressor& compressor, MutationKind kind, Rng& rng,
                        const EvolutionParams& params);

// Uniformly chosen edit, then repair; returns `individual` unchanged when the
// result cannot be repaired.
Individual mutate(const Individual& individual, Rng& rng, const EvolutionParams& params,
                  const FitnessEvaluator& evaluator);

// Tournament selection without replacement; the tournament is clamped to
// the population size and ties are broken uniformly at random. Returns an
// index into `totals`.
std::size_t select(std::span<const double> totals, Rng& rng, std::size_t tournament_size);

struct GenerationStats {
  std::size_t generation = 0;
  FitnessReport best;
  double mean_raw_fitness = 0.0;
  double mean_average_change = 0.0;
  double mean_num_rules = 0.0;
  double mean_total = 0.0;
  double mean_compression_rate = 0.0;
  double min_compression_rate = 0.0;
  double max_compression_rate = 0.0;
  std::size_t min_rules = 0;
  std::size_t max_rules = 0;

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

GenerationStats summarize(std::size_t generation, std::span<const Individual> population);

struct EvolutionResult {
  Individual best;
  // Entry 0 is the initial population.
  std::vector<GenerationStats> history;
};

using GenerationObserver =
    std::function<void(std::size_t generation, std::span<const Individual> population)>;

EvolutionResult evolve(const EvolutionParams& params, const FitnessEvaluator& evaluator,
                       const GenerationObserver& observer = {});

}  // namespace parsec

#endif  // PARSEC_EVOLUTION_H_
