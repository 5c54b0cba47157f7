#pragma once

// Genetic search over discretization cut points. A chromosome is the flat
// vector of interior cuts of every numeric condition attribute; it is decoded
// through repair() and scored by the rough set accuracy of the resulting
// information system.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "roughga/discretizer.hpp"
#include "roughga/error.hpp"
#include "roughga/rough.hpp"
#include "roughga/text.hpp"

namespace roughga {

enum class FitnessMetric {
  alpha,    ///< |lower| / |upper| of the positive decision class
  pattern,  ///< pure patterns / distinct patterns
};

enum class CrossoverKind { cyclic, blend };

inline std::string_view to_string(FitnessMetric m) { return m == FitnessMetric::alpha ? "alpha" : "pattern"; }
inline std::string_view to_string(CrossoverKind c) { return c == CrossoverKind::cyclic ? "cyclic" : "blend"; }

struct GAConfig {
  std::size_t population = 20;
  std::size_t generations = 100;
  double selection_q = 0.08;
  double mutation_rate = 0.05;
  double crossover_rate = 0.8;
  bool elitism = false;
  FitnessMetric metric = FitnessMetric::alpha;
  CrossoverKind crossover = CrossoverKind::cyclic;
  std::size_t bins = kDefaultBins;
  /// Worker threads for fitness evaluation; results do not depend on it.
  std::size_t threads = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (population < 2) throw ParameterError("population must be at least 2");
    if (generations < 1) throw ParameterError("generations must be at least 1");
    if (!(selection_q > 0.0 && selection_q < 1.0)) throw ParameterError("selection q must lie in (0, 1)");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ParameterError("mutation rate must lie in [0, 1]");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ParameterError("crossover rate must lie in [0, 1]");
    if (bins < 2) throw ParameterError("bins must be at least 2");
    if (threads < 1) throw ParameterError("threads must be at least 1");
  }
};

/// Applies one `key = value` setting; unknown keys are a ConfigError.
inline void apply_setting(GAConfig& c, const std::string& key, const std::string& value) {
  auto as_size = [&] {
    const auto v = text::parse_int(value);
    if (!v || *v < 0) throw ConfigError("bad value for " + key + ": '" + value + "'");
    return static_cast<std::size_t>(*v);
  };
  auto as_real = [&] {
    const auto v = text::parse_double(value);
    if (!v) throw ConfigError("bad value for " + key + ": '" + value + "'");
    return *v;
  };
  if (key == "population") {
    c.population = as_size();
  } else if (key == "generations") {
    c.generations = as_size();
  } else if (key == "selection_q") {
    c.selection_q = as_real();
  } else if (key == "mutation_rate") {
    c.mutation_rate = as_real();
  } else if (key == "crossover_rate") {
    c.crossover_rate = as_real();
  } else if (key == "elitism") {
    if (value != "true" && value != "false") throw ConfigError("elitism must be true or false");
    c.elitism = value == "true";
  } else if (key == "metric") {
    if (value == "alpha") c.metric = FitnessMetric::alpha;
    else if (value == "pattern") c.metric = FitnessMetric::pattern;
    else throw ConfigError("metric must be alpha or pattern");
  } else if (key == "crossover") {
    if (value == "cyclic") c.crossover = CrossoverKind::cyclic;
    else if (value == "blend") c.crossover = CrossoverKind::blend;
    else throw ConfigError("crossover must be cyclic or blend");
  } else if (key == "bins") {
    c.bins = as_size();
  } else if (key == "threads") {
    c.threads = as_size();
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(as_size());
  } else {
    throw ConfigError("unknown GA setting '" + key + "'");
  }
}

struct Chromosome {
  std::vector<double> genes;
  std::optional<double> fitness;
};

struct GenerationStats {
  std::size_t generation = 0;  ///< 1-based
  double best = 0.0;
  double mean = 0.0;
  double best_so_far = 0.0;
};

struct EvolutionHistory {
  std::vector<GenerationStats> generations;
  Chromosome best;
  CutPointSet best_cuts;
};

using Rng = std::mt19937_64;

/// Scores cut-point chromosomes against one table. Pure: equal genes give
/// equal fitness.
class FitnessFunction {
 public:
  FitnessFunction(const InformationTable& table, FitnessMetric metric, std::size_t bins)
      : table_(&table), metric_(metric), bins_(bins) {}

  double operator()(const std::vector<double>& genes) const {
    return score(InformationSystem(apply(*table_, repair(genes, table_->schema(), bins_))));
  }

  double score(const InformationSystem& system) const {
    if (system.empty()) return 0.0;
    const auto counts = decision_counts(system);
    if (metric_ == FitnessMetric::pattern) return pattern_consistency(counts).ratio();
    // No positive records: the accuracy is undefined and scores zero.
    return decision_accuracy(counts, 1).value_or(0.0);
  }

 private:
  const InformationTable* table_;
  FitnessMetric metric_;
  std::size_t bins_;
};

inline double fitness(const Chromosome& c, const InformationTable& table, const GAConfig& config) {
  return FitnessFunction(table, config.metric, config.bins)(c.genes);
}

/// Bounds of the attribute that gene `g` belongs to.
inline const AttributeSchema& gene_attribute(const Schema& schema, std::size_t bins, std::size_t g) {
  return schema[schema.numeric_indices().at(g / (bins - 1))];
}

/// Uniform draw from the open interval (lo, hi).
inline double draw_open(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  double v = u(rng);
  while (!(v > lo && v < hi)) v = u(rng);
  return v;
}

/// Individual 0 carries the equal-width cuts; the rest are uniform within
/// each attribute's open domain.
inline std::vector<Chromosome> init_population(const Schema& schema, const GAConfig& config, Rng& rng) {
  config.validate();
  const auto n = gene_count(schema, config.bins);
  std::vector<Chromosome> pop(config.population);
  pop[0].genes = equal_width(schema, config.bins).flatten();
  for (std::size_t i = 1; i < pop.size(); ++i) {
    pop[i].genes.resize(n);
    for (std::size_t g = 0; g < n; ++g) {
      const auto& a = gene_attribute(schema, config.bins, g);
      pop[i].genes[g] = draw_open(rng, a.lower, a.upper);
    }
  }
  return pop;
}

inline std::vector<Chromosome> init_population(const Schema& schema, const GAConfig& config) {
  Rng rng(config.seed);
  return init_population(schema, config, rng);
}

/// Normalized geometric weights q'(1-q)^(r-1), r = 1..P, with
/// q' = q / (1 - (1-q)^P).
inline std::vector<double> geometric_weights(std::size_t population, double q) {
  const double norm = q / (1.0 - std::pow(1.0 - q, static_cast<double>(population)));
  std::vector<double> w(population);
  for (std::size_t r = 0; r < population; ++r) w[r] = norm * std::pow(1.0 - q, static_cast<double>(r));
  return w;
}

/// Population indices ordered best first; ties keep the lower index first.
inline std::vector<std::size_t> rank_order(const std::vector<Chromosome>& pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& c : pop)
    if (!c.fitness) throw StateError("selection needs every fitness evaluated");
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *pop[a].fitness > *pop[b].fitness; });
  return order;
}

/// Draws one population index by normalized geometric ranking.
inline std::size_t draw_ranked(const std::vector<std::size_t>& order, const std::vector<double>& weights, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  for (std::size_t r = 0; r < order.size(); ++r) {
    x -= weights[r];
    if (x < 0.0) return order[r];
  }
  return order.back();
}

/// Samples parents with replacement and pairs them consecutively. Returns
/// ceil(P/2) pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> select(const std::vector<Chromosome>& pop,
                                                               const GAConfig& config, Rng& rng) {
  const auto order = rank_order(pop);
  const auto weights = geometric_weights(pop.size(), config.selection_q);
  std::vector<std::pair<std::size_t, std::size_t>> pairs((config.population + 1) / 2);
  for (auto& p : pairs) {
    p.first = draw_ranked(order, weights, rng);
    p.second = draw_ranked(order, weights, rng);
  }
  return pairs;
}

/// Positions of the cycle starting at `start`: follow b's value at the
/// current position to where a holds it. Stops when the cycle closes, when
/// a value has no match in a, or after genes.size() steps.
inline std::vector<std::size_t> crossover_cycle(const std::vector<double>& a, const std::vector<double>& b,
                                                std::size_t start) {
  std::vector<std::size_t> cycle;
  std::vector<char> visited(a.size(), 0);
  std::size_t pos = start;
  for (std::size_t step = 0; step < a.size(); ++step) {
    cycle.push_back(pos);
    visited[pos] = 1;
    const auto it = std::find(a.begin(), a.end(), b[pos]);
    if (it == a.end()) break;
    pos = static_cast<std::size_t>(it - a.begin());
    if (pos == start || visited[pos]) break;
  }
  return cycle;
}

inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, const GAConfig& config,
                                                   Rng& rng) {
  if (a.genes.size() != b.genes.size()) throw ParameterError("parents differ in gene count");
  std::pair<Chromosome, Chromosome> out{a, b};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (a.genes.empty() || !(u(rng) < config.crossover_rate)) return out;

  auto& [ca, cb] = out;
  if (config.crossover == CrossoverKind::cyclic) {
    std::uniform_int_distribution<std::size_t> pick(0, a.genes.size() - 1);
    const auto cycle = crossover_cycle(a.genes, b.genes, pick(rng));
    std::vector<char> in_cycle(a.genes.size(), 0);
    for (auto p : cycle) in_cycle[p] = 1;
    for (std::size_t i = 0; i < a.genes.size(); ++i) {
      ca.genes[i] = in_cycle[i] ? a.genes[i] : b.genes[i];
      cb.genes[i] = in_cycle[i] ? b.genes[i] : a.genes[i];
    }
  } else {
    const double w = u(rng);
    for (std::size_t i = 0; i < a.genes.size(); ++i) {
      ca.genes[i] = w * a.genes[i] + (1.0 - w) * b.genes[i];
      cb.genes[i] = (1.0 - w) * a.genes[i] + w * b.genes[i];
    }
  }
  if (ca.genes != a.genes) ca.fitness.reset();
  if (cb.genes != b.genes) cb.fitness.reset();
  return out;
}

/// Replaces each gene, with probability mutation_rate, by a uniform draw
/// within its attribute's open domain.
inline Chromosome mutate(Chromosome c, const Schema& schema, const GAConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool changed = false;
  for (std::size_t g = 0; g < c.genes.size(); ++g) {
    if (!(u(rng) < config.mutation_rate)) continue;
    const auto& a = gene_attribute(schema, config.bins, g);
    const double v = draw_open(rng, a.lower, a.upper);
    changed |= v != c.genes[g];
    c.genes[g] = v;
  }
  if (changed) c.fitness.reset();
  return c;
}

/// Fills in every missing fitness, spreading the work over config.threads.
inline void evaluate_population(std::vector<Chromosome>& pop, const FitnessFunction& f, std::size_t threads) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!pop[i].fitness) todo.push_back(i);
  threads = std::min(threads, todo.size());
  if (threads <= 1) {
    for (auto i : todo) pop[i].fitness = f(pop[i].genes);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t k = t; k < todo.size(); k += threads) pop[todo[k]].fitness = f(pop[todo[k]].genes);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Generational GA: evaluate, select, recombine, mutate, replace. The first
/// evaluated population is generation 1. Returns the best chromosome seen.
inline EvolutionHistory evolve(const InformationTable& table, const Schema& schema, const GAConfig& config) {
  config.validate();
  if (!(table.schema() == schema)) throw ParameterError("table schema differs from the given schema");
  Rng rng(config.seed);
  const FitnessFunction f(table, config.metric, config.bins);
  auto pop = init_population(schema, config, rng);

  EvolutionHistory history;
  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    evaluate_population(pop, f, config.threads);
    std::size_t best = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      sum += *pop[i].fitness;
      if (*pop[i].fitness > *pop[best].fitness) best = i;
    }
    if (!history.best.fitness || *pop[best].fitness > *history.best.fitness) history.best = pop[best];
    history.generations.push_back(
        {gen, *pop[best].fitness, sum / static_cast<double>(pop.size()), *history.best.fitness});
    if (gen == config.generations) break;

    const auto parents = select(pop, config, rng);
    std::vector<Chromosome> next;
    next.reserve(parents.size() * 2);
    for (const auto& [i, j] : parents) {
      auto [a, b] = crossover(pop[i], pop[j], config, rng);
      next.push_back(mutate(std::move(a), schema, config, rng));
      next.push_back(mutate(std::move(b), schema, config, rng));
    }
    next.resize(config.population);
    if (config.elitism) next[0] = pop[best];
    pop = std::move(next);
  }
  history.best_cuts = repair(history.best.genes, schema, config.bins);
  return history;
}

inline void write_history(std::ostream& out, const EvolutionHistory& h) {
  out << "generation,best,mean,best_so_far\n";
  for (const auto& g : h.generations)
    out << g.generation << ',' << text::format_double(g.best) << ',' << text::format_double(g.mean) << ','
        << text::format_double(g.best_so_far) << '\n';
}

}  // namespace roughga
