#pragma once

// End-to-end runs: equal-width baseline against GA-optimized cuts on a
// stratified train/test split.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "roughga/discretizer.hpp"
#include "roughga/error.hpp"
#include "roughga/evolver.hpp"
#include "roughga/rough.hpp"
#include "roughga/rules.hpp"
#include "roughga/table.hpp"
#include "roughga/text.hpp"

namespace roughga {

struct Split {
  InformationTable train;
  InformationTable test;
};

/// Per decision class, shuffles the records and sends round(fraction * n) of
/// them to the training side. Both sides keep file order.
inline Split stratified_split(const InformationTable& table, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ParameterError("split fraction must lie in (0, 1)");
  const auto dcol = table.schema().decision_index();
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& d = table[i].values[dcol];
    if (!d || (*d != 0.0 && *d != 1.0)) throw RangeError("record " + std::to_string(table[i].id) + " has no binary decision");
    by_class[static_cast<int>(*d)].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train, test;
  for (auto& positions : by_class) {
    std::shuffle(positions.begin(), positions.end(), rng);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(positions.size())));
    train.insert(train.end(), positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), positions.begin() + static_cast<std::ptrdiff_t>(n_train), positions.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {table.subset(train), table.subset(test)};
}

/// Number of distinct condition patterns possible under `bins` per numeric attribute.
inline std::size_t pattern_space(const Schema& schema, std::size_t bins) {
  std::size_t n = 1;
  for (auto c : schema.condition_indices()) n *= schema[c].is_numeric() ? bins : schema[c].codes.size();
  return n;
}

/// Everything measured for one set of cuts.
struct MethodResult {
  std::string name;
  CutPointSet cuts;
  double fitness = 0.0;                  ///< the configured GA metric on the training set
  std::optional<double> alpha_positive;  ///< object-level accuracy of the positive class
  PatternCounts patterns;
  std::size_t pattern_space = 0;
  RuleSet rules;
  std::optional<Evaluation> test;
};

inline MethodResult measure(std::string name, const CutPointSet& cuts, const InformationTable& train,
                            const InformationTable* test, const GAConfig& config) {
  MethodResult m;
  m.name = std::move(name);
  m.cuts = cuts;
  const InformationSystem system(apply(train, cuts));
  if (system.empty()) throw ParameterError("training set is empty");
  const auto counts = decision_counts(system, partition(system));
  m.alpha_positive = decision_accuracy(counts, 1);
  m.patterns = pattern_consistency(counts);
  m.fitness = FitnessFunction(train, config.metric, config.bins).score(system);
  m.pattern_space = pattern_space(train.schema(), cuts.bins());
  m.rules = extract(system);
  if (test && !test->empty()) m.test = evaluate(m.rules, apply(*test, cuts));
  return m;
}

struct CompareResult {
  std::size_t train_records = 0;
  std::size_t test_records = 0;
  MethodResult baseline;
  MethodResult optimized;
  EvolutionHistory history;
};

/// Equal-width and GA-optimized cuts measured on the same split. Throws
/// InvariantError if the GA ends below the baseline fitness.
inline CompareResult compare(const InformationTable& table, const GAConfig& config, double train_fraction) {
  config.validate();
  auto split = stratified_split(table, train_fraction, config.seed);
  CompareResult r;
  r.train_records = split.train.size();
  r.test_records = split.test.size();
  r.history = evolve(split.train, table.schema(), config);
  r.baseline = measure("equal-width", equal_width(table.schema(), config.bins), split.train, &split.test, config);
  r.optimized = measure("ga", r.history.best_cuts, split.train, &split.test, config);
  if (r.optimized.fitness < r.baseline.fitness)
    throw InvariantError("GA fitness " + text::format_double(r.optimized.fitness) + " below equal-width fitness " +
                         text::format_double(r.baseline.fitness));
  return r;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? text::format_double(*v) : std::string("NA");
}

inline void write_compare_report(std::ostream& out, const CompareResult& r, FitnessMetric metric) {
  out << "method,metric,fitness,alpha,pattern_pure,pattern_mixed,pattern_total,pattern_ratio,pattern_space,"
         "certain_rules,possible_rules,train_records,test_records,test_accuracy,test_coverage,test_abstention\n";
  for (const auto* m : {&r.baseline, &r.optimized}) {
    out << m->name << ',' << to_string(metric) << ',' << text::format_double(m->fitness) << ','
        << format_optional(m->alpha_positive) << ',' << m->patterns.pure << ',' << m->patterns.mixed() << ','
        << m->patterns.total << ',' << text::format_double(m->patterns.ratio()) << ',' << m->pattern_space << ','
        << m->rules.count(RuleKind::certain) << ',' << m->rules.count(RuleKind::possible) << ','
        << r.train_records << ',' << r.test_records << ',';
    if (m->test) {
      out << format_optional(m->test->accuracy) << ',' << text::format_double(m->test->coverage) << ','
          << text::format_double(m->test->abstention_rate);
    } else {
      out << "NA,NA,NA";
    }
    out << '\n';
  }
}

/// Short human-readable account of a compare run.
inline void write_compare_summary(std::ostream& out, const CompareResult& r) {
  for (const auto* m : {&r.baseline, &r.optimized}) {
    out << m->name << ": " << m->patterns.total << " patterns (" << m->patterns.pure << " discernible, "
        << m->patterns.mixed() << " indiscernible) of " << m->pattern_space << " possible; pattern ratio "
        << text::format_fixed(100.0 * m->patterns.ratio(), 1) << "%, alpha "
        << (m->alpha_positive ? text::format_fixed(100.0 * *m->alpha_positive, 1) + "%" : std::string("NA"));
    if (m->test && m->test->accuracy)
      out << ", held-out accuracy " << text::format_fixed(100.0 * *m->test->accuracy, 1) << "% at coverage "
          << text::format_fixed(100.0 * m->test->coverage, 1) << "%";
    out << '\n';
  }
}

}  // namespace roughga
