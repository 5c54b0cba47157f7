#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roughga/error.hpp"
#include "roughga/table.hpp"
#include "roughga/text.hpp"

namespace roughga {

enum class Comparison { greater, less };

struct PlantedCondition {
  std::string attribute;
  Comparison op = Comparison::greater;
  double threshold = 0.0;

  bool holds(double v) const noexcept { return op == Comparison::greater ? v > threshold : v < threshold; }
};

/// Decision = 1 iff every condition holds, before noise.
struct PlantedRule {
  std::vector<PlantedCondition> conditions;
};

struct SynthSpec {
  std::size_t record_count = 0;
  Schema schema;
  std::optional<PlantedRule> rule;
  /// Probability of flipping each planted decision. Without a rule the
  /// decision is a fair coin and the noise rate is unused.
  double noise = 0.0;
};

inline void validate(const SynthSpec& spec) {
  if (!(spec.noise >= 0.0 && spec.noise < 0.5)) throw ParameterError("noise rate must lie in [0, 0.5)");
  if (!spec.rule) return;
  if (spec.rule->conditions.empty() || spec.rule->conditions.size() > 2)
    throw ParameterError("planted rule needs one or two conditions");
  for (const auto& c : spec.rule->conditions) {
    const auto& a = spec.schema[spec.schema.index_of(c.attribute)];
    if (!a.is_condition() || !a.is_numeric())
      throw ParameterError("planted attribute '" + c.attribute + "' must be a numeric condition attribute");
    if (!(c.threshold > a.lower && c.threshold < a.upper))
      throw ParameterError("planted threshold for '" + c.attribute + "' must lie strictly inside its bounds");
  }
}

/// Evaluates the planted rule on a record (no noise).
inline int planted_decision(const PlantedRule& rule, const Schema& schema, const Record& r) {
  for (const auto& c : rule.conditions)
    if (!c.holds(*r.values[schema.index_of(c.attribute)])) return 0;
  return 1;
}

/// Draws every condition attribute uniformly within its domain and sets the
/// decision from the planted rule, flipped independently with the noise rate.
/// Deterministic for a fixed seed.
inline InformationTable synthesize(const SynthSpec& spec, std::uint64_t seed) {
  validate(spec);
  const auto& schema = spec.schema;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(spec.noise);
  std::bernoulli_distribution coin(0.5);

  std::vector<Record> records;
  records.reserve(spec.record_count);
  for (std::size_t n = 0; n < spec.record_count; ++n) {
    Record r;
    r.id = n;
    r.values.assign(schema.size(), std::nullopt);
    for (auto i : schema.condition_indices()) {
      const auto& a = schema[i];
      switch (a.kind) {
        case AttributeKind::categorical: {
          std::uniform_int_distribution<std::size_t> pick(0, a.codes.size() - 1);
          r.values[i] = a.codes[pick(rng)].code;
          break;
        }
        case AttributeKind::numeric_integer: {
          std::uniform_int_distribution<long long> pick(static_cast<long long>(std::ceil(a.lower)),
                                                        static_cast<long long>(std::floor(a.upper)));
          r.values[i] = static_cast<double>(pick(rng));
          break;
        }
        case AttributeKind::numeric_real: {
          std::uniform_real_distribution<double> pick(a.lower, a.upper);
          r.values[i] = pick(rng);
          break;
        }
      }
    }
    int decision = 0;
    if (spec.rule) {
      decision = planted_decision(*spec.rule, schema, r);
      if (flip(rng)) decision = 1 - decision;
    } else {
      decision = coin(rng) ? 1 : 0;
    }
    r.values[schema.decision_index()] = decision;
    records.push_back(std::move(r));
  }
  return InformationTable(schema, std::move(records));
}

// Synthetic-data config, one `key = value` per line:
//
//   records   = 10000
//   noise     = 0.05
//   condition = Mothers Age > 25
//   condition = Education < 7
//
// `schema = <path>` may also appear; it is returned to the caller unresolved.

struct SynthConfig {
  std::size_t records = 1000;
  double noise = 0.0;
  std::vector<PlantedCondition> conditions;
  std::optional<std::string> schema_path;

  SynthSpec to_spec(Schema schema) const {
    SynthSpec s;
    s.record_count = records;
    s.schema = std::move(schema);
    s.noise = noise;
    if (!conditions.empty()) s.rule = PlantedRule{conditions};
    validate(s);
    return s;
  }
};

inline SynthConfig read_synth_config(std::istream& in) {
  SynthConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (text::next_content_line(in, line, line_no)) {
    const auto eq = line.find('=');
    const auto where = "synth config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(text::trim(std::string_view(line).substr(0, eq)));
    const std::string value(text::trim(std::string_view(line).substr(eq + 1)));
    if (key == "records") {
      const auto v = text::parse_int(value);
      if (!v || *v < 0) throw ConfigError(where + "bad record count");
      cfg.records = static_cast<std::size_t>(*v);
    } else if (key == "noise") {
      const auto v = text::parse_double(value);
      if (!v) throw ConfigError(where + "bad noise rate");
      cfg.noise = *v;
    } else if (key == "condition") {
      const auto op = value.find_first_of("<>");
      if (op == std::string::npos) throw ConfigError(where + "condition needs '<' or '>'");
      const auto threshold = text::parse_double(value.substr(op + 1));
      if (!threshold) throw ConfigError(where + "bad threshold");
      cfg.conditions.push_back({std::string(text::trim(value.substr(0, op))),
                                value[op] == '>' ? Comparison::greater : Comparison::less, *threshold});
    } else if (key == "schema") {
      cfg.schema_path = value;
    } else {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace roughga
