#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughga/discretizer.hpp"
#include "roughga/error.hpp"
#include "roughga/rough.hpp"
#include "roughga/text.hpp"

namespace roughga {

enum class RuleKind { certain, possible };

inline std::string_view to_string(RuleKind k) { return k == RuleKind::certain ? "certain" : "possible"; }

/// Full-conjunction rule: one condition per condition attribute, given as the
/// pattern of bins (numeric) or codes (categorical).
struct Rule {
  std::vector<int> pattern;
  int decision = 0;
  RuleKind kind = RuleKind::certain;
  double plausibility = 1.0;
  /// Training records matching the pattern with this rule's decision.
  std::size_t support = 0;

  bool operator==(const Rule&) const = default;
};

/// Rules ordered by pattern then decision, with a pattern index for lookup.
class RuleSet {
 public:
  RuleSet() = default;

  RuleSet(std::vector<std::string> attributes, std::vector<Rule> rules)
      : attributes_(std::move(attributes)), rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& r = rules_[i];
      if (r.pattern.size() != attributes_.size()) throw ParameterError("rule arity does not match attributes");
      if (r.decision != 0 && r.decision != 1) throw ParameterError("rule decision must be 0 or 1");
      if (r.support < 1) throw ParameterError("rule support must be at least 1");
      if (r.kind == RuleKind::certain && r.plausibility != 1.0)
        throw ParameterError("certain rules have plausibility 1");
      if (r.kind == RuleKind::possible && !(r.plausibility > 0.0 && r.plausibility < 1.0))
        throw ParameterError("possible rules have plausibility in (0, 1)");
      auto& slot = index_[r.pattern];
      for (auto j : slot) {
        if (rules_[j].decision == r.decision) throw ParameterError("duplicate rule for one pattern and decision");
        if (rules_[j].kind == RuleKind::certain || r.kind == RuleKind::certain)
          throw ParameterError("a certain rule must be the only rule of its pattern");
      }
      slot.push_back(i);
    }
  }

  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }

  std::size_t count(RuleKind kind) const {
    std::size_t n = 0;
    for (const auto& r : rules_) n += r.kind == kind;
    return n;
  }

  /// Indices of the rules whose conditions equal `pattern`.
  const std::vector<std::size_t>* lookup(const std::vector<int>& pattern) const {
    const auto it = index_.find(pattern);
    return it == index_.end() ? nullptr : &it->second;
  }

 private:
  std::vector<std::string> attributes_;
  std::vector<Rule> rules_;
  std::map<std::vector<int>, std::vector<std::size_t>> index_;
};

/// One certain rule per decision-pure pattern; for a mixed pattern one
/// possible rule per decision present, weighted by that class's rough
/// membership in the decision class.
inline RuleSet extract(const InformationSystem& system) {
  if (system.empty()) throw ParameterError("information system is empty");
  const auto p = partition(system);
  const auto counts = decision_counts(system, p);
  std::vector<Rule> rules;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const auto& pattern = p.classes()[c].pattern;
    const std::size_t size = counts[c][0] + counts[c][1];
    for (int d = 0; d < 2; ++d) {
      const auto n = counts[c][static_cast<std::size_t>(d)];
      if (n == 0) continue;
      Rule r;
      r.pattern = pattern;
      r.decision = d;
      r.support = n;
      r.kind = n == size ? RuleKind::certain : RuleKind::possible;
      r.plausibility = static_cast<double>(n) / static_cast<double>(size);
      rules.push_back(std::move(r));
    }
  }
  return RuleSet(system.attributes(), std::move(rules));
}

/// Plausibility to five decimals, truncated ("0.06666" for 1/15).
inline std::string format_plausibility(double p) {
  const double scaled = std::floor(p * 1e5 + 1e-7);
  return text::format_fixed(scaled / 1e5, 5);
}

/// "[lo, hi)" interval of a numeric bin; the last bin is closed above.
inline std::string bin_interval(const AttributeSchema& a, const AttributeCuts& cuts, int bin) {
  const auto b = static_cast<std::size_t>(bin);
  if (bin < 0 || b > cuts.cuts.size()) throw ParameterError("bin " + std::to_string(bin) + " out of range for '" + a.name + "'");
  const double lo = b == 0 ? a.lower : cuts.cuts[b - 1];
  const double hi = b == cuts.cuts.size() ? a.upper : cuts.cuts[b];
  return "[" + text::format_fixed(lo, 2) + ", " + text::format_fixed(hi, 2) + (b == cuts.cuts.size() ? "]" : ")");
}

/// "If Race = African and Education = [6.50, 9.75) and ... Then HIV = ...".
/// Certain rules read "Most Probably <label>"; possible rules append their
/// plausibility.
inline std::string render(const Rule& rule, const Schema& schema, const CutPointSet& cuts) {
  const auto& cols = schema.condition_indices();
  if (rule.pattern.size() != cols.size()) throw ParameterError("rule arity does not match schema");
  std::string out = "If ";
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto& a = schema[cols[j]];
    if (j) out += " and ";
    out += a.name + " = ";
    if (a.is_numeric()) {
      const auto* ac = cuts.find(cols[j]);
      if (!ac) throw ParameterError("no cuts for attribute '" + a.name + "'");
      out += bin_interval(a, *ac, rule.pattern[j]);
    } else {
      out += a.label_of(rule.pattern[j]);
    }
  }
  const auto& d = schema.decision();
  out += " Then " + d.name + " = ";
  if (rule.kind == RuleKind::certain) {
    out += "Most Probably " + d.label_of(rule.decision);
  } else {
    out += d.label_of(rule.decision) + " with plausibility = " + format_plausibility(rule.plausibility);
  }
  return out;
}

inline void write_rendered(std::ostream& out, const RuleSet& rules, const Schema& schema, const CutPointSet& cuts) {
  for (const auto& r : rules.rules()) out << render(r, schema, cuts) << '\n';
}

/// Machine-readable form: `kind,decision,plausibility,support,<pattern...>`.
inline void write_rules(std::ostream& out, const RuleSet& rules) {
  out << "kind,decision,plausibility,support";
  for (const auto& a : rules.attributes()) out << ',' << a;
  out << '\n';
  for (const auto& r : rules.rules()) {
    out << to_string(r.kind) << ',' << r.decision << ',' << text::format_double(r.plausibility) << ',' << r.support;
    for (int v : r.pattern) out << ',' << v;
    out << '\n';
  }
}

inline RuleSet read_rules(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!text::next_content_line(in, line, line_no)) throw SchemaError("rule file has no header");
  auto header = text::split(line, ',');
  if (header.size() < 4 || header[0] != "kind" || header[1] != "decision" || header[2] != "plausibility" ||
      header[3] != "support")
    throw SchemaError("rule file header must start with kind,decision,plausibility,support");
  std::vector<std::string> attributes(header.begin() + 4, header.end());
  std::vector<Rule> rules;
  while (text::next_content_line(in, line, line_no)) {
    const auto f = text::split(line, ',');
    if (f.size() != header.size()) throw RowError(line_no, "wrong number of fields");
    Rule r;
    if (f[0] == "certain") {
      r.kind = RuleKind::certain;
    } else if (f[0] == "possible") {
      r.kind = RuleKind::possible;
    } else {
      throw RowError(line_no, "unknown rule kind '" + f[0] + "'");
    }
    const auto d = text::parse_int(f[1]);
    const auto p = text::parse_double(f[2]);
    const auto s = text::parse_int(f[3]);
    if (!d || !p || !s || *s < 0) throw RowError(line_no, "bad rule fields");
    r.decision = static_cast<int>(*d);
    r.plausibility = *p;
    r.support = static_cast<std::size_t>(*s);
    for (std::size_t i = 4; i < f.size(); ++i) {
      const auto v = text::parse_int(f[i]);
      if (!v) throw RowError(line_no, "bad condition value '" + f[i] + "'");
      r.pattern.push_back(static_cast<int>(*v));
    }
    rules.push_back(std::move(r));
  }
  return RuleSet(std::move(attributes), std::move(rules));
}

struct Prediction {
  std::optional<int> decision;  ///< std::nullopt = abstain
  double plausibility = 0.0;
  bool matched = false;  ///< some rule covers the pattern
};

/// Exact pattern lookup: a certain rule decides outright; a mixed pattern
/// takes its most plausible rule; ties and unseen patterns abstain.
inline Prediction predict(const RuleSet& rules, std::span<const int> record) {
  if (record.size() != rules.attributes().size())
    throw ParameterError("record arity " + std::to_string(record.size()) + " does not match rule set arity " +
                         std::to_string(rules.attributes().size()));
  const auto* hits = rules.lookup(std::vector<int>(record.begin(), record.end()));
  if (!hits || hits->empty()) return {};
  Prediction out;
  out.matched = true;
  const Rule* best = nullptr;
  bool tie = false;
  for (auto i : *hits) {
    const auto& r = rules.rules()[i];
    if (!best || r.plausibility > best->plausibility) {
      best = &r;
      tie = false;
    } else if (r.plausibility == best->plausibility) {
      tie = true;
    }
  }
  out.plausibility = best->plausibility;
  if (!tie) out.decision = best->decision;
  return out;
}

struct Evaluation {
  /// Correct fraction among decided records; std::nullopt when nothing was decided.
  std::optional<double> accuracy;
  double coverage = 0.0;
  double abstention_rate = 0.0;
  std::size_t records = 0;
  std::size_t decided = 0;
  std::size_t correct = 0;
};

inline Evaluation evaluate(const RuleSet& rules, const DiscretizedTable& test) {
  if (test.size() == 0) throw ParameterError("test set is empty");
  Evaluation e;
  e.records = test.size();
  std::size_t matched = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto p = predict(rules, test.row(i));
    matched += p.matched;
    if (p.decision) {
      ++e.decided;
      e.correct += *p.decision == test.decisions[i];
    }
  }
  const double n = static_cast<double>(e.records);
  e.coverage = static_cast<double>(matched) / n;
  e.abstention_rate = 1.0 - static_cast<double>(e.decided) / n;
  if (e.decided > 0) e.accuracy = static_cast<double>(e.correct) / static_cast<double>(e.decided);
  return e;
}

}  // namespace roughga
