#pragma once

// Rough set primitives over a discretized information system: the
// indiscernibility partition, lower/upper approximations, rough membership,
// approximation accuracy and the pattern-level consistency ratio.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughga/discretizer.hpp"
#include "roughga/error.hpp"

namespace roughga {

/// Sorted, duplicate-free set of record ids.
using RecordSet = std::vector<RecordId>;

inline RecordSet make_record_set(std::vector<RecordId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

/// Indices into an information system's condition attributes.
using AttributeSubset = std::vector<std::size_t>;

/// Universe U of records, condition attributes A with their (binned) values,
/// and the binary decision of every record. Immutable.
class InformationSystem {
 public:
  InformationSystem(std::vector<std::string> attributes, std::vector<RecordId> ids, std::vector<int> values,
                    std::vector<int> decisions)
      : attributes_(std::move(attributes)),
        ids_(std::move(ids)),
        values_(std::move(values)),
        decisions_(std::move(decisions)) {
    if (values_.size() != ids_.size() * attributes_.size())
      throw ParameterError("value map is not total on U x A");
    if (decisions_.size() != ids_.size()) throw ParameterError("decision map is not total on U");
    for (std::size_t i = 1; i < ids_.size(); ++i)
      if (ids_[i] <= ids_[i - 1]) throw ParameterError("record ids must be unique and increasing");
    for (int d : decisions_)
      if (d != 0 && d != 1) throw ParameterError("decisions must be 0 or 1");
  }

  explicit InformationSystem(DiscretizedTable t)
      : InformationSystem(names_of(t), std::move(t.ids), std::move(t.values), std::move(t.decisions)) {}

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  const RecordSet& universe() const noexcept { return ids_; }

  RecordId id(std::size_t pos) const { return ids_[pos]; }
  int value(std::size_t pos, std::size_t attr) const { return values_[pos * attributes_.size() + attr]; }
  std::span<const int> row(std::size_t pos) const {
    return {values_.data() + pos * attributes_.size(), attributes_.size()};
  }
  int decision(std::size_t pos) const { return decisions_[pos]; }

  std::optional<std::size_t> position_of(RecordId id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
  }

  /// Records whose decision equals `d`.
  RecordSet decision_class(int d) const {
    RecordSet out;
    for (std::size_t i = 0; i < ids_.size(); ++i)
      if (decisions_[i] == d) out.push_back(ids_[i]);
    return out;
  }

  AttributeSubset all_attributes() const {
    AttributeSubset b(attributes_.size());
    std::iota(b.begin(), b.end(), std::size_t{0});
    return b;
  }

 private:
  static std::vector<std::string> names_of(const DiscretizedTable& t) {
    std::vector<std::string> out;
    for (auto c : t.columns) out.push_back(t.schema[c].name);
    return out;
  }

  std::vector<std::string> attributes_;
  RecordSet ids_;
  std::vector<int> values_;
  std::vector<int> decisions_;
};

struct EquivalenceClass {
  std::vector<int> pattern;  ///< shared values over the partitioning subset
  RecordSet members;
};

/// Classes of the B-indiscernibility relation, ordered lexicographically by
/// pattern. Keeps the universe so that sets of ids can be resolved.
class EquivalenceClassPartition {
 public:
  EquivalenceClassPartition(AttributeSubset attributes, RecordSet universe, std::vector<EquivalenceClass> classes,
                            std::vector<std::size_t> class_of)
      : attributes_(std::move(attributes)),
        universe_(std::move(universe)),
        classes_(std::move(classes)),
        class_of_(std::move(class_of)) {}

  const AttributeSubset& attributes() const noexcept { return attributes_; }
  const RecordSet& universe() const noexcept { return universe_; }
  const std::vector<EquivalenceClass>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }

  std::size_t position_of(RecordId id) const {
    const auto it = std::lower_bound(universe_.begin(), universe_.end(), id);
    if (it == universe_.end() || *it != id)
      throw ParameterError("record " + std::to_string(id) + " is not in the universe");
    return static_cast<std::size_t>(it - universe_.begin());
  }

  /// Index of the class containing record `id`.
  std::size_t class_index(RecordId id) const { return class_of_[position_of(id)]; }
  const EquivalenceClass& class_of(RecordId id) const { return classes_[class_index(id)]; }
  /// Class index of the record at universe position `pos`.
  std::size_t class_at(std::size_t pos) const { return class_of_[pos]; }

  /// Membership mask over universe positions; throws unless X is a subset of U.
  std::vector<char> mask(const RecordSet& x) const {
    std::vector<char> in(universe_.size(), 0);
    for (auto id : x) in[position_of(id)] = 1;
    return in;
  }

  /// Number of members of each class that lie in X.
  std::vector<std::size_t> overlap_counts(const RecordSet& x) const {
    std::vector<std::size_t> counts(classes_.size(), 0);
    const auto in = mask(x);
    for (std::size_t p = 0; p < in.size(); ++p)
      if (in[p]) ++counts[class_of_[p]];
    return counts;
  }

 private:
  AttributeSubset attributes_;
  RecordSet universe_;
  std::vector<EquivalenceClass> classes_;
  std::vector<std::size_t> class_of_;  ///< universe position -> class index
};

namespace detail {

/// Universe positions sorted by pattern over B (ties by position), and the
/// start offset of every run of equal patterns, closed by n.
struct PatternOrder {
  std::vector<std::size_t> order;
  std::vector<std::size_t> starts;
};

inline PatternOrder pattern_order(const InformationSystem& system, const AttributeSubset& b) {
  if (b.empty()) throw ParameterError("attribute subset must be non-empty");
  for (auto a : b)
    if (a >= system.attribute_count()) throw ParameterError("attribute index " + std::to_string(a) + " not in A");

  const std::size_t n = system.size();
  PatternOrder out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  auto less = [&](std::size_t x, std::size_t y) {
    for (auto a : b) {
      const int vx = system.value(x, a), vy = system.value(y, a);
      if (vx != vy) return vx < vy;
    }
    return false;
  };

  // Patterns that fit in 64 bits are packed into one key, first attribute
  // most significant, so that key order is pattern order.
  std::vector<int> lo(b.size(), 0);
  std::vector<unsigned> width(b.size(), 0);
  unsigned total_bits = 0;
  for (std::size_t j = 0; j < b.size() && n > 0; ++j) {
    int mn = system.value(0, b[j]), mx = mn;
    for (std::size_t p = 1; p < n; ++p) {
      mn = std::min(mn, system.value(p, b[j]));
      mx = std::max(mx, system.value(p, b[j]));
    }
    lo[j] = mn;
    const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(mx) - mn);
    while (width[j] < 64 && (span >> width[j]) != 0) ++width[j];
    total_bits += width[j];
  }
  if (total_bits <= 64) {
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
    for (std::size_t p = 0; p < n; ++p) {
      std::uint64_t key = 0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (width[j] == 0) continue;
        key = (key << width[j]) | static_cast<std::uint64_t>(static_cast<std::int64_t>(system.value(p, b[j])) - lo[j]);
      }
      keyed[p] = {key, p};
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < n; ++i) {
      out.order[i] = keyed[i].second;
      if (i == 0 || keyed[i].first != keyed[i - 1].first) out.starts.push_back(i);
    }
  } else {
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t x, std::size_t y) {
      if (less(x, y)) return true;
      if (less(y, x)) return false;
      return x < y;
    });
    for (std::size_t i = 0; i < n; ++i)
      if (i == 0 || less(out.order[i - 1], out.order[i])) out.starts.push_back(i);
  }
  out.starts.push_back(n);
  return out;
}

}  // namespace detail

/// Groups records by exact value agreement on every attribute of B.
inline EquivalenceClassPartition partition(const InformationSystem& system, AttributeSubset b) {
  const auto po = detail::pattern_order(system, b);
  std::vector<EquivalenceClass> classes(po.starts.size() - 1);
  std::vector<std::size_t> class_of(system.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto& cls = classes[c];
    const auto first = po.order[po.starts[c]];
    cls.pattern.reserve(b.size());
    for (auto a : b) cls.pattern.push_back(system.value(first, a));
    cls.members.reserve(po.starts[c + 1] - po.starts[c]);
    for (std::size_t i = po.starts[c]; i < po.starts[c + 1]; ++i) {
      cls.members.push_back(system.id(po.order[i]));
      class_of[po.order[i]] = c;
    }
  }
  return EquivalenceClassPartition(std::move(b), system.universe(), std::move(classes), std::move(class_of));
}

inline EquivalenceClassPartition partition(const InformationSystem& system) {
  return partition(system, system.all_attributes());
}

namespace detail {

template <typename Keep>
RecordSet union_of_classes(const EquivalenceClassPartition& p, const RecordSet& x, Keep keep) {
  const auto counts = p.overlap_counts(x);
  RecordSet out;
  for (std::size_t c = 0; c < p.size(); ++c)
    if (keep(counts[c], p.classes()[c].members.size()))
      out.insert(out.end(), p.classes()[c].members.begin(), p.classes()[c].members.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Union of the classes entirely inside X.
inline RecordSet lower_approx(const EquivalenceClassPartition& p, const RecordSet& x) {
  return detail::union_of_classes(p, x, [](std::size_t in, std::size_t size) { return in == size; });
}

/// Union of the classes that intersect X.
inline RecordSet upper_approx(const EquivalenceClassPartition& p, const RecordSet& x) {
  return detail::union_of_classes(p, x, [](std::size_t in, std::size_t) { return in > 0; });
}

/// Rough membership |[x] ∩ X| / |[x]| of record `x` in X.
inline double membership(RecordId x, const RecordSet& target, const EquivalenceClassPartition& p) {
  const auto& cls = p.class_of(x);
  (void)p.mask(target);  // validates X ⊆ U
  std::size_t in = 0;
  for (auto id : cls.members)
    if (std::binary_search(target.begin(), target.end(), id)) ++in;
  return static_cast<double>(in) / static_cast<double>(cls.members.size());
}

struct ApproximationPair {
  RecordSet target;
  RecordSet lower;
  RecordSet upper;

  RecordSet boundary() const {
    RecordSet out;
    std::set_difference(upper.begin(), upper.end(), lower.begin(), lower.end(), std::back_inserter(out));
    return out;
  }
};

inline ApproximationPair approximate(const EquivalenceClassPartition& p, RecordSet target) {
  auto lower = lower_approx(p, target);
  auto upper = upper_approx(p, target);
  return {std::move(target), std::move(lower), std::move(upper)};
}

/// |lower| / |upper|; std::nullopt when the upper approximation is empty.
inline std::optional<double> accuracy(const ApproximationPair& pair) {
  if (pair.upper.empty()) return std::nullopt;
  return static_cast<double>(pair.lower.size()) / static_cast<double>(pair.upper.size());
}

/// Per class, how many members carry decision 0 and decision 1.
inline std::vector<std::array<std::size_t, 2>> decision_counts(const InformationSystem& system,
                                                               const EquivalenceClassPartition& p) {
  if (p.universe().size() != system.size()) throw ParameterError("partition belongs to another system");
  std::vector<std::array<std::size_t, 2>> out(p.size(), {0, 0});
  for (std::size_t pos = 0; pos < system.size(); ++pos)
    ++out[p.class_at(pos)][static_cast<std::size_t>(system.decision(pos))];
  return out;
}

/// Decision tallies of the full-attribute classes, in class order, without
/// materializing the partition.
inline std::vector<std::array<std::size_t, 2>> decision_counts(const InformationSystem& system) {
  const auto po = detail::pattern_order(system, system.all_attributes());
  std::vector<std::array<std::size_t, 2>> out(po.starts.size() - 1, {0, 0});
  for (std::size_t c = 0; c + 1 < po.starts.size(); ++c)
    for (std::size_t i = po.starts[c]; i < po.starts[c + 1]; ++i)
      ++out[c][static_cast<std::size_t>(system.decision(po.order[i]))];
  return out;
}

/// Approximation accuracy of decision class `d` computed from class decision
/// tallies; equal to accuracy(approximate(p, system.decision_class(d))).
inline std::optional<double> decision_accuracy(const std::vector<std::array<std::size_t, 2>>& counts, int d) {
  std::size_t lower = 0, upper = 0;
  const auto k = static_cast<std::size_t>(d);
  for (const auto& c : counts) {
    if (c[k] == 0) continue;
    upper += c[0] + c[1];
    if (c[1 - k] == 0) lower += c[k];
  }
  if (upper == 0) return std::nullopt;
  return static_cast<double>(lower) / static_cast<double>(upper);
}

struct PatternCounts {
  std::size_t pure = 0;   ///< patterns whose records share one decision
  std::size_t total = 0;  ///< distinct condition patterns
  std::size_t mixed() const noexcept { return total - pure; }
  double ratio() const noexcept { return total == 0 ? 0.0 : static_cast<double>(pure) / static_cast<double>(total); }
  bool operator==(const PatternCounts&) const = default;
};

inline PatternCounts pattern_consistency(const std::vector<std::array<std::size_t, 2>>& counts) {
  PatternCounts out;
  out.total = counts.size();
  for (const auto& c : counts)
    if (c[0] == 0 || c[1] == 0) ++out.pure;
  return out;
}

/// Distinct full-attribute patterns and how many of them are decision-pure.
inline PatternCounts pattern_consistency(const InformationSystem& system) {
  if (system.empty()) throw ParameterError("information system is empty");
  return pattern_consistency(decision_counts(system));
}

}  // namespace roughga
