#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughga/error.hpp"
#include "roughga/table.hpp"
#include "roughga/text.hpp"

namespace roughga {

inline constexpr std::size_t kDefaultBins = 4;

/// Minimum spacing between adjacent cuts, relative to the attribute range.
inline constexpr double kRelativeGap = 1e-6;

inline double min_gap(const AttributeSchema& a) { return kRelativeGap * (a.upper - a.lower); }

/// Interior cut points of one numeric attribute.
struct AttributeCuts {
  std::size_t attribute = 0;  ///< schema column
  std::vector<double> cuts;
  bool operator==(const AttributeCuts&) const = default;
};

/// k-1 strictly increasing interior cuts for every numeric condition
/// attribute of a schema, in schema order.
class CutPointSet {
 public:
  CutPointSet() = default;

  CutPointSet(const Schema& schema, std::size_t bins, std::vector<AttributeCuts> per_attribute)
      : bins_(bins), per_attribute_(std::move(per_attribute)) {
    if (bins_ < 2) throw ParameterError("bins must be at least 2");
    const auto& numeric = schema.numeric_indices();
    if (per_attribute_.size() != numeric.size())
      throw ParameterError("cut set covers " + std::to_string(per_attribute_.size()) +
                           " attributes, schema has " + std::to_string(numeric.size()) + " numeric");
    for (std::size_t j = 0; j < numeric.size(); ++j) {
      const auto& ac = per_attribute_[j];
      const auto& a = schema[numeric[j]];
      if (ac.attribute != numeric[j]) throw ParameterError("cut set attributes out of schema order");
      if (ac.cuts.size() != bins_ - 1)
        throw ParameterError("attribute '" + a.name + "' needs " + std::to_string(bins_ - 1) + " cuts");
      const double gap = min_gap(a);
      for (std::size_t i = 0; i < ac.cuts.size(); ++i) {
        const double c = ac.cuts[i];
        if (!(c > a.lower && c < a.upper))
          throw ParameterError("cut " + text::format_double(c) + " outside the open bounds of '" + a.name + "'");
        if (i > 0 && !(c - ac.cuts[i - 1] >= gap))
          throw ParameterError("cuts of '" + a.name + "' must increase by at least " + text::format_double(gap));
      }
    }
  }

  std::size_t bins() const noexcept { return bins_; }
  const std::vector<AttributeCuts>& attributes() const noexcept { return per_attribute_; }

  const AttributeCuts* find(std::size_t schema_column) const {
    for (const auto& ac : per_attribute_)
      if (ac.attribute == schema_column) return &ac;
    return nullptr;
  }

  /// Concatenated cuts: the chromosome layout.
  std::vector<double> flatten() const {
    std::vector<double> out;
    for (const auto& ac : per_attribute_) out.insert(out.end(), ac.cuts.begin(), ac.cuts.end());
    return out;
  }

  bool operator==(const CutPointSet&) const = default;

 private:
  std::size_t bins_ = kDefaultBins;
  std::vector<AttributeCuts> per_attribute_;
};

/// Bin index of `v` under `cuts`: bin i covers [c_i, c_{i+1}) with the upper
/// bound folded into the last bin.
inline int bin_of(std::span<const double> cuts, double v) {
  return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

/// Equal-width cuts lo + i(hi-lo)/k, i = 1..k-1.
inline CutPointSet equal_width(const Schema& schema, std::size_t bins = kDefaultBins) {
  if (bins < 2) throw ParameterError("bins must be at least 2");
  std::vector<AttributeCuts> out;
  for (auto col : schema.numeric_indices()) {
    const auto& a = schema[col];
    if (!std::isfinite(a.lower) || !std::isfinite(a.upper))
      throw ParameterError("attribute '" + a.name + "' needs finite bounds");
    AttributeCuts ac{col, {}};
    for (std::size_t i = 1; i < bins; ++i)
      ac.cuts.push_back(a.lower + static_cast<double>(i) * (a.upper - a.lower) / static_cast<double>(bins));
    out.push_back(std::move(ac));
  }
  return CutPointSet(schema, bins, std::move(out));
}

inline std::size_t gene_count(const Schema& schema, std::size_t bins) {
  return (bins - 1) * schema.numeric_indices().size();
}

/// Turns raw genes into a valid cut set: clamp into [lo+gap, hi-gap], sort,
/// then push cuts apart to the minimum gap (upward first, downward if the top
/// cut overflows).
inline CutPointSet repair(std::span<const double> raw, const Schema& schema, std::size_t bins = kDefaultBins) {
  if (bins < 2) throw ParameterError("bins must be at least 2");
  if (raw.size() != gene_count(schema, bins))
    throw ParameterError("expected " + std::to_string(gene_count(schema, bins)) + " genes, got " +
                         std::to_string(raw.size()));
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t per = bins - 1;
  std::vector<AttributeCuts> out;
  const auto& numeric = schema.numeric_indices();
  for (std::size_t j = 0; j < numeric.size(); ++j) {
    const auto& a = schema[numeric[j]];
    const double gap = min_gap(a);
    const double lo = a.lower + gap;
    const double hi = a.upper - gap;
    std::vector<double> c(raw.begin() + static_cast<std::ptrdiff_t>(j * per),
                          raw.begin() + static_cast<std::ptrdiff_t>((j + 1) * per));
    for (auto& x : c) x = std::isnan(x) ? lo : std::clamp(x, lo, hi);
    std::sort(c.begin(), c.end());
    for (std::size_t i = 1; i < c.size(); ++i) {
      c[i] = std::max(c[i], c[i - 1] + gap);
      while (c[i] - c[i - 1] < gap) c[i] = std::nextafter(c[i], inf);
    }
    if (!c.empty() && c.back() > hi) {
      c.back() = hi;
      for (std::size_t i = c.size() - 1; i-- > 0;) {
        c[i] = std::min(c[i], c[i + 1] - gap);
        while (c[i + 1] - c[i] < gap) c[i] = std::nextafter(c[i], -inf);
      }
    }
    out.push_back({numeric[j], std::move(c)});
  }
  return CutPointSet(schema, bins, std::move(out));
}

/// Condition attributes mapped to bin indices (numeric) or codes
/// (categorical), stored row-major; the decision column is kept separately.
struct DiscretizedTable {
  Schema schema;
  std::vector<std::size_t> columns;  ///< schema index of each condition column
  std::vector<RecordId> ids;
  std::vector<int> values;  ///< ids.size() x columns.size()
  std::vector<int> decisions;

  std::size_t size() const noexcept { return ids.size(); }
  std::size_t arity() const noexcept { return columns.size(); }
  std::span<const int> row(std::size_t i) const { return {values.data() + i * arity(), arity()}; }
};

/// Bins every numeric condition attribute with `cuts`; categorical codes and
/// the decision pass through. Throws RangeError naming the record id and
/// attribute for a value outside its domain or a missing marker.
inline DiscretizedTable apply(const InformationTable& table, const CutPointSet& cuts) {
  const auto& schema = table.schema();
  DiscretizedTable out;
  out.schema = schema;
  out.columns = schema.condition_indices();
  const std::size_t m = out.columns.size();
  std::vector<const AttributeCuts*> col_cuts(m, nullptr);
  for (std::size_t j = 0; j < m; ++j) {
    if (schema[out.columns[j]].is_numeric()) {
      col_cuts[j] = cuts.find(out.columns[j]);
      if (!col_cuts[j]) throw ParameterError("no cuts for attribute '" + schema[out.columns[j]].name + "'");
    }
  }
  const auto dcol = schema.decision_index();
  out.ids.reserve(table.size());
  out.values.resize(table.size() * m);
  out.decisions.reserve(table.size());
  auto range_error = [&](const Record& r, const AttributeSchema& a, const std::string& why) {
    return RangeError("record " + std::to_string(r.id) + ", attribute '" + a.name + "': " + why);
  };
  auto* cell_out = out.values.data();
  for (const auto& r : table.records()) {
    out.ids.push_back(r.id);
    for (std::size_t j = 0; j < m; ++j) {
      const auto& a = schema.attributes()[out.columns[j]];
      const auto& cell = r.values[out.columns[j]];
      if (!cell) throw range_error(r, a, "missing value");
      const double v = *cell;
      if (col_cuts[j]) {
        if (!(v >= a.lower && v <= a.upper))
          throw range_error(r, a, "value " + text::format_double(v) + " outside [" + text::format_double(a.lower) +
                                      ", " + text::format_double(a.upper) + "]");
        *cell_out++ = bin_of(col_cuts[j]->cuts, v);
      } else {
        if (v != std::nearbyint(v) || !a.has_code(static_cast<int>(v)))
          throw range_error(r, a, "unknown code " + text::format_double(v));
        *cell_out++ = static_cast<int>(v);
      }
    }
    const auto& d = r.values[dcol];
    if (!d || (*d != 0.0 && *d != 1.0)) throw range_error(r, schema[dcol], "decision must be 0 or 1");
    out.decisions.push_back(static_cast<int>(*d));
  }
  return out;
}

/// Writes one line per numeric attribute: `name,c1,c2,...`.
inline void write_cuts(std::ostream& out, const Schema& schema, const CutPointSet& cuts) {
  for (const auto& ac : cuts.attributes()) {
    out << schema[ac.attribute].name;
    for (double c : ac.cuts) out << ',' << text::format_double(c);
    out << '\n';
  }
}

inline CutPointSet read_cuts(std::istream& in, const Schema& schema) {
  std::vector<AttributeCuts> per(schema.numeric_indices().size());
  std::vector<bool> seen(per.size(), false);
  std::size_t bins = 0;
  std::string line;
  std::size_t line_no = 0;
  while (text::next_content_line(in, line, line_no)) {
    auto f = text::split(line, ',');
    const auto col = schema.index_of(f.front());
    const auto& numeric = schema.numeric_indices();
    const auto it = std::find(numeric.begin(), numeric.end(), col);
    if (it == numeric.end()) throw SchemaError("'" + f.front() + "' is not a numeric condition attribute");
    const auto j = static_cast<std::size_t>(it - numeric.begin());
    if (seen[j]) throw SchemaError("cuts for '" + f.front() + "' given twice");
    seen[j] = true;
    per[j].attribute = col;
    for (std::size_t i = 1; i < f.size(); ++i) {
      const auto v = text::parse_double(f[i]);
      if (!v) throw RowError(line_no, "bad cut value '" + f[i] + "'");
      per[j].cuts.push_back(*v);
    }
    if (bins == 0) bins = per[j].cuts.size() + 1;
  }
  for (std::size_t j = 0; j < per.size(); ++j)
    if (!seen[j]) throw SchemaError("no cuts for '" + schema[schema.numeric_indices()[j]].name + "'");
  return CutPointSet(schema, bins == 0 ? kDefaultBins : bins, std::move(per));
}

/// Writes the discretized table as CSV: id, condition bins/codes, decision.
inline void write_discretized(std::ostream& out, const DiscretizedTable& t) {
  out << kIdColumn;
  for (auto c : t.columns) out << ',' << t.schema[c].name;
  out << ',' << t.schema.decision().name << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << t.ids[i];
    for (int v : t.row(i)) out << ',' << v;
    out << ',' << t.decisions[i] << '\n';
  }
}

}  // namespace roughga
