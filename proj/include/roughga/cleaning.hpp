#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "roughga/error.hpp"
#include "roughga/table.hpp"

namespace roughga {

struct CleaningReport {
  std::size_t input_count = 0;
  std::size_t removed_missing = 0;
  /// Both gravidity = 0 with parity >= 1, and parity > gravidity.
  std::size_t removed_gravidity_parity = 0;
  std::size_t output_count = 0;

  std::size_t removed() const noexcept { return removed_missing + removed_gravidity_parity; }
  bool reconciles() const noexcept { return output_count + removed() == input_count; }
  bool operator==(const CleaningReport&) const = default;
};

struct CleanOptions {
  /// Apply the gravidity/parity consistency rules. Requires both columns.
  bool check_consistency = true;
  std::string gravidity = "Gravidity";
  std::string parity = "Parity";
};

struct CleanResult {
  InformationTable table;
  CleaningReport report;
};

/// Drops records with a missing marker, then records whose gravidity/parity
/// pair is impossible. A record with several defects counts under the first
/// reason only. Survivors keep their order, ids and values.
inline CleanResult clean(const InformationTable& table, const CleanOptions& options = {}) {
  const auto& schema = table.schema();
  std::optional<std::size_t> grav, par;
  if (options.check_consistency) {
    grav = schema.find(options.gravidity);
    par = schema.find(options.parity);
    if (!grav || !par)
      throw ConfigError("consistency checks need '" + options.gravidity + "' and '" + options.parity +
                        "' columns");
  }

  CleaningReport report;
  report.input_count = table.size();
  std::vector<Record> kept;
  kept.reserve(table.size());
  for (const auto& r : table.records()) {
    if (r.has_missing()) {
      ++report.removed_missing;
      continue;
    }
    if (grav) {
      const double g = *r.values[*grav];
      const double p = *r.values[*par];
      if ((g == 0 && p >= 1) || p > g) {
        ++report.removed_gravidity_parity;
        continue;
      }
    }
    kept.push_back(r);
  }
  report.output_count = kept.size();
  if (!report.reconciles()) throw InvariantError("cleaning report does not reconcile");
  return {InformationTable(schema, std::move(kept)), report};
}

inline void write_cleaning_report(std::ostream& out, const CleaningReport& r) {
  out << "field,count\n"
      << "input_count," << r.input_count << '\n'
      << "removed_missing," << r.removed_missing << '\n'
      << "removed_gravidity_parity," << r.removed_gravidity_parity << '\n'
      << "output_count," << r.output_count << '\n';
}

}  // namespace roughga
