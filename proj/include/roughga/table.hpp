#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "roughga/error.hpp"
#include "roughga/schema.hpp"
#include "roughga/text.hpp"

namespace roughga {

using RecordId = std::size_t;

/// A cell value; std::nullopt is the missing marker ("?" or an empty field).
using Cell = std::optional<double>;

struct Record {
  RecordId id = 0;
  std::vector<Cell> values;

  bool has_missing() const {
    for (const auto& v : values)
      if (!v) return true;
    return false;
  }
  bool operator==(const Record&) const = default;
};

/// The universe of objects: ordered records over a schema. Immutable once
/// built; every record has one cell per schema attribute and ids are unique.
class InformationTable {
 public:
  InformationTable() = default;

  InformationTable(Schema schema, std::vector<Record> records)
      : schema_(std::move(schema)), records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (records_[i].values.size() != schema_.size())
        throw ParameterError("record " + std::to_string(records_[i].id) + " has arity " +
                             std::to_string(records_[i].values.size()) + ", schema has " +
                             std::to_string(schema_.size()));
      if (i > 0 && records_[i].id <= records_[i - 1].id)
        throw ParameterError("record ids must be unique and increasing");
    }
  }

  const Schema& schema() const noexcept { return schema_; }
  const std::vector<Record>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const Record& operator[](std::size_t i) const { return records_.at(i); }

  /// Table holding the records at the given positions, in the given order.
  InformationTable subset(const std::vector<std::size_t>& positions) const {
    std::vector<Record> out;
    out.reserve(positions.size());
    for (auto p : positions) out.push_back(records_.at(p));
    return InformationTable(schema_, std::move(out));
  }

  bool operator==(const InformationTable&) const = default;

 private:
  Schema schema_;
  std::vector<Record> records_;
};

inline constexpr std::string_view kIdColumn = "id";

inline bool is_missing_token(std::string_view s) {
  s = text::trim(s);
  return s.empty() || s == "?";
}

/// Parses comma-separated text with a mandatory header naming every schema
/// attribute (any order). An optional leading "id" column supplies record
/// ids; otherwise ids are 0..n-1 in file order. Unparseable or absent values
/// become the missing marker.
inline InformationTable load_table(std::istream& in, const Schema& schema) {
  std::string line;
  std::size_t line_no = 0;
  if (!text::next_content_line(in, line, line_no)) throw SchemaError("input has no header row");
  auto header = text::split(line, ',');
  bool has_id = !header.empty() && header.front() == kIdColumn && !schema.find(kIdColumn);
  if (has_id) header.erase(header.begin());
  if (header.size() != schema.size())
    throw SchemaError("header has " + std::to_string(header.size()) + " columns, schema has " +
                      std::to_string(schema.size()));
  std::vector<std::size_t> column_to_attr(header.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto a = schema.find(header[c]);
    if (!a) throw SchemaError("header column '" + header[c] + "' is not in the schema");
    if (seen[*a]) throw SchemaError("header repeats column '" + header[c] + "'");
    seen[*a] = true;
    column_to_attr[c] = *a;
  }

  std::vector<Record> records;
  RecordId next_id = 0;
  while (text::next_content_line(in, line, line_no)) {
    auto fields = text::split(line, ',');
    const std::size_t expected = header.size() + (has_id ? 1 : 0);
    if (fields.size() != expected)
      throw RowError(line_no, "expected " + std::to_string(expected) + " fields, found " +
                                  std::to_string(fields.size()));
    Record r;
    if (has_id) {
      const auto id = text::parse_int(fields.front());
      if (!id || *id < 0) throw RowError(line_no, "bad record id '" + fields.front() + "'");
      if (!records.empty() && static_cast<RecordId>(*id) <= records.back().id)
        throw RowError(line_no, "record ids must be unique and increasing");
      r.id = static_cast<RecordId>(*id);
      fields.erase(fields.begin());
    } else {
      r.id = next_id++;
    }
    r.values.assign(schema.size(), std::nullopt);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (is_missing_token(fields[c])) continue;
      r.values[column_to_attr[c]] = text::parse_double(fields[c]);
    }
    records.push_back(std::move(r));
  }
  return InformationTable(schema, std::move(records));
}

inline std::string format_cell(const AttributeSchema& a, const Cell& v) {
  if (!v) return "?";
  if (a.kind != AttributeKind::numeric_real && std::nearbyint(*v) == *v && std::abs(*v) < 1e15)
    return std::to_string(static_cast<long long>(*v));
  return text::format_double(*v);
}

/// Writes the table in the format `load_table` reads, with an id column
/// when `with_ids` is set.
inline void write_table(std::ostream& out, const InformationTable& table, bool with_ids = false) {
  const auto& schema = table.schema();
  if (with_ids) out << kIdColumn << ',';
  for (std::size_t i = 0; i < schema.size(); ++i) out << (i ? "," : "") << schema[i].name;
  out << '\n';
  for (const auto& r : table.records()) {
    if (with_ids) out << r.id << ',';
    for (std::size_t i = 0; i < schema.size(); ++i) out << (i ? "," : "") << format_cell(schema[i], r.values[i]);
    out << '\n';
  }
}

}  // namespace roughga
