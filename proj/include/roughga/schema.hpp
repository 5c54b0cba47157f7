#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roughga/error.hpp"
#include "roughga/text.hpp"

namespace roughga {

enum class AttributeKind { categorical, numeric_integer, numeric_real };
enum class AttributeRole { condition, decision };

struct CategoryCode {
  int code = 0;
  std::string label;
  bool operator==(const CategoryCode&) const = default;
};

/// One column of an information table. Numeric attributes carry inclusive
/// bounds; categorical attributes carry their finite code set.
struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::numeric_real;
  AttributeRole role = AttributeRole::condition;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<CategoryCode> codes;

  bool is_numeric() const noexcept { return kind != AttributeKind::categorical; }
  bool is_condition() const noexcept { return role == AttributeRole::condition; }

  bool has_code(int code) const noexcept {
    return std::any_of(codes.begin(), codes.end(), [&](const CategoryCode& c) { return c.code == code; });
  }

  /// Label for a categorical code, or the code itself when unlabelled.
  std::string label_of(int code) const {
    for (const auto& c : codes)
      if (c.code == code) return c.label.empty() ? std::to_string(code) : c.label;
    return std::to_string(code);
  }

  bool operator==(const AttributeSchema&) const = default;

  static AttributeSchema categorical(std::string name, std::vector<CategoryCode> codes,
                                     AttributeRole role = AttributeRole::condition) {
    AttributeSchema a;
    a.name = std::move(name);
    a.kind = AttributeKind::categorical;
    a.role = role;
    a.codes = std::move(codes);
    return a;
  }

  static AttributeSchema numeric(std::string name, AttributeKind kind, double lower, double upper) {
    AttributeSchema a;
    a.name = std::move(name);
    a.kind = kind;
    a.lower = lower;
    a.upper = upper;
    return a;
  }
};

inline std::string_view to_string(AttributeKind k) {
  switch (k) {
    case AttributeKind::categorical: return "categorical";
    case AttributeKind::numeric_integer: return "integer";
    case AttributeKind::numeric_real: return "real";
  }
  return "?";
}

/// Ordered attribute list with exactly one binary decision attribute.
class Schema {
 public:
  Schema() = default;

  explicit Schema(std::vector<AttributeSchema> attributes) : attributes_(std::move(attributes)) {
    validate();
  }

  std::size_t size() const noexcept { return attributes_.size(); }
  const AttributeSchema& operator[](std::size_t i) const { return attributes_.at(i); }
  const std::vector<AttributeSchema>& attributes() const noexcept { return attributes_; }
  auto begin() const noexcept { return attributes_.begin(); }
  auto end() const noexcept { return attributes_.end(); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
      if (attributes_[i].name == name) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw SchemaError("unknown attribute '" + std::string(name) + "'");
  }

  std::size_t decision_index() const noexcept { return decision_; }
  const AttributeSchema& decision() const { return attributes_[decision_]; }

  /// Column indices of the condition attributes, in schema order.
  const std::vector<std::size_t>& condition_indices() const noexcept { return conditions_; }

  /// Column indices of the numeric condition attributes: the cut-point search space.
  const std::vector<std::size_t>& numeric_indices() const noexcept { return numeric_; }

  bool operator==(const Schema& o) const { return attributes_ == o.attributes_; }

 private:
  void validate() {
    std::set<std::string> names;
    std::optional<std::size_t> decision;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      const auto& a = attributes_[i];
      if (a.name.empty()) throw SchemaError("attribute " + std::to_string(i) + " has an empty name");
      if (!names.insert(a.name).second) throw SchemaError("duplicate attribute '" + a.name + "'");
      if (a.kind == AttributeKind::categorical) {
        if (a.codes.empty()) throw SchemaError("categorical attribute '" + a.name + "' has no codes");
        std::set<int> seen;
        for (const auto& c : a.codes)
          if (!seen.insert(c.code).second)
            throw SchemaError("attribute '" + a.name + "' repeats code " + std::to_string(c.code));
      } else if (!(a.lower < a.upper)) {
        throw SchemaError("attribute '" + a.name + "' needs lower < upper");
      }
      if (a.role == AttributeRole::decision) {
        if (decision) throw SchemaError("more than one decision attribute");
        if (a.kind != AttributeKind::categorical || a.codes.size() != 2 || !a.has_code(0) || !a.has_code(1))
          throw SchemaError("decision attribute '" + a.name + "' must be categorical over {0, 1}");
        decision = i;
      } else {
        conditions_.push_back(i);
        if (a.is_numeric()) numeric_.push_back(i);
      }
    }
    if (!decision) throw SchemaError("schema has no decision attribute");
    decision_ = *decision;
  }

  std::vector<AttributeSchema> attributes_;
  std::size_t decision_ = 0;
  std::vector<std::size_t> conditions_;
  std::vector<std::size_t> numeric_;
};

/// Schema of the antenatal survey: race, parents' ages, education, gravidity,
/// parity and the binary HIV status.
inline Schema hiv_schema(AttributeKind numeric_kind = AttributeKind::numeric_integer) {
  return Schema({
      AttributeSchema::categorical("Race", {{1, "White"}, {2, "African"}, {3, "Coloured"}, {4, "Asian"}}),
      AttributeSchema::numeric("Mothers Age", numeric_kind, 13, 50),
      AttributeSchema::numeric("Education", numeric_kind, 0, 13),
      AttributeSchema::numeric("Gravidity", numeric_kind, 0, 12),
      AttributeSchema::numeric("Parity", numeric_kind, 0, 12),
      AttributeSchema::numeric("Fathers Age", numeric_kind, 13, 70),
      AttributeSchema::categorical("HIV", {{0, "Negative"}, {1, "Positive"}}, AttributeRole::decision),
  });
}

// Schema sidecar format, one attribute per line, comma separated:
//
//   Race, categorical, 1=White;2=African;3=Coloured;4=Asian, condition
//   Mothers Age, integer, 13, 50, condition
//   HIV, categorical, 0=Negative;1=Positive, decision
//
// Kinds: categorical | integer | real (numeric-integer / numeric-real also
// accepted). Blank lines and '#' comments are ignored.

inline Schema read_schema(std::istream& in) {
  std::vector<AttributeSchema> attrs;
  std::string line;
  std::size_t line_no = 0;
  while (text::next_content_line(in, line, line_no)) {
    const auto f = text::split(line, ',');
    const auto where = "schema line " + std::to_string(line_no) + ": ";
    if (f.size() < 2) throw SchemaError(where + "expected 'name, kind, domain, role'");
    AttributeSchema a;
    a.name = f[0];
    const auto& kind = f[1];
    std::size_t role_at = 0;
    if (kind == "categorical") {
      if (f.size() != 4) throw SchemaError(where + "categorical needs 'name, categorical, codes, role'");
      a.kind = AttributeKind::categorical;
      for (const auto& item : text::split(f[2], ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        const auto code = text::parse_int(item.substr(0, eq));
        if (!code) throw SchemaError(where + "bad category code '" + item + "'");
        a.codes.push_back({static_cast<int>(*code),
                           eq == std::string::npos ? std::string{} : std::string(text::trim(item.substr(eq + 1)))});
      }
      role_at = 3;
    } else if (kind == "integer" || kind == "numeric-integer" || kind == "real" || kind == "numeric-real") {
      if (f.size() != 5) throw SchemaError(where + "numeric needs 'name, kind, lower, upper, role'");
      a.kind = (kind == "integer" || kind == "numeric-integer") ? AttributeKind::numeric_integer
                                                                 : AttributeKind::numeric_real;
      const auto lo = text::parse_double(f[2]);
      const auto hi = text::parse_double(f[3]);
      if (!lo || !hi) throw SchemaError(where + "bad numeric bounds");
      a.lower = *lo;
      a.upper = *hi;
      role_at = 4;
    } else {
      throw SchemaError(where + "unknown kind '" + kind + "'");
    }
    if (f[role_at] == "condition") {
      a.role = AttributeRole::condition;
    } else if (f[role_at] == "decision") {
      a.role = AttributeRole::decision;
    } else {
      throw SchemaError(where + "unknown role '" + f[role_at] + "'");
    }
    attrs.push_back(std::move(a));
  }
  return Schema(std::move(attrs));
}

inline Schema read_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  return read_schema(in);
}

inline void write_schema(std::ostream& out, const Schema& schema) {
  for (const auto& a : schema) {
    out << a.name << ", " << to_string(a.kind) << ", ";
    if (a.kind == AttributeKind::categorical) {
      for (std::size_t i = 0; i < a.codes.size(); ++i) {
        if (i) out << ';';
        out << a.codes[i].code;
        if (!a.codes[i].label.empty()) out << '=' << a.codes[i].label;
      }
    } else {
      out << text::format_double(a.lower) << ", " << text::format_double(a.upper);
    }
    out << ", " << (a.is_condition() ? "condition" : "decision") << '\n';
  }
}

}  // namespace roughga
