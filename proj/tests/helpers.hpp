#pragma once

#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "roughga/roughga.hpp"

namespace testing_helpers {

/// InformationSystem over an oracle table; record ids are row positions.
inline roughga::InformationSystem to_system(const oracle::Table& t) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < t.attributes; ++a) names.push_back("a" + std::to_string(a));
  std::vector<roughga::RecordId> ids(t.size());
  std::iota(ids.begin(), ids.end(), roughga::RecordId{0});
  std::vector<int> values;
  for (const auto& r : t.rows) values.insert(values.end(), r.begin(), r.end());
  return roughga::InformationSystem(std::move(names), std::move(ids), std::move(values), t.decisions);
}

inline roughga::RecordSet to_record_set(const std::set<std::size_t>& s) { return {s.begin(), s.end()}; }

inline roughga::InformationTable table_from_csv(const std::string& csv, const roughga::Schema& schema) {
  std::istringstream in(csv);
  return roughga::load_table(in, schema);
}

inline std::string hiv_header() { return "Race,Mothers Age,Education,Gravidity,Parity,Fathers Age,HIV\n"; }

}  // namespace testing_helpers
