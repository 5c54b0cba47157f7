// roughga: rough set rule induction with GA-optimized discretization.
//
//   roughga clean      --input raw.csv --out dir
//   roughga synth      --config synth.conf --seed 7 --out table.csv
//   roughga discretize --input t.csv [--cuts cuts.txt] --out dir
//   roughga optimize   --input t.csv --seed 7 --out dir
//   roughga rules      --input t.csv [--cuts cuts.txt] --out dir
//   roughga evaluate   --input test.csv --cuts cuts.txt --rules rules.csv
//   roughga compare    --input t.csv --seed 7 --out dir
//
// Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 internal
// invariant violation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "roughga/roughga.hpp"

namespace fs = std::filesystem;
using namespace roughga;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::string schema_path;
  std::string input;
  std::string out;
  std::string config_path;
  std::string cuts_path;
  std::string rules_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bins;
  std::optional<std::string> metric;
  std::optional<std::size_t> threads;
  std::optional<double> split;
  bool no_consistency = false;
};

Schema load_schema(const Options& o) { return o.schema_path.empty() ? hiv_schema() : read_schema_file(o.schema_path); }

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

InformationTable load_input(const Options& o, const Schema& schema) {
  auto in = open_in(o.input);
  return load_table(in, schema);
}

/// Opens `dir/name` for writing, creating `dir` as needed.
std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const auto path = (fs::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

/// GA settings: config file first, then command-line overrides.
GAConfig ga_config(const Options& o, double* split = nullptr) {
  GAConfig c;
  if (!o.config_path.empty()) {
    auto in = open_in(o.config_path);
    std::string line;
    std::size_t line_no = 0;
    while (text::next_content_line(in, line, line_no)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(o.config_path + ":" + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key(text::trim(std::string_view(line).substr(0, eq)));
      const std::string value(text::trim(std::string_view(line).substr(eq + 1)));
      if (key == "split") {
        const auto v = text::parse_double(value);
        if (!v) throw ConfigError("bad split '" + value + "'");
        if (split) *split = *v;
      } else {
        apply_setting(c, key, value);
      }
    }
  }
  if (o.seed) c.seed = *o.seed;
  if (o.bins) c.bins = *o.bins;
  if (o.metric) apply_setting(c, "metric", *o.metric);
  if (o.threads) c.threads = *o.threads;
  if (split && o.split) *split = *o.split;
  c.validate();
  return c;
}

CutPointSet cuts_for(const Options& o, const Schema& schema) {
  if (o.cuts_path.empty()) return equal_width(schema, o.bins.value_or(kDefaultBins));
  auto in = open_in(o.cuts_path);
  return read_cuts(in, schema);
}

void write_rule_files(const std::string& dir, const std::string& stem, const RuleSet& rules, const Schema& schema,
                      const CutPointSet& cuts) {
  auto csv = open_out(dir, stem + ".csv");
  write_rules(csv, rules);
  auto txt = open_out(dir, stem + ".txt");
  write_rendered(txt, rules, schema, cuts);
}

void write_cuts_file(const std::string& dir, const std::string& name, const Schema& schema, const CutPointSet& cuts) {
  auto out = open_out(dir, name);
  write_cuts(out, schema, cuts);
}

int cmd_clean(const Options& o) {
  const auto schema = load_schema(o);
  const auto table = load_input(o, schema);
  const auto [cleaned, report] = clean(table, CleanOptions{.check_consistency = !o.no_consistency});
  auto t = open_out(o.out, "cleaned.csv");
  write_table(t, cleaned, true);
  auto r = open_out(o.out, "cleaning_report.csv");
  write_cleaning_report(r, report);
  std::cout << "read " << report.input_count << " records; removed " << report.removed_missing
            << " with missing values and " << report.removed_gravidity_parity
            << " with inconsistent gravidity/parity; " << report.output_count << " remain\n";
  return kOk;
}

int cmd_synth(const Options& o) {
  auto in = open_in(o.config_path);
  const auto cfg = read_synth_config(in);
  std::string schema_path = o.schema_path;
  if (schema_path.empty() && cfg.schema_path)
    schema_path = (fs::path(o.config_path).parent_path() / *cfg.schema_path).string();
  const auto schema = schema_path.empty() ? hiv_schema() : read_schema_file(schema_path);
  const auto table = synthesize(cfg.to_spec(schema), *o.seed);
  if (const auto parent = fs::path(o.out).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(o.out);
  if (!out) throw IoError("cannot write '" + o.out + "'");
  write_table(out, table);
  std::size_t positive = 0;
  for (const auto& r : table.records()) positive += *r.values[schema.decision_index()] == 1.0;
  std::cout << "wrote " << table.size() << " records (" << positive << " positive) to " << o.out << '\n';
  return kOk;
}

int cmd_discretize(const Options& o) {
  const auto schema = load_schema(o);
  const auto cuts = cuts_for(o, schema);
  const auto d = apply(load_input(o, schema), cuts);
  auto out = open_out(o.out, "discretized.csv");
  write_discretized(out, d);
  write_cuts_file(o.out, "cuts.txt", schema, cuts);
  std::cout << "discretized " << d.size() << " records into " << cuts.bins() << " bins per numeric attribute\n";
  return kOk;
}

int cmd_optimize(const Options& o) {
  const auto schema = load_schema(o);
  const auto table = load_input(o, schema);
  const auto config = ga_config(o);
  const auto h = evolve(table, schema, config);
  const double baseline = fitness({equal_width(schema, config.bins).flatten(), {}}, table, config);
  if (*h.best.fitness < baseline) throw InvariantError("GA fitness below the equal-width fitness");
  write_cuts_file(o.out, "cuts.txt", schema, h.best_cuts);
  auto hist = open_out(o.out, "history.csv");
  write_history(hist, h);
  std::cout << "equal-width " << to_string(config.metric) << " " << text::format_fixed(baseline, 4) << ", best "
            << text::format_fixed(*h.best.fitness, 4) << " after " << h.generations.size() << " generations\n";
  write_cuts(std::cout, schema, h.best_cuts);
  return kOk;
}

int cmd_rules(const Options& o) {
  const auto schema = load_schema(o);
  const auto cuts = cuts_for(o, schema);
  const InformationSystem system(apply(load_input(o, schema), cuts));
  const auto rules = extract(system);
  write_rule_files(o.out, "rules", rules, schema, cuts);
  const auto counts = pattern_consistency(system);
  std::cout << rules.count(RuleKind::certain) << " certain and " << rules.count(RuleKind::possible)
            << " possible rules from " << counts.total << " patterns (" << counts.pure << " discernible)\n";
  return kOk;
}

int cmd_evaluate(const Options& o) {
  const auto schema = load_schema(o);
  const auto cuts = cuts_for(o, schema);
  auto rin = open_in(o.rules_path);
  const auto rules = read_rules(rin);
  const auto e = evaluate(rules, apply(load_input(o, schema), cuts));
  std::ostringstream report;
  report << "records,decided,correct,accuracy,coverage,abstention\n"
         << e.records << ',' << e.decided << ',' << e.correct << ',' << format_optional(e.accuracy) << ','
         << text::format_double(e.coverage) << ',' << text::format_double(e.abstention_rate) << '\n';
  if (!o.out.empty()) {
    auto out = open_out(o.out, "evaluation.csv");
    out << report.str();
  }
  std::cout << report.str();
  return kOk;
}

int cmd_compare(const Options& o) {
  const auto schema = load_schema(o);
  const auto table = load_input(o, schema);
  double split = 0.8;
  const auto config = ga_config(o, &split);
  const auto r = compare(table, config, split);
  auto report = open_out(o.out, "report.csv");
  write_compare_report(report, r, config.metric);
  auto hist = open_out(o.out, "history.csv");
  write_history(hist, r.history);
  write_cuts_file(o.out, "cuts_equal_width.txt", schema, r.baseline.cuts);
  write_cuts_file(o.out, "cuts_ga.txt", schema, r.optimized.cuts);
  write_rule_files(o.out, "rules_equal_width", r.baseline.rules, schema, r.baseline.cuts);
  write_rule_files(o.out, "rules_ga", r.optimized.rules, schema, r.optimized.cuts);
  write_compare_summary(std::cout, r);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rough set rule induction with genetic-algorithm discretization"};
  app.require_subcommand(1);
  Options o;

  auto add_schema = [&](CLI::App* c) {
    c->add_option("--schema", o.schema_path, "Schema sidecar file (default: built-in HIV survey schema)")
        ->check(CLI::ExistingFile);
  };
  auto add_input = [&](CLI::App* c) { c->add_option("--input", o.input, "Input CSV")->required(); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory")->required(); };
  auto add_bins = [&](CLI::App* c) { c->add_option("--bins", o.bins, "Bins per numeric attribute (default 4)"); };
  auto add_cuts = [&](CLI::App* c) {
    c->add_option("--cuts", o.cuts_path, "Cut point file (default: equal-width)")->check(CLI::ExistingFile);
  };
  auto add_ga = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed")->required();
    c->add_option("--config", o.config_path, "GA config file (key = value)")->check(CLI::ExistingFile);
    c->add_option("--metric", o.metric, "Fitness metric")->check(CLI::IsMember({"alpha", "pattern"}));
    c->add_option("--threads", o.threads, "Fitness evaluation threads");
    add_bins(c);
  };

  auto* clean_cmd = app.add_subcommand("clean", "Remove records with missing or inconsistent values");
  add_schema(clean_cmd);
  add_input(clean_cmd);
  add_out(clean_cmd);
  clean_cmd->add_flag("--no-consistency-checks", o.no_consistency, "Skip the gravidity/parity rules");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic table with a planted rule");
  add_schema(synth_cmd);
  synth_cmd->add_option("--config", o.config_path, "Synthetic data config")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--seed", o.seed, "Random seed")->required();
  synth_cmd->add_option("--out", o.out, "Output CSV file")->required();

  auto* disc_cmd = app.add_subcommand("discretize", "Bin numeric attributes");
  add_schema(disc_cmd);
  add_input(disc_cmd);
  add_out(disc_cmd);
  add_cuts(disc_cmd);
  add_bins(disc_cmd);

  auto* opt_cmd = app.add_subcommand("optimize", "Search cut points with the genetic algorithm");
  add_schema(opt_cmd);
  add_input(opt_cmd);
  add_out(opt_cmd);
  add_ga(opt_cmd);

  auto* rules_cmd = app.add_subcommand("rules", "Extract certain and possible rules");
  add_schema(rules_cmd);
  add_input(rules_cmd);
  add_out(rules_cmd);
  add_cuts(rules_cmd);
  add_bins(rules_cmd);

  auto* eval_cmd = app.add_subcommand("evaluate", "Classify a table with a rule file");
  add_schema(eval_cmd);
  add_input(eval_cmd);
  add_cuts(eval_cmd);
  add_bins(eval_cmd);
  eval_cmd->add_option("--rules", o.rules_path, "Machine-readable rule file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", o.out, "Output directory");

  auto* cmp_cmd = app.add_subcommand("compare", "Equal-width versus GA-optimized cuts");
  add_schema(cmp_cmd);
  add_input(cmp_cmd);
  add_out(cmp_cmd);
  add_ga(cmp_cmd);
  cmp_cmd->add_option("--split", o.split, "Training fraction (default 0.8)")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*clean_cmd) return cmd_clean(o);
    if (*synth_cmd) return cmd_synth(o);
    if (*disc_cmd) return cmd_discretize(o);
    if (*opt_cmd) return cmd_optimize(o);
    if (*rules_cmd) return cmd_rules(o);
    if (*eval_cmd) return cmd_evaluate(o);
    if (*cmp_cmd) return cmd_compare(o);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const StateError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
