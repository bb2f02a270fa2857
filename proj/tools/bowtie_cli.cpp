// Command-line front end for the bowtie library.
//
// Subcommands mirror the library operations one-to-one: validate, parse,
// eval, truth-table, join, outcomes, export-dot, check.  Query commands
// take --format json for machine consumption.  Exit codes: 0 success,
// 1 validation or semantic failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <bowtie/bowtie.hpp>

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bowtie::error(bowtie::errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw bowtie::error(bowtie::errc::io_error,
                        "cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush())
    throw bowtie::error(bowtie::errc::io_error, "cannot write '" + path + "'");
}

/// Writes to the -o target, or standard output when none was given.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

/// Splits a comma-separated label list, trimming blanks around items.
bowtie::activation_set parse_labels(const std::string& csv) {
  bowtie::activation_set labels;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    std::size_t begin = item.find_first_not_of(' ');
    if (begin == std::string::npos) continue;
    std::size_t end = item.find_last_not_of(' ');
    labels.insert(item.substr(begin, end - begin + 1));
  }
  return labels;
}

/// Parses "nodeid:branch" pairs, e.g. "4:1,9:2".
bowtie::consequence_choice parse_choice(const std::string& csv) {
  bowtie::consequence_choice choice;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw bowtie::error(bowtie::errc::invalid_choice,
                          "expected node:branch, got '" + item + "'");
    try {
      std::uint32_t node = static_cast<std::uint32_t>(
          std::stoul(item.substr(0, colon)));
      std::size_t branch = std::stoul(item.substr(colon + 1));
      choice[bowtie::node_id(node)] = branch;
    } catch (const std::exception&) {
      throw bowtie::error(bowtie::errc::invalid_choice,
                          "expected node:branch, got '" + item + "'");
    }
  }
  return choice;
}

const bowtie::prevention_tree& prevention_part(const bowtie::model& m) {
  if (const auto* p = std::get_if<bowtie::prevention_tree>(&m)) return *p;
  if (const auto* b = std::get_if<bowtie::disruption_bowtie>(&m))
    return b->prevention;
  throw bowtie::error(bowtie::errc::illegal_kind,
                      "expected a prevention tree or a bowtie");
}

const bowtie::consequence_tree& consequence_part(const bowtie::model& m) {
  if (const auto* c = std::get_if<bowtie::consequence_tree>(&m)) return *c;
  if (const auto* b = std::get_if<bowtie::disruption_bowtie>(&m))
    return b->consequence;
  throw bowtie::error(bowtie::errc::illegal_kind,
                      "expected a consequence tree or a bowtie");
}

const char* kind_name(const bowtie::model& m) {
  if (std::holds_alternative<bowtie::prevention_tree>(m)) return "dpt";
  if (std::holds_alternative<bowtie::consequence_tree>(m)) return "dct";
  return "bowtie";
}

std::size_t node_count(const bowtie::model& m) {
  if (const auto* p = std::get_if<bowtie::prevention_tree>(&m))
    return p->tree().size();
  if (const auto* c = std::get_if<bowtie::consequence_tree>(&m))
    return c->tree().size();
  const auto& b = std::get<bowtie::disruption_bowtie>(m);
  return b.prevention.tree().size() + b.consequence.tree().size();
}

void run_validate(const std::string& path) {
  bowtie::model m = bowtie::load_model(path);
  std::cout << "ok: " << kind_name(m) << " (" << node_count(m) << " nodes)\n";
}

void run_parse(const std::string& dsl_path, const std::string& out_path,
               const std::string& kind) {
  bowtie::term t = bowtie::parse(read_file(dsl_path));
  bool wants_dct = kind == "dct";
  if (kind.empty()) {
    // Infer: a CHOOSE anywhere makes it a consequence tree.
    auto has_choose = [](auto&& self, const bowtie::term& node) -> bool {
      if (node.op == bowtie::node_kind::choose) return true;
      for (const bowtie::term& operand : node.operands)
        if (self(self, operand)) return true;
      return false;
    };
    wants_dct = has_choose(has_choose, t);
  }
  bowtie::structure_tree tree = bowtie::to_tree(t);
  bowtie::model m = wants_dct
      ? bowtie::model(bowtie::as_consequence_tree(std::move(tree)))
      : bowtie::model(bowtie::as_prevention_tree(std::move(tree)));
  emit(out_path, bowtie::serialize_model(m));
}

void run_eval(const std::string& path, const std::string& active,
              const std::string& format) {
  bool value = bowtie::evaluate(prevention_part(bowtie::load_model(path)),
                                parse_labels(active));
  if (format == "json")
    std::cout << ordered_json{{"value", value ? 1 : 0}}.dump() << "\n";
  else
    std::cout << (value ? "1" : "0") << "\n";
}

void run_truth_table(const std::string& path, const std::string& format) {
  bowtie::truth_table table =
      bowtie::make_truth_table(prevention_part(bowtie::load_model(path)));
  auto bits = [&](std::size_t row) {
    std::string s(table.leaves().size(), '0');
    for (std::size_t i = 0; i < table.leaves().size(); ++i)
      if (row >> i & 1u) s[i] = '1';
    return s;
  };
  if (format == "json") {
    ordered_json doc{{"leaves", table.leaves()}, {"rows", ordered_json::array()}};
    for (std::size_t row = 0; row < table.rows(); ++row)
      doc["rows"].push_back({{"bits", bits(row)},
                             {"value", table.value(row) ? 1 : 0}});
    std::cout << doc.dump() << "\n";
    return;
  }
  std::cout << "leaves:";
  for (const std::string& leaf : table.leaves()) std::cout << " " << leaf;
  std::cout << "\n";
  for (std::size_t row = 0; row < table.rows(); ++row)
    std::cout << bits(row) << " -> " << (table.value(row) ? "1" : "0") << "\n";
}

void run_outcomes(const std::string& path, const std::optional<std::string>& active,
                  const std::string& format) {
  bowtie::model m = bowtie::load_model(path);
  ordered_json doc = ordered_json::array();
  std::ostringstream text;
  if (active) {
    const auto* b = std::get_if<bowtie::disruption_bowtie>(&m);
    if (!b)
      throw bowtie::error(bowtie::errc::illegal_kind,
                          "--active needs a bowtie (prevention plus consequence)");
    for (bowtie::node_id leaf : bowtie::end_to_end(*b, parse_labels(*active))) {
      const std::string& label = b->consequence.tree().label(leaf);
      doc.push_back({{"leaf", leaf.index()}, {"label", label}});
      text << label << "\n";
    }
  } else {
    const bowtie::consequence_tree& c = consequence_part(m);
    for (const bowtie::outcome& o : bowtie::enumerate_outcomes(c)) {
      ordered_json choice = ordered_json::object();
      for (auto [node, branch] : o.choice)
        choice[std::to_string(node.index())] = branch;
      doc.push_back({{"leaf", o.leaf.index()},
                     {"label", c.tree().label(o.leaf)},
                     {"choice", std::move(choice)}});
      text << c.tree().label(o.leaf) << "\n";
    }
  }
  if (format == "json")
    std::cout << doc.dump() << "\n";
  else
    std::cout << text.str();
}

void run_export_dot(const std::string& path, bool unicode,
                    const std::string& out_path) {
  bowtie::dot_style style;
  style.unicode = unicode;
  emit(out_path, bowtie::export_dot(bowtie::load_model(path), style));
}

void run_join_independent(const std::string& a_path, const std::string& b_path,
                          const std::string& out_path) {
  bowtie::prevention_tree joined =
      bowtie::independent_join(prevention_part(bowtie::load_model(a_path)),
                               prevention_part(bowtie::load_model(b_path)));
  emit(out_path, bowtie::serialize_model(std::move(joined)));
}

void run_join_conditional(const std::string& host_path,
                          const std::string& guest_path,
                          const std::string& target,
                          const std::string& out_path) {
  bowtie::prevention_tree joined =
      bowtie::conditional_join(prevention_part(bowtie::load_model(host_path)),
                               prevention_part(bowtie::load_model(guest_path)),
                               target);
  emit(out_path, bowtie::serialize_model(std::move(joined)));
}

void run_join_reinforcing(const std::string& source_path,
                          const std::string& target_path,
                          std::uint32_t inhibit, const std::string& choice,
                          const std::string& out_path,
                          const std::string& format) {
  bowtie::model source_model = bowtie::load_model(source_path);
  const auto* source = std::get_if<bowtie::disruption_bowtie>(&source_model);
  if (!source)
    throw bowtie::error(bowtie::errc::illegal_kind,
                        "reinforcing needs a bowtie source");
  bowtie::reinforcing_join_result joined = bowtie::reinforcing_join(
      *source, prevention_part(bowtie::load_model(target_path)),
      bowtie::node_id(inhibit), parse_choice(choice));
  write_file(out_path, bowtie::serialize_model(joined.tree));
  if (format == "json") {
    std::cout << ordered_json{{"reinforced", joined.reinforced.index()},
                              {"pruned", joined.pruned}}
                     .dump()
              << "\n";
    return;
  }
  for (const std::string& label : joined.pruned)
    std::cout << "pruned: " << label << "\n";
}

void run_join_antagonistic(const std::string& s_path, const std::string& a_path,
                           const std::string& event,
                           const std::string& out_path) {
  bowtie::model s = bowtie::load_model(s_path);
  bowtie::model a = bowtie::load_model(a_path);
  bowtie::consequence_tree joined =
      bowtie::antagonistic_join(consequence_part(s), consequence_part(a), event);
  emit(out_path, bowtie::serialize_model(std::move(joined)));
}

int run_check(std::uint64_t seed, std::size_t cases, const std::string& format) {
  std::vector<bowtie::semantics_report> reports =
      bowtie::check_join_laws(seed, cases);
  bool all_hold = true;
  if (format == "json") {
    ordered_json doc = ordered_json::array();
    for (const bowtie::semantics_report& r : reports) {
      ordered_json entry{{"case", r.case_index},
                         {"join", r.join_name},
                         {"property", r.property},
                         {"status", r.holds ? "holds" : "violated"}};
      if (!r.witness.empty()) entry["witness"] = r.witness;
      doc.push_back(std::move(entry));
      all_hold = all_hold && r.holds;
    }
    std::cout << doc.dump() << "\n";
  } else {
    for (const bowtie::semantics_report& r : reports) {
      std::cout << r.to_line() << "\n";
      all_hold = all_hold && r.holds;
    }
  }
  return all_hold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bowtie - safety-security bowtie models"};
  app.require_subcommand(1);
  int exit_code = 0;

  std::string model_path, other_path, out_path, format, active, target, event;
  std::string dsl_path, kind, choice;
  std::optional<std::string> opt_active;
  bool unicode = false;
  std::uint32_t inhibit = 0;
  std::uint64_t seed = 0;
  std::size_t cases = 100;

  CLI::App* validate = app.add_subcommand("validate", "Load and validate a model");
  validate->add_option("file", model_path, "model document")->required();
  validate->callback([&] { run_validate(model_path); });

  CLI::App* parse = app.add_subcommand("parse", "Compile a DSL expression file");
  parse->add_option("file", dsl_path, "DSL source file")->required();
  parse->add_option("-o,--output", out_path, "output model document");
  parse->add_option("--kind", kind, "force dpt or dct")
      ->check(CLI::IsMember({"dpt", "dct"}));
  parse->callback([&] { run_parse(dsl_path, out_path, kind); });

  CLI::App* eval = app.add_subcommand("eval", "Evaluate the structure function");
  eval->add_option("file", model_path, "model document")->required();
  eval->add_option("--active", active, "comma-separated active leaves");
  eval->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  eval->callback([&] { run_eval(model_path, active, format); });

  CLI::App* table = app.add_subcommand("truth-table", "Exhaustive evaluation");
  table->add_option("file", model_path, "model document")->required();
  table->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  table->callback([&] { run_truth_table(model_path, format); });

  CLI::App* outcomes = app.add_subcommand("outcomes", "Enumerate outcomes");
  outcomes->add_option("file", model_path, "model document")->required();
  outcomes->add_option("--active", opt_active,
                       "activation set; end-to-end through a bowtie");
  outcomes->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  outcomes->callback([&] { run_outcomes(model_path, opt_active, format); });

  CLI::App* dot = app.add_subcommand("export-dot", "Render Graphviz DOT");
  dot->add_option("file", model_path, "model document")->required();
  dot->add_flag("--unicode", unicode, "gate captions as set glyphs");
  dot->add_option("-o,--output", out_path, "output file");
  dot->callback([&] { run_export_dot(model_path, unicode, out_path); });

  CLI::App* join = app.add_subcommand("join", "Join two models");
  join->require_subcommand(1);

  CLI::App* independent = join->add_subcommand("independent", "OR of scenarios");
  independent->add_option("a", model_path, "first prevention tree")->required();
  independent->add_option("b", other_path, "second prevention tree")->required();
  independent->add_option("-o,--output", out_path, "output model document");
  independent->callback(
      [&] { run_join_independent(model_path, other_path, out_path); });

  CLI::App* conditional = join->add_subcommand(
      "conditional", "Expand a host leaf into the guest tree");
  conditional->add_option("host", model_path, "host prevention tree")->required();
  conditional->add_option("guest", other_path, "guest prevention tree")->required();
  conditional->add_option("--target", target, "host leaf to expand")->required();
  conditional->add_option("-o,--output", out_path, "output model document");
  conditional->callback(
      [&] { run_join_conditional(model_path, other_path, target, out_path); });

  CLI::App* reinforcing = join->add_subcommand(
      "reinforcing", "Replace an INHIBIT prevention with a response branch");
  reinforcing->add_option("source", model_path, "source bowtie")->required();
  reinforcing->add_option("target", other_path, "target prevention tree")
      ->required();
  reinforcing->add_option("--inhibit", inhibit, "INHIBIT node id in the target")
      ->required();
  reinforcing->add_option("--choice", choice, "consequence choice, node:branch list")
      ->required();
  reinforcing->add_option("-o,--output", out_path, "output model document")
      ->required();
  reinforcing->add_option("--format", format)
      ->check(CLI::IsMember({"text", "json"}));
  reinforcing->callback([&] {
    run_join_reinforcing(model_path, other_path, inhibit, choice, out_path,
                         format);
  });

  CLI::App* antagonistic = join->add_subcommand(
      "antagonistic", "Mutually exclusive responses under a CHOOSE split");
  antagonistic->add_option("s", model_path, "first consequence tree")->required();
  antagonistic->add_option("a", other_path, "second consequence tree")->required();
  antagonistic->add_option("--event", event, "antagonistic event label")
      ->required();
  antagonistic->add_option("-o,--output", out_path, "output model document");
  antagonistic->callback(
      [&] { run_join_antagonistic(model_path, other_path, event, out_path); });

  CLI::App* check = app.add_subcommand("check", "Randomised join-law audit");
  check->add_option("--seed", seed, "generator seed");
  check->add_option("--cases", cases, "number of cases")->required();
  check->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  check->callback([&] { exit_code = run_check(seed, cases, format); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const bowtie::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
