#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bowtie/consequence.hpp"
#include "bowtie/error.hpp"
#include "bowtie/joins.hpp"
#include "bowtie/prevention.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// Reference evaluator: plain recursion over labels, no memo table, no
/// shared code with evaluate().  Slow but obviously correct; used to
/// cross-check the production evaluator.
inline bool oracle_evaluate(const prevention_tree& t, const activation_set& a) {
  detail::active_leaf_indices(t.tree(), a);  // same precondition checks
  const structure_tree& tree = t.tree();
  auto recurse = [&](auto&& self, node_id v) -> bool {
    switch (tree.kind(v)) {
      case node_kind::leaf:
        return a.count(tree.label(v)) != 0;
      case node_kind::or_gate:
        for (const child_edge& e : tree.children(v))
          if (self(self, e.child)) return true;
        return false;
      case node_kind::and_gate:
        for (const child_edge& e : tree.children(v))
          if (!self(self, e.child)) return false;
        return true;
      case node_kind::inhibit:
        return self(self, tree.children(v)[0].child) &&
               !self(self, tree.children(v)[1].child);
      default:
        return false;  // unreachable for a prevention tree
    }
  };
  return recurse(recurse, tree.root());
}

/// Tuning knobs for the random model generators.  The defaults keep
/// models small enough for exhaustive checking.
struct generator_config {
  int max_depth = 4;
  int min_leaves = 2;
  int max_leaves = 6;
  double inhibit_probability = 0.25;
};

namespace detail {

inline std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

inline bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace detail

/// Draws a random prevention tree over leaves `<prefix>0..<prefix>k`.
/// Same seed, same tree: the construction consumes the generator in a
/// fixed order and never touches global state.
inline prevention_tree random_prevention_tree(std::mt19937_64& rng,
                                              const generator_config& cfg = {},
                                              const std::string& prefix = "e") {
  std::size_t span = static_cast<std::size_t>(cfg.max_leaves - cfg.min_leaves + 1);
  std::size_t leaves = static_cast<std::size_t>(cfg.min_leaves) +
                       detail::bounded(rng, span);
  tree_builder builder;
  std::vector<node_id> leaf_ids;
  for (std::size_t i = 0; i < leaves; ++i)
    leaf_ids.push_back(builder.add_node(prefix + std::to_string(i),
                                        node_kind::leaf));

  // Recursively split a contiguous run of leaves under a random gate.
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi,
                   int depth) -> node_id {
    std::size_t count = hi - lo;
    if (count == 1) return leaf_ids[lo];
    bool gate_budget = depth < cfg.max_depth;
    if (gate_budget && count >= 2 &&
        detail::chance(rng, cfg.inhibit_probability)) {
      std::size_t split = lo + 1 + detail::bounded(rng, count - 1);
      node_id gate = builder.add_node("INHIBIT", node_kind::inhibit);
      builder.add_edge(gate, self(self, lo, split, depth + 1));
      builder.add_edge(gate, self(self, split, hi, depth + 1));
      return gate;
    }
    bool conj = detail::chance(rng, 0.5);
    node_id gate = builder.add_node(conj ? "AND" : "OR",
                                    conj ? node_kind::and_gate
                                         : node_kind::or_gate);
    if (!gate_budget || count == 2) {
      for (std::size_t i = lo; i < hi; ++i)
        builder.add_edge(gate, leaf_ids[i]);
      return gate;
    }
    std::size_t arity = 2 + detail::bounded(rng, std::min<std::size_t>(count, 3) - 1);
    std::vector<std::size_t> cuts{lo, hi};
    while (cuts.size() < arity + 1) {
      std::size_t cut = lo + 1 + detail::bounded(rng, count - 1);
      if (std::find(cuts.begin(), cuts.end(), cut) == cuts.end())
        cuts.push_back(cut);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      builder.add_edge(gate, self(self, cuts[i], cuts[i + 1], depth + 1));
    return gate;
  };
  build(build, 0, leaves, 0);
  return prevention_tree(std::move(builder).build());
}

/// Draws a random consequence tree over outcomes `<prefix>0..<prefix>k`.
inline consequence_tree random_consequence_tree(std::mt19937_64& rng,
                                                const generator_config& cfg = {},
                                                const std::string& prefix = "o") {
  std::size_t span = static_cast<std::size_t>(cfg.max_leaves - cfg.min_leaves + 1);
  std::size_t leaves = static_cast<std::size_t>(cfg.min_leaves) +
                       detail::bounded(rng, span);
  tree_builder builder;
  std::vector<node_id> leaf_ids;
  for (std::size_t i = 0; i < leaves; ++i)
    leaf_ids.push_back(builder.add_node(prefix + std::to_string(i),
                                        node_kind::leaf));

  std::size_t splits = 0;
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi,
                   int depth) -> node_id {
    std::size_t count = hi - lo;
    if (count == 1) return leaf_ids[lo];
    // Distinct split labels: intermediate nodes name events of their own
    // when a trace through them feeds a reinforcing branch.
    node_id gate = builder.add_node(prefix + "c" + std::to_string(splits++),
                                    node_kind::choose);
    if (depth >= cfg.max_depth || count == 2) {
      for (std::size_t i = lo; i < hi; ++i)
        builder.add_edge(gate, leaf_ids[i]);
      return gate;
    }
    std::size_t arity = 2 + detail::bounded(rng, std::min<std::size_t>(count, 3) - 1);
    std::vector<std::size_t> cuts{lo, hi};
    while (cuts.size() < arity + 1) {
      std::size_t cut = lo + 1 + detail::bounded(rng, count - 1);
      if (std::find(cuts.begin(), cuts.end(), cut) == cuts.end())
        cuts.push_back(cut);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      builder.add_edge(gate, self(self, cuts[i], cuts[i + 1], depth + 1));
    return gate;
  };
  build(build, 0, leaves, 0);
  return consequence_tree(std::move(builder).build());
}

/// Draws a random bowtie with disjoint leaf alphabets on the two sides.
inline disruption_bowtie random_bowtie(std::mt19937_64& rng,
                                       const generator_config& cfg = {}) {
  prevention_tree p = random_prevention_tree(rng, cfg, "e");
  consequence_tree c = random_consequence_tree(rng, cfg, "o");
  return make_bowtie(std::move(p), std::move(c), "top");
}

namespace detail {

inline activation_set restrict_to(const activation_set& a,
                                  const std::vector<std::string>& labels) {
  activation_set out;
  for (const std::string& l : labels)
    if (a.count(l)) out.insert(l);
  return out;
}

inline std::string describe_activation(const activation_set& a) {
  std::string out = "{";
  for (auto it = a.begin(); it != a.end(); ++it) {
    if (it != a.begin()) out += ",";
    out += *it;
  }
  return out + "}";
}

}  // namespace detail

/// Exhaustively compares the joined tree against the composition of the
/// component semantics.  Returns a counterexample description, or
/// nothing when the law holds on all activation sets.
inline std::optional<std::string> verify_independent(const prevention_tree& a,
                                                     const prevention_tree& f,
                                                     const prevention_tree& joined) {
  std::vector<std::string> a_leaves = leaf_labels(a.tree());
  std::vector<std::string> f_leaves = leaf_labels(f.tree());
  truth_table table = make_truth_table(joined);
  for (std::size_t row = 0; row < table.rows(); ++row) {
    activation_set act = table.activation(row);
    bool expected = oracle_evaluate(a, detail::restrict_to(act, a_leaves)) ||
                    oracle_evaluate(f, detail::restrict_to(act, f_leaves));
    if (table.value(row) != expected)
      return detail::describe_activation(act);
  }
  return std::nullopt;
}

/// The conditional law: activating the guest's root event in the host is
/// the same as evaluating the guest on its share of the activation set.
inline std::optional<std::string> verify_conditional(const prevention_tree& host,
                                                     const prevention_tree& guest,
                                                     const std::string& target_leaf,
                                                     const prevention_tree& joined) {
  std::vector<std::string> guest_leaves = leaf_labels(guest.tree());
  std::vector<std::string> host_leaves = leaf_labels(host.tree());
  truth_table table = make_truth_table(joined);
  for (std::size_t row = 0; row < table.rows(); ++row) {
    activation_set act = table.activation(row);
    activation_set host_act = detail::restrict_to(act, host_leaves);
    host_act.erase(target_leaf);
    if (oracle_evaluate(guest, detail::restrict_to(act, guest_leaves)))
      host_act.insert(target_leaf);
    if (table.value(row) != oracle_evaluate(host, host_act))
      return detail::describe_activation(act);
  }
  return std::nullopt;
}

/// The reinforcing law: whenever the whole branch is active, the rewired
/// INHIBIT gate reads 0 no matter what else happens.
inline std::optional<std::string> verify_reinforcing(
    const reinforcing_join_result& joined,
    const std::vector<std::string>& branch) {
  truth_table table = make_truth_table(joined.tree);
  for (std::size_t row = 0; row < table.rows(); ++row) {
    activation_set act = table.activation(row);
    bool branch_active = std::all_of(branch.begin(), branch.end(),
                                     [&](const std::string& l) {
                                       return act.count(l) != 0;
                                     });
    if (!branch_active) continue;
    if (evaluate_at(joined.tree, joined.reinforced, act))
      return detail::describe_activation(act);
  }
  return std::nullopt;
}

/// The antagonistic law: every trace lands in exactly one side's outcome
/// set, and both sides stay reachable.
inline std::optional<std::string> verify_antagonistic(const consequence_tree& s,
                                                      const consequence_tree& a,
                                                      const consequence_tree& joined) {
  const structure_tree& jt = joined.tree();
  if (jt.kind(jt.root()) != node_kind::choose)
    return "root is not a CHOOSE split";
  node_id s_root = jt.children(jt.root())[0].child;
  node_id a_root = jt.children(jt.root())[1].child;

  auto descendants = [&](node_id from) {
    std::set<node_id> seen{from};
    std::vector<node_id> stack{from};
    while (!stack.empty()) {
      node_id v = stack.back();
      stack.pop_back();
      for (const child_edge& e : jt.children(v))
        if (seen.insert(e.child).second) stack.push_back(e.child);
    }
    return seen;
  };
  std::set<node_id> s_side = descendants(s_root);
  std::set<node_id> a_side = descendants(a_root);

  std::size_t s_hits = 0, a_hits = 0;
  for (const outcome& o : enumerate_outcomes(joined)) {
    bool in_s = s_side.count(o.leaf) != 0;
    bool in_a = a_side.count(o.leaf) != 0;
    if (in_s == in_a) return "outcome '" + jt.label(o.leaf) + "' is not on exactly one side";
    (in_s ? s_hits : a_hits) += 1;
  }
  if (s_hits == 0 || a_hits == 0) return "one side is unreachable";

  std::size_t s_outcomes = enumerate_outcomes(s).size();
  std::size_t a_outcomes = enumerate_outcomes(a).size();
  if (s_hits != s_outcomes || a_hits != a_outcomes)
    return "outcome counts changed across the join";
  return std::nullopt;
}

/// Checks that two outcomes can never co-occur: no root-to-outcome trace
/// passes through both labels.  Distinct CHOOSE branches are exclusive
/// by construction, so only a shared trace can defeat antagonism.
inline bool antagonism_certificate(const consequence_tree& t,
                                   const std::string& outcome_a,
                                   const std::string& outcome_b,
                                   std::size_t cap = default_choose_cap) {
  const structure_tree& tree = t.tree();
  bool seen_a = false, seen_b = false;
  for (node_id leaf : leaves_of(tree)) {
    seen_a = seen_a || tree.label(leaf) == outcome_a;
    seen_b = seen_b || tree.label(leaf) == outcome_b;
  }
  if (!seen_a) throw error(errc::unknown_label, "no outcome '" + outcome_a + "'");
  if (!seen_b) throw error(errc::unknown_label, "no outcome '" + outcome_b + "'");

  if (nodes_of_kind(tree, node_kind::choose).size() > cap)
    throw error(errc::too_many_choices,
                "too many CHOOSE nodes for exhaustive certification");

  bool compatible = false;
  std::vector<std::pair<node_id, int>> path;  // (node, hits so far on path)
  auto walk = [&](auto&& self, node_id v, int hits) -> void {
    const std::string& label = tree.label(v);
    if (label == outcome_a || label == outcome_b) ++hits;
    if (hits >= 2) {
      compatible = true;
      return;
    }
    if (tree.kind(v) == node_kind::leaf) return;
    for (const child_edge& e : tree.children(v)) {
      self(self, e.child, hits);
      if (compatible) return;
    }
  };
  walk(walk, tree.root(), 0);
  return !compatible;
}

/// One line of a join-law audit.
struct semantics_report {
  std::size_t case_index;
  std::string join_name;
  std::string property;
  bool holds;
  std::string witness;  // empty when the property holds

  std::string to_line() const {
    std::ostringstream out;
    out << "case=" << std::setw(4) << std::setfill('0') << case_index
        << " join=" << join_name << " property=" << property
        << " status=" << (holds ? "holds" : "violated");
    if (!witness.empty()) out << " witness=" << witness;
    return out.str();
  }
};

/// Randomised audit of all four join laws.  Deterministic for a given
/// seed: the same (seed, cases) pair always produces byte-identical
/// reports.  Every generated model is small enough for exhaustive
/// verification.
inline std::vector<semantics_report> check_join_laws(std::uint64_t seed,
                                                     std::size_t cases) {
  if (cases == 0)
    throw error(errc::invalid_count, "need at least one case");

  std::vector<semantics_report> reports;
  auto note = [&](std::size_t idx, const char* join, const char* property,
                  const std::optional<std::string>& witness) {
    reports.push_back({idx, join, property, !witness.has_value(),
                       witness.value_or("")});
  };

  for (std::size_t i = 0; i < cases; ++i) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + i + 1);
    generator_config cfg;

    // independent: two trees over disjoint alphabets under a fresh OR.
    prevention_tree a = random_prevention_tree(rng, cfg, "a");
    prevention_tree f = random_prevention_tree(rng, cfg, "b");
    prevention_tree ind = independent_join(a, f);
    note(i, "independent", "or-semantics", verify_independent(a, f, ind));

    // conditional: substitute a random host leaf by a fresh guest.
    prevention_tree guest = random_prevention_tree(rng, cfg, "g");
    std::vector<std::string> host_leaves = leaf_labels(a.tree());
    const std::string& target =
        host_leaves[detail::bounded(rng, host_leaves.size())];
    prevention_tree cond = conditional_join(a, guest, target);
    note(i, "conditional", "substitution-semantics",
         verify_conditional(a, guest, target, cond));

    // reinforcing: guarantee an INHIBIT by capping one if none was drawn.
    prevention_tree base = random_prevention_tree(rng, cfg, "r");
    prevention_tree target_tree = [&] {
      if (!nodes_of_kind(base.tree(), node_kind::inhibit).empty()) return base;
      tree_builder builder;
      std::vector<node_id> map = builder.append(base.tree());
      node_id prevention = builder.add_node("p", node_kind::leaf);
      node_id gate = builder.add_node("INHIBIT", node_kind::inhibit);
      builder.add_edge(gate, map[base.tree().root().index()]);
      builder.add_edge(gate, prevention);
      return prevention_tree(std::move(builder).build());
    }();
    std::vector<node_id> inhibits =
        nodes_of_kind(target_tree.tree(), node_kind::inhibit);
    node_id gate = inhibits[detail::bounded(rng, inhibits.size())];
    disruption_bowtie source = random_bowtie(rng, cfg);
    // a uniformly random total choice function
    consequence_choice choice;
    for (node_id v : nodes_of_kind(source.consequence.tree(), node_kind::choose))
      choice[v] = 1 + detail::bounded(
                          rng, source.consequence.tree().children(v).size());
    reinforcing_join_result rein =
        reinforcing_join(source, target_tree, gate, choice);
    note(i, "reinforcing", "suppression-semantics",
         verify_reinforcing(rein, reinforcing_branch(source.consequence, choice)));

    // antagonistic: mutually exclusive responses under a CHOOSE root.
    consequence_tree cs = random_consequence_tree(rng, cfg, "s");
    consequence_tree ca = random_consequence_tree(rng, cfg, "t");
    consequence_tree ant = antagonistic_join(cs, ca, "clash");
    note(i, "antagonistic", "exclusive-outcomes",
         verify_antagonistic(cs, ca, ant));
  }
  return reports;
}

}  // namespace bowtie
