#pragma once

#include <map>
#include <string>
#include <vector>

#include "bowtie/error.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// Selects the 1-based outgoing branch at each CHOOSE node.  Must be
/// total over the tree's CHOOSE nodes; nodes the trace never reaches are
/// still assigned.
using consequence_choice = std::map<node_id, std::size_t>;

/// Brute-force outcome enumeration refuses trees with more CHOOSE nodes
/// than this.
inline constexpr std::size_t default_choose_cap = 16;

/// A disruption consequence tree (event tree): LEAF outcomes and CHOOSE
/// branch points with at least two branches.
class consequence_tree {
 public:
  explicit consequence_tree(structure_tree tree) : tree_(std::move(tree)) {
    for (std::uint32_t i = 0; i < tree_.size(); ++i) {
      node_id id(i);
      switch (tree_.kind(id)) {
        case node_kind::leaf:
          break;
        case node_kind::choose:
          if (tree_.children(id).size() < 2)
            throw error(errc::choose_arity,
                        "CHOOSE '" + tree_.label(id) + "' needs at least 2 branches");
          break;
        default:
          throw error(errc::illegal_kind, std::string(to_string(tree_.kind(id))) +
                                              " node '" + tree_.label(id) +
                                              "' in a consequence tree");
      }
    }
  }

  const structure_tree& tree() const { return tree_; }

 private:
  structure_tree tree_;
};

inline consequence_tree as_consequence_tree(structure_tree tree) {
  return consequence_tree(std::move(tree));
}

/// The root-to-outcome node sequence selected by `c`.  Terminates because
/// the tree is acyclic and every CHOOSE is assigned.
inline std::vector<node_id> trace_path(const consequence_tree& t,
                                       const consequence_choice& c) {
  const structure_tree& tree = t.tree();
  std::vector<node_id> path;
  node_id v = tree.root();
  for (;;) {
    path.push_back(v);
    if (tree.kind(v) == node_kind::leaf) return path;
    auto it = c.find(v);
    if (it == c.end())
      throw error(errc::missing_choice,
                  "no choice assigned to CHOOSE '" + tree.label(v) + "'");
    std::size_t n = it->second;
    const auto& children = tree.children(v);
    if (n < 1 || n > children.size())
      throw error(errc::index_out_of_range,
                  "choice " + std::to_string(n) + " at '" + tree.label(v) +
                      "' is outside 1.." + std::to_string(children.size()));
    v = children[n - 1].child;
  }
}

/// f_T(C): the unique outcome leaf reached under `c`.
inline node_id trace(const consequence_tree& t, const consequence_choice& c) {
  return trace_path(t, c).back();
}

/// One reachable outcome with a canonical representative choice:
/// CHOOSE nodes the trace never visits are assigned branch 1.
struct outcome {
  consequence_choice choice;
  node_id leaf;
};

/// Every consequence function up to reachable-choice projection, paired
/// with its traced outcome.  Two total choices that agree on the CHOOSE
/// nodes actually visited trace the same path and are reported once.
/// Entries are in depth-first branch order, so the output is
/// deterministic.
inline std::vector<outcome> enumerate_outcomes(const consequence_tree& t,
                                               std::size_t cap = default_choose_cap) {
  const structure_tree& tree = t.tree();
  std::vector<node_id> choose_nodes = nodes_of_kind(tree, node_kind::choose);
  if (choose_nodes.size() > cap)
    throw error(errc::too_many_choices, std::to_string(choose_nodes.size()) +
                                            " CHOOSE nodes exceed the cap of " +
                                            std::to_string(cap));

  std::vector<outcome> outcomes;
  consequence_choice current;
  auto walk = [&](auto&& self, node_id v) -> void {
    if (tree.kind(v) == node_kind::leaf) {
      consequence_choice total = current;
      for (node_id c : choose_nodes) total.emplace(c, 1);
      outcomes.push_back({std::move(total), v});
      return;
    }
    const auto& children = tree.children(v);
    for (std::size_t n = 1; n <= children.size(); ++n) {
      current[v] = n;
      self(self, children[n - 1].child);
    }
    current.erase(v);
  };
  walk(walk, tree.root());
  return outcomes;
}

}  // namespace bowtie
