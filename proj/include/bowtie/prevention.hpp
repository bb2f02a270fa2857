#pragma once

#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bowtie/error.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// The subset of leaf events deemed to have occurred, named by label.
using activation_set = std::set<std::string>;

/// Exhaustive operations refuse trees with more leaves than this unless
/// the BOWTIE_LEAF_CAP environment variable raises the cap.
inline std::size_t leaf_cap() {
  if (const char* env = std::getenv("BOWTIE_LEAF_CAP")) {
    long value = std::atol(env);
    if (value > 0) return static_cast<std::size_t>(value);
  }
  return 20;
}

/// A disruption prevention tree: LEAF/AND/OR gates plus binary INHIBIT,
/// whose second child is the inhibiting (prevention) condition.
class prevention_tree {
 public:
  /// Wraps a validated structure tree after checking the kind restriction
  /// (no CHOOSE) and INHIBIT arity (exactly two children).
  explicit prevention_tree(structure_tree tree) : tree_(std::move(tree)) {
    for (std::uint32_t i = 0; i < tree_.size(); ++i) {
      node_id id(i);
      switch (tree_.kind(id)) {
        case node_kind::choose:
          throw error(errc::illegal_kind,
                      "CHOOSE node '" + tree_.label(id) + "' in a prevention tree");
        case node_kind::inhibit:
          if (tree_.children(id).size() != 2)
            throw error(errc::inhibit_arity,
                        "INHIBIT '" + tree_.label(id) + "' has " +
                            std::to_string(tree_.children(id).size()) +
                            " children, needs exactly 2");
          break;
        default:
          break;
      }
    }
  }

  const structure_tree& tree() const { return tree_; }

 private:
  structure_tree tree_;
};

inline prevention_tree as_prevention_tree(structure_tree tree) {
  return prevention_tree(std::move(tree));
}

namespace detail {

/// Maps activation labels to leaf ids, rejecting names that are not
/// leaves of the tree.
inline std::set<std::uint32_t> active_leaf_indices(const structure_tree& tree,
                                                   const activation_set& active) {
  std::set<std::uint32_t> indices;
  for (const std::string& label : active) {
    auto leaf = tree.find_leaf(label);
    if (!leaf)
      throw error(errc::unknown_leaf, "'" + label + "' is not a leaf of this tree");
    indices.insert(leaf->index());
  }
  return indices;
}

/// Structure-function recursion with one memo slot per node, so shared
/// subgraphs are evaluated once.
inline bool evaluate_memo(const structure_tree& tree, node_id v,
                          const std::set<std::uint32_t>& active,
                          std::vector<signed char>& memo) {
  signed char& slot = memo[v.index()];
  if (slot >= 0) return slot != 0;
  bool value = false;
  const auto& children = tree.children(v);
  switch (tree.kind(v)) {
    case node_kind::leaf:
      value = active.count(v.index()) != 0;
      break;
    case node_kind::or_gate:
      for (const child_edge& edge : children) {
        if (evaluate_memo(tree, edge.child, active, memo)) {
          value = true;
          break;
        }
      }
      break;
    case node_kind::and_gate:
      value = true;
      for (const child_edge& edge : children) {
        if (!evaluate_memo(tree, edge.child, active, memo)) {
          value = false;
          break;
        }
      }
      break;
    case node_kind::inhibit:
      value = evaluate_memo(tree, children[0].child, active, memo) &&
              !evaluate_memo(tree, children[1].child, active, memo);
      break;
    case node_kind::choose:
      throw error(errc::illegal_kind, "CHOOSE has no Boolean value");
  }
  slot = value ? 1 : 0;
  return value;
}

}  // namespace detail

/// Structure function rooted at `v`: OR is any child, AND is all children,
/// INHIBIT is first child on and prevention child off, LEAF is membership
/// in the activation set.
inline bool evaluate_at(const prevention_tree& t, node_id v, const activation_set& a) {
  const structure_tree& tree = t.tree();
  if (!tree.contains(v))
    throw error(errc::unknown_node, "node #" + std::to_string(v.index()) + " not in tree");
  auto active = detail::active_leaf_indices(tree, a);
  std::vector<signed char> memo(tree.size(), -1);
  return detail::evaluate_memo(tree, v, active, memo);
}

/// f_T(A): the structure function at the root.
inline bool evaluate(const prevention_tree& t, const activation_set& a) {
  return evaluate_at(t, t.tree().root(), a);
}

/// All 2^n activation rows of a prevention tree, in canonical subset
/// order: leaves are ordered by id, row k activates leaf i iff bit i of k
/// is set.
class truth_table {
 public:
  truth_table(std::vector<std::string> leaves, std::vector<bool> values)
      : leaves_(std::move(leaves)), values_(std::move(values)) {}

  std::size_t rows() const { return values_.size(); }
  const std::vector<std::string>& leaves() const { return leaves_; }
  bool value(std::size_t row) const { return values_.at(row); }

  activation_set activation(std::size_t row) const {
    activation_set set;
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      if (row >> i & 1u) set.insert(leaves_[i]);
    }
    return set;
  }

 private:
  std::vector<std::string> leaves_;
  std::vector<bool> values_;
};

inline truth_table make_truth_table(const prevention_tree& t,
                                    std::size_t cap = leaf_cap()) {
  std::vector<std::string> leaves = leaf_labels(t.tree());
  if (leaves.size() > cap)
    throw error(errc::too_many_leaves, std::to_string(leaves.size()) +
                                           " leaves exceed the cap of " +
                                           std::to_string(cap));
  const structure_tree& tree = t.tree();
  std::vector<std::uint32_t> leaf_ids;
  for (node_id id : leaves_of(tree)) leaf_ids.push_back(id.index());

  std::vector<bool> values;
  values.reserve(std::size_t{1} << leaves.size());
  for (std::size_t row = 0; row < (std::size_t{1} << leaves.size()); ++row) {
    std::set<std::uint32_t> active;
    for (std::size_t i = 0; i < leaf_ids.size(); ++i) {
      if (row >> i & 1u) active.insert(leaf_ids[i]);
    }
    std::vector<signed char> memo(tree.size(), -1);
    values.push_back(detail::evaluate_memo(tree, tree.root(), active, memo));
  }
  return truth_table(std::move(leaves), std::move(values));
}

/// An inclusion-minimal activation pattern driving the root to 1.
/// INHIBIT makes the structure function non-monotone, so the witness also
/// records which leaves must stay inactive: adding any one of
/// `required_absent` to `active` flips the root back to 0.
struct minimal_disruption_set {
  activation_set active;
  activation_set required_absent;

  friend bool operator==(const minimal_disruption_set&,
                         const minimal_disruption_set&) = default;
};

inline std::vector<minimal_disruption_set> minimal_disruption_sets(
    const prevention_tree& t, std::size_t cap = leaf_cap()) {
  truth_table table = make_truth_table(t, cap);
  std::vector<std::size_t> satisfying;
  for (std::size_t row = 0; row < table.rows(); ++row) {
    if (table.value(row)) satisfying.push_back(row);
  }

  std::vector<minimal_disruption_set> result;
  for (std::size_t row : satisfying) {
    bool minimal = true;
    for (std::size_t other : satisfying) {
      if (other != row && (other & row) == other) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    minimal_disruption_set entry;
    entry.active = table.activation(row);
    for (std::size_t i = 0; i < table.leaves().size(); ++i) {
      if (row >> i & 1u) continue;
      if (!table.value(row | (std::size_t{1} << i)))
        entry.required_absent.insert(table.leaves()[i]);
    }
    result.push_back(std::move(entry));
  }
  return result;
}

}  // namespace bowtie
