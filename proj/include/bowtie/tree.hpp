#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bowtie/error.hpp"

namespace bowtie {

/// Node types shared by every tree flavor.  LEAF/AND/OR/INHIBIT belong to
/// prevention trees, LEAF/CHOOSE to consequence trees; the carrier accepts
/// all five and the wrappers restrict.
enum class node_kind { leaf, and_gate, or_gate, inhibit, choose };

constexpr std::string_view to_string(node_kind kind) {
  switch (kind) {
    case node_kind::leaf: return "leaf";
    case node_kind::and_gate: return "and";
    case node_kind::or_gate: return "or";
    case node_kind::inhibit: return "inhibit";
    case node_kind::choose: return "choose";
  }
  return "?";
}

inline std::optional<node_kind> kind_from_string(std::string_view text) {
  if (text == "leaf") return node_kind::leaf;
  if (text == "and") return node_kind::and_gate;
  if (text == "or") return node_kind::or_gate;
  if (text == "inhibit") return node_kind::inhibit;
  if (text == "choose") return node_kind::choose;
  return std::nullopt;
}

/// Stable per-tree node handle.  Ids are dense indices assigned in
/// declaration order, so building the same declaration twice yields the
/// same ids.
class node_id {
 public:
  constexpr node_id() = default;
  explicit constexpr node_id(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }
  friend constexpr auto operator<=>(node_id, node_id) = default;

 private:
  std::uint32_t index_ = 0;
};

/// One parent->child edge.  The tag is rendering metadata (CHOOSE branch
/// labels, intermediate-event names); it has no weight in the Boolean
/// semantics.
struct child_edge {
  node_id child;
  std::string tag;

  friend bool operator==(const child_edge&, const child_edge&) = default;
};

class tree_builder;

/// The carrier for all tree flavors: a typed, rooted, connected DAG.
/// Instances are immutable after construction and safe to share across
/// threads; every operation on them is a pure function.
///
/// Invariants (enforced by tree_builder::build):
///  - edges form a connected DAG,
///  - exactly one node has no parent and it is the root,
///  - proper: no node lists the same child twice,
///  - a node is a LEAF exactly when it has no children,
///  - labels are nonempty and leaf labels are unique within the tree.
class structure_tree {
 public:
  std::size_t size() const { return nodes_.size(); }
  node_id root() const { return root_; }

  node_kind kind(node_id id) const { return at(id).kind; }
  const std::string& label(node_id id) const { return at(id).label; }
  const std::vector<child_edge>& children(node_id id) const {
    check(id);
    return children_[id.index()];
  }

  bool contains(node_id id) const { return id.index() < nodes_.size(); }

  /// Leaf node labelled `label`, if any.  Leaf labels are the cross-tree
  /// matching key, hence unique.
  std::optional<node_id> find_leaf(const std::string& label) const {
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].kind == node_kind::leaf && nodes_[i].label == label)
        return node_id(i);
    }
    return std::nullopt;
  }

 private:
  friend class tree_builder;

  struct node_data {
    node_kind kind;
    std::string label;
  };

  structure_tree(std::vector<node_data> nodes,
                 std::vector<std::vector<child_edge>> children, node_id root)
      : nodes_(std::move(nodes)), children_(std::move(children)), root_(root) {}

  const node_data& at(node_id id) const {
    check(id);
    return nodes_[id.index()];
  }

  void check(node_id id) const {
    if (id.index() >= nodes_.size())
      throw error(errc::unknown_node,
                  "node #" + std::to_string(id.index()) + " is not in this tree");
  }

  std::vector<node_data> nodes_;
  std::vector<std::vector<child_edge>> children_;
  node_id root_;
};

/// Accumulates nodes and edges, then validates the whole structure at
/// once.  There is no mutation API on finished trees; rebuild instead.
class tree_builder {
 public:
  node_id add_node(std::string label, node_kind kind) {
    nodes_.push_back({kind, std::move(label)});
    children_.emplace_back();
    return node_id(static_cast<std::uint32_t>(nodes_.size() - 1));
  }

  void add_edge(node_id parent, node_id child, std::string tag = {}) {
    check(parent);
    check(child);
    children_[parent.index()].push_back({child, std::move(tag)});
  }

  std::size_t node_count() const { return nodes_.size(); }
  const std::string& label(node_id id) const { return nodes_.at(id.index()).label; }
  node_kind kind(node_id id) const { return nodes_.at(id.index()).kind; }

  /// Copies every node and edge of `tree` into this builder and returns
  /// the id remapping (old index -> new id).
  std::vector<node_id> append(const structure_tree& tree) {
    std::vector<node_id> remap;
    remap.reserve(tree.size());
    for (std::uint32_t i = 0; i < tree.size(); ++i) {
      node_id old(i);
      remap.push_back(add_node(tree.label(old), tree.kind(old)));
    }
    for (std::uint32_t i = 0; i < tree.size(); ++i) {
      for (const child_edge& edge : tree.children(node_id(i)))
        add_edge(remap[i], remap[edge.child.index()], edge.tag);
    }
    return remap;
  }

  /// Validates all structural invariants and produces the immutable tree.
  /// Exactly one error is raised per violation kind; when several are
  /// present the checks run in the order listed in the exceptions below.
  structure_tree build() && {
    if (nodes_.empty()) throw error(errc::empty_tree, "a tree needs at least one node");

    for (const auto& node : nodes_) {
      if (node.label.empty()) throw error(errc::empty_label, "node labels must be nonempty");
    }

    // Properness: duplicate entries in one child sequence.
    for (std::size_t i = 0; i < children_.size(); ++i) {
      std::set<std::uint32_t> seen;
      for (const child_edge& edge : children_[i]) {
        if (!seen.insert(edge.child.index()).second)
          throw error(errc::duplicate_child,
                      "node '" + nodes_[i].label + "' lists child '" +
                          nodes_[edge.child.index()].label + "' twice");
      }
    }

    // Kind/arity consistency: leaf iff childless.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      bool is_leaf = nodes_[i].kind == node_kind::leaf;
      if (is_leaf && !children_[i].empty())
        throw error(errc::leaf_with_children,
                    "leaf '" + nodes_[i].label + "' has children");
      if (!is_leaf && children_[i].empty())
        throw error(errc::gate_without_children,
                    "gate '" + nodes_[i].label + "' has no children");
    }

    detect_cycles();
    check_connected();
    node_id root = unique_root();
    check_leaf_labels();

    return structure_tree(std::move(nodes_), std::move(children_), root);
  }

 private:
  void check(node_id id) const {
    if (id.index() >= nodes_.size())
      throw error(errc::unknown_node, "edge references undeclared node #" +
                                          std::to_string(id.index()));
  }

  void detect_cycles() const {
    enum class mark : std::uint8_t { fresh, open, done };
    std::vector<mark> marks(nodes_.size(), mark::fresh);
    // Iterative DFS; the stack holds (node, next child position).
    std::vector<std::pair<std::uint32_t, std::size_t>> stack;
    for (std::uint32_t start = 0; start < nodes_.size(); ++start) {
      if (marks[start] != mark::fresh) continue;
      stack.push_back({start, 0});
      marks[start] = mark::open;
      while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < children_[v].size()) {
          std::uint32_t u = children_[v][next++].child.index();
          if (marks[u] == mark::open)
            throw error(errc::cycle_detected,
                        "cycle through '" + nodes_[u].label + "'");
          if (marks[u] == mark::fresh) {
            marks[u] = mark::open;
            stack.push_back({u, 0});
          }
        } else {
          marks[v] = mark::done;
          stack.pop_back();
        }
      }
    }
  }

  void check_connected() const {
    // Weak connectivity over the undirected edge relation.
    std::vector<std::vector<std::uint32_t>> adjacent(nodes_.size());
    for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
      for (const child_edge& edge : children_[v]) {
        adjacent[v].push_back(edge.child.index());
        adjacent[edge.child.index()].push_back(v);
      }
    }
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::uint32_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      std::uint32_t v = queue.back();
      queue.pop_back();
      for (std::uint32_t u : adjacent[v]) {
        if (!seen[u]) {
          seen[u] = true;
          queue.push_back(u);
        }
      }
    }
    for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
      if (!seen[v])
        throw error(errc::disconnected,
                    "node '" + nodes_[v].label + "' is not connected to the rest");
    }
  }

  node_id unique_root() const {
    std::vector<bool> has_parent(nodes_.size(), false);
    for (const auto& edges : children_) {
      for (const child_edge& edge : edges) has_parent[edge.child.index()] = true;
    }
    std::optional<node_id> root;
    for (std::uint32_t v = 0; v < nodes_.size(); ++v) {
      if (has_parent[v]) continue;
      if (root)
        throw error(errc::multiple_roots, "both '" + nodes_[root->index()].label +
                                              "' and '" + nodes_[v].label +
                                              "' are parentless");
      root = node_id(v);
    }
    // Acyclicity guarantees at least one parentless node.
    return *root;
  }

  void check_leaf_labels() const {
    std::set<std::string_view> seen;
    for (const auto& node : nodes_) {
      if (node.kind != node_kind::leaf) continue;
      if (!seen.insert(node.label).second)
        throw error(errc::duplicate_leaf_label,
                    "leaf label '" + node.label + "' appears twice");
    }
  }

  std::vector<structure_tree::node_data> nodes_;
  std::vector<std::vector<child_edge>> children_;
};

/// Label-addressed construction: declare (label, kind) pairs, connect them
/// by label.  Labels used in edges must be unambiguous within the
/// declaration.  Ids are assigned in declaration order.
inline structure_tree build_tree(
    const std::vector<std::pair<std::string, node_kind>>& nodes,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  tree_builder builder;
  std::map<std::string, std::vector<node_id>> by_label;
  for (const auto& [label, kind] : nodes)
    by_label[label].push_back(builder.add_node(label, kind));

  auto resolve = [&](const std::string& label) {
    auto it = by_label.find(label);
    if (it == by_label.end())
      throw error(errc::unknown_label, "edge references undeclared label '" + label + "'");
    if (it->second.size() > 1)
      throw error(errc::ambiguous_label,
                  "label '" + label + "' names several nodes; edges need unique labels");
    return it->second.front();
  };
  for (const auto& [parent, child] : edges)
    builder.add_edge(resolve(parent), resolve(child));
  return std::move(builder).build();
}

/// All nodes of the given kind, in id order.
inline std::vector<node_id> nodes_of_kind(const structure_tree& tree, node_kind kind) {
  std::vector<node_id> result;
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    if (tree.kind(node_id(i)) == kind) result.push_back(node_id(i));
  }
  return result;
}

/// Exactly the childless nodes, in id order.
inline std::vector<node_id> leaves_of(const structure_tree& tree) {
  return nodes_of_kind(tree, node_kind::leaf);
}

/// Leaf labels in id order; the leaf half of the activation-set domain.
inline std::vector<std::string> leaf_labels(const structure_tree& tree) {
  std::vector<std::string> labels;
  for (node_id id : leaves_of(tree)) labels.push_back(tree.label(id));
  return labels;
}

/// Two trees' node sets relabelled apart into one builder.  The fragment
/// has two roots, so it is not yet a valid tree; join operations connect
/// the pieces and then build.
struct disjoint_union_result {
  tree_builder fragment;
  node_id first_root;
  node_id second_root;
  std::vector<node_id> first_map;   ///< old id index in `first` -> fragment id
  std::vector<node_id> second_map;  ///< old id index in `second` -> fragment id
};

inline disjoint_union_result disjoint_union(const structure_tree& first,
                                            const structure_tree& second) {
  disjoint_union_result result;
  result.first_map = result.fragment.append(first);
  result.second_map = result.fragment.append(second);
  result.first_root = result.first_map[first.root().index()];
  result.second_root = result.second_map[second.root().index()];
  return result;
}

/// Shape equality from the roots: node kinds, child order and leaf labels
/// must agree.  Gate labels and edge tags are rendering metadata and are
/// ignored.  Memoized over node pairs so shared subgraphs stay linear.
inline bool structurally_equal(const structure_tree& a, const structure_tree& b) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> memo;
  auto equal = [&](auto&& self, node_id va, node_id vb) -> bool {
    auto key = std::make_pair(va.index(), vb.index());
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool& result = memo[key];
    result = true;
    if (a.kind(va) != b.kind(vb)) return result = false;
    if (a.kind(va) == node_kind::leaf && a.label(va) != b.label(vb))
      return result = false;
    const auto& ca = a.children(va);
    const auto& cb = b.children(vb);
    if (ca.size() != cb.size()) return result = false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (!self(self, ca[i].child, cb[i].child)) return result = false;
    }
    return result;
  };
  return equal(equal, a.root(), b.root());
}

}  // namespace bowtie
