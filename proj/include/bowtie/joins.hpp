#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bowtie/consequence.hpp"
#include "bowtie/error.hpp"
#include "bowtie/prevention.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// A disruption bowtie: prevention assessment on the left, consequence
/// assessment on the right, linked by the realised top event.
struct disruption_bowtie {
  prevention_tree prevention;
  consequence_tree consequence;
  std::string top_event;
};

inline disruption_bowtie make_bowtie(prevention_tree prevention,
                                     consequence_tree consequence,
                                     std::string top_event) {
  if (top_event.empty())
    throw error(errc::empty_label, "a bowtie needs a top-event label");
  return {std::move(prevention), std::move(consequence), std::move(top_event)};
}

/// Independent interplay: the two scenarios cause the disruption
/// separately, so their roots are joined under a fresh OR gate.  The
/// result satisfies f(A) = f_a(A restricted to a's leaves) OR
/// f_f(A restricted to f's leaves).
inline prevention_tree independent_join(const prevention_tree& a,
                                        const prevention_tree& f) {
  disjoint_union_result u = disjoint_union(a.tree(), f.tree());
  node_id root = u.fragment.add_node("OR", node_kind::or_gate);
  u.fragment.add_edge(root, u.first_root);
  u.fragment.add_edge(root, u.second_root);
  return prevention_tree(std::move(u.fragment).build());
}

/// Conditional interplay: a leaf of `host` turns out to be the root event
/// of `guest`, so the leaf is expanded in place into the whole guest
/// tree.  Every edge that pointed at the leaf now points at guest's root;
/// the leaf node itself is removed.
///
/// Guest leaf labels must not collide with the host's remaining leaves;
/// the target label itself may reappear inside the guest.
inline prevention_tree conditional_join(const prevention_tree& host,
                                        const prevention_tree& guest,
                                        const std::string& target_leaf) {
  const structure_tree& h = host.tree();
  std::optional<node_id> target = h.find_leaf(target_leaf);
  if (!target) {
    for (std::uint32_t i = 0; i < h.size(); ++i) {
      if (h.label(node_id(i)) == target_leaf)
        throw error(errc::not_a_leaf, "'" + target_leaf + "' is not a leaf");
    }
    throw error(errc::unknown_label, "host has no leaf '" + target_leaf + "'");
  }

  std::set<std::string> host_leaves;
  for (const std::string& label : leaf_labels(h)) {
    if (label != target_leaf) host_leaves.insert(label);
  }
  for (const std::string& label : leaf_labels(guest.tree())) {
    if (host_leaves.count(label))
      throw error(errc::label_collision,
                  "guest leaf '" + label + "' already names a host leaf");
  }

  tree_builder builder;
  // Host nodes minus the target leaf, then the guest.
  std::vector<std::optional<node_id>> host_map(h.size());
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    if (node_id(i) == *target) continue;
    host_map[i] = builder.add_node(h.label(node_id(i)), h.kind(node_id(i)));
  }
  std::vector<node_id> guest_map = builder.append(guest.tree());
  node_id guest_root = guest_map[guest.tree().root().index()];

  for (std::uint32_t i = 0; i < h.size(); ++i) {
    if (node_id(i) == *target) continue;
    for (const child_edge& edge : h.children(node_id(i))) {
      node_id to = edge.child == *target ? guest_root : *host_map[edge.child.index()];
      builder.add_edge(*host_map[i], to, edge.tag);
    }
  }
  return prevention_tree(std::move(builder).build());
}

/// The reinforcing branch: the event labels along the consequence trace,
/// skipping the root split node (unless the tree is a single outcome, in
/// which case that outcome is the branch).  Duplicate labels are dropped
/// so the branch stays proper.
inline std::vector<std::string> reinforcing_branch(const consequence_tree& source,
                                                   const consequence_choice& c) {
  std::vector<node_id> path;
  try {
    path = trace_path(source, c);
  } catch (const error& e) {
    throw error(errc::invalid_choice, e.what());
  }
  std::vector<std::string> labels;
  std::size_t start = path.size() == 1 ? 0 : 1;
  for (std::size_t i = start; i < path.size(); ++i) {
    const std::string& label = source.tree().label(path[i]);
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
      labels.push_back(label);
  }
  return labels;
}

struct reinforcing_join_result {
  prevention_tree tree;
  node_id reinforced;                ///< the rewired INHIBIT in the new tree
  std::vector<std::string> pruned;   ///< leaf events lost with the old prevention
};

/// Reinforcing interplay: a response branch of `source`'s consequence
/// tree suppresses a cause in `target`.  The branch (an AND of its
/// events, or a bare leaf for a single event) replaces the prevention
/// child of the given INHIBIT node; the INHIBIT gate itself supplies the
/// negation of the branch.  Whatever the displaced prevention subtree no
/// longer connects to the root is pruned and reported.
inline reinforcing_join_result reinforcing_join(const disruption_bowtie& source,
                                                const prevention_tree& target,
                                                node_id reinforced_inhibit,
                                                const consequence_choice& c) {
  const structure_tree& t = target.tree();
  if (!t.contains(reinforced_inhibit) ||
      t.kind(reinforced_inhibit) != node_kind::inhibit)
    throw error(errc::not_inhibit, "the reinforced node must be an INHIBIT gate");

  std::vector<std::string> branch = reinforcing_branch(source.consequence, c);

  // Rewire on an id-level copy: children of the INHIBIT become
  // [old first child, branch subtree].
  std::size_t n = t.size();
  std::vector<std::vector<child_edge>> children(n);
  for (std::uint32_t i = 0; i < n; ++i) children[i] = t.children(node_id(i));

  std::vector<std::pair<std::string, node_kind>> extra;  // appended nodes
  std::map<std::string, node_id> leaf_by_label;
  for (node_id leaf : leaves_of(t)) leaf_by_label.emplace(t.label(leaf), leaf);

  auto event_node = [&](const std::string& label) {
    if (auto it = leaf_by_label.find(label); it != leaf_by_label.end())
      return it->second;  // same event already in the target: share it
    extra.emplace_back(label, node_kind::leaf);
    node_id id(static_cast<std::uint32_t>(n + extra.size() - 1));
    children.emplace_back();
    leaf_by_label.emplace(label, id);
    return id;
  };

  node_id branch_root;
  if (branch.size() == 1) {
    branch_root = event_node(branch.front());
  } else {
    extra.emplace_back("AND", node_kind::and_gate);
    branch_root = node_id(static_cast<std::uint32_t>(n + extra.size() - 1));
    children.emplace_back();
    for (const std::string& label : branch) {
      // event_node may grow `children`; resolve it before indexing so the
      // element reference cannot dangle across a reallocation.
      node_id event = event_node(label);
      children[branch_root.index()].push_back({event, ""});
    }
  }
  children[reinforced_inhibit.index()][1] = {branch_root, ""};

  // Keep only what the root still reaches, in original id order.
  std::size_t total = n + extra.size();
  std::vector<bool> reachable(total, false);
  std::vector<node_id> stack{t.root()};
  reachable[t.root().index()] = true;
  while (!stack.empty()) {
    node_id v = stack.back();
    stack.pop_back();
    for (const child_edge& edge : children[v.index()]) {
      if (!reachable[edge.child.index()]) {
        reachable[edge.child.index()] = true;
        stack.push_back(edge.child);
      }
    }
  }

  tree_builder builder;
  std::vector<std::optional<node_id>> remap(total);
  auto original = [&](std::uint32_t i) -> std::pair<std::string, node_kind> {
    if (i < n) return {t.label(node_id(i)), t.kind(node_id(i))};
    return extra[i - n];
  };
  for (std::uint32_t i = 0; i < total; ++i) {
    if (!reachable[i]) continue;
    auto [label, kind] = original(i);
    remap[i] = builder.add_node(label, kind);
  }
  for (std::uint32_t i = 0; i < total; ++i) {
    if (!reachable[i]) continue;
    for (const child_edge& edge : children[i])
      builder.add_edge(*remap[i], *remap[edge.child.index()], edge.tag);
  }

  reinforcing_join_result result{prevention_tree(std::move(builder).build()),
                                 *remap[reinforced_inhibit.index()],
                                 {}};
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!reachable[i] && t.kind(node_id(i)) == node_kind::leaf)
      result.pruned.push_back(t.label(node_id(i)));
  }
  return result;
}

/// Antagonistic interplay: the two responses exclude each other, so a
/// fresh CHOOSE root (labelled with the antagonistic event) splits into
/// the safety consequence tree when the event occurs and the security
/// one when it does not.  The branch tags record which side each outcome
/// descends from; outcome labels of the second tree are primed until
/// unique when they collide with the first's.
inline consequence_tree antagonistic_join(const consequence_tree& s,
                                          const consequence_tree& a,
                                          const std::string& event) {
  if (event.empty())
    throw error(errc::empty_label, "the antagonistic event needs a label");

  std::vector<std::string> s_leaves = leaf_labels(s.tree());
  std::set<std::string> taken(s_leaves.begin(), s_leaves.end());

  tree_builder builder;
  std::vector<node_id> s_map, a_map;
  for (std::uint32_t i = 0; i < s.tree().size(); ++i)
    s_map.push_back(builder.add_node(s.tree().label(node_id(i)),
                                     s.tree().kind(node_id(i))));
  for (std::uint32_t i = 0; i < a.tree().size(); ++i) {
    std::string label = a.tree().label(node_id(i));
    if (a.tree().kind(node_id(i)) == node_kind::leaf) {
      while (taken.count(label)) label += "'";
      taken.insert(label);
    }
    a_map.push_back(builder.add_node(label, a.tree().kind(node_id(i))));
  }
  for (std::uint32_t i = 0; i < s.tree().size(); ++i) {
    for (const child_edge& edge : s.tree().children(node_id(i)))
      builder.add_edge(s_map[i], s_map[edge.child.index()], edge.tag);
  }
  for (std::uint32_t i = 0; i < a.tree().size(); ++i) {
    for (const child_edge& edge : a.tree().children(node_id(i)))
      builder.add_edge(a_map[i], a_map[edge.child.index()], edge.tag);
  }

  node_id root = builder.add_node(event, node_kind::choose);
  builder.add_edge(root, s_map[s.tree().root().index()], event + "-occurs");
  builder.add_edge(root, a_map[a.tree().root().index()], event + "-not-occurs");
  return consequence_tree(std::move(builder).build());
}

/// Links the two structure functions through the top event: when the
/// activation set realises the disruption, the reachable outcomes are
/// those of the consequence tree; otherwise nothing follows.
inline std::vector<node_id> end_to_end(const disruption_bowtie& b,
                                       const activation_set& a) {
  if (!evaluate(b.prevention, a)) return {};
  std::set<node_id> seen;
  std::vector<node_id> outcomes;
  for (const outcome& o : enumerate_outcomes(b.consequence)) {
    if (seen.insert(o.leaf).second) outcomes.push_back(o.leaf);
  }
  std::sort(outcomes.begin(), outcomes.end());
  return outcomes;
}

}  // namespace bowtie
