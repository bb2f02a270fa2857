#pragma once

#include <sstream>
#include <string>
#include <variant>

#include "bowtie/io.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// Rendering options for Graphviz export.
struct dot_style {
  bool unicode = false;  ///< gate captions as set glyphs instead of names
};

namespace detail {

inline std::string dot_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string dot_caption(const structure_tree& tree, node_id v,
                               const dot_style& style) {
  switch (tree.kind(v)) {
    case node_kind::and_gate:
      return style.unicode ? "∩" : "AND";
    case node_kind::or_gate:
      return style.unicode ? "∪" : "OR";
    case node_kind::inhibit:
      return style.unicode ? "⬡" : "INHIBIT";
    default:
      return dot_escape(tree.label(v));
  }
}

inline const char* dot_shape(node_kind kind) {
  switch (kind) {
    case node_kind::leaf:    return "trapezium";
    case node_kind::and_gate: return "invhouse";
    case node_kind::or_gate:  return "invtriangle";
    case node_kind::inhibit: return "hexagon";
    case node_kind::choose:  return "diamond";
  }
  return "box";
}

/// Emits one tree's nodes and edges with the given node-name prefix.
/// Nodes go out in id order and edges in (parent, child index) order, so
/// the output is byte-stable for a given tree.
inline void dot_tree_body(std::ostream& out, const structure_tree& tree,
                          const std::string& prefix, const dot_style& style,
                          const std::string& indent) {
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    node_id v(i);
    out << indent << prefix << i << " [shape=" << dot_shape(tree.kind(v))
        << ", label=\"" << dot_caption(tree, v, style) << "\"];\n";
  }
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    node_id v(i);
    const auto& children = tree.children(v);
    for (std::size_t index = 0; index < children.size(); ++index) {
      out << indent << prefix << i << " -> " << prefix
          << children[index].child.index();
      std::string attrs;
      // The prevention arm of an INHIBIT hangs off dashed, matching the
      // usual side-entry drawing of the gate.
      if (tree.kind(v) == node_kind::inhibit && index == 1)
        attrs = "style=dashed";
      if (!children[index].tag.empty()) {
        if (!attrs.empty()) attrs += ", ";
        attrs += "label=\"" + dot_escape(children[index].tag) + "\"";
      }
      if (!attrs.empty()) out << " [" << attrs << "]";
      out << ";\n";
    }
  }
}

}  // namespace detail

/// Renders a single tree as a Graphviz digraph.
inline std::string export_dot(const structure_tree& tree,
                              const dot_style& style = {}) {
  std::ostringstream out;
  out << "digraph tree {\n  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n";
  detail::dot_tree_body(out, tree, "n", style, "  ");
  out << "}\n";
  return out.str();
}

inline std::string export_dot(const prevention_tree& t,
                              const dot_style& style = {}) {
  return export_dot(t.tree(), style);
}

inline std::string export_dot(const consequence_tree& t,
                              const dot_style& style = {}) {
  return export_dot(t.tree(), style);
}

/// Renders a bowtie: prevention cluster on the left, the top event as a
/// double circle in the middle, consequence cluster on the right.
inline std::string export_dot(const disruption_bowtie& b,
                              const dot_style& style = {}) {
  std::ostringstream out;
  out << "digraph bowtie {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n";
  out << "  subgraph cluster_prevention {\n    label=\"prevention\";\n";
  detail::dot_tree_body(out, b.prevention.tree(), "p", style, "    ");
  out << "  }\n";
  out << "  top [shape=doublecircle, label=\""
      << detail::dot_escape(b.top_event) << "\"];\n";
  out << "  subgraph cluster_consequence {\n    label=\"consequence\";\n";
  detail::dot_tree_body(out, b.consequence.tree(), "c", style, "    ");
  out << "  }\n";
  out << "  p" << b.prevention.tree().root().index() << " -> top;\n";
  out << "  top -> c" << b.consequence.tree().root().index() << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string export_dot(const model& m, const dot_style& style = {}) {
  return std::visit([&](const auto& part) { return export_dot(part, style); },
                    m);
}

}  // namespace bowtie
