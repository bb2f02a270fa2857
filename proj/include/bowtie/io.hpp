#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bowtie/consequence.hpp"
#include "bowtie/error.hpp"
#include "bowtie/joins.hpp"
#include "bowtie/prevention.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// Anything a model document can hold.
using model = std::variant<prevention_tree, consequence_tree, disruption_bowtie>;

/// On-disk document version understood by this build.
inline constexpr const char* document_version = "1";

namespace detail {

using json = nlohmann::ordered_json;

[[noreturn]] inline void schema_fail(const std::string& path,
                                     const std::string& what) {
  throw error(errc::schema_error, path + ": " + what);
}

inline const json& field(const json& object, const std::string& path,
                         const char* name) {
  if (!object.is_object()) schema_fail(path, "expected an object");
  auto it = object.find(name);
  if (it == object.end()) schema_fail(path, std::string("missing '") + name + "'");
  return *it;
}

inline std::string string_field(const json& object, const std::string& path,
                                const char* name) {
  const json& value = field(object, path, name);
  if (!value.is_string())
    schema_fail(path + "." + name, "expected a string");
  return value.get<std::string>();
}

inline std::uint64_t index_field(const json& object, const std::string& path,
                                 const char* name) {
  const json& value = field(object, path, name);
  if (!value.is_number_unsigned())
    schema_fail(path + "." + name, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

/// Reads the {nodes, edges, root} triple shared by every document kind.
inline structure_tree tree_from_json(const json& doc, const std::string& path) {
  const json& nodes = field(doc, path, "nodes");
  if (!nodes.is_array() || nodes.empty())
    schema_fail(path + ".nodes", "expected a non-empty array");

  // Documents may list nodes in any order; ids are remapped densely by
  // ascending id, which keeps saved documents stable.
  std::vector<std::pair<std::uint64_t, std::size_t>> order;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string at = path + ".nodes[" + std::to_string(i) + "]";
    order.emplace_back(index_field(nodes[i], at, "id"), i);
  }
  std::sort(order.begin(), order.end());
  std::map<std::uint64_t, node_id> by_id;

  tree_builder builder;
  for (auto [doc_id, position] : order) {
    std::string at = path + ".nodes[" + std::to_string(position) + "]";
    if (by_id.count(doc_id)) schema_fail(at + ".id", "duplicate node id");
    std::string kind_name = string_field(nodes[position], at, "kind");
    std::optional<node_kind> kind = kind_from_string(kind_name);
    if (!kind) schema_fail(at + ".kind", "unknown kind '" + kind_name + "'");
    by_id.emplace(doc_id,
                  builder.add_node(string_field(nodes[position], at, "label"),
                                   *kind));
  }

  const json& edges = field(doc, path, "edges");
  if (!edges.is_array()) schema_fail(path + ".edges", "expected an array");
  // Edges may also arrive in any order; they are replayed per parent in
  // index order, and the indices of a parent must be 0..k-1.
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::size_t>>> fanout;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string at = path + ".edges[" + std::to_string(i) + "]";
    std::uint64_t parent = index_field(edges[i], at, "parent");
    std::uint64_t index = index_field(edges[i], at, "index");
    if (!by_id.count(parent)) schema_fail(at + ".parent", "unknown node id");
    if (!by_id.count(index_field(edges[i], at, "child")))
      schema_fail(at + ".child", "unknown node id");
    fanout[parent].emplace_back(index, i);
  }
  for (auto& [parent, slots] : fanout) {
    std::sort(slots.begin(), slots.end());
    for (std::size_t want = 0; want < slots.size(); ++want) {
      auto [index, position] = slots[want];
      std::string at = path + ".edges[" + std::to_string(position) + "]";
      if (index != want)
        schema_fail(at + ".index",
                    "child indices of a parent must cover 0..k-1");
      const json& edge = edges[position];
      std::string tag;
      if (auto it = edge.find("tag"); it != edge.end()) {
        if (!it->is_string()) schema_fail(at + ".tag", "expected a string");
        tag = it->get<std::string>();
      }
      builder.add_edge(by_id.at(parent),
                       by_id.at(index_field(edge, at, "child")), tag);
    }
  }

  std::uint64_t root = index_field(doc, path, "root");
  if (!by_id.count(root)) schema_fail(path + ".root", "unknown node id");
  structure_tree tree = std::move(builder).build();
  if (tree.root() != by_id.at(root))
    schema_fail(path + ".root", "root does not match the edge structure");
  return tree;
}

inline json tree_to_json(const structure_tree& tree) {
  json nodes = json::array();
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    nodes.push_back({{"id", i},
                     {"kind", std::string(to_string(tree.kind(node_id(i))))},
                     {"label", tree.label(node_id(i))}});
  }
  json edges = json::array();
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& children = tree.children(node_id(i));
    for (std::size_t index = 0; index < children.size(); ++index) {
      json edge = {{"parent", i},
                   {"index", index},
                   {"child", children[index].child.index()}};
      if (!children[index].tag.empty()) edge["tag"] = children[index].tag;
      edges.push_back(std::move(edge));
    }
  }
  return {{"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"root", tree.root().index()}};
}

}  // namespace detail

/// Parses a model document from JSON text.  Structural problems raise
/// SchemaError with the offending field path; the tree invariants are
/// enforced by the same validation as programmatic construction.
inline model parse_model(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw error(errc::schema_error, std::string("$: not valid JSON: ") + e.what());
  }

  std::string version = detail::string_field(doc, "$", "version");
  if (version != document_version)
    detail::schema_fail("$.version", "unsupported version '" + version + "'");

  std::string kind = detail::string_field(doc, "$", "kind");
  if (kind == "dpt")
    return prevention_tree(detail::tree_from_json(doc, "$"));
  if (kind == "dct")
    return consequence_tree(detail::tree_from_json(doc, "$"));
  if (kind == "bowtie") {
    std::string top_event = detail::string_field(doc, "$", "top_event");
    prevention_tree p(detail::tree_from_json(
        detail::field(doc, "$", "prevention"), "$.prevention"));
    consequence_tree c(detail::tree_from_json(
        detail::field(doc, "$", "consequence"), "$.consequence"));
    return make_bowtie(std::move(p), std::move(c), std::move(top_event));
  }
  detail::schema_fail("$.kind", "unknown document kind '" + kind + "'");
}

/// Serialises a model to its canonical JSON document (2-space indent,
/// stable key and element order, trailing newline).
inline std::string serialize_model(const model& m) {
  detail::json doc;
  doc["version"] = document_version;
  if (const auto* p = std::get_if<prevention_tree>(&m)) {
    doc["kind"] = "dpt";
    detail::json part = detail::tree_to_json(p->tree());
    doc.update(part);
  } else if (const auto* c = std::get_if<consequence_tree>(&m)) {
    doc["kind"] = "dct";
    detail::json part = detail::tree_to_json(c->tree());
    doc.update(part);
  } else {
    const auto& b = std::get<disruption_bowtie>(m);
    doc["kind"] = "bowtie";
    doc["top_event"] = b.top_event;
    doc["prevention"] = detail::tree_to_json(b.prevention.tree());
    doc["consequence"] = detail::tree_to_json(b.consequence.tree());
  }
  return doc.dump(2) + "\n";
}

/// Reads a model document from disk.
inline model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw error(errc::io_error, "cannot read '" + path + "'");
  return parse_model(buffer.str());
}

/// Writes a model document to disk.
inline void save_model(const model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io_error, "cannot open '" + path + "' for writing");
  out << serialize_model(m);
  out.flush();
  if (!out) throw error(errc::io_error, "cannot write '" + path + "'");
}

}  // namespace bowtie
