#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bowtie/error.hpp"
#include "bowtie/tree.hpp"

namespace bowtie {

/// Term-language AST mirroring the gate vocabulary.  `operands` is empty
/// for leaves; `tags` runs parallel to `operands` for CHOOSE and is empty
/// otherwise.
struct term {
  node_kind op = node_kind::leaf;
  std::string label;           ///< leaf name (leaves only)
  std::vector<term> operands;
  std::vector<std::string> tags;

  friend bool operator==(const term&, const term&) = default;

  static term leaf(std::string name) {
    term t;
    t.label = std::move(name);
    return t;
  }
  static term and_of(std::vector<term> operands) {
    return gate(node_kind::and_gate, std::move(operands));
  }
  static term or_of(std::vector<term> operands) {
    return gate(node_kind::or_gate, std::move(operands));
  }
  static term inhibit_of(term event, term prevention) {
    term t;
    t.op = node_kind::inhibit;
    t.operands.push_back(std::move(event));
    t.operands.push_back(std::move(prevention));
    return t;
  }
  static term choose_of(std::vector<std::pair<std::string, term>> branches) {
    if (branches.size() < 2)
      throw error(errc::choose_arity, "choose needs at least 2 branches");
    term t;
    t.op = node_kind::choose;
    for (auto& [tag, expr] : branches) {
      t.tags.push_back(tag.empty() ? std::to_string(t.tags.size() + 1)
                                   : std::move(tag));
      t.operands.push_back(std::move(expr));
    }
    return t;
  }

 private:
  static term gate(node_kind op, std::vector<term> operands) {
    if (operands.empty())
      throw error(errc::gate_without_children, "gate term needs operands");
    term t;
    t.op = op;
    t.operands = std::move(operands);
    return t;
  }
};

namespace detail {

enum class token_kind {
  ident,
  string,
  amp,
  pipe,
  lparen,
  rparen,
  lbrace,
  rbrace,
  comma,
  colon,
  kw_inhibit,
  kw_choose,
  end,
};

inline std::string_view token_name(token_kind k) {
  switch (k) {
    case token_kind::ident: return "identifier";
    case token_kind::string: return "quoted label";
    case token_kind::amp: return "'&'";
    case token_kind::pipe: return "'|'";
    case token_kind::lparen: return "'('";
    case token_kind::rparen: return "')'";
    case token_kind::lbrace: return "'{'";
    case token_kind::rbrace: return "'}'";
    case token_kind::comma: return "','";
    case token_kind::colon: return "':'";
    case token_kind::kw_inhibit: return "'inhibit'";
    case token_kind::kw_choose: return "'choose'";
    case token_kind::end: return "end of input";
  }
  return "?";
}

struct token {
  token_kind kind;
  std::string text;
  int line;
  int column;
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<token> tokenize(std::string_view src) {
  std::vector<token> tokens;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(c);
      ++i;
      continue;
    }
    int tok_line = line, tok_column = column;
    auto single = [&](token_kind k) {
      tokens.push_back({k, std::string(1, c), tok_line, tok_column});
      advance(c);
      ++i;
    };
    switch (c) {
      case '&': single(token_kind::amp); continue;
      case '|': single(token_kind::pipe); continue;
      case '(': single(token_kind::lparen); continue;
      case ')': single(token_kind::rparen); continue;
      case '{': single(token_kind::lbrace); continue;
      case '}': single(token_kind::rbrace); continue;
      case ',': single(token_kind::comma); continue;
      case ':': single(token_kind::colon); continue;
      default: break;
    }
    if (c == '"') {
      advance(c);
      ++i;
      std::string text;
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance(d);
          ++i;
          closed = true;
          break;
        }
        if (d == '\\' && i + 1 < src.size() &&
            (src[i + 1] == '"' || src[i + 1] == '\\')) {
          advance(d);
          ++i;
          d = src[i];
        }
        text.push_back(d);
        advance(d);
        ++i;
      }
      if (!closed)
        throw parse_error(errc::syntax_error, "unterminated quoted label",
                          tok_line, tok_column);
      tokens.push_back({token_kind::string, std::move(text), tok_line, tok_column});
      continue;
    }
    if (ident_start(c)) {
      std::string text;
      while (i < src.size() && ident_char(src[i])) {
        text.push_back(src[i]);
        advance(src[i]);
        ++i;
      }
      token_kind kind = token_kind::ident;
      if (text == "inhibit") kind = token_kind::kw_inhibit;
      if (text == "choose") kind = token_kind::kw_choose;
      tokens.push_back({kind, std::move(text), tok_line, tok_column});
      continue;
    }
    throw parse_error(errc::syntax_error,
                      "unexpected character '" + std::string(1, c) + "'",
                      tok_line, tok_column);
  }
  tokens.push_back({token_kind::end, "", line, column});
  return tokens;
}

class parser {
 public:
  explicit parser(std::string_view src) : tokens_(tokenize(src)) {}

  term parse_all() {
    if (peek().kind == token_kind::end)
      throw parse_error(errc::empty_input, "nothing to parse", 1, 1);
    term t = parse_or();
    if (peek().kind == token_kind::rparen)
      throw parse_error(errc::unbalanced_paren, "unmatched ')'", peek().line,
                        peek().column);
    expect(token_kind::end, "end of input");
    return t;
  }

 private:
  term parse_or() {
    std::vector<term> operands{parse_and()};
    while (peek().kind == token_kind::pipe) {
      next();
      operands.push_back(parse_and());
    }
    return operands.size() == 1 ? std::move(operands.front())
                                : term::or_of(std::move(operands));
  }

  term parse_and() {
    std::vector<term> operands{parse_atom()};
    while (peek().kind == token_kind::amp) {
      next();
      operands.push_back(parse_atom());
    }
    return operands.size() == 1 ? std::move(operands.front())
                                : term::and_of(std::move(operands));
  }

  term parse_atom() {
    const token& t = peek();
    switch (t.kind) {
      case token_kind::ident:
      case token_kind::string:
        return term::leaf(next().text);
      case token_kind::lparen: {
        next();
        term inner = parse_or();
        if (peek().kind == token_kind::end)
          throw parse_error(errc::unbalanced_paren, "missing ')'", peek().line,
                            peek().column);
        expect(token_kind::rparen, "')'");
        return inner;
      }
      case token_kind::kw_inhibit: {
        next();
        expect(token_kind::lparen, "'(' after inhibit");
        term event = parse_or();
        expect(token_kind::comma, "',' between the two inhibit operands");
        term prevention = parse_or();
        expect(token_kind::rparen, "')'");
        return term::inhibit_of(std::move(event), std::move(prevention));
      }
      case token_kind::kw_choose: {
        next();
        expect(token_kind::lbrace, "'{' after choose");
        std::vector<std::pair<std::string, term>> branches;
        for (;;) {
          branches.push_back(parse_branch());
          if (peek().kind != token_kind::comma) break;
          next();
        }
        expect(token_kind::rbrace, "'}'");
        if (branches.size() < 2)
          throw parse_error(errc::syntax_error, "choose needs at least 2 branches",
                            t.line, t.column);
        return term::choose_of(std::move(branches));
      }
      default:
        throw parse_error(errc::syntax_error,
                          "expected identifier, quoted label, '(', 'inhibit' or "
                          "'choose'; got " +
                              std::string(token_name(t.kind)),
                          t.line, t.column);
    }
  }

  std::pair<std::string, term> parse_branch() {
    // A leading IDENT/STRING followed by ':' is a branch tag.
    if ((peek().kind == token_kind::ident || peek().kind == token_kind::string) &&
        peek(1).kind == token_kind::colon) {
      std::string tag = next().text;
      next();  // ':'
      return {std::move(tag), parse_or()};
    }
    return {std::string(), parse_or()};
  }

  const token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const token& next() { return tokens_[pos_++]; }
  void expect(token_kind kind, std::string_view what) {
    const token& t = peek();
    if (t.kind != kind)
      throw parse_error(errc::syntax_error,
                        "expected " + std::string(what) + "; got " +
                            std::string(token_name(t.kind)),
                        t.line, t.column);
    next();
  }

  std::vector<token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the ASCII term language:
///   atoms are identifiers or double-quoted labels,
///   `&` is AND, `|` is OR (with `&` binding tighter),
///   `inhibit(x, y)` and `choose{tag: e, ...}` are the prefix forms,
///   parentheses group.  Whitespace-insensitive.
inline term parse(std::string_view src) { return detail::parser(src).parse_all(); }

/// Output typography.  ASCII is the canonical re-parseable form; glyphs
/// reproduce the documentation notation (infix hexagon for INHIBIT) and
/// print labels bare, so glyph output is for reading, not re-parsing.
struct print_style {
  bool glyphs = false;
};

namespace detail {

inline bool needs_quotes(const std::string& label) {
  if (label.empty() || !ident_start(label[0])) return true;
  for (char c : label) {
    if (!ident_char(c)) return true;
  }
  return label == "inhibit" || label == "choose";
}

inline std::string quoted(const std::string& label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string print_label(const std::string& label, const print_style& style) {
  if (style.glyphs) return label;
  return needs_quotes(label) ? quoted(label) : label;
}

inline std::string print_rec(const term& t, const print_style& style);

/// ASCII mode wraps an infix operand when required for re-parsing: OR
/// under anything, and nested AND/OR chains (the parser flattens `a & b
/// & c`, so explicit nesting keeps its parentheses).  Glyph mode wraps
/// every compound operand, matching the reading typography.
inline std::string print_operand(const term& operand, node_kind parent,
                                 const print_style& style) {
  std::string text = print_rec(operand, style);
  bool wrap;
  if (style.glyphs) {
    wrap = operand.op != node_kind::leaf;
  } else if (parent == node_kind::and_gate) {
    wrap = operand.op == node_kind::or_gate || operand.op == node_kind::and_gate;
  } else {  // or parent
    wrap = operand.op == node_kind::or_gate;
  }
  return wrap ? "(" + text + ")" : text;
}

inline std::string print_rec(const term& t, const print_style& style) {
  switch (t.op) {
    case node_kind::leaf:
      return print_label(t.label, style);
    case node_kind::and_gate:
    case node_kind::or_gate: {
      const char* ascii = t.op == node_kind::and_gate ? " & " : " | ";
      const char* glyph = t.op == node_kind::and_gate ? " ∩ " : " ∪ ";
      std::string out;
      for (std::size_t i = 0; i < t.operands.size(); ++i) {
        if (i > 0) out += style.glyphs ? glyph : ascii;
        out += print_operand(t.operands[i], t.op, style);
      }
      return out;
    }
    case node_kind::inhibit: {
      if (style.glyphs) {
        return print_operand(t.operands[0], t.op, style) + " ⬡ " +
               print_operand(t.operands[1], t.op, style);
      }
      return "inhibit(" + print_rec(t.operands[0], style) + ", " +
             print_rec(t.operands[1], style) + ")";
    }
    case node_kind::choose: {
      std::string out = "choose{";
      for (std::size_t i = 0; i < t.operands.size(); ++i) {
        if (i > 0) out += ", ";
        if (t.tags[i] != std::to_string(i + 1))
          out += print_label(t.tags[i], style) + ": ";
        out += print_rec(t.operands[i], style);
      }
      return out + "}";
    }
  }
  return {};
}

}  // namespace detail

/// Canonical text for a term: minimal parentheses in ASCII mode; the
/// fully parenthesised reading typography in glyph mode, where the whole
/// term is additionally wrapped when the root is AND or INHIBIT.
inline std::string print_term(const term& t, const print_style& style = {}) {
  std::string out = detail::print_rec(t, style);
  if (style.glyphs &&
      (t.op == node_kind::and_gate || t.op == node_kind::inhibit)) {
    return "(" + out + ")";
  }
  return out;
}

/// Interprets a term as a structure tree.  Gate nodes are fresh per
/// constructor occurrence; leaves are deduplicated by label, which is how
/// one term expresses input sharing.  A gate listing the same leaf twice
/// still fails properness.
inline structure_tree to_tree(const term& t) {
  tree_builder builder;
  std::map<std::string, node_id> leaves;
  auto lower = [&](auto&& self, const term& node) -> node_id {
    if (node.op == node_kind::leaf) {
      auto it = leaves.find(node.label);
      if (it != leaves.end()) return it->second;
      node_id id = builder.add_node(node.label, node_kind::leaf);
      leaves.emplace(node.label, id);
      return id;
    }
    std::string label(to_string(node.op));
    for (char& c : label) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    node_id id = builder.add_node(label, node.op);
    for (std::size_t i = 0; i < node.operands.size(); ++i) {
      node_id child = self(self, node.operands[i]);
      builder.add_edge(id, child, node.op == node_kind::choose ? node.tags[i] : "");
    }
    return id;
  };
  lower(lower, t);
  return std::move(builder).build();
}

/// Reads a tree back into a term.  Shared gates are duplicated (terms
/// cannot express gate sharing); shared leaves become repeated labels,
/// which to_tree re-shares, so to_tree(term_of(t)) reproduces any tree
/// whose sharing is leaf-only.
inline term term_of(const structure_tree& tree, node_id from) {
  if (tree.kind(from) == node_kind::leaf) return term::leaf(tree.label(from));
  std::vector<term> operands;
  std::vector<std::pair<std::string, term>> branches;
  std::size_t position = 1;
  for (const child_edge& edge : tree.children(from)) {
    term operand = term_of(tree, edge.child);
    if (tree.kind(from) == node_kind::choose) {
      branches.emplace_back(
          edge.tag.empty() ? std::to_string(position) : edge.tag,
          std::move(operand));
    } else {
      operands.push_back(std::move(operand));
    }
    ++position;
  }
  switch (tree.kind(from)) {
    case node_kind::and_gate: return term::and_of(std::move(operands));
    case node_kind::or_gate: return term::or_of(std::move(operands));
    case node_kind::inhibit:
      return term::inhibit_of(std::move(operands[0]), std::move(operands[1]));
    case node_kind::choose: return term::choose_of(std::move(branches));
    default: return term::leaf(tree.label(from));
  }
}

inline term term_of(const structure_tree& tree) { return term_of(tree, tree.root()); }

}  // namespace bowtie
