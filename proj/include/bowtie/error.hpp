#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bowtie {

/// Every failure mode in the library, one code per contract violation.
enum class errc {
  // structural validation
  empty_tree,
  cycle_detected,
  multiple_roots,
  disconnected,
  duplicate_child,
  leaf_with_children,
  gate_without_children,
  duplicate_leaf_label,
  empty_label,
  unknown_label,
  ambiguous_label,
  // kind restrictions
  illegal_kind,
  inhibit_arity,
  choose_arity,
  // evaluation
  unknown_leaf,
  unknown_node,
  too_many_leaves,
  too_many_choices,
  index_out_of_range,
  missing_choice,
  // joins
  not_a_leaf,
  label_collision,
  not_inhibit,
  invalid_choice,
  // dsl
  syntax_error,
  unbalanced_paren,
  empty_input,
  // io
  io_error,
  schema_error,
  // analysis
  invalid_count,
};

constexpr std::string_view to_string(errc code) {
  switch (code) {
    case errc::empty_tree: return "EmptyTree";
    case errc::cycle_detected: return "CycleDetected";
    case errc::multiple_roots: return "MultipleRoots";
    case errc::disconnected: return "Disconnected";
    case errc::duplicate_child: return "DuplicateChild";
    case errc::leaf_with_children: return "LeafWithChildren";
    case errc::gate_without_children: return "GateWithoutChildren";
    case errc::duplicate_leaf_label: return "DuplicateLeafLabel";
    case errc::empty_label: return "EmptyLabel";
    case errc::unknown_label: return "UnknownLabel";
    case errc::ambiguous_label: return "AmbiguousLabel";
    case errc::illegal_kind: return "IllegalKind";
    case errc::inhibit_arity: return "InhibitArity";
    case errc::choose_arity: return "ChooseArity";
    case errc::unknown_leaf: return "UnknownLeaf";
    case errc::unknown_node: return "UnknownNode";
    case errc::too_many_leaves: return "TooManyLeaves";
    case errc::too_many_choices: return "TooManyChoices";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::missing_choice: return "MissingChoice";
    case errc::not_a_leaf: return "NotALeaf";
    case errc::label_collision: return "LabelCollision";
    case errc::not_inhibit: return "NotInhibit";
    case errc::invalid_choice: return "InvalidChoice";
    case errc::syntax_error: return "SyntaxError";
    case errc::unbalanced_paren: return "UnbalancedParen";
    case errc::empty_input: return "EmptyInput";
    case errc::io_error: return "IoError";
    case errc::schema_error: return "SchemaError";
    case errc::invalid_count: return "InvalidCount";
  }
  return "UnknownError";
}

/// Library exception; carries the error code so callers can dispatch
/// without string matching.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Parse failure with source position (1-based line and column).
class parse_error : public error {
 public:
  parse_error(errc code, const std::string& message, int line, int column)
      : error(code, at(message, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string at(const std::string& message, int line, int column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  int line_;
  int column_;
};

}  // namespace bowtie
