#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtmorph/model.hpp"

namespace mtmorph::mtl {

/// `var.feature` on a source variable. Whether it denotes an attribute copy
/// or a trace-resolved reference depends on the source metamodel; see
/// classify().
struct FeatureOf {
  std::string var;
  std::string feature;

  bool operator==(const FeatureOf&) const = default;
};

struct Literal {
  Value value;

  bool operator==(const Literal&) const = default;
};

/// Bare identifier naming a sibling target template of the same rule.
struct TargetVar {
  std::string var;

  bool operator==(const TargetVar&) const = default;
};

/// `@name`, a module constant declared in the header.
struct ConstantRef {
  std::string name;

  bool operator==(const ConstantRef&) const = default;
};

using BindingExpr = std::variant<FeatureOf, Literal, TargetVar, ConstantRef>;

struct Binding {
  std::string feature;
  BindingExpr expr;

  bool operator==(const Binding&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);
bool is_ordering(CompareOp op);
/// Returns false when the value kinds differ.
bool compare(const Value& lhs, CompareOp op, const Value& rhs);

struct Comparison {
  std::string attr;
  CompareOp op = CompareOp::Eq;
  Value literal;

  bool operator==(const Comparison&) const = default;
};

/// Conjunction of comparisons on the rule's first source variable.
struct Guard {
  std::vector<Comparison> terms;

  bool operator==(const Guard&) const = default;
};

struct SourceVar {
  std::string name;
  std::string type;

  bool operator==(const SourceVar&) const = default;
};

struct TargetTemplate {
  std::string var;
  std::string type;
  std::vector<Binding> bindings;

  bool operator==(const TargetTemplate&) const = default;
};

struct Rule {
  std::string name;
  std::vector<SourceVar> sources;
  std::optional<Guard> guard;
  std::vector<TargetTemplate> targets;

  std::vector<std::string> signature() const;
  const TargetTemplate* find_target(std::string_view var) const;
  const SourceVar* find_source(std::string_view var) const;

  bool operator==(const Rule&) const = default;
};

/// `const name : Type (bindings);` Bindings may only be literals or other
/// constants.
struct Constant {
  std::string name;
  std::string type;
  std::vector<Binding> bindings;

  bool operator==(const Constant&) const = default;
};

struct TransformationProgram {
  std::string name;
  std::string source_metamodel;
  std::string target_metamodel;
  std::vector<Constant> constants;
  std::vector<Rule> rules;

  const Rule* find_rule(std::string_view rule) const;
  const Constant* find_constant(std::string_view constant) const;
  /// Constants mentioned by any rule or constant binding, in declaration order.
  std::vector<std::string> referenced_constants() const;

  bool operator==(const TransformationProgram&) const = default;
};

/// Parses transformation text. Throws SyntaxError or AnalysisError; both
/// carry the 1-based line and column of the offending token.
TransformationProgram parse_transformation(std::string_view text);
TransformationProgram load_transformation(const std::filesystem::path& path);

/// Pretty-printer whose output parses back to an equal program.
std::string print_transformation(const TransformationProgram& program);

/// Whether the element satisfies every term of the guard. Absent attributes
/// never satisfy a comparison.
bool guard_holds(const Guard& guard, const Element& element);

enum class FeatureKind { Attribute, Reference, Unknown };

/// Resolves `var.feature` against the variable's source type.
FeatureKind classify(const FeatureOf& expr, const Rule& rule, const Metamodel& src_mm);

struct Diagnostic {
  std::string rule;  // empty for header-level findings
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// Type check against both metamodels. Empty iff every type and feature
/// named by the program exists with compatible kinds and multiplicities.
std::vector<Diagnostic> analyze(const TransformationProgram& program, const Metamodel& src_mm,
                                const Metamodel& tgt_mm);

}  // namespace mtmorph::mtl
