#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtmorph/errors.hpp"

namespace mtmorph {

enum class AttrKind { String, Integer, Boolean };

/// Attribute value. Alternative order follows AttrKind.
using Value = std::variant<std::string, std::int64_t, bool>;

AttrKind kind_of(const Value& v);
std::string_view to_string(AttrKind kind);
std::optional<AttrKind> parse_attr_kind(std::string_view text);
Value default_value(AttrKind kind);
/// Renders a value as a transformation-language literal ('text', 42, true).
std::string to_literal(const Value& v);

struct AttributeDecl {
  std::string name;
  AttrKind kind = AttrKind::String;
  bool required = false;

  bool operator==(const AttributeDecl&) const = default;
};

struct ReferenceDecl {
  std::string name;
  std::string target;
  bool required = false;
  bool many = false;

  bool operator==(const ReferenceDecl&) const = default;
};

struct ElementType {
  std::string name;
  std::vector<AttributeDecl> attributes;
  std::vector<ReferenceDecl> references;

  const AttributeDecl* find_attribute(std::string_view attr) const;
  const ReferenceDecl* find_reference(std::string_view ref) const;

  bool operator==(const ElementType&) const = default;
};

/// Flat set of element types. No inheritance exists between types.
struct Metamodel {
  std::string name;
  std::vector<ElementType> types;

  const ElementType* find_type(std::string_view type) const;
  /// Throws UnknownType.
  const ElementType& type(std::string_view type) const;

  bool operator==(const Metamodel&) const = default;
};

struct Element {
  std::string id;
  std::string type;
  std::map<std::string, Value> attrs;
  std::map<std::string, std::vector<std::string>> refs;
};

/// Reference target lists compare as sets.
bool operator==(const Element& a, const Element& b);

struct Model {
  std::string metamodel;
  std::vector<Element> elements;

  const Element* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
};

/// Order-insensitive on elements (matched by id) and on reference targets.
bool operator==(const Model& a, const Model& b);

/// Throws ValidationError on the first violated metamodel invariant.
void validate_metamodel(const Metamodel& mm);

/// Every conformance violation of `m` against `mm`, one message each.
std::vector<std::string> conformance_diagnostics(const Model& m, const Metamodel& mm);
/// Throws ConformanceError listing every violation.
void check_conformance(const Model& m, const Metamodel& mm);

/// Number of elements of exactly `type_name`. Throws UnknownType when the
/// type is not declared in `mm`.
std::size_t count_instances(const Model& m, const Metamodel& mm, std::string_view type_name);

/// Count of elements per type name over every type declared in `mm`.
std::map<std::string, std::size_t> instance_counts(const Model& m, const Metamodel& mm);

/// Same model with elements sorted by id and reference targets sorted.
Model canonical(Model m);

// JSON file formats. Parse functions throw ParseError on malformed text and
// ValidationError / ConformanceError on invariant violations.
Metamodel parse_metamodel(std::string_view text);
Metamodel load_metamodel(const std::filesystem::path& path);
std::string serialize_metamodel(const Metamodel& mm);
void save_metamodel(const Metamodel& mm, const std::filesystem::path& path);

Model parse_model(std::string_view text, const Metamodel& mm);
Model load_model(const std::filesystem::path& path, const Metamodel& mm);
/// Canonical form: elements sorted by id, keys sorted, trailing newline.
std::string serialize_model(const Model& m);
void save_model(const Model& m, const std::filesystem::path& path);

/// Reads a whole file; throws Error naming the path when unreadable.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mtmorph
