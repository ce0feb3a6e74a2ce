#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mtmorph {
namespace detail {

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string located(std::string_view where, std::string_view message) {
  std::string out(where);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // byte is 1-based and points one past the offending character
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed " + std::string(what) + " JSON", line, column);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void expect_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ParseError(located(where, "expected an object"));
}

void expect_array(const json& j, std::string_view where) {
  if (!j.is_array()) throw ParseError(located(where, "expected an array"));
}

const json& member(const json& obj, const char* key, std::string_view where) {
  expect_object(obj, where);
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(located(where, std::string("missing key \"") + key + "\""));
  }
  return *it;
}

const json* optional_member(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string as_string(const json& j, std::string_view where) {
  if (!j.is_string()) throw ParseError(located(where, "expected a string"));
  return j.get<std::string>();
}

bool as_bool(const json& j, std::string_view where) {
  if (!j.is_boolean()) throw ParseError(located(where, "expected a boolean"));
  return j.get<bool>();
}

std::int64_t as_int(const json& j, std::string_view where) {
  if (!j.is_number_integer()) throw ParseError(located(where, "expected an integer"));
  return j.get<std::int64_t>();
}

json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

Value value_from_json(const json& j, std::string_view where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw ParseError(located(where, "attribute values must be strings, integers or booleans"));
}

}  // namespace detail

using detail::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

// Metamodel -----------------------------------------------------------------

Metamodel parse_metamodel(std::string_view text) {
  const json doc = detail::parse_json(text, "metamodel");
  Metamodel mm;
  mm.name = detail::as_string(detail::member(doc, "name", "$"), "$.name");
  if (const json* types = detail::optional_member(doc, "types")) {
    detail::expect_array(*types, "$.types");
    for (std::size_t i = 0; i < types->size(); ++i) {
      const std::string at = "$.types[" + std::to_string(i) + "]";
      const json& t = (*types)[i];
      ElementType type;
      type.name = detail::as_string(detail::member(t, "name", at), at + ".name");
      if (const json* attrs = detail::optional_member(t, "attributes")) {
        detail::expect_array(*attrs, at + ".attributes");
        for (std::size_t k = 0; k < attrs->size(); ++k) {
          const std::string aat = at + ".attributes[" + std::to_string(k) + "]";
          const json& a = (*attrs)[k];
          AttributeDecl decl;
          decl.name = detail::as_string(detail::member(a, "name", aat), aat + ".name");
          const std::string kind =
              detail::as_string(detail::member(a, "kind", aat), aat + ".kind");
          auto parsed = parse_attr_kind(kind);
          if (!parsed) throw ParseError(aat + ".kind: unknown attribute kind \"" + kind + "\"");
          decl.kind = *parsed;
          if (const json* req = detail::optional_member(a, "required")) {
            decl.required = detail::as_bool(*req, aat + ".required");
          }
          type.attributes.push_back(std::move(decl));
        }
      }
      if (const json* refs = detail::optional_member(t, "references")) {
        detail::expect_array(*refs, at + ".references");
        for (std::size_t k = 0; k < refs->size(); ++k) {
          const std::string rat = at + ".references[" + std::to_string(k) + "]";
          const json& r = (*refs)[k];
          ReferenceDecl decl;
          decl.name = detail::as_string(detail::member(r, "name", rat), rat + ".name");
          decl.target = detail::as_string(detail::member(r, "target", rat), rat + ".target");
          if (const json* req = detail::optional_member(r, "required")) {
            decl.required = detail::as_bool(*req, rat + ".required");
          }
          if (const json* many = detail::optional_member(r, "many")) {
            decl.many = detail::as_bool(*many, rat + ".many");
          }
          type.references.push_back(std::move(decl));
        }
      }
      mm.types.push_back(std::move(type));
    }
  }
  validate_metamodel(mm);
  return mm;
}

Metamodel load_metamodel(const std::filesystem::path& path) {
  return parse_metamodel(read_file(path));
}

std::string serialize_metamodel(const Metamodel& mm) {
  json types = json::array();
  for (const auto& t : mm.types) {
    json attrs = json::array();
    for (const auto& a : t.attributes) {
      attrs.push_back({{"name", a.name}, {"kind", to_string(a.kind)}, {"required", a.required}});
    }
    json refs = json::array();
    for (const auto& r : t.references) {
      refs.push_back(
          {{"name", r.name}, {"target", r.target}, {"required", r.required}, {"many", r.many}});
    }
    types.push_back({{"name", t.name}, {"attributes", attrs}, {"references", refs}});
  }
  return detail::dump({{"name", mm.name}, {"types", types}});
}

void save_metamodel(const Metamodel& mm, const std::filesystem::path& path) {
  write_file(path, serialize_metamodel(mm));
}

// Model ---------------------------------------------------------------------

Model parse_model(std::string_view text, const Metamodel& mm) {
  const json doc = detail::parse_json(text, "model");
  Model m;
  m.metamodel = detail::as_string(detail::member(doc, "metamodel", "$"), "$.metamodel");
  if (const json* elements = detail::optional_member(doc, "elements")) {
    detail::expect_array(*elements, "$.elements");
    for (std::size_t i = 0; i < elements->size(); ++i) {
      const std::string at = "$.elements[" + std::to_string(i) + "]";
      const json& e = (*elements)[i];
      Element el;
      el.id = detail::as_string(detail::member(e, "id", at), at + ".id");
      el.type = detail::as_string(detail::member(e, "type", at), at + ".type");
      if (const json* attrs = detail::optional_member(e, "attrs")) {
        detail::expect_object(*attrs, at + ".attrs");
        for (const auto& [key, value] : attrs->items()) {
          el.attrs.emplace(key, detail::value_from_json(value, at + ".attrs." + key));
        }
      }
      if (const json* refs = detail::optional_member(e, "refs")) {
        detail::expect_object(*refs, at + ".refs");
        for (const auto& [key, value] : refs->items()) {
          const std::string rat = at + ".refs." + key;
          detail::expect_array(value, rat);
          std::vector<std::string> ids;
          for (const auto& id : value) ids.push_back(detail::as_string(id, rat));
          el.refs.emplace(key, std::move(ids));
        }
      }
      m.elements.push_back(std::move(el));
    }
  }
  check_conformance(m, mm);
  return m;
}

Model load_model(const std::filesystem::path& path, const Metamodel& mm) {
  return parse_model(read_file(path), mm);
}

std::string serialize_model(const Model& m) {
  const Model c = canonical(m);
  json elements = json::array();
  for (const auto& e : c.elements) {
    json attrs = json::object();
    for (const auto& [name, value] : e.attrs) attrs[name] = detail::value_to_json(value);
    json refs = json::object();
    for (const auto& [name, ids] : e.refs) refs[name] = ids;
    elements.push_back({{"id", e.id}, {"type", e.type}, {"attrs", attrs}, {"refs", refs}});
  }
  return detail::dump({{"metamodel", c.metamodel}, {"elements", elements}});
}

void save_model(const Model& m, const std::filesystem::path& path) {
  write_file(path, serialize_model(m));
}

}  // namespace mtmorph
