#include "mtmorph/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mtmorph {

AttrKind kind_of(const Value& v) { return static_cast<AttrKind>(v.index()); }

std::string_view to_string(AttrKind kind) {
  switch (kind) {
    case AttrKind::String: return "string";
    case AttrKind::Integer: return "integer";
    case AttrKind::Boolean: return "boolean";
  }
  return "?";
}

std::optional<AttrKind> parse_attr_kind(std::string_view text) {
  if (text == "string") return AttrKind::String;
  if (text == "integer") return AttrKind::Integer;
  if (text == "boolean") return AttrKind::Boolean;
  return std::nullopt;
}

Value default_value(AttrKind kind) {
  switch (kind) {
    case AttrKind::String: return std::string();
    case AttrKind::Integer: return std::int64_t{0};
    case AttrKind::Boolean: return false;
  }
  return std::string();
}

std::string to_literal(const Value& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const {
      std::string out = "'";
      for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
      }
      return out + "'";
    }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, v);
}

const AttributeDecl* ElementType::find_attribute(std::string_view attr) const {
  auto it = std::find_if(attributes.begin(), attributes.end(),
                         [&](const AttributeDecl& a) { return a.name == attr; });
  return it == attributes.end() ? nullptr : &*it;
}

const ReferenceDecl* ElementType::find_reference(std::string_view ref) const {
  auto it = std::find_if(references.begin(), references.end(),
                         [&](const ReferenceDecl& r) { return r.name == ref; });
  return it == references.end() ? nullptr : &*it;
}

const ElementType* Metamodel::find_type(std::string_view type) const {
  auto it = std::find_if(types.begin(), types.end(),
                         [&](const ElementType& t) { return t.name == type; });
  return it == types.end() ? nullptr : &*it;
}

const ElementType& Metamodel::type(std::string_view type) const {
  if (const ElementType* t = find_type(type)) return *t;
  throw UnknownType("unknown type \"" + std::string(type) + "\" in metamodel " + name);
}

namespace {

std::set<std::string> as_set(const std::vector<std::string>& ids) {
  return {ids.begin(), ids.end()};
}

// Ref maps compare with empty lists equivalent to absent keys.
bool same_refs(const std::map<std::string, std::vector<std::string>>& a,
               const std::map<std::string, std::vector<std::string>>& b) {
  auto covered = [](const auto& x, const auto& y) {
    for (const auto& [name, ids] : x) {
      auto it = y.find(name);
      if (it == y.end()) {
        if (!ids.empty()) return false;
      } else if (as_set(ids) != as_set(it->second)) {
        return false;
      }
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace

bool operator==(const Element& a, const Element& b) {
  return a.id == b.id && a.type == b.type && a.attrs == b.attrs && same_refs(a.refs, b.refs);
}

const Element* Model::find(std::string_view id) const {
  auto it = std::find_if(elements.begin(), elements.end(),
                         [&](const Element& e) { return e.id == id; });
  return it == elements.end() ? nullptr : &*it;
}

bool operator==(const Model& a, const Model& b) {
  if (a.metamodel != b.metamodel || a.elements.size() != b.elements.size()) return false;
  const Model ca = canonical(a);
  const Model cb = canonical(b);
  return std::equal(ca.elements.begin(), ca.elements.end(), cb.elements.begin());
}

void validate_metamodel(const Metamodel& mm) {
  std::unordered_set<std::string> names;
  for (const auto& t : mm.types) {
    if (t.name.empty()) throw ValidationError("metamodel " + mm.name + ": empty type name");
    if (!names.insert(t.name).second) {
      throw ValidationError("metamodel " + mm.name + ": duplicate type \"" + t.name + "\"");
    }
  }
  for (const auto& t : mm.types) {
    std::unordered_set<std::string> features;
    for (const auto& a : t.attributes) {
      if (!features.insert(a.name).second) {
        throw ValidationError("type " + t.name + ": duplicate feature \"" + a.name + "\"");
      }
    }
    for (const auto& r : t.references) {
      if (!features.insert(r.name).second) {
        throw ValidationError("type " + t.name + ": duplicate feature \"" + r.name + "\"");
      }
      if (!names.contains(r.target)) {
        throw ValidationError("type " + t.name + ": reference \"" + r.name +
                              "\" targets unknown type \"" + r.target + "\"");
      }
    }
  }
}

std::vector<std::string> conformance_diagnostics(const Model& m, const Metamodel& mm) {
  std::vector<std::string> out;
  if (m.metamodel != mm.name) {
    out.push_back("model declares metamodel \"" + m.metamodel + "\" but was checked against \"" +
                  mm.name + "\"");
  }
  std::unordered_map<std::string, const Element*> by_id;
  for (const auto& e : m.elements) {
    if (!by_id.emplace(e.id, &e).second) out.push_back("duplicate element id \"" + e.id + "\"");
  }
  for (const auto& e : m.elements) {
    const std::string who = "element " + e.id;
    const ElementType* type = mm.find_type(e.type);
    if (type == nullptr) {
      out.push_back(who + ": unknown type \"" + e.type + "\"");
      continue;
    }
    for (const auto& [name, value] : e.attrs) {
      const AttributeDecl* decl = type->find_attribute(name);
      if (decl == nullptr) {
        out.push_back(who + ": unknown attribute \"" + name + "\" on " + type->name);
      } else if (kind_of(value) != decl->kind) {
        out.push_back(who + ": attribute \"" + name + "\" expects " +
                      std::string(to_string(decl->kind)) + ", got " +
                      std::string(to_string(kind_of(value))));
      }
    }
    for (const auto& a : type->attributes) {
      if (a.required && !e.attrs.contains(a.name)) {
        out.push_back(who + ": missing required attribute \"" + a.name + "\"");
      }
    }
    for (const auto& [name, ids] : e.refs) {
      const ReferenceDecl* decl = type->find_reference(name);
      if (decl == nullptr) {
        out.push_back(who + ": unknown reference \"" + name + "\" on " + type->name);
        continue;
      }
      if (!decl->many && as_set(ids).size() > 1) {
        out.push_back(who + ": reference \"" + name + "\" holds more than one target");
      }
      for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
          out.push_back(who + ": reference \"" + name + "\" targets missing element \"" + id +
                        "\"");
        } else if (it->second->type != decl->target) {
          out.push_back(who + ": reference \"" + name + "\" targets " + it->second->type +
                        " element \"" + id + "\", expected " + decl->target);
        }
      }
    }
    for (const auto& r : type->references) {
      auto it = e.refs.find(r.name);
      if (r.required && (it == e.refs.end() || it->second.empty())) {
        out.push_back(who + ": missing required reference \"" + r.name + "\"");
      }
    }
  }
  return out;
}

void check_conformance(const Model& m, const Metamodel& mm) {
  const auto diagnostics = conformance_diagnostics(m, mm);
  if (diagnostics.empty()) return;
  std::ostringstream msg;
  msg << "model does not conform to " << mm.name << ":";
  for (const auto& d : diagnostics) msg << "\n  " << d;
  throw ConformanceError(msg.str());
}

std::size_t count_instances(const Model& m, const Metamodel& mm, std::string_view type_name) {
  mm.type(type_name);
  return static_cast<std::size_t>(std::count_if(
      m.elements.begin(), m.elements.end(), [&](const Element& e) { return e.type == type_name; }));
}

std::map<std::string, std::size_t> instance_counts(const Model& m, const Metamodel& mm) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : mm.types) counts[t.name] = 0;
  for (const auto& e : m.elements) {
    auto it = counts.find(e.type);
    if (it != counts.end()) ++it->second;
  }
  return counts;
}

Model canonical(Model m) {
  std::sort(m.elements.begin(), m.elements.end(),
            [](const Element& a, const Element& b) { return a.id < b.id; });
  for (auto& e : m.elements) {
    for (auto it = e.refs.begin(); it != e.refs.end();) {
      auto& ids = it->second;
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      it = ids.empty() ? e.refs.erase(it) : std::next(it);
    }
  }
  return m;
}

}  // namespace mtmorph
