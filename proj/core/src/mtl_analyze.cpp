#include <set>

#include "mtmorph/mtl.hpp"

namespace mtmorph::mtl {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

bool is_ordering(CompareOp op) { return op != CompareOp::Eq && op != CompareOp::Ne; }

bool compare(const Value& lhs, CompareOp op, const Value& rhs) {
  if (lhs.index() != rhs.index()) return false;
  switch (op) {
    case CompareOp::Eq: return lhs == rhs;
    case CompareOp::Ne: return lhs != rhs;
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
  }
  return false;
}

bool guard_holds(const Guard& guard, const Element& element) {
  for (const auto& term : guard.terms) {
    auto it = element.attrs.find(term.attr);
    if (it == element.attrs.end() || !compare(it->second, term.op, term.literal)) return false;
  }
  return true;
}

FeatureKind classify(const FeatureOf& expr, const Rule& rule, const Metamodel& src_mm) {
  const SourceVar* var = rule.find_source(expr.var);
  if (var == nullptr) return FeatureKind::Unknown;
  const ElementType* type = src_mm.find_type(var->type);
  if (type == nullptr) return FeatureKind::Unknown;
  if (type->find_attribute(expr.feature) != nullptr) return FeatureKind::Attribute;
  if (type->find_reference(expr.feature) != nullptr) return FeatureKind::Reference;
  return FeatureKind::Unknown;
}

namespace {

class Analyzer {
 public:
  Analyzer(const TransformationProgram& program, const Metamodel& src, const Metamodel& tgt)
      : program_(program), src_(src), tgt_(tgt) {}

  std::vector<Diagnostic> run() {
    if (program_.source_metamodel != src_.name) {
      report("", "source metamodel is \"" + src_.name + "\" but the transformation expects \"" +
                     program_.source_metamodel + "\"");
    }
    if (program_.target_metamodel != tgt_.name) {
      report("", "target metamodel is \"" + tgt_.name + "\" but the transformation expects \"" +
                     program_.target_metamodel + "\"");
    }
    for (const auto& c : program_.constants) check_constant(c);
    for (const auto& r : program_.rules) check_rule(r);
    return std::move(out_);
  }

 private:
  void report(const std::string& rule, std::string message) {
    out_.push_back({rule, std::move(message)});
  }

  void check_duplicates(const std::string& owner, const std::string& where,
                        const std::vector<Binding>& bindings) {
    std::set<std::string> seen;
    for (const auto& b : bindings) {
      if (!seen.insert(b.feature).second) {
        report(owner, where + ": feature \"" + b.feature + "\" bound more than once");
      }
    }
  }

  // Target feature expected to be an attribute of `kind`.
  void expect_attribute(const std::string& owner, const std::string& where,
                        const ElementType& type, const std::string& feature, AttrKind kind) {
    const AttributeDecl* attr = type.find_attribute(feature);
    if (attr == nullptr) {
      report(owner, where + ": " + type.name + " has no attribute \"" + feature + "\"");
    } else if (attr->kind != kind) {
      report(owner, where + ": kind mismatch binding " + std::string(to_string(kind)) +
                        " into " + std::string(to_string(attr->kind)) + " attribute \"" +
                        feature + "\"");
    }
  }

  // Target feature expected to be a reference to `target`.
  const ReferenceDecl* expect_reference(const std::string& owner, const std::string& where,
                                        const ElementType& type, const std::string& feature,
                                        const std::string& target) {
    const ReferenceDecl* ref = type.find_reference(feature);
    if (ref == nullptr) {
      report(owner, where + ": " + type.name + " has no reference \"" + feature + "\"");
      return nullptr;
    }
    if (ref->target != target) {
      report(owner, where + ": reference \"" + feature + "\" expects " + ref->target + ", got " +
                        target);
    }
    return ref;
  }

  void check_constant(const Constant& c) {
    const std::string where = "constant " + c.name;
    const ElementType* type = tgt_.find_type(c.type);
    if (type == nullptr) {
      report("", where + ": unknown target type \"" + c.type + "\"");
      return;
    }
    check_duplicates("", where, c.bindings);
    for (const auto& b : c.bindings) {
      if (const auto* lit = std::get_if<Literal>(&b.expr)) {
        expect_attribute("", where, *type, b.feature, kind_of(lit->value));
      } else if (const auto* ref = std::get_if<ConstantRef>(&b.expr)) {
        check_constant_ref("", where, *type, b.feature, *ref);
      } else {
        report("", where + ": constants may only bind literals and constants");
      }
    }
  }

  void check_constant_ref(const std::string& owner, const std::string& where,
                          const ElementType& type, const std::string& feature,
                          const ConstantRef& ref) {
    const Constant* c = program_.find_constant(ref.name);
    if (c == nullptr) {
      report(owner, where + ": undeclared constant @" + ref.name);
      return;
    }
    expect_reference(owner, where, type, feature, c->type);
  }

  void check_rule(const Rule& rule) {
    bool sources_ok = true;
    for (const auto& s : rule.sources) {
      if (src_.find_type(s.type) == nullptr) {
        report(rule.name, "unknown source type \"" + s.type + "\"");
        sources_ok = false;
      }
    }
    if (rule.guard && sources_ok) check_guard(rule);
    for (const auto& t : rule.targets) check_template(rule, t);
  }

  void check_guard(const Rule& rule) {
    const ElementType& type = src_.type(rule.sources.front().type);
    for (const auto& term : rule.guard->terms) {
      const AttributeDecl* attr = type.find_attribute(term.attr);
      if (attr == nullptr) {
        report(rule.name, "guard: " + type.name + " has no attribute \"" + term.attr + "\"");
        continue;
      }
      if (kind_of(term.literal) != attr->kind) {
        report(rule.name, "guard: attribute \"" + term.attr + "\" is " +
                              std::string(to_string(attr->kind)) + ", literal is " +
                              std::string(to_string(kind_of(term.literal))));
      } else if (is_ordering(term.op) && attr->kind != AttrKind::Integer) {
        report(rule.name, "guard: operator " + std::string(to_string(term.op)) +
                              " requires an integer attribute, \"" + term.attr + "\" is " +
                              std::string(to_string(attr->kind)));
      }
    }
  }

  void check_template(const Rule& rule, const TargetTemplate& t) {
    const std::string where = "target " + t.var;
    const ElementType* type = tgt_.find_type(t.type);
    if (type == nullptr) {
      report(rule.name, where + ": unknown target type \"" + t.type + "\"");
      return;
    }
    check_duplicates(rule.name, where, t.bindings);
    for (const auto& b : t.bindings) {
      if (const auto* lit = std::get_if<Literal>(&b.expr)) {
        expect_attribute(rule.name, where, *type, b.feature, kind_of(lit->value));
      } else if (const auto* tv = std::get_if<TargetVar>(&b.expr)) {
        const TargetTemplate* sibling = rule.find_target(tv->var);
        if (sibling == nullptr) {
          report(rule.name, where + ": unknown target variable \"" + tv->var + "\"");
        } else {
          expect_reference(rule.name, where, *type, b.feature, sibling->type);
        }
      } else if (const auto* cr = std::get_if<ConstantRef>(&b.expr)) {
        check_constant_ref(rule.name, where, *type, b.feature, *cr);
      } else {
        check_feature_of(rule, where, *type, b.feature, std::get<FeatureOf>(b.expr));
      }
    }
  }

  void check_feature_of(const Rule& rule, const std::string& where, const ElementType& type,
                        const std::string& feature, const FeatureOf& expr) {
    const SourceVar* var = rule.find_source(expr.var);
    if (var == nullptr) {
      report(rule.name, where + ": unknown source variable \"" + expr.var + "\"");
      return;
    }
    const ElementType* src_type = src_.find_type(var->type);
    if (src_type == nullptr) return;  // already reported
    if (const AttributeDecl* attr = src_type->find_attribute(expr.feature)) {
      expect_attribute(rule.name, where, type, feature, attr->kind);
      return;
    }
    const ReferenceDecl* src_ref = src_type->find_reference(expr.feature);
    if (src_ref == nullptr) {
      report(rule.name, where + ": " + src_type->name + " has no feature \"" + expr.feature +
                            "\"");
      return;
    }
    const ReferenceDecl* tgt_ref = type.find_reference(feature);
    if (tgt_ref == nullptr) {
      report(rule.name, where + ": " + type.name + " has no reference \"" + feature + "\"");
      return;
    }
    if (src_ref->many && !tgt_ref->many) {
      report(rule.name, where + ": many-valued \"" + expr.feature +
                            "\" bound into single-valued reference \"" + feature + "\"");
    }
    // Images of src_ref's targets come from the first template of rules
    // whose first source type is src_ref->target.
    bool producible = false;
    for (const auto& other : program_.rules) {
      if (other.sources.front().type != src_ref->target) continue;
      producible = true;
      const std::string& image = other.targets.front().type;
      if (image != tgt_ref->target) {
        report(rule.name, where + ": \"" + expr.feature + "\" resolves through rule " +
                              other.name + " to " + image + ", but \"" + feature + "\" expects " +
                              tgt_ref->target);
      }
    }
    if (!producible && tgt_ref->required) {
      report(rule.name, where + ": required reference \"" + feature +
                            "\" can never be resolved: no rule transforms " + src_ref->target);
    }
  }

  const TransformationProgram& program_;
  const Metamodel& src_;
  const Metamodel& tgt_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> analyze(const TransformationProgram& program, const Metamodel& src_mm,
                                const Metamodel& tgt_mm) {
  return Analyzer(program, src_mm, tgt_mm).run();
}

}  // namespace mtmorph::mtl
