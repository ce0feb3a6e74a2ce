#include <sstream>

#include "mtmorph/mtl.hpp"

namespace mtmorph::mtl {

namespace {

std::string qualified(const std::string& metamodel, const std::string& type) {
  return metamodel.empty() ? type : metamodel + "!" + type;
}

std::string print_expr(const BindingExpr& expr) {
  struct Visitor {
    std::string operator()(const FeatureOf& f) const { return f.var + "." + f.feature; }
    std::string operator()(const Literal& l) const { return to_literal(l.value); }
    std::string operator()(const TargetVar& t) const { return t.var; }
    std::string operator()(const ConstantRef& c) const { return "@" + c.name; }
  };
  return std::visit(Visitor{}, expr);
}

void print_bindings(std::ostream& out, const std::vector<Binding>& bindings,
                    std::string_view indent) {
  if (bindings.empty()) {
    out << "()";
    return;
  }
  out << "(\n";
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    out << indent << "  " << bindings[i].feature << " <- " << print_expr(bindings[i].expr)
        << (i + 1 < bindings.size() ? ",\n" : "\n");
  }
  out << indent << ")";
}

}  // namespace

std::string print_transformation(const TransformationProgram& program) {
  std::ostringstream out;
  out << "transformation " << program.name << " from " << program.source_metamodel << " to "
      << program.target_metamodel << ";\n";
  if (!program.constants.empty()) out << "\n";
  for (const auto& c : program.constants) {
    out << "const " << c.name << " : " << qualified(program.target_metamodel, c.type);
    if (!c.bindings.empty()) {
      out << " ";
      print_bindings(out, c.bindings, "");
    }
    out << ";\n";
  }
  for (const auto& rule : program.rules) {
    out << "\nrule " << rule.name << " {\n  from\n";
    for (std::size_t i = 0; i < rule.sources.size(); ++i) {
      const auto& s = rule.sources[i];
      out << "    " << s.name << " : " << qualified(program.source_metamodel, s.type);
      if (i == 0 && rule.guard) {
        out << " (";
        for (std::size_t k = 0; k < rule.guard->terms.size(); ++k) {
          const auto& term = rule.guard->terms[k];
          if (k > 0) out << " and ";
          out << s.name << "." << term.attr << " " << to_string(term.op) << " "
              << to_literal(term.literal);
        }
        out << ")";
      }
      out << (i + 1 < rule.sources.size() ? ",\n" : "\n");
    }
    out << "  to\n";
    for (std::size_t i = 0; i < rule.targets.size(); ++i) {
      const auto& t = rule.targets[i];
      out << "    " << t.var << " : " << qualified(program.target_metamodel, t.type) << " ";
      print_bindings(out, t.bindings, "    ");
      out << (i + 1 < rule.targets.size() ? ",\n" : "\n");
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace mtmorph::mtl
