#include "mtmorph/engine.hpp"

#include <sstream>
#include <unordered_map>

namespace mtmorph {

namespace {

using namespace mtl;

struct Firing {
  const Rule* rule;
  std::vector<std::size_t> sources;  // indices into the source model
  std::vector<std::size_t> targets;  // indices into the target model
};

class Execution {
 public:
  Execution(const TransformationProgram& program, const Model& source, const Metamodel& src_mm,
            const Metamodel& tgt_mm)
      : program_(program), source_(source), src_mm_(src_mm), tgt_mm_(tgt_mm) {}

  ExecutionResult run() {
    result_.target.metamodel = tgt_mm_.name;
    result_.traces.transformation = program_.name;

    for (std::size_t i = 0; i < source_.elements.size(); ++i) {
      by_type_[source_.elements[i].type].push_back(i);
    }
    for (const auto& rule : program_.rules) match(rule);
    for (const auto& name : program_.referenced_constants()) {
      const Constant& c = *program_.find_constant(name);
      constants_[name] = create(c.type);
    }
    build_images();

    for (const auto& firing : firings_) bind(firing);
    for (const auto& [name, index] : constants_) {
      const Constant& c = *program_.find_constant(name);
      for (const auto& b : c.bindings) {
        apply(elements()[index], b, nullptr, nullptr);
      }
    }
    check_required();
    return std::move(result_);
  }

 private:
  std::vector<Element>& elements() { return result_.target.elements; }

  std::size_t create(const std::string& type) {
    Element e;
    e.id = "t" + std::to_string(next_id_++);
    e.type = type;
    elements().push_back(std::move(e));
    return elements().size() - 1;
  }

  // Odometer over tuples of distinct elements, first variable slowest.
  void match(const Rule& rule) {
    std::vector<const std::vector<std::size_t>*> pools;
    for (const auto& s : rule.sources) {
      auto it = by_type_.find(s.type);
      if (it == by_type_.end()) return;
      pools.push_back(&it->second);
    }
    std::vector<std::size_t> cursor(pools.size(), 0);
    std::vector<std::size_t> tuple(pools.size());
    for (;;) {
      bool distinct = true;
      for (std::size_t k = 0; k < pools.size(); ++k) {
        tuple[k] = (*pools[k])[cursor[k]];
        for (std::size_t j = 0; j < k && distinct; ++j) distinct = tuple[j] != tuple[k];
      }
      if (distinct && (!rule.guard || guard_holds(*rule.guard, source_.elements[tuple[0]]))) {
        fire(rule, tuple);
      }
      std::size_t k = pools.size();
      while (k > 0) {
        --k;
        if (++cursor[k] < pools[k]->size()) break;
        cursor[k] = 0;
        if (k == 0) return;
      }
    }
  }

  void fire(const Rule& rule, const std::vector<std::size_t>& tuple) {
    Firing firing{&rule, tuple, {}};
    Trace trace;
    trace.rule = rule.name;
    for (std::size_t i : tuple) trace.sources.push_back(source_.elements[i].id);
    for (const auto& t : rule.targets) {
      const std::size_t index = create(t.type);
      firing.targets.push_back(index);
      trace.targets.push_back(elements()[index].id);
    }
    result_.traces.traces.push_back(std::move(trace));
    firings_.push_back(std::move(firing));
  }

  void build_images() {
    for (const auto& firing : firings_) {
      const std::string& head = source_.elements[firing.sources.front()].id;
      images_[head].push_back(elements()[firing.targets.front()].id);
    }
  }

  void bind(const Firing& firing) {
    const Rule& rule = *firing.rule;
    for (std::size_t t = 0; t < rule.targets.size(); ++t) {
      for (const auto& b : rule.targets[t].bindings) {
        apply(elements()[firing.targets[t]], b, &rule, &firing);
      }
    }
  }

  void apply(Element& out, const Binding& b, const Rule* rule, const Firing* firing) {
    if (const auto* lit = std::get_if<Literal>(&b.expr)) {
      out.attrs[b.feature] = lit->value;
    } else if (const auto* c = std::get_if<ConstantRef>(&b.expr)) {
      out.refs[b.feature].push_back(elements()[constants_.at(c->name)].id);
    } else if (const auto* tv = std::get_if<TargetVar>(&b.expr)) {
      for (std::size_t k = 0; k < rule->targets.size(); ++k) {
        if (rule->targets[k].var == tv->var) {
          out.refs[b.feature].push_back(elements()[firing->targets[k]].id);
        }
      }
    } else {
      const auto& f = std::get<FeatureOf>(b.expr);
      std::size_t var = 0;
      while (rule->sources[var].name != f.var) ++var;
      const Element& src = source_.elements[firing->sources[var]];
      switch (classify(f, *rule, src_mm_)) {
        case FeatureKind::Attribute: {
          auto it = src.attrs.find(f.feature);
          if (it != src.attrs.end()) out.attrs[b.feature] = it->second;
          break;
        }
        case FeatureKind::Reference: {
          auto& links = out.refs[b.feature];
          auto it = src.refs.find(f.feature);
          if (it == src.refs.end()) break;
          for (const auto& id : it->second) {
            auto img = images_.find(id);
            if (img == images_.end()) continue;
            if (img->second.size() > 1) {
              throw ExecutionError("rule " + rule->name + ": " + f.var + "." + f.feature +
                                   " reaches element \"" + id + "\", which has " +
                                   std::to_string(img->second.size()) +
                                   " candidate images; resolution is ambiguous");
            }
            links.push_back(img->second.front());
          }
          break;
        }
        case FeatureKind::Unknown:
          throw ExecutionError("rule " + rule->name + ": unknown feature " + f.var + "." +
                               f.feature);
      }
    }
  }

  void check_required() {
    for (const auto& e : elements()) {
      const ElementType& type = tgt_mm_.type(e.type);
      for (const auto& a : type.attributes) {
        if (a.required && !e.attrs.contains(a.name)) fail_unbound(e, a.name);
      }
      for (const auto& r : type.references) {
        auto it = e.refs.find(r.name);
        if (r.required && (it == e.refs.end() || it->second.empty())) fail_unbound(e, r.name);
      }
    }
  }

  [[noreturn]] void fail_unbound(const Element& e, const std::string& feature) const {
    std::string origin = "constant";
    for (const auto& t : result_.traces.traces) {
      for (const auto& id : t.targets) {
        if (id == e.id) origin = "rule " + t.rule;
      }
    }
    throw ExecutionError(origin + ": required feature \"" + feature + "\" of " + e.type + " " +
                         e.id + " left unbound");
  }

  const TransformationProgram& program_;
  const Model& source_;
  const Metamodel& src_mm_;
  const Metamodel& tgt_mm_;
  ExecutionResult result_;
  std::size_t next_id_ = 1;
  std::unordered_map<std::string, std::vector<std::size_t>> by_type_;
  std::vector<Firing> firings_;
  std::map<std::string, std::size_t> constants_;
  std::unordered_map<std::string, std::vector<std::string>> images_;
};

}  // namespace

ExecutionResult execute_transformation(const TransformationProgram& program, const Model& source,
                                       const Metamodel& src_mm, const Metamodel& tgt_mm) {
  if (auto diagnostics = analyze(program, src_mm, tgt_mm); !diagnostics.empty()) {
    std::ostringstream msg;
    msg << "transformation " << program.name << " does not type-check:";
    for (const auto& d : diagnostics) {
      msg << "\n  " << (d.rule.empty() ? "" : "rule " + d.rule + ": ") << d.message;
    }
    throw ExecutionError(msg.str());
  }
  check_conformance(source, src_mm);
  return Execution(program, source, src_mm, tgt_mm).run();
}

}  // namespace mtmorph
