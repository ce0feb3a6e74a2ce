#include "mtmorph/mutator.hpp"

#include <algorithm>
#include <charconv>

namespace mtmorph {

std::map<std::string, Value> follow_up_attributes(const ElementType& type,
                                                  const std::map<std::string, Value>& witness) {
  std::map<std::string, Value> attrs;
  for (const auto& a : type.attributes) {
    auto it = witness.find(a.name);
    attrs.emplace(a.name, it != witness.end() ? it->second : default_value(a.kind));
  }
  return attrs;
}

Model apply_mutation(const Model& c1, const Mutation& mutation, const Metamodel& src_mm) {
  const ElementType& type = src_mm.type(mutation.type);
  for (const auto& [name, value] : mutation.witness) {
    const AttributeDecl* decl = type.find_attribute(name);
    if (decl == nullptr || decl->kind != kind_of(value)) {
      throw InfeasibleMutation("witness attribute \"" + name + "\" does not fit type " +
                               type.name);
    }
  }

  Element added;
  for (std::size_t n = 1;; ++n) {
    added.id = "mut" + std::to_string(n);
    if (!c1.contains(added.id)) break;
  }
  added.type = type.name;
  added.attrs = follow_up_attributes(type, mutation.witness);

  for (const auto& ref : type.references) {
    if (!ref.required) continue;
    const Element* first = nullptr;
    for (const auto& e : c1.elements) {
      if (e.type == ref.target && (first == nullptr || e.id < first->id)) first = &e;
    }
    if (first == nullptr) {
      throw InfeasibleMutation("cannot add " + type.name + ": required reference \"" + ref.name +
                               "\" needs an existing " + ref.target);
    }
    added.refs[ref.name] = {first->id};
  }

  Model c2 = c1;
  c2.elements.push_back(std::move(added));
  return c2;
}

// Fault seeding ---------------------------------------------------------------

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::RetargetTemplate: return "retarget-template";
    case FaultKind::DropTemplate: return "drop-template";
    case FaultKind::DropRule: return "drop-rule";
    case FaultKind::DupTemplate: return "dup-template";
  }
  return "?";
}

FaultSeed parse_fault_seed(std::string_view text) {
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const std::string bad = "malformed fault seed \"" + std::string(text) +
                          "\"; expected kind:rule[:templateIndex]";
  if (parts.size() < 2 || parts.size() > 3 || parts[1].empty()) throw Error(bad);

  FaultSeed seed;
  bool known = false;
  for (FaultKind k : {FaultKind::RetargetTemplate, FaultKind::DropTemplate, FaultKind::DropRule,
                      FaultKind::DupTemplate}) {
    if (parts[0] == to_string(k)) {
      seed.kind = k;
      known = true;
    }
  }
  if (!known) throw Error("unknown fault kind \"" + std::string(parts[0]) + "\"");
  seed.rule = std::string(parts[1]);
  if (parts.size() == 3) {
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), index);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || index == 0) {
      throw Error(bad);
    }
    seed.template_index = index;
  }
  if (seed.kind == FaultKind::DropRule && seed.template_index) {
    throw Error("drop-rule takes no template index");
  }
  if (seed.kind != FaultKind::DropRule && !seed.template_index) {
    throw Error(std::string(to_string(seed.kind)) + " requires a template index");
  }
  return seed;
}

std::string to_string(const FaultSeed& seed) {
  std::string out = std::string(to_string(seed.kind)) + ":" + seed.rule;
  if (seed.template_index) out += ":" + std::to_string(*seed.template_index);
  return out;
}

namespace {

using namespace mtl;

bool clean(const TransformationProgram& p, const Metamodel& src, const Metamodel& tgt) {
  return analyze(p, src, tgt).empty();
}

void strip_refs_to(Rule& rule, const std::string& var) {
  for (auto& t : rule.targets) {
    std::erase_if(t.bindings, [&](const Binding& b) {
      const auto* tv = std::get_if<TargetVar>(&b.expr);
      return tv != nullptr && tv->var == var;
    });
  }
}

// Keeps only the bindings of `tmpl` that type-check for its current type.
void strip_incompatible(TransformationProgram& p, std::size_t rule_index, std::size_t tmpl,
                        const Metamodel& src, const Metamodel& tgt) {
  Rule& rule = p.rules[rule_index];
  auto& bindings = rule.targets[tmpl].bindings;
  std::vector<Binding> kept;
  for (const auto& b : bindings) {
    TransformationProgram probe = p;
    auto& probe_bindings = probe.rules[rule_index].targets[tmpl].bindings;
    probe_bindings = kept;
    probe_bindings.push_back(b);
    const auto before = analyze(probe, src, tgt).size();
    probe_bindings.pop_back();
    if (analyze(probe, src, tgt).size() == before) kept.push_back(b);
  }
  bindings = std::move(kept);
}

bool required_bound(const TargetTemplate& t, const Metamodel& tgt) {
  const ElementType* found = tgt.find_type(t.type);
  if (found == nullptr) return false;
  const ElementType& type = *found;
  auto bound = [&](const std::string& feature) {
    return std::any_of(t.bindings.begin(), t.bindings.end(),
                       [&](const Binding& b) { return b.feature == feature; });
  };
  for (const auto& a : type.attributes) {
    if (a.required && !bound(a.name)) return false;
  }
  for (const auto& r : type.references) {
    if (r.required && !bound(r.name)) return false;
  }
  return true;
}

bool required_bound(const Rule& rule, const Metamodel& tgt) {
  return std::all_of(rule.targets.begin(), rule.targets.end(),
                     [&](const TargetTemplate& t) { return required_bound(t, tgt); });
}

}  // namespace

TransformationProgram seed_fault(const TransformationProgram& program, const FaultSeed& seed,
                                 const Metamodel& src_mm, const Metamodel& tgt_mm) {
  auto rule_it = std::find_if(program.rules.begin(), program.rules.end(),
                              [&](const Rule& r) { return r.name == seed.rule; });
  if (rule_it == program.rules.end()) {
    throw InvalidLocus("no rule named \"" + seed.rule + "\"");
  }
  const std::size_t ri = static_cast<std::size_t>(rule_it - program.rules.begin());
  std::size_t ti = 0;
  if (seed.kind != FaultKind::DropRule) {
    if (!seed.template_index || *seed.template_index == 0 ||
        *seed.template_index > rule_it->targets.size()) {
      throw InvalidLocus("rule " + seed.rule + " has no target template " +
                         (seed.template_index ? std::to_string(*seed.template_index) : "?"));
    }
    ti = *seed.template_index - 1;
  }

  TransformationProgram out = program;
  Rule& rule = out.rules[ri];
  switch (seed.kind) {
    case FaultKind::DropRule:
      out.rules.erase(out.rules.begin() + static_cast<std::ptrdiff_t>(ri));
      break;
    case FaultKind::DropTemplate: {
      if (rule.targets.size() == 1) {
        throw InvalidLocus("rule " + seed.rule + " has a single target template");
      }
      const std::string var = rule.targets[ti].var;
      rule.targets.erase(rule.targets.begin() + static_cast<std::ptrdiff_t>(ti));
      strip_refs_to(rule, var);
      if (!required_bound(rule, tgt_mm)) {
        throw UnsatisfiableSeed(to_string(seed) + " unbinds a required feature");
      }
      break;
    }
    case FaultKind::DupTemplate: {
      TargetTemplate copy = rule.targets[ti];
      std::string var = copy.var + "_dup";
      for (int n = 2; rule.find_target(var) != nullptr || rule.find_source(var) != nullptr; ++n) {
        var = copy.var + "_dup" + std::to_string(n);
      }
      copy.var = var;
      rule.targets.insert(rule.targets.begin() + static_cast<std::ptrdiff_t>(ti) + 1,
                          std::move(copy));
      break;
    }
    case FaultKind::RetargetTemplate: {
      const std::string original = rule.targets[ti].type;
      for (const auto& candidate : tgt_mm.types) {
        if (candidate.name == original) continue;
        TransformationProgram attempt = out;
        Rule& r = attempt.rules[ri];
        r.targets[ti].type = candidate.name;
        strip_refs_to(r, r.targets[ti].var);
        strip_incompatible(attempt, ri, ti, src_mm, tgt_mm);
        if (clean(attempt, src_mm, tgt_mm) && required_bound(r, tgt_mm)) {
          return attempt;
        }
      }
      throw UnsatisfiableSeed("no target type can replace " + original + " in rule " +
                              seed.rule);
    }
  }
  if (!clean(out, src_mm, tgt_mm)) {
    throw UnsatisfiableSeed(to_string(seed) + " leaves a transformation that does not type-check");
  }
  return out;
}

std::vector<FaultSeed> enumerate_loci(const TransformationProgram& program, FaultKind kind) {
  std::vector<FaultSeed> out;
  for (const auto& rule : program.rules) {
    if (kind == FaultKind::DropRule) {
      out.push_back({kind, rule.name, std::nullopt});
      continue;
    }
    if (kind == FaultKind::DropTemplate && rule.targets.size() == 1) continue;
    for (std::size_t i = 1; i <= rule.targets.size(); ++i) out.push_back({kind, rule.name, i});
  }
  return out;
}

}  // namespace mtmorph
