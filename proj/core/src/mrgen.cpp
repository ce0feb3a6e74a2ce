#include "mtmorph/mrgen.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"

namespace mtmorph {

using detail::json;

const MRClause* MetamorphicRelation::find_clause(std::string_view type) const {
  auto it = std::find_if(clauses.begin(), clauses.end(),
                         [&](const MRClause& c) { return c.type == type; });
  return it == clauses.end() ? nullptr : &*it;
}

// Pattern extraction ----------------------------------------------------------

namespace {

std::unordered_map<std::string, std::string> type_index(const Model& m) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& e : m.elements) out.emplace(e.id, e.type);
  return out;
}

std::string describe(const RulePattern& p) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < p.signature.size(); ++i) out << (i ? ", " : "") << p.signature[i];
  out << "] -> {";
  bool first = true;
  for (const auto& [type, n] : p.targets) {
    out << (first ? "" : ", ") << type << ":" << n;
    first = false;
  }
  out << "}";
  return out.str();
}

}  // namespace

std::vector<RulePattern> extract_patterns(std::span<const TraceModel> traces,
                                          std::span<const Model> source_models,
                                          std::span<const Model> target_models) {
  if (traces.size() != source_models.size() || traces.size() != target_models.size()) {
    throw Error("extract_patterns: " + std::to_string(traces.size()) + " trace models but " +
                std::to_string(source_models.size()) + " source and " +
                std::to_string(target_models.size()) + " target models");
  }
  std::map<std::string, RulePattern> patterns;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto sources = type_index(source_models[i]);
    const auto targets = type_index(target_models[i]);
    auto resolve = [&](const auto& index, const std::string& id, const char* side,
                       const Trace& t) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw Error("trace of rule " + t.rule + " in execution " + std::to_string(i + 1) +
                    ": " + side + " element \"" + id + "\" not found in the paired model");
      }
      return it->second;
    };
    for (const auto& t : traces[i].traces) {
      RulePattern p;
      p.rule = t.rule;
      for (const auto& id : t.sources) p.signature.push_back(resolve(sources, id, "source", t));
      std::sort(p.signature.begin(), p.signature.end());
      for (const auto& id : t.targets) ++p.targets[resolve(targets, id, "target", t)];

      auto [it, inserted] = patterns.emplace(t.rule, p);
      if (!inserted && !(it->second == p)) {
        throw InconsistentPattern("rule " + t.rule + " fired with differing shapes: " +
                                  describe(it->second) + " vs " + describe(p));
      }
    }
  }
  std::vector<RulePattern> out;
  for (auto& [_, p] : patterns) out.push_back(std::move(p));
  return out;
}

// MR generation ---------------------------------------------------------------

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

bool mentions(const std::vector<std::string>& signature, const std::string& type) {
  return std::find(signature.begin(), signature.end(), type) != signature.end();
}

}  // namespace

GenerationResult generate_mrs(std::span<const RulePattern> patterns, const Metamodel& src_mm,
                              const Metamodel& tgt_mm,
                              const mtl::TransformationProgram* program) {
  GenerationResult result;
  std::map<std::string, const RulePattern*> observed;
  for (const auto& p : patterns) observed.emplace(p.rule, &p);

  for (const auto& type : src_mm.types) {
    const std::string& s = type.name;
    std::vector<const RulePattern*> consuming;
    std::vector<std::string> multi;
    for (const auto& p : patterns) {
      if (!mentions(p.signature, s)) continue;
      consuming.push_back(&p);
      if (!p.single_source()) multi.push_back(p.rule);
    }
    if (consuming.empty()) {
      result.exclusions.push_back({s, "no observed rule consumes " + s});
      continue;
    }
    if (!multi.empty()) {
      result.exclusions.push_back(
          {s, "consumed by multi-source rule(s) " + join(multi) +
                  "; the count delta of an added element depends on the model"});
      continue;
    }

    Mutation mutation{MutationKind::AddElement, s, {}};
    std::vector<const RulePattern*> contributing;

    if (program == nullptr) {
      contributing = consuming;
    } else {
      std::string reason;
      for (const RulePattern* p : consuming) {
        if (program->find_rule(p->rule) == nullptr) {
          reason = "observed rule " + p->rule + " is not part of the transformation";
        }
      }
      // Witness for the first guarded observed rule over [s].
      for (const auto& rule : program->rules) {
        if (!reason.empty()) break;
        if (rule.signature() != std::vector<std::string>{s} || !rule.guard ||
            !observed.contains(rule.name)) {
          continue;
        }
        auto witness = guards::solve(*rule.guard, type);
        if (!witness) {
          reason = "guard of rule " + rule.name + " is unsatisfiable";
        } else {
          mutation.witness = std::move(*witness);
        }
        break;
      }
      // Every rule over s must either be observed or provably not fire on
      // the added element.
      Element probe;
      probe.type = s;
      probe.attrs = follow_up_attributes(type, mutation.witness);
      for (const auto& rule : program->rules) {
        if (!reason.empty()) break;
        const auto sig = rule.signature();
        if (!mentions(sig, s)) continue;
        auto hit = observed.find(rule.name);
        if (sig.size() > 1) {
          reason = "unobserved multi-source rule " + rule.name + " consumes " + s;
          continue;
        }
        if (rule.guard && !mtl::guard_holds(*rule.guard, probe)) continue;
        if (hit == observed.end()) {
          reason = "rule " + rule.name + " would fire on the added element but was never observed";
        } else {
          contributing.push_back(hit->second);
        }
      }
      if (!reason.empty()) {
        result.exclusions.push_back({s, reason});
        continue;
      }
    }

    MetamorphicRelation mr;
    mr.id = "add-" + s;
    mr.mutation = std::move(mutation);
    std::map<std::string, long> deltas;
    for (const auto& t : tgt_mm.types) deltas[t.name] = 0;
    for (const RulePattern* p : contributing) {
      for (const auto& [target, n] : p->targets) {
        auto it = deltas.find(target);
        if (it == deltas.end()) {
          throw UnknownType("rule " + p->rule + " creates " + target +
                            ", which is not in target metamodel " + tgt_mm.name);
        }
        it->second += n;
      }
      mr.provenance.push_back(p->rule);
    }
    std::sort(mr.provenance.begin(), mr.provenance.end());
    for (const auto& [target, delta] : deltas) mr.clauses.push_back({target, delta});
    result.relations.push_back(std::move(mr));
  }
  std::sort(result.relations.begin(), result.relations.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return result;
}

// Coverage --------------------------------------------------------------------

CoverageReport coverage_report(const mtl::TransformationProgram& program,
                               std::span<const TraceModel> traces,
                               std::span<const Exclusion> exclusions) {
  std::map<std::string, std::size_t> firings;
  for (const auto& tm : traces) {
    for (const auto& t : tm.traces) ++firings[t.rule];
  }
  CoverageReport report;
  for (const auto& rule : program.rules) {
    const std::size_t n = firings.contains(rule.name) ? firings[rule.name] : 0;
    report.rules.push_back({rule.name, n});
    if (n == 0) report.unfired.push_back(rule.name);
  }
  report.excluded_types.assign(exclusions.begin(), exclusions.end());
  return report;
}

std::string format_coverage(const CoverageReport& report) {
  std::ostringstream out;
  out << "rule coverage:\n";
  for (const auto& r : report.rules) {
    out << "  " << r.rule << ": " << r.firings << (r.firings == 1 ? " firing" : " firings")
        << (r.firings == 0 ? "  [UNFIRED]" : "") << "\n";
  }
  for (const auto& e : report.excluded_types) {
    out << "  excluded " << e.type << ": " << e.reason << "\n";
  }
  return out.str();
}

// Rendering -------------------------------------------------------------------

std::string render_mr_ocl(const MetamorphicRelation& mr) {
  std::vector<const MRClause*> ordered;
  for (const auto& c : mr.clauses) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](const MRClause* a, const MRClause* b) {
    const bool az = a->delta == 0;
    const bool bz = b->delta == 0;
    return std::tie(az, a->type) < std::tie(bz, b->type);
  });
  std::ostringstream out;
  for (const MRClause* c : ordered) {
    out << "T1_" << c->type << ".allInstances()->size()=T2_" << c->type
        << ".allInstances()->size()";
    if (c->delta > 0) out << "-" << c->delta;
    if (c->delta < 0) out << "+" << -c->delta;
    out << "\n";
  }
  return out.str();
}

std::string render_mrs_ocl(const MRSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.relations.size(); ++i) {
    if (i > 0) out += "\n";
    out += "-- " + set.relations[i].id + "\n";
    out += render_mr_ocl(set.relations[i]);
  }
  return out;
}

// MR files --------------------------------------------------------------------

MRSet parse_mrs(std::string_view text) {
  const json doc = detail::parse_json(text, "MR");
  MRSet set;
  set.transformation =
      detail::as_string(detail::member(doc, "transformation", "$"), "$.transformation");
  if (const json* relations = detail::optional_member(doc, "relations")) {
    detail::expect_array(*relations, "$.relations");
    for (std::size_t i = 0; i < relations->size(); ++i) {
      const std::string at = "$.relations[" + std::to_string(i) + "]";
      const json& r = (*relations)[i];
      MetamorphicRelation mr;
      mr.id = detail::as_string(detail::member(r, "id", at), at + ".id");
      const std::string mat = at + ".mutation";
      const json& m = detail::member(r, "mutation", at);
      const std::string kind = detail::as_string(detail::member(m, "kind", mat), mat + ".kind");
      if (kind != "add") throw ParseError(mat + ".kind: unsupported mutation kind \"" + kind + "\"");
      mr.mutation.type = detail::as_string(detail::member(m, "type", mat), mat + ".type");
      if (const json* attrs = detail::optional_member(m, "attrs")) {
        detail::expect_object(*attrs, mat + ".attrs");
        for (const auto& [key, value] : attrs->items()) {
          mr.mutation.witness.emplace(key, detail::value_from_json(value, mat + ".attrs." + key));
        }
      }
      if (const json* clauses = detail::optional_member(r, "clauses")) {
        detail::expect_array(*clauses, at + ".clauses");
        for (const auto& c : *clauses) {
          MRClause clause;
          clause.type = detail::as_string(detail::member(c, "type", at), at + ".clauses.type");
          clause.delta = detail::as_int(detail::member(c, "delta", at), at + ".clauses.delta");
          mr.clauses.push_back(std::move(clause));
        }
      }
      if (const json* prov = detail::optional_member(r, "provenance")) {
        detail::expect_array(*prov, at + ".provenance");
        for (const auto& p : *prov) mr.provenance.push_back(detail::as_string(p, at + ".provenance"));
      }
      set.relations.push_back(std::move(mr));
    }
  }
  return set;
}

MRSet load_mrs(const std::filesystem::path& path) { return parse_mrs(read_file(path)); }

std::string serialize_mrs(const MRSet& set) {
  std::vector<const MetamorphicRelation*> ordered;
  for (const auto& r : set.relations) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  json relations = json::array();
  for (const MetamorphicRelation* r : ordered) {
    json attrs = json::object();
    for (const auto& [name, value] : r->mutation.witness) attrs[name] = detail::value_to_json(value);
    json clauses = json::array();
    std::vector<MRClause> sorted = r->clauses;
    std::sort(sorted.begin(), sorted.end(),
              [](const MRClause& a, const MRClause& b) { return a.type < b.type; });
    for (const auto& c : sorted) clauses.push_back({{"type", c.type}, {"delta", c.delta}});
    relations.push_back({{"id", r->id},
                         {"mutation", {{"kind", "add"}, {"type", r->mutation.type}, {"attrs", attrs}}},
                         {"clauses", clauses},
                         {"provenance", r->provenance}});
  }
  return detail::dump({{"transformation", set.transformation}, {"relations", relations}});
}

void save_mrs(const MRSet& set, const std::filesystem::path& path) {
  write_file(path, serialize_mrs(set));
}

}  // namespace mtmorph
