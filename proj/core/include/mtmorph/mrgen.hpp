#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtmorph/engine.hpp"
#include "mtmorph/model.hpp"
#include "mtmorph/mtl.hpp"

namespace mtmorph {

/// Aggregated shape of a rule's firings.
struct RulePattern {
  std::string rule;
  /// Source type names, sorted.
  std::vector<std::string> signature;
  /// Target type name -> elements created per firing.
  std::map<std::string, int> targets;

  bool single_source() const { return signature.size() == 1; }
  bool operator==(const RulePattern&) const = default;
};

enum class MutationKind { AddElement };

struct Mutation {
  MutationKind kind = MutationKind::AddElement;
  std::string type;
  /// Attribute values that make the intended guard hold.
  std::map<std::string, Value> witness;

  bool operator==(const Mutation&) const = default;
};

/// Attribute values a follow-up element of `type` receives: the witness
/// where it has a value, the kind default for every other attribute.
std::map<std::string, Value> follow_up_attributes(const ElementType& type,
                                                  const std::map<std::string, Value>& witness);

struct MRClause {
  std::string type;
  /// Expected count(T2, type) - count(T1, type).
  long delta = 0;

  bool operator==(const MRClause&) const = default;
};

struct MetamorphicRelation {
  std::string id;
  Mutation mutation;
  /// Exactly one per target-metamodel type, sorted by type name.
  std::vector<MRClause> clauses;
  /// Rules contributing the nonzero deltas, sorted.
  std::vector<std::string> provenance;

  const MRClause* find_clause(std::string_view type) const;
  bool operator==(const MetamorphicRelation&) const = default;
};

struct MRSet {
  std::string transformation;
  std::vector<MetamorphicRelation> relations;

  bool operator==(const MRSet&) const = default;
};

/// A source type left without an MR, and why.
struct Exclusion {
  std::string type;
  std::string reason;

  bool operator==(const Exclusion&) const = default;
};

struct GenerationResult {
  std::vector<MetamorphicRelation> relations;  // sorted by id
  std::vector<Exclusion> exclusions;
};

/// One pattern per rule, sorted by rule name. `source_models[i]` and
/// `target_models[i]` resolve the ids of `traces[i]`. Throws
/// InconsistentPattern when a rule's firings disagree in shape, and Error
/// when an id cannot be resolved.
std::vector<RulePattern> extract_patterns(std::span<const TraceModel> traces,
                                          std::span<const Model> source_models,
                                          std::span<const Model> target_models);

/// Instantiates the add-one-element relation for every source type consumed
/// only by observed single-source rules. With a program, guard witnesses
/// are synthesized so the added element triggers the observed rule, and all
/// rules over the type are re-checked against the witness.
GenerationResult generate_mrs(std::span<const RulePattern> patterns, const Metamodel& src_mm,
                              const Metamodel& tgt_mm,
                              const mtl::TransformationProgram* program = nullptr);

struct RuleCoverage {
  std::string rule;
  std::size_t firings = 0;
};

struct CoverageReport {
  std::vector<RuleCoverage> rules;  // program order
  std::vector<std::string> unfired;
  std::vector<Exclusion> excluded_types;

  bool clean() const { return unfired.empty() && excluded_types.empty(); }
};

CoverageReport coverage_report(const mtl::TransformationProgram& program,
                               std::span<const TraceModel> traces,
                               std::span<const Exclusion> exclusions = {});

std::string format_coverage(const CoverageReport& report);

/// OCL-style text, one line per clause: nonzero deltas first, then zeros,
/// each group alphabetical by type.
std::string render_mr_ocl(const MetamorphicRelation& mr);
/// Every relation of the set, blank line between relations.
std::string render_mrs_ocl(const MRSet& set);

MRSet parse_mrs(std::string_view text);
MRSet load_mrs(const std::filesystem::path& path);
std::string serialize_mrs(const MRSet& set);
void save_mrs(const MRSet& set, const std::filesystem::path& path);

namespace guards {

/// Attribute assignment satisfying every comparison, or nullopt when the
/// conjunction is unsatisfiable. Kinds come from `type`.
std::optional<std::map<std::string, Value>> solve(const mtl::Guard& guard,
                                                  const ElementType& type);

}  // namespace guards

}  // namespace mtmorph
