#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mtmorph/model.hpp"
#include "mtmorph/mrgen.hpp"
#include "mtmorph/mtl.hpp"

namespace mtmorph {

/// Builds the follow-up model: `c1` plus one fresh element of the mutation's
/// type with id "mut<n>", the smallest n not already taken. Attributes come
/// from the witness, kind defaults otherwise. Required references point at
/// the first compatible element by id. Throws InfeasibleMutation when a
/// required reference has no compatible target, UnknownType when the type
/// is not in `src_mm`.
Model apply_mutation(const Model& c1, const Mutation& mutation, const Metamodel& src_mm);

enum class FaultKind { RetargetTemplate, DropTemplate, DropRule, DupTemplate };

std::string_view to_string(FaultKind kind);

struct FaultSeed {
  FaultKind kind = FaultKind::DropRule;
  std::string rule;
  /// 1-based template position; required by every kind except DropRule.
  std::optional<std::size_t> template_index;

  bool operator==(const FaultSeed&) const = default;
};

/// `kind:rule[:templateIndex]`, e.g. `drop-template:Class2Table:2`.
/// Throws Error on malformed text.
FaultSeed parse_fault_seed(std::string_view text);
std::string to_string(const FaultSeed& seed);

/// Returns `program` changed only in the seed's rule. The result passes
/// analyze(). RetargetTemplate takes the first other target type whose
/// required features stay bound once incompatible bindings are stripped.
/// Throws InvalidLocus or UnsatisfiableSeed.
mtl::TransformationProgram seed_fault(const mtl::TransformationProgram& program,
                                      const FaultSeed& seed, const Metamodel& src_mm,
                                      const Metamodel& tgt_mm);

/// Every locus at which `kind` is structurally applicable.
std::vector<FaultSeed> enumerate_loci(const mtl::TransformationProgram& program, FaultKind kind);

}  // namespace mtmorph
