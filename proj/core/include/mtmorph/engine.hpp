#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mtmorph/model.hpp"
#include "mtmorph/mtl.hpp"

namespace mtmorph {

/// One rule application: the consumed source elements and the target
/// elements created for them, in template order.
struct Trace {
  std::string rule;
  std::vector<std::string> sources;
  std::vector<std::string> targets;

  bool operator==(const Trace&) const = default;
};

struct TraceModel {
  std::string transformation;
  std::vector<Trace> traces;
};

/// Compares the canonical orderings.
bool operator==(const TraceModel& a, const TraceModel& b);

/// Traces sorted by rule name, then source ids.
TraceModel canonical(TraceModel traces);

struct ExecutionResult {
  Model target;
  TraceModel traces;
};

/// Runs `program` on `source`.
///
/// Phase 1 walks the rules in program order and, for each, the tuples of
/// distinct source elements matching the rule's source types in element
/// order. Each tuple whose guard holds instantiates every target template
/// (ids "t1", "t2", ... per execution) and records one trace. Constants
/// referenced anywhere in the program are then created, one element each.
///
/// Phase 2 evaluates bindings. A reference binding `v.ref` links to the
/// image of each referenced source element: the element created by the
/// first template of the trace whose first source is that element.
/// Unresolvable targets are dropped.
///
/// Throws ExecutionError when a required target feature is left unbound or
/// a reference image is ambiguous.
ExecutionResult execute_transformation(const mtl::TransformationProgram& program,
                                       const Model& source, const Metamodel& src_mm,
                                       const Metamodel& tgt_mm);

TraceModel parse_traces(std::string_view text);
TraceModel load_traces(const std::filesystem::path& path);
/// Canonical JSON: traces ordered as canonical(), trailing newline.
std::string serialize_traces(const TraceModel& traces);
void save_traces(const TraceModel& traces, const std::filesystem::path& path);

}  // namespace mtmorph
