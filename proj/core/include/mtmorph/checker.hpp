#pragma once

#include <chrono>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mtmorph/model.hpp"
#include "mtmorph/mrgen.hpp"
#include "mtmorph/mtl.hpp"

namespace mtmorph {

struct ClauseVerdict {
  std::string type;
  long expected = 0;
  long observed = 0;
  bool pass = false;
};

struct MRReport {
  std::string mr;
  Mutation mutation;
  std::vector<ClauseVerdict> verdicts;
  bool pass = false;
  bool skipped = false;
  /// Why the relation was skipped, when it was.
  std::string note;
  std::chrono::duration<double, std::milli> timing{0};
};

/// One verdict per clause, observed = count(t2) - count(t1). Throws
/// MetamodelMismatch unless both models instantiate `tgt_mm`.
MRReport check_mr(const MetamorphicRelation& mr, const Model& t1, const Model& t2,
                  const Metamodel& tgt_mm);

struct PipelineOptions {
  /// Evaluate follow-ups concurrently once T1 exists.
  bool parallel = false;
};

/// T1 = execute(c1) once; per relation C2 = apply_mutation(c1), T2 =
/// execute(C2), then check_mr. Infeasible mutations give skipped reports.
/// Reports are sorted by relation id. An ExecutionError is rethrown with
/// the relation id prefixed.
std::vector<MRReport> run_metamorphic_pipeline(const mtl::TransformationProgram& program,
                                               const Model& c1,
                                               std::span<const MetamorphicRelation> mrs,
                                               const Metamodel& src_mm, const Metamodel& tgt_mm,
                                               const PipelineOptions& options = {});

struct Summary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

Summary summarize(std::span<const MRReport> reports);

struct ModelRun {
  std::string model;  // label, usually the file name
  std::vector<MRReport> reports;
};

struct RegressionReport {
  std::vector<ModelRun> runs;
  /// Failing model labels per relation id.
  std::map<std::string, std::vector<std::string>> failures_by_mr;
  /// Failing relation ids per model label.
  std::map<std::string, std::vector<std::string>> failures_by_model;
  Summary summary;

  bool failed() const { return summary.failed > 0; }
};

struct LabeledModel {
  std::string label;
  Model model;
};

RegressionReport run_regression(std::span<const MetamorphicRelation> baseline,
                                const mtl::TransformationProgram& program,
                                std::span<const LabeledModel> models, const Metamodel& src_mm,
                                const Metamodel& tgt_mm, const PipelineOptions& options = {});

std::string serialize_report(std::span<const MRReport> reports);
std::string serialize_report(const RegressionReport& report);
std::string format_report_table(std::span<const MRReport> reports);
std::string format_report_table(const RegressionReport& report);

}  // namespace mtmorph
