#include "mtmorph/checker.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <sstream>

#include "json_util.hpp"
#include "mtmorph/engine.hpp"
#include "mtmorph/mutator.hpp"

namespace mtmorph {

using detail::json;

MRReport check_mr(const MetamorphicRelation& mr, const Model& t1, const Model& t2,
                  const Metamodel& tgt_mm) {
  if (t1.metamodel != tgt_mm.name || t2.metamodel != tgt_mm.name) {
    throw MetamodelMismatch("relation " + mr.id + " compares models of \"" + t1.metamodel +
                            "\" and \"" + t2.metamodel + "\", expected \"" + tgt_mm.name + "\"");
  }
  const auto before = instance_counts(t1, tgt_mm);
  const auto after = instance_counts(t2, tgt_mm);
  MRReport report;
  report.mr = mr.id;
  report.mutation = mr.mutation;
  report.pass = true;
  for (const auto& clause : mr.clauses) {
    auto b = before.find(clause.type);
    auto a = after.find(clause.type);
    if (b == before.end()) {
      throw MetamodelMismatch("relation " + mr.id + " constrains " + clause.type +
                              ", which is not in " + tgt_mm.name);
    }
    ClauseVerdict v;
    v.type = clause.type;
    v.expected = clause.delta;
    v.observed = static_cast<long>(a->second) - static_cast<long>(b->second);
    v.pass = v.expected == v.observed;
    report.pass = report.pass && v.pass;
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

namespace {

MRReport evaluate(const mtl::TransformationProgram& program, const Model& c1, const Model& t1,
                  const MetamorphicRelation& mr, const Metamodel& src_mm,
                  const Metamodel& tgt_mm) {
  const auto start = std::chrono::steady_clock::now();
  Model c2;
  try {
    c2 = apply_mutation(c1, mr.mutation, src_mm);
  } catch (const InfeasibleMutation& e) {
    MRReport skipped;
    skipped.mr = mr.id;
    skipped.mutation = mr.mutation;
    skipped.skipped = true;
    skipped.note = e.what();
    return skipped;
  }
  ExecutionResult t2;
  try {
    t2 = execute_transformation(program, c2, src_mm, tgt_mm);
  } catch (const ExecutionError& e) {
    throw ExecutionError("relation " + mr.id + ": " + e.what());
  }
  MRReport report = check_mr(mr, t1, t2.target, tgt_mm);
  report.timing = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace

std::vector<MRReport> run_metamorphic_pipeline(const mtl::TransformationProgram& program,
                                               const Model& c1,
                                               std::span<const MetamorphicRelation> mrs,
                                               const Metamodel& src_mm, const Metamodel& tgt_mm,
                                               const PipelineOptions& options) {
  std::vector<const MetamorphicRelation*> ordered;
  for (const auto& mr : mrs) ordered.push_back(&mr);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  if (ordered.empty()) return {};

  const Model t1 = execute_transformation(program, c1, src_mm, tgt_mm).target;

  std::vector<MRReport> reports;
  if (!options.parallel || ordered.size() == 1) {
    for (const MetamorphicRelation* mr : ordered) {
      reports.push_back(evaluate(program, c1, t1, *mr, src_mm, tgt_mm));
    }
    return reports;
  }
  std::vector<std::future<MRReport>> pending;
  for (const MetamorphicRelation* mr : ordered) {
    pending.push_back(std::async(std::launch::async, [&, mr] {
      return evaluate(program, c1, t1, *mr, src_mm, tgt_mm);
    }));
  }
  for (auto& f : pending) reports.push_back(f.get());
  return reports;
}

Summary summarize(std::span<const MRReport> reports) {
  Summary s;
  for (const auto& r : reports) {
    ++s.total;
    if (r.skipped) {
      ++s.skipped;
    } else if (r.pass) {
      ++s.passed;
    } else {
      ++s.failed;
    }
  }
  return s;
}

RegressionReport run_regression(std::span<const MetamorphicRelation> baseline,
                                const mtl::TransformationProgram& program,
                                std::span<const LabeledModel> models, const Metamodel& src_mm,
                                const Metamodel& tgt_mm, const PipelineOptions& options) {
  RegressionReport out;
  for (const auto& m : models) {
    ModelRun run{m.label,
                 run_metamorphic_pipeline(program, m.model, baseline, src_mm, tgt_mm, options)};
    for (const auto& r : run.reports) {
      if (r.skipped || r.pass) continue;
      out.failures_by_mr[r.mr].push_back(m.label);
      out.failures_by_model[m.label].push_back(r.mr);
    }
    const Summary s = summarize(run.reports);
    out.summary.total += s.total;
    out.summary.passed += s.passed;
    out.summary.failed += s.failed;
    out.summary.skipped += s.skipped;
    out.runs.push_back(std::move(run));
  }
  return out;
}

// Reports ---------------------------------------------------------------------

namespace {

json result_json(const MRReport& r) {
  json clauses = json::array();
  for (const auto& v : r.verdicts) {
    clauses.push_back(
        {{"type", v.type}, {"expected", v.expected}, {"observed", v.observed}, {"pass", v.pass}});
  }
  json out = {{"mr", r.mr}, {"pass", r.pass}, {"skipped", r.skipped}, {"clauses", clauses}};
  if (r.skipped) out["note"] = r.note;
  return out;
}

json summary_json(const Summary& s) {
  return {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"skipped", s.skipped}};
}

std::string status(const MRReport& r) {
  if (r.skipped) return "SKIP";
  return r.pass ? "PASS" : "FAIL";
}

void table_rows(std::ostream& out, std::span<const MRReport> reports, const std::string& model) {
  for (const auto& r : reports) {
    out << (model.empty() ? "" : model + "  ") << std::left << std::setw(5) << status(r) << " "
        << r.mr;
    if (r.skipped) {
      out << "  (" << r.note << ")\n";
      continue;
    }
    out << "\n";
    for (const auto& v : r.verdicts) {
      out << "      " << (v.pass ? "ok  " : "FAIL") << " " << std::setw(16) << v.type
          << " expected " << std::showpos << v.expected << " observed " << v.observed
          << std::noshowpos << "\n";
    }
  }
}

void summary_line(std::ostream& out, const Summary& s) {
  out << s.total << " relations: " << s.passed << " passed, " << s.failed << " failed, "
      << s.skipped << " skipped\n";
}

}  // namespace

std::string serialize_report(std::span<const MRReport> reports) {
  json results = json::array();
  for (const auto& r : reports) results.push_back(result_json(r));
  return detail::dump({{"results", results}, {"summary", summary_json(summarize(reports))}});
}

std::string serialize_report(const RegressionReport& report) {
  json results = json::array();
  for (const auto& run : report.runs) {
    for (const auto& r : run.reports) {
      json row = result_json(r);
      row["model"] = run.model;
      results.push_back(std::move(row));
    }
  }
  json by_mr = json::object();
  for (const auto& [mr, models] : report.failures_by_mr) by_mr[mr] = models;
  json by_model = json::object();
  for (const auto& [model, mrs] : report.failures_by_model) by_model[model] = mrs;
  return detail::dump({{"results", results},
                       {"summary", summary_json(report.summary)},
                       {"failures", {{"by_mr", by_mr}, {"by_model", by_model}}}});
}

std::string format_report_table(std::span<const MRReport> reports) {
  std::ostringstream out;
  table_rows(out, reports, "");
  summary_line(out, summarize(reports));
  return out.str();
}

std::string format_report_table(const RegressionReport& report) {
  std::ostringstream out;
  for (const auto& run : report.runs) table_rows(out, run.reports, run.model);
  std::vector<std::string> skipped;
  for (const auto& run : report.runs) {
    for (const auto& r : run.reports) {
      if (r.skipped) skipped.push_back(run.model + ": " + r.mr);
    }
  }
  if (!skipped.empty()) {
    out << "skipped (infeasible on the test model):\n";
    for (const auto& s : skipped) out << "  " << s << "\n";
  }
  for (const auto& [mr, models] : report.failures_by_mr) {
    out << "FAILED " << mr << " on " << models.size() << " model(s)\n";
  }
  summary_line(out, report.summary);
  return out.str();
}

}  // namespace mtmorph
