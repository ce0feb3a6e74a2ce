#include "mtmorph/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>

#include "mtmorph/checker.hpp"
#include "mtmorph/engine.hpp"
#include "mtmorph/fixtures.hpp"
#include "mtmorph/mrgen.hpp"
#include "mtmorph/mutator.hpp"

namespace mtmorph::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string transform;
  std::string source_mm;
  std::string target_mm;
  bool json_summary = false;
  bool quiet = false;
};

struct RunArgs : Common {
  std::string model;
  std::string out;
  std::string trace;
};

struct GenArgs : Common {
  std::vector<std::string> traces;
  std::vector<std::string> models;
  std::vector<std::string> targets;
  std::string out;
  std::string ocl;
};

struct CheckArgs : Common {
  std::vector<std::string> models;
  std::string mrs;
  std::string report;
  std::string seed_fault;
  bool parallel = false;
};

struct FixtureArgs {
  std::string name;
  std::string dir = "fixtures";
  bool regenerate = false;
};

void require_files(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    if (p.empty()) continue;
    if (!fs::is_regular_file(p)) throw Error("no such file: " + p);
  }
}

void add_common(CLI::App* cmd, Common& c, bool transform_required) {
  auto* t = cmd->add_option("--transform", c.transform, "Transformation (.mtl)");
  if (transform_required) t->required();
  cmd->add_option("--source-mm", c.source_mm, "Source metamodel (JSON)")->required();
  cmd->add_option("--target-mm", c.target_mm, "Target metamodel (JSON)")->required();
  auto* js = cmd->add_flag("--json", c.json_summary, "Machine-readable summary on stdout");
  auto* q = cmd->add_flag("--quiet", c.quiet, "No summary on stdout");
  js->excludes(q);
}

struct Inputs {
  Metamodel src;
  Metamodel tgt;
  std::optional<mtl::TransformationProgram> program;
};

Inputs load_inputs(const Common& c) {
  Inputs in{load_metamodel(c.source_mm), load_metamodel(c.target_mm), std::nullopt};
  if (!c.transform.empty()) in.program = mtl::load_transformation(c.transform);
  return in;
}

void require_clean(const mtl::TransformationProgram& program, const Inputs& in) {
  const auto diagnostics = mtl::analyze(program, in.src, in.tgt);
  if (diagnostics.empty()) return;
  std::string msg = "transformation " + program.name + " does not type-check:";
  for (const auto& d : diagnostics) {
    msg += "\n  " + (d.rule.empty() ? std::string() : "rule " + d.rule + ": ") + d.message;
  }
  throw Error(msg);
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  require_files({a.transform, a.source_mm, a.target_mm, a.model});
  const Inputs in = load_inputs(a);
  require_clean(*in.program, in);
  const Model source = load_model(a.model, in.src);
  const ExecutionResult result = execute_transformation(*in.program, source, in.src, in.tgt);
  save_model(result.target, a.out);
  save_traces(result.traces, a.trace);
  if (a.json_summary) {
    out << json{{"elements", result.target.elements.size()},
                {"traces", result.traces.traces.size()}}
               .dump()
        << "\n";
  } else if (!a.quiet) {
    out << in.program->name << ": " << result.traces.traces.size() << " rule applications, "
        << result.target.elements.size() << " target elements\n";
  }
  return kPass;
}

int cmd_genmrs(const GenArgs& a, std::ostream& out, std::ostream& err) {
  if (a.traces.size() != a.models.size() || a.traces.size() != a.targets.size()) {
    throw UsageError("--traces, --models and --targets must list the same number of files");
  }
  require_files({a.source_mm, a.target_mm, a.transform});
  require_files(a.traces);
  require_files(a.models);
  require_files(a.targets);
  const Inputs in = load_inputs(a);
  if (in.program) require_clean(*in.program, in);

  std::vector<TraceModel> traces;
  std::vector<Model> sources;
  std::vector<Model> targets;
  for (std::size_t i = 0; i < a.traces.size(); ++i) {
    traces.push_back(load_traces(a.traces[i]));
    sources.push_back(load_model(a.models[i], in.src));
    targets.push_back(load_model(a.targets[i], in.tgt));
  }
  const auto patterns = extract_patterns(traces, sources, targets);
  GenerationResult generated =
      generate_mrs(patterns, in.src, in.tgt, in.program ? &*in.program : nullptr);

  std::string name;
  if (in.program) {
    name = in.program->name;
  } else if (!traces.empty()) {
    name = traces.front().transformation;
  }
  const MRSet set{name, std::move(generated.relations)};
  save_mrs(set, a.out);
  if (!a.ocl.empty()) write_file(a.ocl, render_mrs_ocl(set));

  for (const auto& e : generated.exclusions) {
    err << "note: no relation for " << e.type << ": " << e.reason << "\n";
  }

  std::optional<CoverageReport> coverage;
  if (in.program) coverage = coverage_report(*in.program, traces, generated.exclusions);

  if (a.json_summary) {
    json summary = {{"relations", json::array()}};
    for (const auto& r : set.relations) summary["relations"].push_back(r.id);
    if (coverage) {
      json rules = json::object();
      for (const auto& r : coverage->rules) rules[r.rule] = r.firings;
      summary["coverage"] = {{"rules", rules}, {"unfired", coverage->unfired}};
    }
    out << summary.dump() << "\n";
  } else if (!a.quiet) {
    out << set.relations.size() << " metamorphic relation(s) generated\n";
    if (coverage) {
      out << format_coverage(*coverage);
    } else {
      for (const auto& p : patterns) out << "  observed rule " << p.rule << "\n";
    }
  }
  return kPass;
}

mtl::TransformationProgram checked_program(const CheckArgs& a, const Inputs& in) {
  mtl::TransformationProgram program = *in.program;
  require_clean(program, in);
  if (!a.seed_fault.empty()) {
    program = seed_fault(program, parse_fault_seed(a.seed_fault), in.src, in.tgt);
  }
  return program;
}

void print_summary(std::ostream& out, const Common& c, const Summary& s, const std::string& table) {
  if (c.json_summary) {
    out << json{{"total", s.total}, {"passed", s.passed}, {"failed", s.failed},
                {"skipped", s.skipped}}
               .dump()
        << "\n";
  } else if (!c.quiet) {
    out << table;
  }
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  require_files({a.transform, a.source_mm, a.target_mm, a.models.front(), a.mrs});
  const Inputs in = load_inputs(a);
  const auto program = checked_program(a, in);
  const Model c1 = load_model(a.models.front(), in.src);
  const MRSet set = load_mrs(a.mrs);
  const auto reports =
      run_metamorphic_pipeline(program, c1, set.relations, in.src, in.tgt, {a.parallel});
  write_file(a.report, serialize_report(reports));
  const Summary s = summarize(reports);
  print_summary(out, a, s, format_report_table(reports));
  return s.failed > 0 ? kRelationFailed : kPass;
}

int cmd_regress(const CheckArgs& a, std::ostream& out) {
  require_files({a.transform, a.source_mm, a.target_mm, a.mrs});
  require_files(a.models);
  const Inputs in = load_inputs(a);
  const auto program = checked_program(a, in);
  std::vector<LabeledModel> models;
  for (const auto& path : a.models) {
    models.push_back({fs::path(path).filename().string(), load_model(path, in.src)});
  }
  const MRSet set = load_mrs(a.mrs);
  const RegressionReport report =
      run_regression(set.relations, program, models, in.src, in.tgt, {a.parallel});
  write_file(a.report, serialize_report(report));
  print_summary(out, a, report.summary, format_report_table(report));
  return report.failed() ? kRelationFailed : kPass;
}

int cmd_fixture(const FixtureArgs& a, std::ostream& out, std::ostream& err) {
  if (a.regenerate) {
    regenerate_fixture(FixtureLayout::in(a.dir, a.name));
    out << "regenerated " << (fs::path(a.dir) / a.name).string() << "\n";
    return kPass;
  }
  const FixtureResult result = verify_fixture(a.dir, a.name);
  if (result.pass) {
    out << "fixture " << a.name << ": pass\n";
    return kPass;
  }
  err << "fixture " << a.name << ": FAIL";
  if (!result.file.empty()) err << " in " << result.file;
  err << ": " << result.detail << "\n";
  return kOperationalError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metamorphic testing for model transformations", "mtmorph"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Execute a transformation, writing target and trace");
  add_common(run_cmd, run_args, true);
  run_cmd->add_option("--model", run_args.model, "Source model (JSON)")->required();
  run_cmd->add_option("--out", run_args.out, "Target model output")->required();
  run_cmd->add_option("--trace", run_args.trace, "Trace model output")->required();

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-mrs", "Derive metamorphic relations from traces");
  add_common(gen_cmd, gen_args, false);
  gen_cmd->add_option("--traces", gen_args.traces, "Trace files")->required();
  gen_cmd->add_option("--models", gen_args.models, "Source models, paired with --traces")
      ->required();
  gen_cmd->add_option("--targets", gen_args.targets, "Target models, paired with --traces")
      ->required();
  gen_cmd->add_option("--out", gen_args.out, "MR file output")->required();
  gen_cmd->add_option("--ocl", gen_args.ocl, "OCL-style rendering output");

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Run the metamorphic pipeline on one model");
  add_common(check_cmd, check_args, true);
  check_args.models.resize(1);
  check_cmd->add_option("--model", check_args.models.front(), "Test model C1")->required();
  check_cmd->add_option("--mrs", check_args.mrs, "MR file")->required();
  check_cmd->add_option("--report", check_args.report, "Report output (JSON)")->required();
  check_cmd->add_option("--seed-fault", check_args.seed_fault,
                        "Seed a fault first: kind:rule[:templateIndex]");
  check_cmd->add_flag("--parallel", check_args.parallel, "Evaluate relations concurrently");

  CheckArgs regress_args;
  auto* regress_cmd =
      app.add_subcommand("regress", "Check baseline relations against a transformation version");
  add_common(regress_cmd, regress_args, true);
  regress_cmd->add_option("--models", regress_args.models, "Test models")->required();
  regress_cmd->add_option("--mrs", regress_args.mrs, "Baseline MR file")->required();
  regress_cmd->add_option("--report", regress_args.report, "Report output (JSON)")->required();
  regress_cmd->add_option("--seed-fault", regress_args.seed_fault,
                          "Seed a fault first: kind:rule[:templateIndex]");
  regress_cmd->add_flag("--parallel", regress_args.parallel, "Evaluate relations concurrently");

  FixtureArgs fixture_args;
  auto* fixture_cmd =
      app.add_subcommand("verify-fixture", "Reproduce a bundled fixture and compare outputs");
  fixture_cmd->add_option("name", fixture_args.name, "Fixture name")->required();
  fixture_cmd->add_option("--fixtures-dir", fixture_args.dir, "Directory holding fixtures");
  fixture_cmd->add_flag("--regenerate", fixture_args.regenerate,
                        "Rewrite expected files from current outputs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_args, out);
    if (gen_cmd->parsed()) return cmd_genmrs(gen_args, out, err);
    if (check_cmd->parsed()) return cmd_check(check_args, out);
    if (regress_cmd->parsed()) return cmd_regress(regress_args, out);
    if (fixture_cmd->parsed()) return cmd_fixture(fixture_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kOperationalError;
  }
  return kUsage;
}

}  // namespace mtmorph::cli
