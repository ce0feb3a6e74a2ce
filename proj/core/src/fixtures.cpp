#include "mtmorph/fixtures.hpp"

#include <array>
#include <sstream>

#include "mtmorph/checker.hpp"
#include "mtmorph/engine.hpp"

namespace mtmorph {

std::filesystem::path FixtureLayout::transformation() const { return root / "transformation.mtl"; }
std::filesystem::path FixtureLayout::source_metamodel() const { return root / "source.mm.json"; }
std::filesystem::path FixtureLayout::target_metamodel() const { return root / "target.mm.json"; }
std::filesystem::path FixtureLayout::model() const { return root / "model.json"; }
std::filesystem::path FixtureLayout::expected(const std::string& file) const {
  return root / "expected" / file;
}

FixtureLayout FixtureLayout::in(const std::filesystem::path& fixtures_dir, const std::string& name) {
  return {fixtures_dir / name};
}

FixtureOutputs produce_fixture_outputs(const FixtureLayout& layout) {
  const Metamodel src = load_metamodel(layout.source_metamodel());
  const Metamodel tgt = load_metamodel(layout.target_metamodel());
  const auto program = mtl::load_transformation(layout.transformation());
  const Model c1 = load_model(layout.model(), src);

  const ExecutionResult run = execute_transformation(program, c1, src, tgt);
  const TraceModel traces[] = {run.traces};
  const Model sources[] = {c1};
  const Model targets[] = {run.target};
  const auto patterns = extract_patterns(traces, sources, targets);
  const MRSet set{program.name, generate_mrs(patterns, src, tgt, &program).relations};
  const auto reports = run_metamorphic_pipeline(program, c1, set.relations, src, tgt);

  return {serialize_model(run.target), serialize_traces(run.traces), serialize_mrs(set),
          render_mrs_ocl(set), serialize_report(reports)};
}

namespace {

std::array<std::pair<std::string, const std::string*>, 5> named(const FixtureOutputs& o) {
  return {{{"target.json", &o.target},
           {"traces.json", &o.traces},
           {"mrs.json", &o.mrs},
           {"mrs.ocl.txt", &o.ocl},
           {"report.json", &o.report}}};
}

std::string first_difference(const std::string& expected, const std::string& actual) {
  std::istringstream e(expected);
  std::istringstream a(actual);
  std::string el;
  std::string al;
  for (std::size_t line = 1;; ++line) {
    const bool more_e = static_cast<bool>(std::getline(e, el));
    const bool more_a = static_cast<bool>(std::getline(a, al));
    if (!more_e && !more_a) return "contents differ in trailing whitespace";
    if (more_e != more_a || el != al) {
      return "line " + std::to_string(line) + ": expected \"" + (more_e ? el : "<eof>") +
             "\", got \"" + (more_a ? al : "<eof>") + "\"";
    }
  }
}

}  // namespace

FixtureResult verify_fixture(const std::filesystem::path& fixtures_dir, const std::string& name) {
  const FixtureLayout layout = FixtureLayout::in(fixtures_dir, name);
  if (!std::filesystem::is_directory(layout.root)) {
    return {false, "", "fixture directory " + layout.root.string() + " not found"};
  }
  FixtureOutputs outputs;
  try {
    outputs = produce_fixture_outputs(layout);
  } catch (const std::exception& e) {
    return {false, "", e.what()};
  }
  for (const auto& [file, produced] : named(outputs)) {
    std::string expected;
    try {
      expected = read_file(layout.expected(file));
    } catch (const Error& e) {
      return {false, file, e.what()};
    }
    if (expected != *produced) return {false, file, first_difference(expected, *produced)};
  }
  return {true, "", ""};
}

void regenerate_fixture(const FixtureLayout& layout) {
  const FixtureOutputs outputs = produce_fixture_outputs(layout);
  std::filesystem::create_directories(layout.root / "expected");
  for (const auto& [file, produced] : named(outputs)) write_file(layout.expected(file), *produced);
}

}  // namespace mtmorph
