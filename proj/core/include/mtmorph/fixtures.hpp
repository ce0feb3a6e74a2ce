#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mtmorph/mrgen.hpp"

namespace mtmorph {

/// On-disk layout of a fixture directory.
struct FixtureLayout {
  std::filesystem::path root;

  std::filesystem::path transformation() const;
  std::filesystem::path source_metamodel() const;
  std::filesystem::path target_metamodel() const;
  std::filesystem::path model() const;
  std::filesystem::path expected(const std::string& file) const;

  static FixtureLayout in(const std::filesystem::path& fixtures_dir, const std::string& name);
};

/// Bytes each pipeline step produces for the fixture, keyed by the name of
/// the expected file they are compared to.
struct FixtureOutputs {
  std::string target;   // target.json
  std::string traces;   // traces.json
  std::string mrs;      // mrs.json
  std::string ocl;      // mrs.ocl.txt
  std::string report;   // report.json
};

/// Runs execution, MR generation and the metamorphic check over the fixture
/// model. Throws on operational errors.
FixtureOutputs produce_fixture_outputs(const FixtureLayout& layout);

struct FixtureResult {
  bool pass = false;
  /// Expected file name of the first divergence, empty on pass.
  std::string file;
  std::string detail;
};

/// Compares produce_fixture_outputs() against the expected files.
FixtureResult verify_fixture(const std::filesystem::path& fixtures_dir, const std::string& name);

/// Writes expected/ from the current outputs.
void regenerate_fixture(const FixtureLayout& layout);

}  // namespace mtmorph
