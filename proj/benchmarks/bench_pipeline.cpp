#include <benchmark/benchmark.h>

#include <filesystem>

#include "mtmorph/checker.hpp"
#include "mtmorph/engine.hpp"
#include "mtmorph/mrgen.hpp"

namespace {

using namespace mtmorph;

struct Class2Relational {
  std::filesystem::path dir = std::filesystem::path(MTMORPH_FIXTURES_DIR) / "class2relational";
  Metamodel src = load_metamodel(dir / "source.mm.json");
  Metamodel tgt = load_metamodel(dir / "target.mm.json");
  mtl::TransformationProgram program = mtl::load_transformation(dir / "transformation.mtl");
};

const Class2Relational& fixture() {
  static const Class2Relational f;
  return f;
}

// n data types and n classes.
Model sized_model(std::size_t n) {
  Model m{"Class", {}};
  for (std::size_t i = 0; i < n; ++i) {
    m.elements.push_back({"d" + std::to_string(i), "DataType", {{"name", "T" + std::to_string(i)}}, {}});
    m.elements.push_back({"c" + std::to_string(i), "Class", {{"name", "C" + std::to_string(i)}}, {}});
  }
  return m;
}

void BM_Execute(benchmark::State& state) {
  const auto& f = fixture();
  const Model m = sized_model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(execute_transformation(f.program, m, f.src, f.tgt));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Execute)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

void BM_GenerateMRs(benchmark::State& state) {
  const auto& f = fixture();
  const Model m = sized_model(static_cast<std::size_t>(state.range(0)));
  const auto r = execute_transformation(f.program, m, f.src, f.tgt);
  for (auto _ : state) {
    const auto patterns =
        extract_patterns(std::vector{r.traces}, std::vector{m}, std::vector{r.target});
    benchmark::DoNotOptimize(generate_mrs(patterns, f.src, f.tgt, &f.program));
  }
}
BENCHMARK(BM_GenerateMRs)->RangeMultiplier(4)->Range(4, 4096);

void BM_Pipeline(benchmark::State& state) {
  const auto& f = fixture();
  const Model m = sized_model(static_cast<std::size_t>(state.range(0)));
  const auto r = execute_transformation(f.program, m, f.src, f.tgt);
  const auto mrs = generate_mrs(extract_patterns(std::vector{r.traces}, std::vector{m},
                                                 std::vector{r.target}),
                                f.src, f.tgt, &f.program)
                       .relations;
  const PipelineOptions options{state.range(1) != 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_metamorphic_pipeline(f.program, m, mrs, f.src, f.tgt, options));
  }
}
BENCHMARK(BM_Pipeline)->ArgsProduct({{16, 256, 2048}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
