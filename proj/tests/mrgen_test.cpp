#include <gtest/gtest.h>

#include "mtmorph/engine.hpp"
#include "mtmorph/mrgen.hpp"
#include "support/test_util.hpp"

namespace mtmorph {
namespace {

using testing::element;

struct Observed {
  std::vector<TraceModel> traces;
  std::vector<Model> sources;
  std::vector<Model> targets;

  void add(const ExecutionResult& r, const Model& source) {
    traces.push_back(r.traces);
    sources.push_back(source);
    targets.push_back(r.target);
  }
  std::vector<RulePattern> patterns() const { return extract_patterns(traces, sources, targets); }
};

Observed observe(const testing::Class2Relational& c2r, const std::vector<Model>& models) {
  Observed o;
  for (const auto& m : models) o.add(c2r.run(m), m);
  return o;
}

std::vector<MRClause> clauses(std::initializer_list<std::pair<const char*, long>> items) {
  std::vector<MRClause> out;
  for (const auto& [type, delta] : items) out.push_back({type, delta});
  return out;
}

TEST(Patterns, FromClass2RelationalRun) {
  testing::Class2Relational c2r;
  const auto patterns = observe(c2r, {c2r.model}).patterns();
  ASSERT_EQ(patterns.size(), 2u);
  EXPECT_EQ(patterns[0], (RulePattern{"Class2Table", {"Class"}, {{"Column", 1}, {"Table", 1}}}));
  EXPECT_EQ(patterns[1], (RulePattern{"DataType2Type", {"DataType"}, {{"Type", 1}}}));
}

TEST(Patterns, EmptyInputGivesNoPatterns) {
  EXPECT_TRUE(extract_patterns({}, {}, {}).empty());
  testing::Class2Relational c2r;
  EXPECT_TRUE(observe(c2r, {Model{"Class", {}}}).patterns().empty());
}

TEST(Patterns, AggregationIsIdempotentAndUnions) {
  testing::Class2Relational c2r;
  const Model types_only = load_model(testing::fixture("model-types-only.json"), c2r.src);
  const Model classes_only{"Class", {element("c9", "Class", {{"name", "Z"}})}};
  const auto once = observe(c2r, {c2r.model}).patterns();
  EXPECT_EQ(observe(c2r, {c2r.model, c2r.model}).patterns(), once);
  EXPECT_EQ(observe(c2r, {types_only, classes_only}).patterns(), once);
}

TEST(Patterns, CountMismatchAndDanglingIds) {
  testing::Class2Relational c2r;
  Observed o = observe(c2r, {c2r.model});
  o.sources.clear();
  EXPECT_THROW(o.patterns(), Error);
  o = observe(c2r, {c2r.model});
  o.traces[0].traces[0].targets[0] = "nope";
  EXPECT_THROW(o.patterns(), Error);
}

TEST(Patterns, DifferingShapesAreInconsistent) {
  const Model src{"S", {element("a", "A"), element("b", "A")}};
  const Model tgt{"T", {element("t1", "X"), element("t2", "Y")}};
  const TraceModel tm{"P", {{"R", {"a"}, {"t1"}}, {"R", {"b"}, {"t2"}}}};
  EXPECT_THROW(extract_patterns(std::vector{tm}, std::vector{src}, std::vector{tgt}),
               InconsistentPattern);
}

TEST(Generation, Class2RelationalRelations) {
  testing::Class2Relational c2r;
  const auto patterns = observe(c2r, {c2r.model}).patterns();
  const mtl::TransformationProgram* none = nullptr;
  const mtl::TransformationProgram* with_program = &c2r.program;
  for (const auto* program : {none, with_program}) {
    const GenerationResult g = generate_mrs(patterns, c2r.src, c2r.tgt, program);
    ASSERT_EQ(g.relations.size(), 2u);
    EXPECT_TRUE(g.exclusions.empty());
    const auto& add_class = g.relations[0];
    const auto& add_dt = g.relations[1];
    EXPECT_EQ(add_class.id, "add-Class");
    EXPECT_EQ(add_class.mutation.type, "Class");
    EXPECT_EQ(add_class.clauses, clauses({{"Column", 1}, {"Table", 1}, {"Type", 0}}));
    EXPECT_EQ(add_class.provenance, std::vector<std::string>{"Class2Table"});
    EXPECT_EQ(add_dt.id, "add-DataType");
    EXPECT_EQ(add_dt.clauses, clauses({{"Column", 0}, {"Table", 0}, {"Type", 1}}));
    EXPECT_EQ(add_dt.provenance, std::vector<std::string>{"DataType2Type"});
  }
}

TEST(Generation, UnfiredTypeGetsNoRelation) {
  testing::Class2Relational c2r;
  const Model types_only = load_model(testing::fixture("model-types-only.json"), c2r.src);
  const auto g = generate_mrs(observe(c2r, {types_only}).patterns(), c2r.src, c2r.tgt, &c2r.program);
  ASSERT_EQ(g.relations.size(), 1u);
  EXPECT_EQ(g.relations[0].id, "add-DataType");
  ASSERT_EQ(g.exclusions.size(), 1u);
  EXPECT_EQ(g.exclusions[0].type, "Class");
}

class Guarded : public ::testing::Test {
 protected:
  Metamodel src = parse_metamodel(R"({"name": "S", "types": [
    {"name": "A", "attributes": [{"name": "n", "kind": "integer"}, {"name": "s", "kind": "string"},
                                 {"name": "b", "kind": "boolean"}]},
    {"name": "B"}]})");
  Metamodel tgt = parse_metamodel(R"({"name": "T", "types": [{"name": "X"}, {"name": "Y"}]})");

  const ElementType& a() const { return src.type("A"); }
  mtl::Guard guard(const std::string& text) const {
    const auto p = mtl::parse_transformation("transformation P from S to T; rule R { from v : A (" +
                                             text + ") to x : X () }");
    return *p.rules[0].guard;
  }
  std::map<std::string, Value> solve(const std::string& text) const {
    auto w = guards::solve(guard(text), a());
    EXPECT_TRUE(w.has_value()) << text;
    return w.value_or(std::map<std::string, Value>{});
  }
  GenerationResult generate(const std::string& rules, const std::vector<Model>& models) const {
    const auto p = mtl::parse_transformation("transformation P from S to T; " + rules);
    Observed o;
    for (const auto& m : models) o.add(execute_transformation(p, m, src, tgt), m);
    return generate_mrs(o.patterns(), src, tgt, &p);
  }
};

TEST_F(Guarded, WitnessPerOperator) {
  EXPECT_EQ(solve("v.n = 7").at("n"), Value{std::int64_t{7}});
  EXPECT_EQ(solve("v.n < 7").at("n"), Value{std::int64_t{6}});
  EXPECT_EQ(solve("v.n > 7").at("n"), Value{std::int64_t{8}});
  EXPECT_EQ(solve("v.n <= 7").at("n"), Value{std::int64_t{7}});
  EXPECT_EQ(solve("v.n >= -3").at("n"), Value{std::int64_t{-3}});
  EXPECT_EQ(solve("v.n <> 5").at("n"), Value{std::int64_t{0}});
  EXPECT_EQ(solve("v.n <> 0").at("n"), Value{std::int64_t{1}});
  EXPECT_EQ(solve("v.s = 'k'").at("s"), Value{std::string("k")});
  EXPECT_EQ(solve("v.s <> 'k'").at("s"), Value{std::string()});
  EXPECT_NE(solve("v.s <> ''").at("s"), Value{std::string()});
  EXPECT_EQ(solve("v.b = true").at("b"), Value{true});
  EXPECT_EQ(solve("v.b <> false").at("b"), Value{true});
}

TEST_F(Guarded, ConjunctionsSolvedPerAttribute) {
  const auto w = solve("v.n > 2 and v.n < 10 and v.n <> 3 and v.s = 'q'");
  EXPECT_EQ(w.at("n"), Value{std::int64_t{4}});
  EXPECT_EQ(w.at("s"), Value{std::string("q")});
  EXPECT_FALSE(w.contains("b"));
  // Every witness satisfies its guard.
  for (const char* text : {"v.n < -5 and v.n >= -9", "v.n <> 1 and v.n <> 0 and v.n <> 2",
                           "v.s <> '' and v.s <> 'x'", "v.b <> true"}) {
    const auto g = guard(text);
    Element e{"e", "A", solve(text), {}};
    e.attrs = follow_up_attributes(a(), e.attrs);
    EXPECT_TRUE(mtl::guard_holds(g, e)) << text;
  }
}

TEST_F(Guarded, UnsatisfiableConjunctions) {
  for (const char* text : {"v.n > 5 and v.n < 6", "v.n = 1 and v.n = 2", "v.n = 1 and v.n <> 1",
                           "v.b = true and v.b = false", "v.s = 'a' and v.s = 'b'",
                           "v.n >= 3 and v.n <= 3 and v.n <> 3"}) {
    EXPECT_FALSE(guards::solve(guard(text), a()).has_value()) << text;
  }
}

TEST_F(Guarded, WitnessTriggersObservedRule) {
  const Model m{"S", {element("a1", "A", {{"n", std::int64_t{50}}})}};
  const auto g = generate("rule Big { from v : A (v.n > 10) to x : X () }", {m});
  ASSERT_EQ(g.relations.size(), 1u);
  EXPECT_EQ(g.relations[0].mutation.witness.at("n"), Value{std::int64_t{11}});
  EXPECT_EQ(g.relations[0].clauses, clauses({{"X", 1}, {"Y", 0}}));
}

TEST_F(Guarded, UnobservedMultiSourceRuleExcludesType) {
  // Two never fired because the model holds no B, yet an added A could
  // pair with a B in other models.
  const Model m{"S", {element("a1", "A")}};
  const auto g = generate(
      "rule One { from v : A to x : X () }"
      "rule Two { from v : A, w : B to y : Y () }",
      {m});
  EXPECT_TRUE(g.relations.empty());
  ASSERT_EQ(g.exclusions.size(), 2u);
  EXPECT_EQ(g.exclusions[0].type, "A");
  EXPECT_NE(g.exclusions[0].reason.find("Two"), std::string::npos);
}

TEST_F(Guarded, UnsatisfiableGuardExcludesType) {
  const auto p = mtl::parse_transformation(
      "transformation P from S to T;"
      "rule Never { from v : A (v.n > 3 and v.n < 2) to x : X () }"
      "rule Always { from v : B to y : Y () }");
  // Feed a synthetic observation of Never so the witness is attempted.
  const std::vector<RulePattern> patterns{{"Always", {"B"}, {{"Y", 1}}},
                                          {"Never", {"A"}, {{"X", 1}}}};
  const auto g = generate_mrs(patterns, src, tgt, &p);
  ASSERT_EQ(g.relations.size(), 1u);
  EXPECT_EQ(g.relations[0].id, "add-B");
  ASSERT_EQ(g.exclusions.size(), 1u);
  EXPECT_NE(g.exclusions[0].reason.find("unsatisfiable"), std::string::npos);
}

TEST_F(Guarded, MultiSourceRulesExcludeTheirTypes) {
  const Model m{"S", {element("a1", "A"), element("b1", "B")}};
  const auto g = generate(
      "rule One { from v : A to x : X () }"
      "rule Two { from v : A, w : B to y : Y () }",
      {m});
  EXPECT_TRUE(g.relations.empty());
  ASSERT_EQ(g.exclusions.size(), 2u);
  EXPECT_EQ(g.exclusions[0].type, "A");
  EXPECT_EQ(g.exclusions[1].type, "B");
}

TEST(Coverage, Class2Relational) {
  testing::Class2Relational c2r;
  const auto r = c2r.run();
  const CoverageReport clean = coverage_report(c2r.program, std::vector{r.traces});
  EXPECT_TRUE(clean.clean());
  ASSERT_EQ(clean.rules.size(), 2u);
  EXPECT_EQ(clean.rules[0].rule, "DataType2Type");
  EXPECT_EQ(clean.rules[0].firings, 1u);

  const CoverageReport none = coverage_report(c2r.program, std::vector<TraceModel>{});
  EXPECT_EQ(none.unfired, (std::vector<std::string>{"DataType2Type", "Class2Table"}));
  EXPECT_NE(format_coverage(none).find("Class2Table: 0 firings  [UNFIRED]"), std::string::npos);
}

TEST_F(Guarded, UnsatisfiableGuardRuleIsUnfired) {
  const auto p = mtl::parse_transformation(
      "transformation P from S to T;"
      "rule Never { from v : A (v.n > 3 and v.n < 2) to x : X () }"
      "rule Always { from v : B to y : Y () }");
  Model m{"S", {element("a1", "A", {{"n", std::int64_t{0}}}), element("b1", "B")}};
  const auto r = execute_transformation(p, m, src, tgt);
  const auto report = coverage_report(p, std::vector{r.traces});
  EXPECT_EQ(report.unfired, std::vector<std::string>{"Never"});
}

TEST(Rendering, Class2RelationalOcl) {
  testing::Class2Relational c2r;
  const auto patterns = observe(c2r, {c2r.model}).patterns();
  const auto g = generate_mrs(patterns, c2r.src, c2r.tgt, &c2r.program);
  EXPECT_EQ(render_mr_ocl(g.relations[1]),
            "T1_Type.allInstances()->size()=T2_Type.allInstances()->size()-1\n"
            "T1_Column.allInstances()->size()=T2_Column.allInstances()->size()\n"
            "T1_Table.allInstances()->size()=T2_Table.allInstances()->size()\n");
  EXPECT_EQ(render_mr_ocl(g.relations[0]),
            "T1_Column.allInstances()->size()=T2_Column.allInstances()->size()-1\n"
            "T1_Table.allInstances()->size()=T2_Table.allInstances()->size()-1\n"
            "T1_Type.allInstances()->size()=T2_Type.allInstances()->size()\n");
  const std::string all = render_mrs_ocl(MRSet{"Class2Relational", g.relations});
  EXPECT_EQ(all.rfind("-- add-Class\n", 0), 0u);
  EXPECT_NE(all.find("\n\n-- add-DataType\n"), std::string::npos);
}

TEST(Rendering, ZeroAndNegativeDeltas) {
  MetamorphicRelation mr{"add-A", {}, clauses({{"B", 0}, {"A", 0}}), {}};
  EXPECT_EQ(render_mr_ocl(mr),
            "T1_A.allInstances()->size()=T2_A.allInstances()->size()\n"
            "T1_B.allInstances()->size()=T2_B.allInstances()->size()\n");
  mr.clauses = clauses({{"Z", -2}});
  EXPECT_EQ(render_mr_ocl(mr), "T1_Z.allInstances()->size()=T2_Z.allInstances()->size()+2\n");
}

TEST(MRFiles, RoundTrip) {
  testing::Class2Relational c2r;
  const auto g = generate_mrs(observe(c2r, {c2r.model}).patterns(), c2r.src, c2r.tgt, &c2r.program);
  MRSet set{"Class2Relational", g.relations};
  set.relations[0].mutation.witness = {{"name", std::string("it's")}, {"n", std::int64_t{-4}},
                                       {"b", true}};
  testing::TempDir dir;
  save_mrs(set, dir / "mrs.json");
  EXPECT_EQ(load_mrs(dir / "mrs.json"), set);
  EXPECT_EQ(serialize_mrs(parse_mrs(serialize_mrs(set))), serialize_mrs(set));
  EXPECT_THROW(parse_mrs(R"({"transformation": "X", "relations": [
    {"id": "a", "mutation": {"kind": "delete", "type": "A"}}]})"),
               ParseError);
}

TEST(Generation, DeltasAddUpAcrossRules) {
  const Metamodel src = parse_metamodel(R"({"name": "S", "types": [{"name": "A"}]})");
  const Metamodel tgt = parse_metamodel(R"({"name": "T", "types": [{"name": "X"}, {"name": "Y"}]})");
  std::vector<RulePattern> patterns{{"R1", {"A"}, {{"X", 2}}}, {"R2", {"A"}, {{"X", 1}, {"Y", 3}}}};
  const auto g = generate_mrs(patterns, src, tgt);
  ASSERT_EQ(g.relations.size(), 1u);
  EXPECT_EQ(g.relations[0].clauses, clauses({{"X", 3}, {"Y", 3}}));
  EXPECT_EQ(g.relations[0].provenance, (std::vector<std::string>{"R1", "R2"}));

  patterns.push_back({"R3", {"A"}, {{"Missing", 1}}});
  EXPECT_THROW(generate_mrs(patterns, src, tgt), UnknownType);
}

}  // namespace
}  // namespace mtmorph
