#include <gtest/gtest.h>

#include "support/random_models.hpp"
#include "support/test_util.hpp"

namespace mtmorph::mtl {
namespace {

constexpr const char* kHeader = "transformation T from Src to Tgt;\n";

const char* kMetamodels[] = {
    R"({"name": "Src", "types": [
      {"name": "X", "attributes": [{"name": "label", "kind": "string", "required": true},
                                   {"name": "size", "kind": "integer"}]},
      {"name": "Z"}]})",
    R"({"name": "Tgt", "types": [
      {"name": "Y", "attributes": [{"name": "name", "kind": "string"},
                                   {"name": "width", "kind": "integer"}]}]})"};

TEST(Parser, ParsesClass2RelationalExcerpt) {
  const auto program = load_transformation(testing::fixture("transformation.mtl"));
  EXPECT_EQ(program.name, "Class2Relational");
  EXPECT_EQ(program.source_metamodel, "Class");
  EXPECT_EQ(program.target_metamodel, "Relational");
  ASSERT_EQ(program.rules.size(), 2u);
  EXPECT_EQ(program.rules[0].name, "DataType2Type");
  EXPECT_EQ(program.rules[1].name, "Class2Table");

  const Rule& c2t = program.rules[1];
  ASSERT_EQ(c2t.sources.size(), 1u);
  EXPECT_EQ(c2t.sources[0].type, "Class");
  ASSERT_EQ(c2t.targets.size(), 2u);
  EXPECT_EQ(c2t.targets[0].type, "Table");
  EXPECT_EQ(c2t.targets[1].type, "Column");
  EXPECT_EQ(c2t.targets[0].bindings[0], (Binding{"name", FeatureOf{"c", "name"}}));
  EXPECT_EQ(c2t.targets[0].bindings[1], (Binding{"key", TargetVar{"key"}}));
  EXPECT_EQ(c2t.targets[1].bindings[0], (Binding{"name", Literal{std::string("objectId")}}));
  EXPECT_EQ(c2t.targets[1].bindings[1], (Binding{"type", ConstantRef{"objectIdType"}}));
  ASSERT_EQ(program.constants.size(), 1u);
  EXPECT_EQ(program.referenced_constants(), std::vector<std::string>{"objectIdType"});
}

TEST(Parser, EmptyRuleBody) {
  const auto p = parse_transformation(std::string(kHeader) + "rule R { from a : X to b : Y () }");
  ASSERT_EQ(p.rules.size(), 1u);
  EXPECT_TRUE(p.rules[0].targets[0].bindings.empty());
  EXPECT_FALSE(p.rules[0].guard.has_value());
}

TEST(Parser, UndeclaredSourceVariableIsNamed) {
  try {
    parse_transformation(std::string(kHeader) +
                         "rule R {\n  from a : X\n  to b : Y (name <- z.name)\n}");
    FAIL() << "expected AnalysisError";
  } catch (const AnalysisError& e) {
    EXPECT_NE(std::string(e.what()).find("\"z\""), std::string::npos);
    EXPECT_EQ(e.line, 4u);
    EXPECT_EQ(e.column, 21u);
  }
}

TEST(Parser, AnalysisErrors) {
  const std::string h = kHeader;
  EXPECT_THROW(parse_transformation(h + "rule R { from a : X to b : Y () }"
                                        "rule R { from a : Z to b : Y () }"),
               AnalysisError);
  EXPECT_THROW(parse_transformation(h + "rule R1 { from a : X to b : Y () }"
                                        "rule R2 { from c : X to d : Y () }"),
               AnalysisError);
  EXPECT_THROW(parse_transformation(h + "rule R { from a : X to a : Y () }"), AnalysisError);
  EXPECT_THROW(parse_transformation(h + "rule R { from a : X to b : Y (r <- c) }"),
               AnalysisError);
  EXPECT_THROW(parse_transformation(h + "rule R { from a : X to b : Y (r <- @k) }"),
               AnalysisError);
  EXPECT_THROW(parse_transformation(h + "rule R { from a : Other!X to b : Y () }"),
               AnalysisError);
  EXPECT_THROW(parse_transformation(h + "rule R { from a : X, b : Z (b.size = 1) to c : Y () }"),
               SyntaxError);
  EXPECT_THROW(parse_transformation(h + "rule R { from a : X (q.size = 1) to c : Y () }"),
               AnalysisError);
  EXPECT_THROW(parse_transformation(h + "const k : Y; const k : Y;"), AnalysisError);
}

TEST(Parser, SyntaxErrorsCarryPosition) {
  const std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> cases = {
      {"transformation T from Src;", {1, 26}},
      {std::string(kHeader) + "rule R { from a : X to b : Y ( }", {2, 32}},
      {std::string(kHeader) + "rule R {\n from a : X\n to b : Y (n <- 'open)\n}", {4, 17}},
      {std::string(kHeader) + "rule R { from a : X to b : Y () } #", {2, 35}},
      {std::string(kHeader) + "rule from", {2, 6}},
  };
  for (const auto& [text, pos] : cases) {
    try {
      parse_transformation(text);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const SyntaxError& e) {
      EXPECT_EQ(e.line, pos.first) << text << " -> " << e.what();
      EXPECT_EQ(e.column, pos.second) << text << " -> " << e.what();
    }
  }
}

TEST(Parser, GuardsAndLiterals) {
  const auto p = parse_transformation(
      std::string(kHeader) +
      "-- comment\nrule R { from a : X (a.size >= -2 and a.label <> 'x\\'y' and a.size != 4) "
      "to b : Y (width <- 7, name <- a.label) }");
  const Guard& g = *p.rules[0].guard;
  ASSERT_EQ(g.terms.size(), 3u);
  EXPECT_EQ(g.terms[0], (Comparison{"size", CompareOp::Ge, std::int64_t{-2}}));
  EXPECT_EQ(g.terms[1], (Comparison{"label", CompareOp::Ne, std::string("x'y")}));
  EXPECT_EQ(g.terms[2].op, CompareOp::Ne);
}

TEST(Parser, MultiSourceRule) {
  const auto p =
      parse_transformation(std::string(kHeader) + "rule R { from a : X, b : Z to c : Y () }");
  EXPECT_EQ(p.rules[0].signature(), (std::vector<std::string>{"X", "Z"}));
}

TEST(Printer, FixtureRoundTrip) {
  const auto program = load_transformation(testing::fixture("transformation.mtl"));
  const std::string printed = print_transformation(program);
  EXPECT_EQ(parse_transformation(printed), program);
  EXPECT_EQ(print_transformation(parse_transformation(printed)), printed);
}

TEST(PrinterProperty, RandomProgramsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto rc = testing::random_case(seed);
    const std::string printed = print_transformation(rc.program);
    TransformationProgram reparsed;
    ASSERT_NO_THROW(reparsed = parse_transformation(printed)) << printed;
    ASSERT_EQ(reparsed, rc.program) << printed;
  }
}

class Analyze : public ::testing::Test {
 protected:
  Metamodel src = parse_metamodel(kMetamodels[0]);
  Metamodel tgt = parse_metamodel(kMetamodels[1]);

  std::vector<Diagnostic> run(const std::string& rules) {
    return analyze(parse_transformation(std::string(kHeader) + rules), src, tgt);
  }
};

TEST_F(Analyze, FixtureIsWellTyped) {
  testing::Class2Relational c2r;
  EXPECT_TRUE(analyze(c2r.program, c2r.src, c2r.tgt).empty());
}

TEST_F(Analyze, UnknownTargetType) {
  EXPECT_EQ(run("rule R { from a : X to b : Row () }").size(), 1u);
}

TEST_F(Analyze, KindMismatchTable) {
  // Expected kinds by hand: X.label string, X.size integer; Y.name string,
  // Y.width integer. Only cross-kind pairs are mismatches.
  struct Case {
    const char* feature;
    const char* source;
    std::size_t diagnostics;
  };
  for (const Case c : {Case{"name", "label", 0}, Case{"width", "size", 0},
                       Case{"width", "label", 1}, Case{"name", "size", 1}}) {
    const auto d = run(std::string("rule R { from a : X to b : Y (") + c.feature + " <- a." +
                       c.source + ") }");
    EXPECT_EQ(d.size(), c.diagnostics) << c.feature << " <- " << c.source;
    if (!d.empty()) EXPECT_NE(d[0].message.find("kind mismatch"), std::string::npos);
  }
}

TEST_F(Analyze, GuardChecks) {
  EXPECT_EQ(run("rule R { from a : X (a.label < 'm') to b : Y () }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : X (a.size = 'm') to b : Y () }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : X (a.nope = 1) to b : Y () }").size(), 1u);
  EXPECT_TRUE(run("rule R { from a : X (a.size < 3 and a.label = 'm') to b : Y () }").empty());
}

TEST_F(Analyze, BindingChecks) {
  EXPECT_EQ(run("rule R { from a : X to b : Y (name <- 3) }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : X to b : Y (colour <- 'r') }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : X to b : Y (name <- a.nope) }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : X to b : Y (name <- 'a', name <- 'b') }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : X to b : Y (name <- b) }").size(), 1u);
  EXPECT_EQ(run("rule R { from a : Q to b : Y () }").size(), 1u);
}

TEST_F(Analyze, MetamodelNameMismatch) {
  const auto p = parse_transformation("transformation T from A to B; rule R { from a : X to b : Y () }");
  EXPECT_EQ(analyze(p, src, tgt).size(), 2u);
}

TEST_F(Analyze, SourceReferenceImages) {
  const Metamodel s = parse_metamodel(R"({"name": "Src", "types": [
    {"name": "P", "references": [{"name": "kids", "target": "C", "many": true},
                                  {"name": "one", "target": "C"}]},
    {"name": "C"}]})");
  const Metamodel t = parse_metamodel(R"({"name": "Tgt", "types": [
    {"name": "PP", "references": [{"name": "kids", "target": "CC", "many": true},
                                   {"name": "single", "target": "CC"},
                                   {"name": "wrong", "target": "PP", "many": true}]},
    {"name": "CC"}]})");
  auto diags = [&](const std::string& binding) {
    return analyze(parse_transformation(std::string(kHeader) + "rule RP { from p : P to q : PP (" +
                                        binding + ") } rule RC { from c : C to d : CC () }"),
                   s, t);
  };
  EXPECT_TRUE(diags("kids <- p.kids").empty());
  EXPECT_TRUE(diags("single <- p.one").empty());
  EXPECT_EQ(diags("single <- p.kids").size(), 1u);  // many into single
  EXPECT_EQ(diags("wrong <- p.kids").size(), 1u);   // image is CC, not PP
}

}  // namespace
}  // namespace mtmorph::mtl
