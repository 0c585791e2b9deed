#include <catch_amalgamated.hpp>

#include "inet/compile.hpp"
#include "inet/pipeline.hpp"
#include "test_support.hpp"

using namespace inet;

TEST_CASE("add/S compiles to the canonical two-node description") {
  CompiledProgram cp = testsup::compile_fixture("add.inet");
  AgentId add = *cp.lang.sigs.find("add");
  AgentId s = *cp.lang.sigs.find("S");
  const RuleEntry* entry = cp.lang.rules.find(add, s);
  REQUIRE(entry);
  REQUIRE(entry->branches.size() == 1);
  const auto& d = entry->branches[0].rhs;
  REQUIRE(d.nodes.size() == 2);
  CHECK(d.source.size() == 2);
  CHECK(d.target.size() == 1);
  // node 0 is the new add (first occurrence in the RHS), node 1 the new S
  CHECK(d.nodes[0].label.agent == s); // "r ~ S(w)" appears first
  CHECK(d.nodes[1].label.agent == add);
  // the S deposits into the result interface, the add consumes m
  CHECK(d.nodes[0].ports[0] == PortRef::source(2));
  CHECK(d.nodes[1].ports[0] == PortRef::target(1));
  CHECK(d.nodes[1].ports[1] == PortRef::source(1));
  CHECK(d.nodes[1].ports[2] == PortRef::internal(0, 1));
  CHECK(d.source[0] == PortRef::internal(1, 1));
  CHECK(d.source[1] == PortRef::internal(0, 0));
}

TEST_CASE("add/Z compiles to the pure short-circuit") {
  CompiledProgram cp = testsup::compile_fixture("add.inet");
  AgentId add = *cp.lang.sigs.find("add");
  AgentId z = *cp.lang.sigs.find("Z");
  const RuleEntry* entry = cp.lang.rules.find(add, z);
  REQUIRE(entry);
  const auto& d = entry->branches[0].rhs;
  CHECK(d.nodes.empty());
  CHECK(d.target.empty());
  REQUIRE(d.source.size() == 2);
  CHECK(d.source[0] == PortRef::source(2));
  CHECK(d.source[1] == PortRef::source(1));
}

TEST_CASE("every compiled fixture description passes validation") {
  for (const char* name :
       {"add.inet", "add_mult.inet", "ack.inet", "ackermann.inet", "fib.inet",
        "fibonacci_attr.inet", "sort.inet", "dup_erase.inet", "deadlock.inet",
        "missing_rule.inet", "nobranch.inet", "heuristic.inet"}) {
    CAPTURE(name);
    // compile_rules itself validates and throws on violation; reaching here
    // means every rule and net of the fixture passed
    CompiledProgram cp = testsup::compile_fixture(name);
    CHECK(cp.lang.sigs.size() > 0);
  }
}

TEST_CASE("compiled descriptions round-trip through the debug text form") {
  CompiledProgram cp = testsup::compile_fixture("sort.inet");
  auto print = [&](const LabelExpr& l) { return cp.lang.sigs.name(l.agent); };
  AgentId sortA = *cp.lang.sigs.find("sort");
  AgentId cons = *cp.lang.sigs.find("Cons");
  const RuleEntry* entry = cp.lang.rules.find(sortA, cons);
  REQUIRE(entry);
  const auto& d = entry->branches[0].rhs;
  std::string text = description_to_text(d, print);
  // labels come back by name; compare the structure via a second print
  auto parse_label = [&](const std::string& s) {
    LabelExpr l;
    l.agent = *cp.lang.sigs.find(s);
    return l;
  };
  auto back = description_from_text<LabelExpr>(text, parse_label);
  CHECK(description_to_text(back, print) == text);
  CHECK(back.source == d.source);
  CHECK(back.target == d.target);
  REQUIRE(back.nodes.size() == d.nodes.size());
  for (size_t n = 0; n < d.nodes.size(); ++n) {
    CHECK(back.nodes[n].ports == d.nodes[n].ports);
    CHECK(back.nodes[n].label.agent == d.nodes[n].label.agent);
  }
}

TEST_CASE("dropping a left-hand-side port variable is a linearity error") {
  const char* src = R"(
agent Z : 0;
agent f : 2;
rule f(a, b) >< Z => a ~ Z;
)";
  try {
    compile_source(src, "linearity.inet");
    FAIL("expected CompileError");
  } catch (const CompileError& e) {
    CHECK(std::string(e.what()).find("does not occur") != std::string::npos);
  }
}

TEST_CASE("using a port variable twice is a linearity error") {
  const char* src = R"(
agent Z : 0;
agent S : 1;
agent f : 2;
rule f(a, b) >< Z => a ~ S(w), b ~ S(w), w ~ Z;
)";
  CHECK_THROWS_AS(compile_source(src, "linearity2.inet"), CompileError);
}

TEST_CASE("internal variables must occur exactly twice") {
  const char* src = R"(
agent Z : 0;
agent f : 1;
rule f(a) >< Z => a ~ Z, lonely ~ Z;
)";
  try {
    compile_source(src, "linearity3.inet");
    FAIL("expected CompileError");
  } catch (const CompileError& e) {
    CHECK(std::string(e.what()).find("lonely") != std::string::npos);
  }
}

TEST_CASE("arity mismatches are compile errors") {
  CHECK_THROWS_AS(
      compile_source("agent Z:0; agent f:2; rule f(a) >< Z => a ~ Z;"),
      CompileError);
  CHECK_THROWS_AS(
      compile_source("agent Z:0; agent S:1; agent f:1;"
                     "rule f(a) >< Z => a ~ S(x, y), x ~ Z, y ~ Z;"),
      CompileError);
}

TEST_CASE("sort's conditional rule compiles to guarded branches") {
  CompiledProgram cp = testsup::compile_fixture("sort.inet");
  AgentId bub = *cp.lang.sigs.find("bubble");
  AgentId cons = *cp.lang.sigs.find("Cons");
  const RuleEntry* entry = cp.lang.rules.find(bub, cons);
  REQUIRE(entry);
  REQUIRE(entry->branches.size() == 2);
  CHECK(entry->branches[0].guard.has_value());
  CHECK_FALSE(entry->branches[1].guard.has_value());
  CHECK_FALSE(entry->simple);

  // unguarded single-branch unary rules are flagged simple
  CompiledProgram add = testsup::compile_fixture("add.inet");
  const RuleEntry* addS = add.lang.rules.find(*add.lang.sigs.find("add"),
                                              *add.lang.sigs.find("S"));
  REQUIRE(addS);
  CHECK(addS->simple);
}

TEST_CASE("main nets expose free variables as observed interfaces") {
  CompiledProgram cp = testsup::compile_fixture("add.inet");
  const CompiledNet* main = cp.main();
  REQUIRE(main);
  REQUIRE(main->observed.size() == 1);
  CHECK(main->observed[0].name == "out");
  // `out` plugs into add's result port, which is positive
  CHECK(main->observed[0].holder_pol == Polarity::Pos);
  CHECK(main->desc.source.size() == 1);
}

TEST_CASE("rule keys pair a function with a constructor") {
  // g is forced Pos-principal by its constructor position in rule 1, so a
  // rule keyed g >< Z cannot seed; the conflict surfaces at inference
  const char* src = R"(
agent Z : 0;
agent f : 1;
agent g : 1;
rule f(x) >< g(y) => x ~ Z, y ~ Z;
rule g(x) >< Z => x ~ Z;
)";
  CHECK_THROWS_AS(compile_source(src), InferError);
}

TEST_CASE("net attribute expressions must be closed") {
  const char* src = R"(
agent Num(int) : 0;
agent f : 1;
rule f(r) >< Num[x] => r ~ Num[x];
net main = out ~ Num[n + 1];
)";
  CHECK_THROWS_AS(compile_source(src), CompileError);
}
