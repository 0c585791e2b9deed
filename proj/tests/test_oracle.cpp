#include <catch_amalgamated.hpp>

#include "inet/oracle.hpp"
#include "inet/pipeline.hpp"
#include "test_support.hpp"

using namespace inet;

namespace {

struct RunOut {
  seq::SeqOutcome outcome;
  TermResult out;
};

RunOut run_fixture_seq(const std::string& name, bool lifo = false,
                       const std::string& iface = "out") {
  CompiledProgram cp = testsup::compile_fixture(name);
  REQUIRE(cp.main());
  seq::SeqOptions opts;
  opts.lifo = lifo;
  RunOut r{seq::reduce_sequential(cp.lang, *cp.main(), opts), {}};
  r.out = seq::readback(cp.lang, *r.outcome.net, iface);
  return r;
}

RunOut run_source_seq(const std::string& src, const std::string& iface = "out") {
  CompiledProgram cp = compile_source(src, "<test>");
  REQUIRE(cp.main());
  RunOut r{seq::reduce_sequential(cp.lang, *cp.main()), {}};
  if (!iface.empty()) r.out = seq::readback(cp.lang, *r.outcome.net, iface);
  return r;
}

} // namespace

TEST_CASE("add fixture: 1 + 2 = 3") {
  auto r = run_fixture_seq("add.inet");
  REQUIRE(r.out.ok());
  CHECK(decode_unary(r.out.term) == 3);
  // add (S Z) two -> S (add Z two) -> S two, one application per rule
  CHECK(r.outcome.interactions == 2);
  CHECK(r.outcome.forwards == 1);
}

TEST_CASE("add/Z alone spawns exactly one forwarder and no nodes") {
  auto r = run_source_seq(R"(
agent Z : 0;
agent S : 1;
agent add : 2;
rule add(n, r) >< Z => r ~ n;
rule add(n, r) >< S(m) => r ~ S(w), add(n, w) ~ m;
net main = add(two, out) ~ zero, zero ~ Z, two ~ S(t1), t1 ~ S(t2), t2 ~ Z;
)");
  CHECK(r.outcome.interactions == 1);
  CHECK(r.outcome.forwards == 1);
  CHECK(r.outcome.tasks_spawned == 2); // the add reducer and the forwarder
  REQUIRE(r.out.ok());
  CHECK(decode_unary(r.out.term) == 2);
}

TEST_CASE("empty cycle: interface short-circuit onto the same cell") {
  auto r = run_source_seq(R"(
agent Z : 0;
agent S : 1;
agent add : 2;
rule add(n, r) >< Z => r ~ n;
rule add(n, r) >< S(m) => r ~ S(w), add(n, w) ~ m;
net main = add(x, x) ~ zero, zero ~ Z;
)",
                          "");
  CHECK(r.outcome.interactions == 1);
  CHECK(r.outcome.forwards == 0); // no forwarder for the self-pair
  CHECK(r.outcome.tasks_spawned == 1);
  CHECK(r.outcome.blocked.empty());
}

TEST_CASE("cyclic garbage reduces to quiescence without readback") {
  auto r = run_source_seq(R"(
agent Z : 0;
agent S : 1;
agent add : 2;
rule add(n, r) >< Z => r ~ n;
rule add(n, r) >< S(m) => r ~ S(w), add(n, w) ~ m;
net main = add(x, x) ~ one, one ~ S(o1), o1 ~ Z;
)",
                          "");
  CHECK(r.outcome.interactions == 2);
  CHECK(r.outcome.blocked.empty());
}

TEST_CASE("empty main net quiesces immediately") {
  auto r = run_source_seq("net main = ;", "");
  CHECK(r.outcome.interactions == 0);
  CHECK(r.outcome.forwards == 0);
  CHECK(r.outcome.tasks_spawned == 0);
}

TEST_CASE("mult fixture: 2 * 3 = 6 with explicit garbage") {
  auto r = run_fixture_seq("add_mult.inet");
  REQUIRE(r.out.ok());
  CHECK(decode_unary(r.out.term) == 6);
  CHECK(r.outcome.blocked.empty());
}

TEST_CASE("dup then erase: surviving copy reads back") {
  auto r = run_fixture_seq("dup_erase.inet");
  REQUIRE(r.out.ok());
  CHECK(decode_unary(r.out.term) == 2);
}

TEST_CASE("attribute fibonacci: fib 20 = Num[6765]") {
  auto r = run_fixture_seq("fibonacci_attr.inet");
  REQUIRE(r.out.ok());
  CHECK(r.out.term.label == "Num");
  REQUIRE(r.out.term.attrs.size() == 1);
  CHECK(r.out.term.attrs[0] == Value(Int(6765)));
}

TEST_CASE("unary fib 10 = 55") {
  std::string src = inet::replace_main(testsup::program_source("fib.inet"),
                                       fib_main_equations(10));
  auto r = run_source_seq(src);
  REQUIRE(r.out.ok());
  CHECK(decode_unary(r.out.term) == 55);
}

TEST_CASE("ack 2 3 = 9 both orders, identical counts") {
  std::string src = inet::replace_main(testsup::program_source("ack.inet"),
                                       ack_main_equations(2, 3));
  CompiledProgram cp = compile_source(src);
  seq::SeqOptions fifo, lifo;
  lifo.lifo = true;
  auto a = seq::reduce_sequential(cp.lang, *cp.main(), fifo);
  auto b = seq::reduce_sequential(cp.lang, *cp.main(), lifo);
  auto ta = seq::readback(cp.lang, *a.net, "out");
  auto tb = seq::readback(cp.lang, *b.net, "out");
  REQUIRE(ta.ok());
  REQUIRE(tb.ok());
  CHECK(decode_unary(ta.term) == 9);
  CHECK(term_equal(ta.term, tb.term));
  CHECK(a.interactions == b.interactions);
}

TEST_CASE("worklist discipline never changes counts or readback") {
  for (const char* name :
       {"add.inet", "add_mult.inet", "dup_erase.inet", "sort.inet",
        "fibonacci_attr.inet"}) {
    CAPTURE(name);
    auto fifo = run_fixture_seq(name, false);
    auto lifo = run_fixture_seq(name, true);
    CHECK(fifo.outcome.interactions == lifo.outcome.interactions);
    CHECK(result_equal(fifo.out, lifo.out));
  }
}

TEST_CASE("sort fixture sorts and obeys the pass-cost law") {
  auto r = run_fixture_seq("sort.inet");
  REQUIRE(r.out.ok());
  std::vector<int> got;
  const Term* cur = &r.out.term;
  while (cur->label == "Cons") {
    got.push_back((int)std::get<Int>(cur->attrs[0]));
    cur = &cur->kids[0];
  }
  CHECK(cur->label == "Nil");
  std::vector<int> expect{1, 5, 5, 17, 30, 44, 68, 72, 83, 91};
  CHECK(got == expect);
  // n = 10: (10/2 + 1) * (10 + 1)
  CHECK(r.outcome.interactions == 66);
}

TEST_CASE("generated sort inputs obey the law at n = 4 and stay permutations") {
  for (uint32_t seed : {1u, 7u, 42u}) {
    CAPTURE(seed);
    std::vector<int> elements;
    std::string src =
        inet::replace_main(testsup::program_source("sort.inet"),
                           sort_main_equations(4, seed, &elements));
    auto r = run_source_seq(src);
    REQUIRE(r.out.ok());
    CHECK(r.outcome.interactions == 15); // (4/2+1)*(4+1)
    std::vector<int> got;
    const Term* cur = &r.out.term;
    while (cur->label == "Cons") {
      got.push_back((int)std::get<Int>(cur->attrs[0]));
      cur = &cur->kids[0];
    }
    REQUIRE(got.size() == 4);
    CHECK(std::is_sorted(got.begin(), got.end()));
    std::sort(elements.begin(), elements.end());
    CHECK(got == elements);
  }
}

TEST_CASE("missing rule aborts with both labels") {
  CompiledProgram cp = testsup::compile_fixture("missing_rule.inet");
  try {
    seq::reduce_sequential(cp.lang, *cp.main());
    FAIL("expected MissingRuleError");
  } catch (const MissingRuleError& e) {
    CHECK(e.function_label == "f");
    CHECK(e.constructor_label == "S");
  }
}

TEST_CASE("all-false guards abort with NoBranch") {
  CompiledProgram cp = testsup::compile_fixture("nobranch.inet");
  CHECK_THROWS_AS(seq::reduce_sequential(cp.lang, *cp.main()), NoBranchError);
}

TEST_CASE("deadlocked nets leave blocked tasks and Blocked readback") {
  auto r = run_fixture_seq("deadlock.inet");
  CHECK(r.out.status == TermResult::Status::Blocked);
  REQUIRE(r.outcome.blocked.size() == 2);
  bool has_fwd = false, has_add = false;
  for (const auto& b : r.outcome.blocked) {
    if (b == "forwarder") has_fwd = true;
    if (b == "add") has_add = true;
  }
  CHECK(has_fwd);
  CHECK(has_add);
}

TEST_CASE("decode_unary") {
  Term z{"Z", {}};
  CHECK(decode_unary(z) == 0);
  Term s2{"S", {}};
  s2.kids.emplace_back("S", std::vector<Value>{});
  s2.kids[0].kids.emplace_back("Z", std::vector<Value>{});
  CHECK(decode_unary(s2) == 2);
  Term cons{"Cons", {Value(Int(1))}};
  CHECK_FALSE(decode_unary(cons).has_value());
}

TEST_CASE("readback reports cycles instead of looping") {
  CompiledProgram cp = testsup::compile_fixture("add.inet");
  AgentId s = *cp.lang.sigs.find("S");
  seq::SeqNet net;
  auto* c_out = net.new_cell();
  auto* c_loop = net.new_cell();
  seq::SNode& n1 = net.nodes.emplace_back();
  n1.agent = s;
  n1.aux = {seq::SPort{Polarity::Neg, c_loop}};
  c_out->full = &n1;
  c_loop->full = &n1; // the chain re-enters itself
  auto r = seq::readback(cp.lang, c_out);
  CHECK(r.status == TermResult::Status::Cycle);
}

TEST_CASE("readback depth limit turns runaways into TooDeep") {
  CompiledProgram cp = testsup::compile_fixture("add.inet");
  std::string src = inet::replace_main(testsup::program_source("add.inet"),
                                       "add(two, out) ~ one, one ~ S(o1), "
                                       "o1 ~ Z, two ~ S(t1), t1 ~ S(t2), t2 ~ Z");
  CompiledProgram cp2 = compile_source(src);
  auto out = seq::reduce_sequential(cp2.lang, *cp2.main());
  auto r = seq::readback(cp2.lang, *out.net, "out", /*max_depth=*/2);
  CHECK(r.status == TermResult::Status::TooDeep);
}

TEST_CASE("deep terms destruct and render without stack overflow") {
  Term t{"Z", {}};
  for (int i = 0; i < 200000; ++i) {
    Term s{"S", {}};
    s.kids.push_back(std::move(t));
    t = std::move(s);
  }
  CHECK(decode_unary(t) == 200000);
  std::string text = term_text(t);
  CHECK(text == "S^200000(Z)");
} // destructor runs here

TEST_CASE("trace callback sees every application in order") {
  CompiledProgram cp = testsup::compile_fixture("add.inet");
  std::vector<std::string> log;
  seq::SeqOptions opts;
  opts.trace = [&](uint64_t k, const std::string& f, const std::string& c,
                   size_t branch) {
    log.push_back(std::to_string(k) + ":" + f + "><" + c + "/" +
                  std::to_string(branch));
  };
  seq::reduce_sequential(cp.lang, *cp.main(), opts);
  REQUIRE(log.size() == 2);
  CHECK(log[0] == "0:add><S/0");
  CHECK(log[1] == "1:add><Z/0");
}
