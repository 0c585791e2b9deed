#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "inet/compile.hpp"
#include "inet/infer.hpp"
#include "inet/parser.hpp"

namespace inet {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CompiledProgram compile_source(const std::string& source,
                                      const std::string& file = "<input>") {
  Program prog = parse(source, file);
  PolarityAssignment pol = infer_polarities(prog);
  return compile_rules(prog, pol);
}

inline CompiledProgram compile_file(const std::string& path) {
  return compile_source(read_file(path), path);
}

// Replaces (or adds) the `main` net of a program source. Used by the
// benchmark harness to splice generated start nets into a fixture file.
inline std::string replace_main(const std::string& source,
                                const std::string& main_equations,
                                const std::string& file = "<input>") {
  Program prog = parse(source, file);
  std::erase_if(prog.nets, [](const NetDecl& n) { return n.name == "main"; });
  std::string out = pretty_print(prog);
  out += "net main = " + main_equations + ";\n";
  return out;
}

// ---- benchmark input generation ----

// 32-bit linear congruential generator, x' = 1664525 x + 1013904223 mod 2^32
// (Numerical Recipes constants). Fixed here so generated benchmark inputs
// are identical on every machine.
class Lcg {
 public:
  explicit Lcg(uint32_t seed) : state_(seed) {}

  uint32_t next() {
    state_ = 1664525u * state_ + 1013904223u;
    return state_;
  }

  // uniform-ish value in [0, bound)
  uint32_t next_below(uint32_t bound) { return (next() >> 16) % bound; }

 private:
  uint32_t state_;
};

// Equations for `out ~ S^n(Z)` chains, flat so no parser recursion depth is
// needed: out ~ S(v1), v1 ~ S(v2), ..., v{n} ~ Z.
inline std::string unary_equations(const std::string& out, int n,
                                   const std::string& var_prefix) {
  std::string eqs;
  std::string prev = out;
  for (int i = 0; i < n; ++i) {
    std::string next = var_prefix + std::to_string(i);
    eqs += prev + " ~ S(" + next + "), ";
    prev = next;
  }
  eqs += prev + " ~ Z";
  return eqs;
}

// main net computing ack(m, n) into `out`
inline std::string ack_main_equations(int m, int n) {
  std::string eqs = "ack(nvar, out) ~ mroot, ";
  eqs += unary_equations("mroot", m, "m") + ", ";
  eqs += unary_equations("nvar", n, "n");
  return eqs;
}

// main net computing fib(n) into `out`
inline std::string fib_main_equations(int n) {
  return "fib(out) ~ nroot, " + unary_equations("nroot", n, "n");
}

// main net sorting a seeded random list of length n into `out`; elements
// are LCG values below 10000
inline std::string sort_main_equations(int n, uint32_t seed,
                                       std::vector<int>* elements_out = nullptr) {
  Lcg rng(seed);
  std::string eqs = "sort(out, acc0) ~ l0, acc0 ~ Nil";
  std::string prev = "l0";
  for (int i = 0; i < n; ++i) {
    int v = (int)rng.next_below(10000);
    if (elements_out) elements_out->push_back(v);
    std::string next = "l" + std::to_string(i + 1);
    eqs += ", " + prev + " ~ Cons(" + next + ")[" + std::to_string(v) + "]";
    prev = next;
  }
  eqs += ", " + prev + " ~ Nil";
  return eqs;
}

} // namespace inet
