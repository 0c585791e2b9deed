#pragma once

#include <map>
#include <string>
#include <vector>

#include "inet/pipeline.hpp"

namespace testsup {

inline std::string program_path(const std::string& name) {
  return std::string(INET_PROGRAMS_DIR) + "/" + name;
}

inline std::string program_source(const std::string& name) {
  return inet::read_file(program_path(name));
}

inline inet::CompiledProgram compile_fixture(const std::string& name) {
  return inet::compile_file(program_path(name));
}

// Independent brute-force oracle for polarity inference: enumerates every
// assignment over all ports of all declared agents and keeps those where
// every connection of every rule RHS and net joins opposite polarities under
// the first/second seeding convention. It walks the AST itself and shares
// nothing with the propagation engine it checks.
struct BruteForce {
  const inet::Program& prog;
  std::vector<int> base;
  int total = 0;

  explicit BruteForce(const inet::Program& p) : prog(p) {
    base.resize(prog.agents.size() + 1, 0);
    for (size_t i = 0; i < prog.agents.size(); ++i)
      base[i + 1] = base[i] + prog.agents[i].aux_arity + 1;
    total = base[prog.agents.size()];
  }

  int agent_index(const std::string& name) const {
    for (size_t i = 0; i < prog.agents.size(); ++i)
      if (prog.agents[i].name == name) return (int)i;
    return -1;
  }

  // An endpoint of a connection: port variable index plus a flip bit
  // (left-hand-side pattern variables stand for the surviving far end).
  struct End {
    int var;
    bool flip;
  };
  struct Con {
    End a, b;
  };

  struct Ctx {
    std::map<std::string, std::string> parent; // wire aliasing
    std::map<std::string, std::vector<End>> plugs;
    std::vector<Con> cons;

    std::string find(std::string w) {
      while (parent.count(w) && parent[w] != w) w = parent[w];
      return w;
    }
    void make(const std::string& w) {
      if (!parent.count(w)) parent[w] = w;
    }
  };

  struct TermEnd {
    bool is_wire;
    std::string wire;
    End port;
  };

  TermEnd walk_term(const inet::ATerm& t, Ctx& ctx) const {
    int a = agent_index(t.head);
    if (a < 0) {
      ctx.make(t.head);
      return TermEnd{true, t.head, {}};
    }
    for (size_t q = 0; q < t.args.size(); ++q) {
      TermEnd child = walk_term(t.args[q], ctx);
      connect(ctx, TermEnd{false, "", End{base[a] + (int)q + 1, false}}, child);
    }
    return TermEnd{false, "", End{base[a] + 0, false}};
  }

  void connect(Ctx& ctx, const TermEnd& x, const TermEnd& y) const {
    if (x.is_wire && y.is_wire) {
      std::string rx = ctx.find(x.wire), ry = ctx.find(y.wire);
      if (rx != ry) ctx.parent[ry] = rx;
      return;
    }
    if (x.is_wire) {
      ctx.plugs[ctx.find(x.wire)].push_back(y.port);
      return;
    }
    if (y.is_wire) {
      ctx.plugs[ctx.find(y.wire)].push_back(x.port);
      return;
    }
    ctx.cons.push_back(Con{x.port, y.port});
  }

  void walk_equations(const std::vector<inet::AEquation>& eqs, Ctx& ctx) const {
    for (const auto& eq : eqs) {
      TermEnd l = walk_term(eq.lhs, ctx);
      TermEnd r = walk_term(eq.rhs, ctx);
      connect(ctx, l, r);
    }
  }

  void flush(Ctx& ctx, std::vector<Con>& cons) const {
    // plugs may be filed under pre-merge representatives; regroup
    std::map<std::string, std::vector<End>> grouped;
    for (auto& [w, ps] : ctx.plugs) {
      auto& dst = grouped[ctx.find(w)];
      dst.insert(dst.end(), ps.begin(), ps.end());
    }
    for (auto& [w, ps] : grouped) {
      if (ps.size() == 2) cons.push_back(Con{ps[0], ps[1]});
      // one plug: free interface point, no constraint
    }
    cons.insert(cons.end(), ctx.cons.begin(), ctx.cons.end());
  }

  std::vector<Con> collect() const {
    std::vector<Con> cons;
    for (const auto& rule : prog.rules) {
      Ctx ctx;
      int f = agent_index(rule.first.agent);
      int c = agent_index(rule.second.agent);
      for (size_t i = 0; i < rule.first.port_vars.size(); ++i) {
        ctx.make(rule.first.port_vars[i]);
        ctx.plugs[rule.first.port_vars[i]].push_back(
            End{base[f] + (int)i + 1, true});
      }
      for (size_t j = 0; j < rule.second.port_vars.size(); ++j) {
        ctx.make(rule.second.port_vars[j]);
        ctx.plugs[rule.second.port_vars[j]].push_back(
            End{base[c] + (int)j + 1, true});
      }
      walk_equations(rule.rhs, ctx);
      flush(ctx, cons);
    }
    for (const auto& net : prog.nets) {
      Ctx ctx;
      walk_equations(net.equations, ctx);
      flush(ctx, cons);
    }
    return cons;
  }

  static bool pos(uint64_t bits, int var) { return (bits >> var) & 1; }

  bool valid(uint64_t bits, const std::vector<Con>& cons) const {
    for (const auto& rule : prog.rules) {
      int f = agent_index(rule.first.agent);
      int c = agent_index(rule.second.agent);
      if (pos(bits, base[f] + 0)) return false; // function principal is Neg
      if (!pos(bits, base[c] + 0)) return false;
    }
    for (const auto& con : cons) {
      bool pa = pos(bits, con.a.var) ^ con.a.flip;
      bool pb = pos(bits, con.b.var) ^ con.b.flip;
      if (pa == pb) return false;
    }
    return true;
  }

  std::vector<std::map<std::string, std::vector<inet::Polarity>>> solutions()
      const {
    auto cons = collect();
    std::vector<std::map<std::string, std::vector<inet::Polarity>>> out;
    for (uint64_t bits = 0; bits < (1ull << total); ++bits) {
      if (!valid(bits, cons)) continue;
      std::map<std::string, std::vector<inet::Polarity>> sol;
      for (size_t a = 0; a < prog.agents.size(); ++a) {
        std::vector<inet::Polarity> pols;
        for (int p = 0; p <= prog.agents[a].aux_arity; ++p)
          pols.push_back(pos(bits, base[a] + p) ? inet::Polarity::Pos
                                                : inet::Polarity::Neg);
        sol[prog.agents[a].name] = std::move(pols);
      }
      out.push_back(std::move(sol));
    }
    return out;
  }
};

} // namespace testsup
