#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/diag.hpp"
#include "inet/polarity.hpp"
#include "inet/resolve.hpp"

namespace inet {

// Port polarities per agent, principal first. Only agents that occur in at
// least one rule or net are assigned; declared-but-unused agents carry no
// information to infer from and are left out.
struct PolarityAssignment {
  std::map<std::string, std::vector<Polarity>> agents;

  const std::vector<Polarity>* find(const std::string& name) const {
    auto it = agents.find(name);
    return it == agents.end() ? nullptr : &it->second;
  }
};

namespace detail {

// Union-find with parity: two ports in one class have equal polarity when
// their parities match, opposite otherwise. A distinguished root variable is
// pinned to Neg, so any class containing it is fully determined.
class ParityDsu {
 public:
  explicit ParityDsu(size_t n) : parent_(n), parity_(n, 0) {
    for (size_t i = 0; i < n; ++i) parent_[i] = (int)i;
  }

  std::pair<int, uint8_t> find(int x) {
    uint8_t par = 0;
    while (parent_[x] != x) {
      par ^= parity_[x];
      x = parent_[x];
    }
    return {x, par};
  }

  // Demand pol(a) xor pol(b) == parity. Returns false on contradiction.
  bool unite(int a, int b, uint8_t parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (uint8_t)(pa ^ pb) == parity;
    parent_[rb] = ra;
    parity_[rb] = (uint8_t)(pa ^ pb ^ parity);
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<uint8_t> parity_;
};

} // namespace detail

// Seeds principal polarities by the first/second rule convention, propagates
// the opposite-ends constraint over every connection of every rule RHS and
// net declaration to a fixpoint, then applies the last-unknown-port
// heuristic one agent at a time in name order. "Last port" is read as the
// single port still undetermined, not the highest-numbered one.
inline PolarityAssignment infer_polarities(const Program& prog) {
  DeclIndex decls(prog);
  const size_t n_agents = prog.agents.size();

  std::vector<int> base(n_agents + 1, 0);
  for (size_t i = 0; i < n_agents; ++i)
    base[i + 1] = base[i] + prog.agents[i].aux_arity + 1;
  const int root = base[n_agents];
  detail::ParityDsu dsu(root + 1);
  std::vector<bool> occurs(n_agents, false);

  auto port_name = [&](int agent, int port) {
    return prog.agents[agent].name + "." + std::to_string(port);
  };

  auto pin_text = [&](int agent, int port) -> std::string {
    auto [r, p] = dsu.find(base[agent] + port);
    auto [rr, rp] = dsu.find(root);
    if (r != rr) return "unknown";
    return std::string(to_string(p ^ rp ? Polarity::Pos : Polarity::Neg));
  };

  auto conflict = [&](int agent, int port, SourcePos pos,
                      const std::string& detail_msg) -> InferError {
    InferError err(InferError::Kind::Conflict,
                   format_diag(prog.file, pos, "error",
                               "no consistent polarity assignment: " + detail_msg));
    err.agent = prog.agents[agent].name;
    err.port = port;
    err.positions.push_back(pos);
    return err;
  };

  // (a) seed principal polarities: first-mentioned agent of a rule is the
  // function (Neg), the second the constructor (Pos)
  for (const auto& rule : prog.rules) {
    check_rule_patterns(decls, rule);
    int f = *decls.find(rule.first.agent);
    int c = *decls.find(rule.second.agent);
    occurs[f] = occurs[c] = true;
    if (!dsu.unite(base[f] + 0, root, 0))
      throw conflict(f, 0, rule.pos,
                     "'" + rule.first.agent + "' is the first agent of this rule"
                     " (principal Neg) but was already forced Pos");
    if (!dsu.unite(base[c] + 0, root, 1))
      throw conflict(c, 0, rule.pos,
                     "'" + rule.second.agent + "' is the second agent of this rule"
                     " (principal Pos) but was already forced Neg");
  }

  // (b)+(c) connected ports get opposite polarities, one global signature
  // per label: every connection of every RHS and net becomes one parity edge
  struct Edge {
    int va, vb;
    uint8_t parity;
    int agent_a, port_a, agent_b, port_b;
    SourcePos pos;
  };
  std::vector<Edge> edges;

  auto add_lowered = [&](const LoweredNet& low, const RuleDecl* rule) {
    auto endpoint = [&](const Plug& p) -> std::pair<int, int> {
      switch (p.kind) {
        case Plug::Kind::Node: return {low.nodes[p.node].agent, p.port};
        case Plug::Kind::SourceIface:
          return {*decls.find(rule->first.agent), p.port};
        default: return {*decls.find(rule->second.agent), p.port};
      }
    };
    for (const auto& node : low.nodes) occurs[node.agent] = true;
    for (const auto& conn : low.connections) {
      auto [aa, pa] = endpoint(conn.a);
      auto [ab, pb] = endpoint(conn.b);
      // Interface plugs stand for the surviving far end of the consumed
      // node's connection, so they contribute the opposite view.
      uint8_t flip_a = conn.a.kind != Plug::Kind::Node;
      uint8_t flip_b = conn.b.kind != Plug::Kind::Node;
      edges.push_back(Edge{base[aa] + pa, base[ab] + pb,
                           (uint8_t)(1 ^ flip_a ^ flip_b), aa, pa, ab, pb,
                           conn.pos});
    }
  };

  for (const auto& rule : prog.rules) add_lowered(lower_rule_rhs(decls, rule), &rule);
  for (const auto& net : prog.nets) add_lowered(lower_net_decl(decls, net), nullptr);

  for (const auto& e : edges) {
    if (!dsu.unite(e.va, e.vb, e.parity)) {
      throw conflict(e.agent_a, e.port_a, e.pos,
                     "connection joins " + port_name(e.agent_a, e.port_a) +
                         " (" + pin_text(e.agent_a, e.port_a) + ") and " +
                         port_name(e.agent_b, e.port_b) + " (" +
                         pin_text(e.agent_b, e.port_b) + ") inconsistently");
    }
  }

  auto pinned = [&](int var) {
    auto [r, p] = dsu.find(var);
    auto [rr, rp] = dsu.find(root);
    return r == rr ? std::optional<Polarity>((p ^ rp) ? Polarity::Pos
                                                      : Polarity::Neg)
                   : std::nullopt;
  };

  // (d) heuristic, at fixpoint only: a function with every determined port
  // Neg and exactly one port undetermined gets Pos there. Name order, one
  // agent per pass, re-propagating (the whole parity class pins) each time.
  std::map<std::string, int> by_name;
  for (size_t i = 0; i < n_agents; ++i)
    if (occurs[i]) by_name.emplace(prog.agents[i].name, (int)i);

  bool fired = true;
  while (fired) {
    fired = false;
    for (const auto& [name, idx] : by_name) {
      int arity = prog.agents[idx].aux_arity + 1;
      auto principal = pinned(base[idx] + 0);
      if (!principal || *principal != Polarity::Neg) continue;
      int unknown = -1;
      bool all_known_neg = true;
      for (int p = 0; p < arity; ++p) {
        auto pol = pinned(base[idx] + p);
        if (!pol) {
          if (unknown >= 0) { unknown = -2; break; }
          unknown = p;
        } else if (*pol != Polarity::Neg) {
          all_known_neg = false;
          break;
        }
      }
      if (unknown >= 0 && all_known_neg) {
        if (!dsu.unite(base[idx] + unknown, root, 1))
          throw conflict(idx, unknown, prog.agents[idx].pos,
                         "heuristic demanded Pos on " + port_name(idx, unknown) +
                             " but propagation already forced Neg");
        fired = true;
        break;
      }
    }
  }

  std::vector<std::string> unknown_ports;
  PolarityAssignment out;
  for (const auto& [name, idx] : by_name) {
    std::vector<Polarity> pols;
    int arity = prog.agents[idx].aux_arity + 1;
    for (int p = 0; p < arity; ++p) {
      auto pol = pinned(base[idx] + p);
      if (!pol) {
        unknown_ports.push_back(port_name(idx, p));
        continue;
      }
      pols.push_back(*pol);
    }
    if ((int)pols.size() == arity) out.agents.emplace(name, std::move(pols));
  }
  if (!unknown_ports.empty()) {
    std::string msg = "polarities left undetermined after propagation and the"
                      " last-port heuristic:";
    for (const auto& p : unknown_ports) msg += " " + p;
    InferError err(InferError::Kind::Undetermined,
                   format_diag(prog.file, {}, "error", msg));
    err.unknown_ports = std::move(unknown_ports);
    throw err;
  }
  return out;
}

} // namespace inet
