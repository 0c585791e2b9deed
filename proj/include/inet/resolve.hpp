#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inet/ast.hpp"
#include "inet/diag.hpp"

namespace inet {

// Structural resolution of a net expression (rule RHS or net declaration):
// decides which names are agents and which are connection variables, checks
// arities and linearity, and produces the explicit list of connections.
// Both polarity inference and rule compilation run on this output.

struct Plug {
  enum class Kind : uint8_t { Node, SourceIface, TargetIface };
  Kind kind = Kind::Node;
  int node = -1; // Node: occurrence index
  int port = 0;  // Node: 0 = principal; ifaces: 1-based interface index

  bool operator==(const Plug&) const = default;
};

struct LoweredNode {
  int agent = -1; // index into Program.agents
  SourcePos pos;
  std::vector<const AExpr*> attr_exprs; // one per declared attribute
};

struct LoweredConnection {
  Plug a, b;
  SourcePos pos;
};

struct LoweredNet {
  std::vector<LoweredNode> nodes;
  std::vector<LoweredConnection> connections;
  // Net declarations only: variables that occur exactly once become the
  // net's observable interface, in order of first appearance.
  std::vector<std::string> free_names;
  std::vector<Plug> free_plugs;
};

class DeclIndex {
 public:
  explicit DeclIndex(const Program& prog) : prog_(prog) {
    for (size_t i = 0; i < prog.agents.size(); ++i) {
      auto [it, fresh] = by_name_.emplace(prog.agents[i].name, (int)i);
      if (!fresh)
        throw CompileError(prog.file, prog.agents[i].pos,
                           "agent '" + prog.agents[i].name + "' declared twice");
    }
  }

  const Program& program() const { return prog_; }

  std::optional<int> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  const AgentDecl& decl(int idx) const { return prog_.agents[idx]; }

 private:
  const Program& prog_;
  std::unordered_map<std::string, int> by_name_;
};

namespace detail {

// Wires are connection variables; equations between two variables alias them.
class WireSet {
 public:
  int wire_for(const std::string& name, SourcePos pos) {
    auto it = index_.find(name);
    if (it != index_.end()) return find(it->second);
    int id = (int)wires_.size();
    wires_.push_back(Wire{name, pos, {}, id});
    index_.emplace(name, id);
    return id;
  }

  int find(int w) {
    while (wires_[w].alias != w) w = wires_[w].alias = wires_[wires_[w].alias].alias;
    return w;
  }

  // Returns false when both names already denote the same wire (self-loop).
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // keep the earlier wire as representative so reporting follows
    // first-appearance order
    if (b < a) std::swap(a, b);
    wires_[b].alias = a;
    auto& pa = wires_[a].plugs;
    auto& pb = wires_[b].plugs;
    pa.insert(pa.end(), pb.begin(), pb.end());
    pb.clear();
    return true;
  }

  void add_plug(int w, Plug p) { wires_[find(w)].plugs.push_back(p); }

  struct Wire {
    std::string name;
    SourcePos pos;
    std::vector<Plug> plugs;
    int alias;
  };

  std::vector<Wire>& all() { return wires_; }

 private:
  std::vector<Wire> wires_;
  std::unordered_map<std::string, int> index_;
};

} // namespace detail

class NetLowering {
 public:
  NetLowering(const DeclIndex& decls, std::string context)
      : decls_(decls), file_(decls.program().file), context_(std::move(context)) {}

  // Pre-binds a left-hand-side port variable to an interface plug.
  void bind_iface(const std::string& var, Plug plug, SourcePos pos) {
    if (decls_.find(var))
      throw CompileError(file_, pos,
                         "port variable '" + var + "' in " + context_ +
                             " shadows an agent name");
    int w = wires_.wire_for(var, pos);
    iface_bound_.insert(var);
    wires_.add_plug(w, plug);
  }

  void add_equations(const std::vector<AEquation>& eqs) {
    for (const auto& eq : eqs) {
      End l = lower_term(eq.lhs);
      End r = lower_term(eq.rhs);
      connect(l, r, eq.lhs.pos);
    }
  }

  // `rule_context`: free variables are linearity errors rather than
  // interface points.
  LoweredNet finish(bool rule_context) {
    LoweredNet out;
    out.nodes = std::move(nodes_);
    out.connections = std::move(pairs_);
    for (auto& w : wires_.all()) {
      if (w.alias != (int)(&w - wires_.all().data())) continue; // merged away
      if (w.plugs.size() == 2) {
        out.connections.push_back({w.plugs[0], w.plugs[1], w.pos});
        continue;
      }
      if (w.plugs.size() > 2) {
        throw CompileError(file_, w.pos,
                           "variable '" + w.name + "' in " + context_ +
                               " is used " + use_count(w) +
                               "; a connection has exactly two ends");
      }
      // 0 or 1 plugs
      if (rule_context) {
        if (iface_bound_.count(w.name))
          throw CompileError(file_, w.pos,
                             "left-hand-side port variable '" + w.name +
                                 "' does not occur in the right-hand side of " +
                                 context_);
        throw CompileError(file_, w.pos,
                           "variable '" + w.name + "' in " + context_ +
                               " is used " + use_count(w) +
                               "; internal variables must occur exactly twice");
      }
      if (w.plugs.empty())
        throw CompileError(file_, w.pos,
                           "variables '" + w.name + "' in " + context_ +
                               " wire two interface points together; give the"
                               " connection at least one agent end");
      out.free_names.push_back(w.name);
      out.free_plugs.push_back(w.plugs[0]);
    }
    return out;
  }

 private:
  struct End {
    bool is_wire;
    int wire = -1;
    Plug plug;
  };

  std::string use_count(const detail::WireSet::Wire& w) const {
    size_t uses = w.plugs.size() - (iface_bound_.count(w.name) ? 1 : 0);
    return std::to_string(uses) + (uses == 1 ? " time" : " times");
  }

  End lower_term(const ATerm& t) {
    auto agent = decls_.find(t.head);
    bool is_application = t.has_parens || !t.args.empty() || !t.attrs.empty();
    if (!agent) {
      if (is_application)
        throw CompileError(file_, t.pos,
                           "unknown agent '" + t.head + "' in " + context_ +
                               " (undeclared agents and generic rules are not"
                               " supported)");
      return End{true, wires_.wire_for(t.head, t.pos), {}};
    }
    const AgentDecl& d = decls_.decl(*agent);
    if ((int)t.args.size() != d.aux_arity)
      throw CompileError(file_, t.pos,
                         "agent '" + t.head + "' has " +
                             std::to_string(d.aux_arity) +
                             " auxiliary ports but " + context_ + " applies it to " +
                             std::to_string(t.args.size()));
    if (t.attrs.size() != d.attr_types.size())
      throw CompileError(file_, t.pos,
                         "agent '" + t.head + "' carries " +
                             std::to_string(d.attr_types.size()) +
                             " attributes but " + context_ + " supplies " +
                             std::to_string(t.attrs.size()));
    int n = (int)nodes_.size();
    LoweredNode node;
    node.agent = *agent;
    node.pos = t.pos;
    for (const auto& e : t.attrs) node.attr_exprs.push_back(&e);
    nodes_.push_back(std::move(node));
    for (size_t q = 0; q < t.args.size(); ++q) {
      End child = lower_term(t.args[q]);
      connect(End{false, -1, Plug{Plug::Kind::Node, n, (int)q + 1}}, child,
              t.args[q].pos);
    }
    return End{false, -1, Plug{Plug::Kind::Node, n, 0}};
  }

  void connect(const End& a, const End& b, SourcePos pos) {
    if (a.is_wire && b.is_wire) {
      if (!wires_.merge(a.wire, b.wire))
        throw CompileError(file_, pos,
                           "connection wires a variable to itself in " + context_);
      return;
    }
    if (a.is_wire) {
      wires_.add_plug(a.wire, b.plug);
      return;
    }
    if (b.is_wire) {
      wires_.add_plug(b.wire, a.plug);
      return;
    }
    pairs_.push_back({a.plug, b.plug, pos});
  }

  const DeclIndex& decls_;
  std::string file_;
  std::string context_;
  std::vector<LoweredNode> nodes_;
  std::vector<LoweredConnection> pairs_;
  detail::WireSet wires_;
  std::unordered_map<std::string, int> iface_seen_;
  std::set<std::string> iface_bound_{};
};

// Lowers one rule branch. Interface plugs: SourceIface i for the i-th port
// variable of the function pattern, TargetIface j for the constructor's.
inline LoweredNet lower_rule_rhs(const DeclIndex& decls, const RuleDecl& rule) {
  std::string context = "rule " + rule.first.agent + " >< " + rule.second.agent;
  NetLowering low(decls, context);
  for (size_t i = 0; i < rule.first.port_vars.size(); ++i)
    low.bind_iface(rule.first.port_vars[i],
                   Plug{Plug::Kind::SourceIface, -1, (int)i + 1}, rule.pos);
  for (size_t j = 0; j < rule.second.port_vars.size(); ++j)
    low.bind_iface(rule.second.port_vars[j],
                   Plug{Plug::Kind::TargetIface, -1, (int)j + 1}, rule.pos);
  low.add_equations(rule.rhs);
  return low.finish(/*rule_context=*/true);
}

inline LoweredNet lower_net_decl(const DeclIndex& decls, const NetDecl& net) {
  NetLowering low(decls, "net " + net.name);
  low.add_equations(net.equations);
  return low.finish(/*rule_context=*/false);
}

// Pattern-side checks shared by inference and compilation.
inline void check_rule_patterns(const DeclIndex& decls, const RuleDecl& rule) {
  const std::string& file = decls.program().file;
  for (const APattern* p : {&rule.first, &rule.second}) {
    auto agent = decls.find(p->agent);
    if (!agent)
      throw CompileError(file, p->pos,
                         "unknown agent '" + p->agent +
                             "' in a rule pattern (undeclared agents and"
                             " generic rules are not supported)");
    for (const auto& v : p->port_vars)
      if (decls.find(v))
        throw UnsupportedFeatureError(
            file, p->pos, "nested pattern",
            "pattern argument '" + v + "' is an agent: nested patterns are"
            " not supported; introduce an auxiliary agent that matches it in"
            " a second rule");
    const AgentDecl& d = decls.decl(*agent);
    if ((int)p->port_vars.size() != d.aux_arity)
      throw CompileError(file, p->pos,
                         "pattern for '" + p->agent + "' binds " +
                             std::to_string(p->port_vars.size()) +
                             " ports, agent has " + std::to_string(d.aux_arity));
    if (p->attr_vars.size() != d.attr_types.size())
      throw CompileError(file, p->pos,
                         "pattern for '" + p->agent + "' binds " +
                             std::to_string(p->attr_vars.size()) +
                             " attributes, agent has " +
                             std::to_string(d.attr_types.size()));
  }
  std::set<std::string> seen;
  for (const APattern* p : {&rule.first, &rule.second}) {
    for (const auto& v : p->port_vars)
      if (!seen.insert(v).second)
        throw CompileError(file, p->pos,
                           "port variable '" + v + "' bound twice in a rule"
                           " left-hand side");
    for (const auto& v : p->attr_vars)
      if (!seen.insert(v).second)
        throw CompileError(file, p->pos,
                           "attribute variable '" + v + "' bound twice in a"
                           " rule left-hand side");
  }
}

} // namespace inet
