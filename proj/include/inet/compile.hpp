#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/diag.hpp"
#include "inet/infer.hpp"
#include "inet/language.hpp"
#include "inet/resolve.hpp"

namespace inet {

// A compiled net declaration. Free variables of the net become its observable
// interface: the description's source vector holds one entry per free
// variable, and holder_pol records the own-polarity of the virtual holder the
// run-time fabricates for it (equal to the polarity of the port the variable
// is plugged into).
struct ObservedIface {
  std::string name;
  Polarity holder_pol;
};

struct CompiledNet {
  std::string name;
  NetDescription<LabelExpr> desc;
  std::vector<ObservedIface> observed;
  std::vector<Polarity> source_holder_pols;
};

struct CompiledProgram {
  Language lang;
  std::vector<CompiledNet> nets;
  int main_index = -1; // into nets

  const CompiledNet* main() const {
    return main_index < 0 ? nullptr : &nets[main_index];
  }
  const CompiledNet* net(const std::string& name) const {
    for (const auto& n : nets)
      if (n.name == name) return &n;
    return nullptr;
  }
};

namespace detail {

struct AttrScope {
  // attribute variable name -> (side, index); side 0 = function pattern
  std::map<std::string, VarRef> vars;
  // port variables, to produce a pointed diagnostic when misused in an
  // expression
  std::set<std::string> port_vars;
};

inline CExpr compile_expr(const AExpr& e, const AttrScope& scope,
                          const std::string& file) {
  CExpr out;
  out.op = e.op;
  switch (e.op) {
    case ExprOp::Lit:
      out.lit = e.lit;
      return out;
    case ExprOp::Var: {
      auto it = scope.vars.find(e.var);
      if (it == scope.vars.end()) {
        if (scope.port_vars.count(e.var))
          throw CompileError(file, e.pos,
                             "'" + e.var + "' is a port variable; only"
                             " attribute variables may appear in expressions");
        throw CompileError(file, e.pos, "unbound variable '" + e.var +
                                            "' in attribute expression");
      }
      out.var = it->second;
      out.var_name = e.var;
      return out;
    }
    default:
      if (e.a) out.a = std::make_unique<CExpr>(compile_expr(*e.a, scope, file));
      if (e.b) out.b = std::make_unique<CExpr>(compile_expr(*e.b, scope, file));
      return out;
  }
}

inline PortRef encode_plug(const Plug& p) {
  switch (p.kind) {
    case Plug::Kind::Node: return PortRef::internal(p.node, p.port);
    case Plug::Kind::SourceIface: return PortRef::source(p.port);
    default: return PortRef::target(p.port);
  }
}

// Turns the lowered connection list into the mirror-symmetric link arrays of
// a NetDescription.
struct RefFiller {
  NetDescription<LabelExpr>& desc;
  const std::string& file;
  SourcePos pos;
  std::vector<bool> source_set, target_set;
  std::vector<std::vector<bool>> node_set;

  RefFiller(NetDescription<LabelExpr>& d, const std::string& f, SourcePos p)
      : desc(d), file(f), pos(p) {
    source_set.resize(d.source.size());
    target_set.resize(d.target.size());
    node_set.resize(d.nodes.size());
    for (size_t n = 0; n < d.nodes.size(); ++n)
      node_set[n].resize(d.nodes[n].ports.size());
  }

  void set(const Plug& at, const PortRef& to) {
    switch (at.kind) {
      case Plug::Kind::Node: {
        if (at.node < 0 || at.node >= (int)desc.nodes.size() || at.port < 0 ||
            at.port >= (int)desc.nodes[at.node].ports.size())
          throw CompileError(file, pos, "internal port out of range");
        if (node_set[at.node][at.port])
          throw CompileError(file, pos, "port " + encode_plug(at).str() +
                                            " connected twice");
        node_set[at.node][at.port] = true;
        desc.nodes[at.node].ports[at.port] = to;
        return;
      }
      case Plug::Kind::SourceIface: {
        if (at.port < 1 || at.port > (int)desc.source.size())
          throw CompileError(file, pos, "source interface out of range");
        if (source_set[at.port - 1])
          throw CompileError(file, pos, "port " + encode_plug(at).str() +
                                            " connected twice");
        source_set[at.port - 1] = true;
        desc.source[at.port - 1] = to;
        return;
      }
      default: {
        if (at.port < 1 || at.port > (int)desc.target.size())
          throw CompileError(file, pos, "target interface out of range");
        if (target_set[at.port - 1])
          throw CompileError(file, pos, "port " + encode_plug(at).str() +
                                            " connected twice");
        target_set[at.port - 1] = true;
        desc.target[at.port - 1] = to;
        return;
      }
    }
  }

  void check_complete() const {
    for (size_t i = 0; i < source_set.size(); ++i)
      if (!source_set[i])
        throw CompileError(file, pos,
                           "Source " + std::to_string(i + 1) + " left unconnected");
    for (size_t j = 0; j < target_set.size(); ++j)
      if (!target_set[j])
        throw CompileError(file, pos,
                           "Target " + std::to_string(j + 1) + " left unconnected");
    for (size_t n = 0; n < node_set.size(); ++n)
      for (size_t p = 0; p < node_set[n].size(); ++p)
        if (!node_set[n][p])
          throw CompileError(file, pos,
                             PortRef::internal((int)n, (int)p).str() +
                                 " left unconnected");
  }
};

inline void throw_violations(const std::string& file, SourcePos pos,
                             const std::string& what,
                             const std::vector<Violation>& vs) {
  if (vs.empty()) return;
  std::string msg = what + " fails structural validation:";
  for (const auto& v : vs) msg += "\n  " + v.message;
  throw CompileError(file, pos, msg);
}

} // namespace detail

// Compiles the rule and net declarations of a program against an inferred
// polarity assignment. Every produced NetDescription is validated: the
// compiler refuses to emit a template that is not a polarity-correct perfect
// matching.
inline CompiledProgram compile_rules(const Program& prog,
                                     const PolarityAssignment& pol) {
  DeclIndex decls(prog);
  CompiledProgram out;
  Language& lang = out.lang;

  // signatures, in declaration order, for every agent the inference covered
  std::vector<std::optional<AgentId>> agent_ids(prog.agents.size());
  for (size_t i = 0; i < prog.agents.size(); ++i) {
    const AgentDecl& d = prog.agents[i];
    const auto* pols = pol.find(d.name);
    if (!pols) continue;
    AgentSignature sig;
    sig.name = d.name;
    sig.port_polarities = *pols;
    sig.attr_types = d.attr_types;
    agent_ids[i] = lang.sigs.add(std::move(sig));
  }
  lang.rules.reset(lang.sigs.size());

  auto sig_of = [&](const LabelExpr& l) -> const AgentSignature* {
    return &lang.sigs[l.agent];
  };
  auto agent_id = [&](int decl_idx, SourcePos pos) -> AgentId {
    if (!agent_ids[decl_idx])
      throw CompileError(prog.file, pos,
                         "agent '" + prog.agents[decl_idx].name +
                             "' has no inferred signature");
    return *agent_ids[decl_idx];
  };

  auto build_desc = [&](const LoweredNet& low, size_t n_source, size_t n_target,
                        const detail::AttrScope& scope, SourcePos pos,
                        std::vector<Plug>* free_plugs) {
    NetDescription<LabelExpr> desc;
    desc.source.resize(n_source);
    desc.target.resize(n_target);
    desc.nodes.resize(low.nodes.size());
    for (size_t n = 0; n < low.nodes.size(); ++n) {
      AgentId id = agent_id(low.nodes[n].agent, low.nodes[n].pos);
      desc.nodes[n].label.agent = id;
      for (const AExpr* e : low.nodes[n].attr_exprs)
        desc.nodes[n].label.attr_exprs.push_back(
            detail::compile_expr(*e, scope, prog.file));
      desc.nodes[n].ports.resize(lang.sigs[id].arity());
    }
    detail::RefFiller fill(desc, prog.file, pos);
    for (const auto& conn : low.connections) {
      fill.set(conn.a, detail::encode_plug(conn.b));
      fill.set(conn.b, detail::encode_plug(conn.a));
    }
    if (free_plugs) {
      for (size_t k = 0; k < free_plugs->size(); ++k) {
        fill.set(Plug{Plug::Kind::SourceIface, -1, (int)k + 1},
                 detail::encode_plug((*free_plugs)[k]));
        fill.set((*free_plugs)[k], PortRef::source((int)k + 1));
      }
    }
    fill.check_complete();
    return desc;
  };

  for (const auto& rule : prog.rules) {
    check_rule_patterns(decls, rule);
    AgentId f = agent_id(*decls.find(rule.first.agent), rule.pos);
    AgentId c = agent_id(*decls.find(rule.second.agent), rule.pos);
    const AgentSignature& fs = lang.sigs[f];
    const AgentSignature& cs = lang.sigs[c];
    if (fs.kind() != AgentKind::Function || cs.kind() != AgentKind::Constructor)
      throw CompileError(prog.file, rule.pos,
                         "rule key must pair a function with a constructor");

    detail::AttrScope scope;
    for (size_t k = 0; k < rule.first.attr_vars.size(); ++k)
      scope.vars.emplace(rule.first.attr_vars[k], VarRef{0, (uint8_t)k});
    for (size_t k = 0; k < rule.second.attr_vars.size(); ++k)
      scope.vars.emplace(rule.second.attr_vars[k], VarRef{1, (uint8_t)k});
    for (const auto& v : rule.first.port_vars) scope.port_vars.insert(v);
    for (const auto& v : rule.second.port_vars) scope.port_vars.insert(v);

    LoweredNet low = lower_rule_rhs(decls, rule);
    RuleBranch branch;
    branch.rhs = build_desc(low, fs.aux_arity(), cs.aux_arity(), scope,
                            rule.pos, nullptr);
    if (rule.guard)
      branch.guard = detail::compile_expr(*rule.guard, scope, prog.file);
    for (const auto& n : branch.rhs.nodes)
      if (!n.label.attr_exprs.empty()) branch.has_attr_exprs = true;

    detail::throw_violations(
        prog.file, rule.pos,
        "rule " + fs.name + " >< " + cs.name,
        validate_description(lang.sigs, fs.name, cs.name, branch.rhs, sig_of));

    lang.rules.entry(f, c).branches.push_back(std::move(branch));
  }

  for (size_t f = 0; f < lang.sigs.size(); ++f)
    for (size_t c = 0; c < lang.sigs.size(); ++c)
      if (const RuleEntry* e = lang.rules.find((AgentId)f, (AgentId)c)) {
        auto& entry = lang.rules.entry((AgentId)f, (AgentId)c);
        entry.simple = entry.branches.size() == 1 && !entry.branches[0].guard &&
                       !entry.branches[0].has_attr_exprs;
        (void)e;
      }

  for (const auto& net : prog.nets) {
    if (out.net(net.name))
      throw CompileError(prog.file, net.pos,
                         "net '" + net.name + "' declared twice");
    LoweredNet low = lower_net_decl(decls, net);
    CompiledNet cn;
    cn.name = net.name;
    detail::AttrScope empty_scope; // net attribute expressions are closed
    cn.desc = build_desc(low, low.free_names.size(), 0, empty_scope, net.pos,
                         &low.free_plugs);
    for (size_t k = 0; k < low.free_names.size(); ++k) {
      const Plug& plug = low.free_plugs[k];
      AgentId id = cn.desc.nodes[plug.node].label.agent;
      Polarity plug_pol = lang.sigs[id].port_polarities[plug.port];
      cn.observed.push_back(ObservedIface{low.free_names[k], plug_pol});
      cn.source_holder_pols.push_back(plug_pol);
    }
    detail::throw_violations(
        prog.file, net.pos, "net " + net.name,
        validate_description(cn.desc, cn.source_holder_pols, {}, sig_of));
    if (net.name == "main") out.main_index = (int)out.nets.size();
    out.nets.push_back(std::move(cn));
  }

  return out;
}

} // namespace inet
