#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inet/description.hpp"
#include "inet/expression.hpp"
#include "inet/signature.hpp"

namespace inet {

// Label of a template node: the agent plus one attribute expression per
// declared attribute, evaluated at rule-application time.
struct LabelExpr {
  AgentId agent = 0;
  std::vector<CExpr> attr_exprs;
};

struct RuleBranch {
  std::optional<CExpr> guard;
  NetDescription<LabelExpr> rhs;
  bool has_attr_exprs = false;
};

// Guarded right-hand sides for one (function, constructor) pair, in
// declaration order with first-match semantics.
struct RuleEntry {
  std::vector<RuleBranch> branches;
  // exactly one unconditional branch with no attribute expressions:
  // rule application needs no evaluation at all
  bool simple = false;
};

class RuleTable {
 public:
  void reset(size_t n_agents) {
    n_ = n_agents;
    entries_.clear();
    entries_.resize(n_ * n_);
  }

  RuleEntry& entry(AgentId fn, AgentId cons) {
    auto& slot = entries_[fn * n_ + cons];
    if (!slot) slot = std::make_unique<RuleEntry>();
    return *slot;
  }

  const RuleEntry* find(AgentId fn, AgentId cons) const {
    return entries_[fn * n_ + cons].get();
  }

  size_t agents() const { return n_; }

 private:
  size_t n_ = 0;
  std::vector<std::unique_ptr<RuleEntry>> entries_;
};

struct Language {
  SignatureTable sigs;
  RuleTable rules;
};

// A rule branch with its attribute expressions evaluated against the
// bindings of the interacting pair. The template structure is shared; only
// the attribute values are per-application.
struct ResolvedRhs {
  const RuleBranch* branch = nullptr;
  std::vector<std::vector<Value>> node_attrs; // empty when branch has none
};

namespace detail {

inline std::string env_text(const Env& env) {
  std::string s = "{";
  for (size_t i = 0; i < env.fn_attrs.size(); ++i) {
    if (i) s += ", ";
    s += to_string(env.fn_attrs[i]);
  }
  s += " >< ";
  for (size_t i = 0; i < env.cons_attrs.size(); ++i) {
    if (i) s += ", ";
    s += to_string(env.cons_attrs[i]);
  }
  return s + "}";
}

} // namespace detail

// Selects the first branch whose guard holds (an absent guard always holds)
// and evaluates every node label's attribute expressions, checking them
// against the declared attribute types.
inline ResolvedRhs resolve_rhs(const Language& lang, const RuleEntry& entry,
                               const Env& env, AgentId fn, AgentId cons) {
  const RuleBranch* chosen = nullptr;
  for (const auto& b : entry.branches) {
    if (!b.guard) {
      chosen = &b;
      break;
    }
    Value g = eval_expr(*b.guard, env);
    if (g.index() != 1)
      throw EvalError("guard of rule " + lang.sigs.name(fn) + " >< " +
                      lang.sigs.name(cons) + " evaluated to non-bool " +
                      to_string(g));
    if (std::get<bool>(g)) {
      chosen = &b;
      break;
    }
  }
  if (!chosen)
    throw NoBranchError(lang.sigs.name(fn), lang.sigs.name(cons),
                        detail::env_text(env));
  ResolvedRhs out;
  out.branch = chosen;
  if (!chosen->has_attr_exprs) return out;
  out.node_attrs.resize(chosen->rhs.nodes.size());
  for (size_t n = 0; n < chosen->rhs.nodes.size(); ++n) {
    const LabelExpr& lab = chosen->rhs.nodes[n].label;
    if (lab.attr_exprs.empty()) continue;
    const AgentSignature& sig = lang.sigs[lab.agent];
    auto& vals = out.node_attrs[n];
    vals.reserve(lab.attr_exprs.size());
    for (size_t k = 0; k < lab.attr_exprs.size(); ++k) {
      Value v = eval_expr(lab.attr_exprs[k], env);
      if (type_of(v) != sig.attr_types[k])
        throw EvalError("attribute " + std::to_string(k + 1) + " of " +
                        sig.name + ": expected " +
                        std::string(to_string(sig.attr_types[k])) + ", got " +
                        to_string(v));
      vals.push_back(std::move(v));
    }
  }
  return out;
}

} // namespace inet
