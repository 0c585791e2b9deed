#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "inet/diag.hpp"
#include "inet/value.hpp"

namespace inet {

// Surface syntax, as parsed. Name resolution, polarity inference and
// linearity checks all happen later, against this tree.

enum class ExprOp : uint8_t {
  Lit, Var,
  Neg, Not,
  Add, Sub, Mul, Div, Mod,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or,
};

inline const char* expr_op_text(ExprOp op) {
  switch (op) {
    case ExprOp::Neg: return "-";
    case ExprOp::Not: return "not";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    case ExprOp::Mod: return "mod";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Eq: return "==";
    case ExprOp::Ne: return "!=";
    case ExprOp::And: return "and";
    case ExprOp::Or: return "or";
    default: return "?";
  }
}

struct AExpr {
  ExprOp op = ExprOp::Lit;
  Value lit;
  std::string var;
  std::unique_ptr<AExpr> a, b;
  SourcePos pos;

  AExpr() = default;
  AExpr(ExprOp o, SourcePos p) : op(o), pos(p) {}

  std::unique_ptr<AExpr> clone() const {
    auto e = std::make_unique<AExpr>(op, pos);
    e->lit = lit;
    e->var = var;
    if (a) e->a = a->clone();
    if (b) e->b = b->clone();
    return e;
  }
};

inline bool expr_equal(const AExpr& x, const AExpr& y) {
  if (x.op != y.op) return false;
  if (x.op == ExprOp::Lit) return x.lit == y.lit;
  if (x.op == ExprOp::Var) return x.var == y.var;
  bool a_ok = (!x.a && !y.a) || (x.a && y.a && expr_equal(*x.a, *y.a));
  bool b_ok = (!x.b && !y.b) || (x.b && y.b && expr_equal(*x.b, *y.b));
  return a_ok && b_ok;
}

inline void print_expr(std::ostream& os, const AExpr& e) {
  switch (e.op) {
    case ExprOp::Lit: os << to_string(e.lit); return;
    case ExprOp::Var: os << e.var; return;
    case ExprOp::Neg:
      os << "(- ";
      print_expr(os, *e.a);
      os << ")";
      return;
    case ExprOp::Not:
      os << "(not ";
      print_expr(os, *e.a);
      os << ")";
      return;
    default:
      os << "(";
      print_expr(os, *e.a);
      os << " " << expr_op_text(e.op) << " ";
      print_expr(os, *e.b);
      os << ")";
  }
}

// A term in a net expression: either a variable naming a connection, or an
// agent occurrence `Name(arg, ...)[attr-expr, ...]`. Which one a bare name
// is gets decided during compilation against the agent table.
struct ATerm {
  std::string head;
  std::vector<ATerm> args;
  std::vector<AExpr> attrs;
  bool has_parens = false; // distinguishes `f()` from bare `f`
  SourcePos pos;
};

struct AEquation {
  ATerm lhs, rhs;
};

// LHS agent pattern: port variables in parens, attribute variables in
// brackets.
struct APattern {
  std::string agent;
  std::vector<std::string> port_vars;
  std::vector<std::string> attr_vars;
  SourcePos pos;
};

struct AgentDecl {
  std::string name;
  std::vector<AttrType> attr_types;
  int aux_arity = 0;
  SourcePos pos;
};

struct RuleDecl {
  APattern first;  // negative principal port (function)
  APattern second; // positive principal port (constructor)
  std::optional<AExpr> guard;
  std::vector<AEquation> rhs;
  SourcePos pos;
};

struct NetDecl {
  std::string name;
  std::vector<AEquation> equations;
  SourcePos pos;
};

struct Program {
  std::string file;
  std::vector<AgentDecl> agents;
  std::vector<RuleDecl> rules;
  std::vector<NetDecl> nets;
};

// ---- pretty printer (round-trips through the parser) ----

inline void print_term(std::ostream& os, const ATerm& t) {
  os << t.head;
  if (t.has_parens || !t.args.empty()) {
    os << "(";
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ", ";
      print_term(os, t.args[i]);
    }
    os << ")";
  }
  if (!t.attrs.empty()) {
    os << "[";
    for (size_t i = 0; i < t.attrs.size(); ++i) {
      if (i) os << ", ";
      print_expr(os, t.attrs[i]);
    }
    os << "]";
  }
}

inline void print_equations(std::ostream& os, const std::vector<AEquation>& eqs) {
  for (size_t i = 0; i < eqs.size(); ++i) {
    if (i) os << ", ";
    print_term(os, eqs[i].lhs);
    os << " ~ ";
    print_term(os, eqs[i].rhs);
  }
}

inline void print_pattern(std::ostream& os, const APattern& p) {
  os << p.agent;
  if (!p.port_vars.empty()) {
    os << "(";
    for (size_t i = 0; i < p.port_vars.size(); ++i) {
      if (i) os << ", ";
      os << p.port_vars[i];
    }
    os << ")";
  }
  if (!p.attr_vars.empty()) {
    os << "[";
    for (size_t i = 0; i < p.attr_vars.size(); ++i) {
      if (i) os << ", ";
      os << p.attr_vars[i];
    }
    os << "]";
  }
}

inline std::string pretty_print(const Program& prog) {
  std::ostringstream os;
  for (const auto& a : prog.agents) {
    os << "agent " << a.name;
    if (!a.attr_types.empty()) {
      os << "(";
      for (size_t i = 0; i < a.attr_types.size(); ++i) {
        if (i) os << ", ";
        os << to_string(a.attr_types[i]);
      }
      os << ")";
    }
    os << " : " << a.aux_arity << ";\n";
  }
  for (const auto& r : prog.rules) {
    os << "rule ";
    print_pattern(os, r.first);
    os << " >< ";
    print_pattern(os, r.second);
    if (r.guard) {
      os << " if ";
      print_expr(os, *r.guard);
    }
    os << " => ";
    print_equations(os, r.rhs);
    os << ";\n";
  }
  for (const auto& n : prog.nets) {
    os << "net " << n.name << " = ";
    print_equations(os, n.equations);
    os << ";\n";
  }
  return os.str();
}

// ---- structural equality, ignoring source positions ----

inline bool term_equal(const ATerm& x, const ATerm& y) {
  if (x.head != y.head || x.args.size() != y.args.size() ||
      x.attrs.size() != y.attrs.size())
    return false;
  bool x_app = x.has_parens || !x.args.empty();
  bool y_app = y.has_parens || !y.args.empty();
  if (x_app != y_app) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!term_equal(x.args[i], y.args[i])) return false;
  for (size_t i = 0; i < x.attrs.size(); ++i)
    if (!expr_equal(x.attrs[i], y.attrs[i])) return false;
  return true;
}

inline bool equations_equal(const std::vector<AEquation>& x,
                            const std::vector<AEquation>& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (!term_equal(x[i].lhs, y[i].lhs) || !term_equal(x[i].rhs, y[i].rhs))
      return false;
  return true;
}

inline bool pattern_equal(const APattern& x, const APattern& y) {
  return x.agent == y.agent && x.port_vars == y.port_vars &&
         x.attr_vars == y.attr_vars;
}

inline bool program_equal(const Program& x, const Program& y) {
  if (x.agents.size() != y.agents.size() || x.rules.size() != y.rules.size() ||
      x.nets.size() != y.nets.size())
    return false;
  for (size_t i = 0; i < x.agents.size(); ++i) {
    const auto& a = x.agents[i];
    const auto& b = y.agents[i];
    if (a.name != b.name || a.attr_types != b.attr_types ||
        a.aux_arity != b.aux_arity)
      return false;
  }
  for (size_t i = 0; i < x.rules.size(); ++i) {
    const auto& a = x.rules[i];
    const auto& b = y.rules[i];
    if (!pattern_equal(a.first, b.first) || !pattern_equal(a.second, b.second))
      return false;
    if (a.guard.has_value() != b.guard.has_value()) return false;
    if (a.guard && !expr_equal(*a.guard, *b.guard)) return false;
    if (!equations_equal(a.rhs, b.rhs)) return false;
  }
  for (size_t i = 0; i < x.nets.size(); ++i) {
    if (x.nets[i].name != y.nets[i].name ||
        !equations_equal(x.nets[i].equations, y.nets[i].equations))
      return false;
  }
  return true;
}

} // namespace inet
