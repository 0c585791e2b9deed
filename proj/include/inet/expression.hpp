#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/value.hpp"

namespace inet {

// Attribute variables resolved at compile time to (pattern side, index):
// side 0 binds the function pattern's attributes, side 1 the constructor's.
struct VarRef {
  uint8_t side = 0;
  uint8_t index = 0;
};

// Compiled expression: same shape as AExpr with names resolved.
struct CExpr {
  ExprOp op = ExprOp::Lit;
  Value lit;
  VarRef var;
  std::string var_name; // diagnostics only
  std::unique_ptr<CExpr> a, b;

  CExpr() = default;
  CExpr(CExpr&&) = default;
  CExpr& operator=(CExpr&&) = default;
  CExpr(const CExpr& o)
      : op(o.op), lit(o.lit), var(o.var), var_name(o.var_name) {
    if (o.a) a = std::make_unique<CExpr>(*o.a);
    if (o.b) b = std::make_unique<CExpr>(*o.b);
  }
  CExpr& operator=(const CExpr& o) {
    CExpr tmp(o);
    *this = std::move(tmp);
    return *this;
  }
};

// Variable bindings induced by the attributes of the two interacting nodes.
struct Env {
  std::span<const Value> fn_attrs;
  std::span<const Value> cons_attrs;

  const Value& lookup(const VarRef& v, const std::string& name) const {
    std::span<const Value> side = v.side == 0 ? fn_attrs : cons_attrs;
    if (v.index >= side.size())
      throw EvalError("unbound variable " + name);
    return side[v.index];
  }
};

inline Value eval_expr(const CExpr& e, const Env& env) {
  switch (e.op) {
    case ExprOp::Lit: return e.lit;
    case ExprOp::Var: return env.lookup(e.var, e.var_name);
    case ExprOp::Neg: return value_neg(eval_expr(*e.a, env));
    case ExprOp::Not: {
      Value v = eval_expr(*e.a, env);
      if (v.index() != 1) throw EvalError("not applied to " + to_string(v));
      return !std::get<bool>(v);
    }
    case ExprOp::And:
    case ExprOp::Or: {
      Value x = eval_expr(*e.a, env);
      if (x.index() != 1)
        throw EvalError(std::string(expr_op_text(e.op)) + " applied to " + to_string(x));
      bool bx = std::get<bool>(x);
      if (e.op == ExprOp::And && !bx) return false;
      if (e.op == ExprOp::Or && bx) return true;
      Value y = eval_expr(*e.b, env);
      if (y.index() != 1)
        throw EvalError(std::string(expr_op_text(e.op)) + " applied to " + to_string(y));
      return std::get<bool>(y);
    }
    default: break;
  }
  Value x = eval_expr(*e.a, env);
  Value y = eval_expr(*e.b, env);
  switch (e.op) {
    case ExprOp::Add: return value_add(x, y);
    case ExprOp::Sub: return value_sub(x, y);
    case ExprOp::Mul: return value_mul(x, y);
    case ExprOp::Div: return value_div(x, y);
    case ExprOp::Mod: return value_mod(x, y);
    case ExprOp::Lt: return value_compare("<", x, y) < 0;
    case ExprOp::Le: return value_compare("<=", x, y) <= 0;
    case ExprOp::Gt: return value_compare(">", x, y) > 0;
    case ExprOp::Ge: return value_compare(">=", x, y) >= 0;
    case ExprOp::Eq: return value_eq(x, y);
    case ExprOp::Ne: return !value_eq(x, y);
    default: throw EvalError("bad expression");
  }
}

} // namespace inet
