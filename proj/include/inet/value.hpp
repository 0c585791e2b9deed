#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "inet/diag.hpp"

namespace inet {

using Int = boost::multiprecision::cpp_int;

enum class AttrType : uint8_t { Int, Bool, Float, Char, String };

constexpr std::string_view to_string(AttrType t) {
  switch (t) {
    case AttrType::Int: return "int";
    case AttrType::Bool: return "bool";
    case AttrType::Float: return "float";
    case AttrType::Char: return "char";
    case AttrType::String: return "string";
  }
  return "?";
}

using Value = std::variant<Int, bool, double, char, std::string>;

inline AttrType type_of(const Value& v) {
  switch (v.index()) {
    case 0: return AttrType::Int;
    case 1: return AttrType::Bool;
    case 2: return AttrType::Float;
    case 3: return AttrType::Char;
    default: return AttrType::String;
  }
}

inline std::string to_string(const Value& v) {
  switch (v.index()) {
    case 0: return std::get<Int>(v).str();
    case 1: return std::get<bool>(v) ? "true" : "false";
    case 2: {
      std::string s = std::to_string(std::get<double>(v));
      return s;
    }
    case 3: return "'" + std::string(1, std::get<char>(v)) + "'";
    default: return "\"" + std::get<std::string>(v) + "\"";
  }
}

namespace detail {

[[noreturn]] inline void value_type_error(const char* op, const Value& a,
                                          const Value& b) {
  throw EvalError(std::string("type mismatch: ") + to_string(a) + " " + op +
                  " " + to_string(b));
}

} // namespace detail

inline Value value_add(const Value& a, const Value& b) {
  if (a.index() == 0 && b.index() == 0) return std::get<Int>(a) + std::get<Int>(b);
  if (a.index() == 2 && b.index() == 2) return std::get<double>(a) + std::get<double>(b);
  detail::value_type_error("+", a, b);
}

inline Value value_sub(const Value& a, const Value& b) {
  if (a.index() == 0 && b.index() == 0) return std::get<Int>(a) - std::get<Int>(b);
  if (a.index() == 2 && b.index() == 2) return std::get<double>(a) - std::get<double>(b);
  detail::value_type_error("-", a, b);
}

inline Value value_mul(const Value& a, const Value& b) {
  if (a.index() == 0 && b.index() == 0) return std::get<Int>(a) * std::get<Int>(b);
  if (a.index() == 2 && b.index() == 2) return std::get<double>(a) * std::get<double>(b);
  detail::value_type_error("*", a, b);
}

inline Value value_div(const Value& a, const Value& b) {
  if (a.index() == 0 && b.index() == 0) {
    if (std::get<Int>(b) == 0) throw EvalError("division by zero");
    return std::get<Int>(a) / std::get<Int>(b);
  }
  if (a.index() == 2 && b.index() == 2) {
    if (std::get<double>(b) == 0.0) throw EvalError("division by zero");
    return std::get<double>(a) / std::get<double>(b);
  }
  detail::value_type_error("/", a, b);
}

inline Value value_mod(const Value& a, const Value& b) {
  if (a.index() == 0 && b.index() == 0) {
    if (std::get<Int>(b) == 0) throw EvalError("division by zero");
    return std::get<Int>(a) % std::get<Int>(b);
  }
  detail::value_type_error("mod", a, b);
}

inline Value value_neg(const Value& a) {
  if (a.index() == 0) return -std::get<Int>(a);
  if (a.index() == 2) return -std::get<double>(a);
  throw EvalError("type mismatch: unary - applied to " + to_string(a));
}

// Comparisons are defined on int, float and char; equality on everything.
inline int value_compare(const char* op, const Value& a, const Value& b) {
  if (a.index() == 0 && b.index() == 0) {
    const Int& x = std::get<Int>(a);
    const Int& y = std::get<Int>(b);
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  if (a.index() == 2 && b.index() == 2) {
    double x = std::get<double>(a), y = std::get<double>(b);
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  if (a.index() == 3 && b.index() == 3) {
    char x = std::get<char>(a), y = std::get<char>(b);
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  detail::value_type_error(op, a, b);
}

inline bool value_eq(const Value& a, const Value& b) {
  if (a.index() != b.index()) {
    detail::value_type_error("==", a, b);
  }
  return a == b;
}

} // namespace inet
