#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace inet {

struct SourcePos {
  int line = 0;
  int col = 0;
  bool valid() const { return line > 0; }
  bool operator==(const SourcePos&) const = default;
};

inline std::string format_diag(const std::string& file, SourcePos pos,
                               const std::string& severity,
                               const std::string& msg) {
  std::string out = file.empty() ? std::string("<input>") : file;
  if (pos.valid()) {
    out += ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col);
  }
  out += ": " + severity + ": " + msg;
  return out;
}

struct Error : std::runtime_error {
  explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Lexical or syntactic error in a .inet file.
struct ParseError : Error {
  ParseError(std::string file_, SourcePos pos_, std::string msg)
      : Error(format_diag(file_, pos_, "error", msg)),
        file(std::move(file_)), pos(pos_), message(std::move(msg)) {}
  std::string file;
  SourcePos pos;
  std::string message;
};

// A feature of the full INets language this frontend deliberately rejects.
struct UnsupportedFeatureError : ParseError {
  UnsupportedFeatureError(std::string file, SourcePos pos, std::string feature,
                          std::string msg)
      : ParseError(std::move(file), pos, std::move(msg)),
        feature(std::move(feature)) {}
  std::string feature;
};

struct InferError : Error {
  enum class Kind { Conflict, Undetermined };
  InferError(Kind k, std::string msg) : Error(std::move(msg)), kind(k) {}
  Kind kind;
  // Conflict: the port whose polarity was demanded both ways.
  std::string agent;
  int port = -1;
  std::vector<SourcePos> positions;
  // Undetermined: the ports left unknown after the heuristic.
  std::vector<std::string> unknown_ports;
};

struct CompileError : Error {
  CompileError(std::string file_, SourcePos pos_, std::string msg)
      : Error(format_diag(file_, pos_, "error", msg)),
        file(std::move(file_)), pos(pos_), message(std::move(msg)) {}
  std::string file;
  SourcePos pos;
  std::string message;
};

struct EvalError : Error {
  explicit EvalError(std::string msg) : Error(std::move(msg)) {}
};

// No rule registered for an interacting (function, constructor) pair.
struct MissingRuleError : Error {
  MissingRuleError(std::string fn, std::string cons)
      : Error("missing rule: no rule for " + fn + " >< " + cons),
        function_label(std::move(fn)), constructor_label(std::move(cons)) {}
  std::string function_label;
  std::string constructor_label;
};

// All branches of a conditional rule evaluated to false.
struct NoBranchError : Error {
  NoBranchError(std::string fn, std::string cons, std::string env)
      : Error("no branch: every guard of rule " + fn + " >< " + cons +
              " is false with " + env),
        function_label(std::move(fn)), constructor_label(std::move(cons)) {}
  std::string function_label;
  std::string constructor_label;
};

// The run stalled: live tasks remain but all are parked on empty cells.
struct DeadlockError : Error {
  explicit DeadlockError(std::vector<std::string> blocked_)
      : Error(make_message(blocked_)), blocked(std::move(blocked_)) {}
  std::vector<std::string> blocked;

 private:
  static std::string make_message(const std::vector<std::string>& blocked) {
    std::string msg = "deadlock: all live tasks blocked on empty connections;"
                      " waiting: ";
    for (size_t i = 0; i < blocked.size(); ++i) {
      if (i) msg += ", ";
      msg += blocked[i];
    }
    if (blocked.empty()) msg += "(none recorded)";
    return msg;
  }
};

// A broken precondition inside the engine itself (ill-formed compiled net,
// out-of-range port reference). Signals a compiler bug, not a user error.
struct ConfigError : Error {
  explicit ConfigError(std::string msg) : Error(std::move(msg)) {}
};

} // namespace inet
