#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inet/value.hpp"

namespace inet {

// A constructor term read back from a normal-form net: label, attribute
// values, one sub-term per negative auxiliary port. Children are drained
// iteratively on destruction; readback results can be deep (a unary 75025
// is a 75k-deep chain).
struct Term {
  std::string label;
  std::vector<Value> attrs;
  std::vector<Term> kids;

  Term() = default;
  Term(std::string l, std::vector<Value> a)
      : label(std::move(l)), attrs(std::move(a)) {}
  Term(const Term&) = default;
  Term(Term&&) = default;
  Term& operator=(const Term&) = default;
  Term& operator=(Term&&) = default;

  ~Term() {
    if (kids.empty()) return;
    std::vector<Term> stack = std::move(kids);
    while (!stack.empty()) {
      Term t = std::move(stack.back());
      stack.pop_back();
      for (auto& k : t.kids) stack.push_back(std::move(k));
      t.kids.clear();
    }
  }
};

inline bool term_equal(const Term& a, const Term& b) {
  std::vector<std::pair<const Term*, const Term*>> stack{{&a, &b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (x->label != y->label || x->attrs != y->attrs ||
        x->kids.size() != y->kids.size())
      return false;
    for (size_t i = 0; i < x->kids.size(); ++i)
      stack.push_back({&x->kids[i], &y->kids[i]});
  }
  return true;
}

// Counts S applications down to Z.
inline std::optional<int64_t> decode_unary(const Term& t) {
  int64_t n = 0;
  const Term* cur = &t;
  while (true) {
    if (cur->label == "Z" && cur->kids.empty() && cur->attrs.empty()) return n;
    if (cur->label == "S" && cur->kids.size() == 1 && cur->attrs.empty()) {
      n++;
      cur = &cur->kids[0];
      continue;
    }
    return std::nullopt;
  }
}

namespace detail {

inline void term_text_rec(std::string& out, const Term& node, size_t depth,
                          size_t max_depth) {
  if (node.label == "S" && node.kids.size() == 1 && node.attrs.empty()) {
    size_t count = 0;
    const Term* cur = &node;
    while (cur->label == "S" && cur->kids.size() == 1 && cur->attrs.empty()) {
      count++;
      cur = &cur->kids[0];
    }
    if (count > 3) {
      out += "S^" + std::to_string(count) + "(";
      term_text_rec(out, *cur, depth + 1, max_depth);
      out += ")";
      return;
    }
  }
  if (depth > max_depth) {
    out += "...";
    return;
  }
  out += node.label;
  if (!node.attrs.empty()) {
    out += "[";
    for (size_t i = 0; i < node.attrs.size(); ++i)
      out += (i ? "," : "") + to_string(node.attrs[i]);
    out += "]";
  }
  if (!node.kids.empty()) {
    out += "(";
    for (size_t i = 0; i < node.kids.size(); ++i) {
      if (i) out += ",";
      term_text_rec(out, node.kids[i], depth + 1, max_depth);
    }
    out += ")";
  }
}

} // namespace detail

// Renders a term, compressing unary chains to S^n(...) and cutting off below
// `max_depth` nested constructors. Each recursion level consumes a whole
// S-chain or one constructor, so stack depth stays bounded.
inline std::string term_text(const Term& t, size_t max_depth = 64) {
  std::string out;
  detail::term_text_rec(out, t, 0, max_depth);
  return out;
}

// Readback outcome for one observed interface.
struct TermResult {
  enum class Status : uint8_t { Ok, Blocked, Cycle, TooDeep };
  Status status = Status::Blocked;
  Term term; // meaningful when status == Ok

  bool ok() const { return status == Status::Ok; }
};

inline const char* to_string(TermResult::Status s) {
  switch (s) {
    case TermResult::Status::Ok: return "ok";
    case TermResult::Status::Blocked: return "blocked";
    case TermResult::Status::Cycle: return "cycle";
    default: return "too-deep";
  }
}

inline bool result_equal(const TermResult& a, const TermResult& b) {
  if (a.status != b.status) return false;
  if (a.status != TermResult::Status::Ok) return true;
  return term_equal(a.term, b.term);
}

inline std::string result_text(const TermResult& r, size_t max_depth = 64) {
  if (r.status != TermResult::Status::Ok)
    return std::string("<") + to_string(r.status) + ">";
  return term_text(r.term, max_depth);
}

} // namespace inet
