#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "inet/diag.hpp"
#include "inet/polarity.hpp"
#include "inet/signature.hpp"

namespace inet {

// Identifies a port in a rule right-hand side. Source/Target indices are
// 1-based (interface port i of the vanished function/constructor node);
// internal node indices are 0-based and port 0 is the principal port.
// These conventions are easy to invert -- all code in this project uses
// exactly these.
struct PortRef {
  enum class Kind : uint8_t { Source, Target, Internal };

  Kind kind = Kind::Source;
  int32_t node = -1; // Internal only
  int32_t port = 0;  // Source/Target: 1-based interface index; Internal: port

  static PortRef source(int i) { return {Kind::Source, -1, i}; }
  static PortRef target(int i) { return {Kind::Target, -1, i}; }
  static PortRef internal(int n, int p) { return {Kind::Internal, n, p}; }

  bool is_internal() const { return kind == Kind::Internal; }
  bool operator==(const PortRef&) const = default;

  std::string str() const {
    switch (kind) {
      case Kind::Source: return "Source " + std::to_string(port);
      case Kind::Target: return "Target " + std::to_string(port);
      default:
        return "Internal " + std::to_string(node) + "." + std::to_string(port);
    }
  }
};

// A rule RHS node: its label and the connections of *all* its ports,
// principal first.
template <typename Label>
struct NodeDescription {
  Label label;
  std::vector<PortRef> ports;

  bool operator==(const NodeDescription&) const = default;
};

// Immutable template for a rule right-hand side. source[i-1] holds the link
// of interface port Source i (an auxiliary port of the consumed function
// node), target[j-1] of Target j (consumed constructor node), and
// nodes[n].ports[p] the link of internal port (n, p). The link relation must
// be a symmetric perfect matching joining one Pos and one Neg end.
template <typename Label>
struct NetDescription {
  std::vector<PortRef> source;
  std::vector<PortRef> target;
  std::vector<NodeDescription<Label>> nodes;

  bool operator==(const NetDescription&) const = default;
};

struct Violation {
  enum class Kind : uint8_t {
    UnknownLabel,
    ArityMismatch,
    InterfaceArity,
    RangeError,
    SelfLoop,
    Asymmetric,
    PolarityClash,
  };
  Kind kind;
  std::string message;
};

namespace detail {

// The polarity a pseudo-port contributes to the matching check. Interface
// pseudo-ports face the surviving outside of the net, so they carry the view
// opposite to the vanished holder's own port polarity; internal ports carry
// the signature polarity of their own node.
struct PortUniverse {
  std::span<const Polarity> source_holder;
  std::span<const Polarity> target_holder;
  std::vector<std::span<const Polarity>> node_pols;

  bool in_range(const PortRef& r) const {
    switch (r.kind) {
      case PortRef::Kind::Source:
        return r.port >= 1 && (size_t)r.port <= source_holder.size();
      case PortRef::Kind::Target:
        return r.port >= 1 && (size_t)r.port <= target_holder.size();
      default:
        return r.node >= 0 && (size_t)r.node < node_pols.size() &&
               r.port >= 0 && (size_t)r.port < node_pols[r.node].size();
    }
  }

  Polarity polarity(const PortRef& r) const {
    switch (r.kind) {
      case PortRef::Kind::Source: return opposite(source_holder[r.port - 1]);
      case PortRef::Kind::Target: return opposite(target_holder[r.port - 1]);
      default: return node_pols[r.node][r.port];
    }
  }
};

} // namespace detail

// Structural validation of a NetDescription: totality, mirror symmetry,
// no self-loops, and one-Pos-one-Neg per matched pair. `sig_of` maps a node
// label to its AgentSignature (nullptr for unknown labels). The two holder
// vectors carry the auxiliary-port polarities of the consumed LHS pair
// (or, for a top-level net, of the net's virtual interface holders).
template <typename Label, typename SigOf>
std::vector<Violation> validate_description(const NetDescription<Label>& d,
                                            std::span<const Polarity> source_holder,
                                            std::span<const Polarity> target_holder,
                                            SigOf&& sig_of) {
  std::vector<Violation> out;
  auto violate = [&](Violation::Kind k, std::string msg) {
    out.push_back(Violation{k, std::move(msg)});
  };

  if (d.source.size() != source_holder.size()) {
    violate(Violation::Kind::InterfaceArity,
            "source interface has " + std::to_string(d.source.size()) +
                " links but the function label has " +
                std::to_string(source_holder.size()) + " auxiliary ports");
  }
  if (d.target.size() != target_holder.size()) {
    violate(Violation::Kind::InterfaceArity,
            "target interface has " + std::to_string(d.target.size()) +
                " links but the constructor label has " +
                std::to_string(target_holder.size()) + " auxiliary ports");
  }

  detail::PortUniverse uni;
  uni.source_holder = source_holder.subspan(0, std::min(source_holder.size(), d.source.size()));
  uni.target_holder = target_holder.subspan(0, std::min(target_holder.size(), d.target.size()));
  uni.node_pols.reserve(d.nodes.size());
  bool labels_ok = true;
  for (size_t n = 0; n < d.nodes.size(); ++n) {
    const AgentSignature* sig = sig_of(d.nodes[n].label);
    if (!sig) {
      violate(Violation::Kind::UnknownLabel,
              "node " + std::to_string(n) + " has no signature");
      labels_ok = false;
      uni.node_pols.emplace_back();
      continue;
    }
    if (d.nodes[n].ports.size() != sig->arity()) {
      violate(Violation::Kind::ArityMismatch,
              "node " + std::to_string(n) + " (" + sig->name + ") lists " +
                  std::to_string(d.nodes[n].ports.size()) + " ports, arity is " +
                  std::to_string(sig->arity()));
      labels_ok = false;
      uni.node_pols.emplace_back();
      continue;
    }
    uni.node_pols.emplace_back(sig->port_polarities);
  }
  if (!out.empty() || !labels_ok) return out;

  // Enumerate the full port universe and check the link relation directly.
  auto link_of = [&](const PortRef& r) -> const PortRef& {
    switch (r.kind) {
      case PortRef::Kind::Source: return d.source[r.port - 1];
      case PortRef::Kind::Target: return d.target[r.port - 1];
      default: return d.nodes[r.node].ports[r.port];
    }
  };
  std::vector<PortRef> universe;
  for (int i = 1; i <= (int)d.source.size(); ++i) universe.push_back(PortRef::source(i));
  for (int j = 1; j <= (int)d.target.size(); ++j) universe.push_back(PortRef::target(j));
  for (int n = 0; n < (int)d.nodes.size(); ++n)
    for (int p = 0; p < (int)d.nodes[n].ports.size(); ++p)
      universe.push_back(PortRef::internal(n, p));

  for (const PortRef& here : universe) {
    const PortRef& there = link_of(here);
    if (!uni.in_range(there)) {
      violate(Violation::Kind::RangeError,
              here.str() + " links out-of-range " + there.str());
      continue;
    }
    if (there == here) {
      violate(Violation::Kind::SelfLoop, here.str() + " links itself");
      continue;
    }
    if (!(link_of(there) == here)) {
      violate(Violation::Kind::Asymmetric,
              here.str() + " links " + there.str() + " but " + there.str() +
                  " links " + link_of(there).str());
      continue;
    }
    if (uni.polarity(here) == uni.polarity(there)) {
      violate(Violation::Kind::PolarityClash,
              here.str() + " and " + there.str() + " are both " +
                  std::string(to_string(uni.polarity(here))));
    }
  }
  return out;
}

// Spec-level wrapper keyed by the interacting pair's label names.
template <typename Label, typename SigOf>
std::vector<Violation> validate_description(const SignatureTable& sigs,
                                            const std::string& f_label,
                                            const std::string& c_label,
                                            const NetDescription<Label>& d,
                                            SigOf&& sig_of) {
  std::vector<Violation> out;
  auto f = sigs.find(f_label);
  auto c = sigs.find(c_label);
  if (!f) out.push_back({Violation::Kind::UnknownLabel, "unknown function label " + f_label});
  if (!c) out.push_back({Violation::Kind::UnknownLabel, "unknown constructor label " + c_label});
  if (!out.empty()) return out;
  std::span<const Polarity> fp(sigs[*f].port_polarities);
  std::span<const Polarity> cp(sigs[*c].port_polarities);
  return validate_description(d, fp.subspan(1), cp.subspan(1),
                              std::forward<SigOf>(sig_of));
}

// ---- line-oriented debug text form (golden tests) ----
//
//   sources 2
//   targets 0
//   nodes 2
//   node 0 arity 3 = add
//   node 1 arity 2 = S
//   Source 1 <-> Internal 0.1
//   ...
//
// One line per pseudo-port, sources then targets then node ports in order.

template <typename Label, typename PrintLabel>
std::string description_to_text(const NetDescription<Label>& d,
                                PrintLabel&& print_label) {
  std::ostringstream os;
  os << "sources " << d.source.size() << "\n";
  os << "targets " << d.target.size() << "\n";
  os << "nodes " << d.nodes.size() << "\n";
  for (size_t n = 0; n < d.nodes.size(); ++n) {
    os << "node " << n << " arity " << d.nodes[n].ports.size() << " = "
       << print_label(d.nodes[n].label) << "\n";
  }
  for (size_t i = 0; i < d.source.size(); ++i)
    os << PortRef::source((int)i + 1).str() << " <-> " << d.source[i].str() << "\n";
  for (size_t j = 0; j < d.target.size(); ++j)
    os << PortRef::target((int)j + 1).str() << " <-> " << d.target[j].str() << "\n";
  for (size_t n = 0; n < d.nodes.size(); ++n)
    for (size_t p = 0; p < d.nodes[n].ports.size(); ++p)
      os << PortRef::internal((int)n, (int)p).str() << " <-> "
         << d.nodes[n].ports[p].str() << "\n";
  return os.str();
}

namespace detail {

inline PortRef parse_port_ref(std::istringstream& is) {
  std::string kind;
  is >> kind;
  if (kind == "Source" || kind == "Target") {
    int i;
    is >> i;
    if (!is) throw Error("description text: bad interface index");
    return kind == "Source" ? PortRef::source(i) : PortRef::target(i);
  }
  if (kind == "Internal") {
    int n, p;
    char dot;
    is >> n >> dot >> p;
    if (!is || dot != '.') throw Error("description text: bad internal ref");
    return PortRef::internal(n, p);
  }
  throw Error("description text: unknown port kind '" + kind + "'");
}

} // namespace detail

template <typename Label, typename ParseLabel>
NetDescription<Label> description_from_text(const std::string& text,
                                            ParseLabel&& parse_label) {
  std::istringstream in(text);
  std::string line;
  auto expect_count = [&](const char* key) -> size_t {
    if (!std::getline(in, line)) throw Error("description text: truncated");
    std::istringstream is(line);
    std::string k;
    size_t v;
    is >> k >> v;
    if (!is || k != key) throw Error(std::string("description text: expected ") + key);
    return v;
  };
  NetDescription<Label> d;
  d.source.resize(expect_count("sources"));
  d.target.resize(expect_count("targets"));
  d.nodes.resize(expect_count("nodes"));
  for (size_t n = 0; n < d.nodes.size(); ++n) {
    if (!std::getline(in, line)) throw Error("description text: truncated");
    std::istringstream is(line);
    std::string k, a, eq;
    size_t idx, arity;
    is >> k >> idx >> a >> arity >> eq;
    if (!is || k != "node" || a != "arity" || eq != "=" || idx != n)
      throw Error("description text: bad node line: " + line);
    std::string rest;
    std::getline(is, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
    d.nodes[n].label = parse_label(rest);
    d.nodes[n].ports.resize(arity);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    PortRef here = detail::parse_port_ref(is);
    std::string arrow;
    is >> arrow;
    if (arrow != "<->") throw Error("description text: expected <->: " + line);
    PortRef there = detail::parse_port_ref(is);
    switch (here.kind) {
      case PortRef::Kind::Source:
        if (here.port < 1 || (size_t)here.port > d.source.size())
          throw Error("description text: source index out of range");
        d.source[here.port - 1] = there;
        break;
      case PortRef::Kind::Target:
        if (here.port < 1 || (size_t)here.port > d.target.size())
          throw Error("description text: target index out of range");
        d.target[here.port - 1] = there;
        break;
      default:
        if (here.node < 0 || (size_t)here.node >= d.nodes.size() ||
            here.port < 0 || (size_t)here.port >= d.nodes[here.node].ports.size())
          throw Error("description text: internal ref out of range");
        d.nodes[here.node].ports[here.port] = there;
    }
  }
  return d;
}

} // namespace inet
