#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "inet/compile.hpp"
#include "inet/language.hpp"
#include "inet/term.hpp"

namespace inet::seq {

// Deterministic single-threaded reference reducer. Same instantiation
// semantics as the concurrent engine, but ready interactions go through an
// explicit FIFO worklist (LIFO behind a test switch) instead of tasks.

struct SCell;

struct SPort {
  Polarity pol = Polarity::Neg;
  SCell* cell = nullptr;
};

struct SNode {
  AgentId agent = 0;
  uint64_t seq = 0; // creation order
  std::vector<Value> attrs;
  std::vector<SPort> aux;
};

struct STask {
  enum class Kind : uint8_t { Reduce, Forward };
  Kind kind = Kind::Reduce;
  bool done = false;
  // Reduce: the function node's payload (its principal port is the cell the
  // task is parked on)
  AgentId agent = 0;
  std::vector<Value> attrs;
  std::vector<SPort> aux;
  // Forward
  SCell* to = nullptr;
};

struct SCell {
  SNode* full = nullptr;
  STask* waiting = nullptr;
  uint32_t fills = 0;
  uint32_t consumes = 0;
};

struct SeqNet {
  std::deque<SNode> nodes;
  std::deque<SCell> cells;
  std::deque<STask> tasks;
  std::vector<std::pair<std::string, SCell*>> observed;
  uint64_t next_seq = 0;

  SCell* new_cell() { return &cells.emplace_back(); }
};

struct SeqOptions {
  bool lifo = false;
  // called before each rule application: (k, function label, constructor
  // label, branch index)
  std::function<void(uint64_t, const std::string&, const std::string&, size_t)>
      trace;
};

struct SeqOutcome {
  std::unique_ptr<SeqNet> net;
  uint64_t interactions = 0;
  uint64_t forwards = 0;
  uint64_t tasks_spawned = 0;
  std::vector<std::string> blocked; // labels of tasks never unblocked
};

namespace detail {

struct Ready {
  STask* task;
  SNode* node;
  SCell* cell;
};

class Engine {
 public:
  Engine(const Language& lang, SeqOptions opts)
      : lang_(lang), opts_(std::move(opts)) {
    net_ = std::make_unique<SeqNet>();
  }

  void fill(SCell* c, SNode* n) {
    c->fills++;
    c->full = n;
    if (c->waiting) ready_.push_back({c->waiting, n, c});
  }

  void attach(SCell* c, STask* t) {
    c->waiting = t;
    if (c->full) ready_.push_back({t, c->full, c});
  }

  void spawn_reduce(AgentId agent, std::vector<Value> attrs,
                    std::vector<SPort> aux, SCell* on) {
    STask& t = net_->tasks.emplace_back();
    t.kind = STask::Kind::Reduce;
    t.agent = agent;
    t.attrs = std::move(attrs);
    t.aux = std::move(aux);
    tasks_spawned_++;
    attach(on, &t);
  }

  void spawn_forward(SCell* from, SCell* to) {
    STask& t = net_->tasks.emplace_back();
    t.kind = STask::Kind::Forward;
    t.to = to;
    tasks_spawned_++;
    attach(from, &t);
  }

  // Rule-template instantiation, the sequential analogue of the concurrent
  // engine's: fresh cells at positive internal ports, interface ports taken
  // over from src/trg, constructors deposited, functions parked, interface
  // short-circuits forwarded.
  void instantiate(const ResolvedRhs& r, const std::vector<SPort>& src,
                   const std::vector<SPort>& trg) {
    const NetDescription<LabelExpr>& d = r.branch->rhs;
    if (src.size() != d.source.size() || trg.size() != d.target.size())
      throw ConfigError("instantiate: interface arity mismatch");

    size_t n_nodes = d.nodes.size();
    offsets_.clear();
    size_t total = 0;
    for (size_t n = 0; n < n_nodes; ++n) {
      offsets_.push_back(total);
      total += d.nodes[n].ports.size();
    }
    port_scratch_.assign(total, SPort{});

    // pass 1: allocate connections at positive internal-internal ports
    for (size_t n = 0; n < n_nodes; ++n) {
      const auto& pols = lang_.sigs[d.nodes[n].label.agent].port_polarities;
      for (size_t p = 0; p < d.nodes[n].ports.size(); ++p) {
        SPort& slot = port_scratch_[offsets_[n] + p];
        slot.pol = pols[p];
        if (pols[p] == Polarity::Pos && d.nodes[n].ports[p].is_internal())
          slot.cell = net_->new_cell();
      }
    }
    // pass 2: resolve the rest
    for (size_t n = 0; n < n_nodes; ++n) {
      for (size_t p = 0; p < d.nodes[n].ports.size(); ++p) {
        SPort& slot = port_scratch_[offsets_[n] + p];
        if (slot.cell) continue;
        const PortRef& ref = d.nodes[n].ports[p];
        switch (ref.kind) {
          case PortRef::Kind::Source: slot.cell = src[ref.port - 1].cell; break;
          case PortRef::Kind::Target: slot.cell = trg[ref.port - 1].cell; break;
          default: slot.cell = port_scratch_[offsets_[ref.node] + ref.port].cell;
        }
        if (!slot.cell) throw ConfigError("instantiate: unresolved port");
      }
    }
    // connect principal ports: deposit constructors, park functions
    for (size_t n = 0; n < n_nodes; ++n) {
      const LabelExpr& lab = d.nodes[n].label;
      std::vector<Value> attrs;
      if (!r.node_attrs.empty()) attrs = r.node_attrs[n];
      std::vector<SPort> aux(
          port_scratch_.begin() + offsets_[n] + 1,
          port_scratch_.begin() + offsets_[n] + d.nodes[n].ports.size());
      SPort principal = port_scratch_[offsets_[n]];
      if (principal.pol == Polarity::Pos) {
        SNode& node = net_->nodes.emplace_back();
        node.agent = lab.agent;
        node.seq = net_->next_seq++;
        node.attrs = std::move(attrs);
        node.aux = std::move(aux);
        fill(principal.cell, &node);
      } else {
        spawn_reduce(lab.agent, std::move(attrs), std::move(aux),
                     principal.cell);
      }
    }
    // interface short-circuits
    handle_iface(src, d.source, src, trg);
    handle_iface(trg, d.target, src, trg);
  }

  // Nothing to do from a positive interface port; a negative one forwards
  // into the resolved counterpart unless the pair is an empty cycle or the
  // counterpart is internal (already wired above).
  void handle_iface(const std::vector<SPort>& side,
                    const std::vector<PortRef>& refs,
                    const std::vector<SPort>& src,
                    const std::vector<SPort>& trg) {
    for (size_t i = 0; i < side.size(); ++i) {
      if (side[i].pol == Polarity::Pos) continue;
      const PortRef& ref = refs[i];
      if (ref.is_internal()) continue;
      const std::vector<SPort>& arr =
          ref.kind == PortRef::Kind::Source ? src : trg;
      if (ref.port < 1 || (size_t)ref.port > arr.size())
        throw ConfigError("interface reference out of range: " + ref.str());
      SCell* dst = arr[ref.port - 1].cell;
      if (dst == side[i].cell) continue; // empty cycle
      spawn_forward(side[i].cell, dst);
    }
  }

  void boot(const CompiledNet& main) {
    std::vector<SPort> src;
    for (const auto& ob : main.observed) {
      SCell* c = net_->new_cell();
      src.push_back(SPort{ob.holder_pol, c});
      net_->observed.emplace_back(ob.name, c);
    }
    std::vector<SPort> trg;
    RuleBranch start;
    start.rhs = main.desc;
    ResolvedRhs r;
    r.branch = &start;
    bool any_attrs = false;
    for (const auto& n : main.desc.nodes)
      if (!n.label.attr_exprs.empty()) any_attrs = true;
    if (any_attrs) {
      Env empty_env;
      r.node_attrs.resize(main.desc.nodes.size());
      for (size_t n = 0; n < main.desc.nodes.size(); ++n) {
        const LabelExpr& lab = main.desc.nodes[n].label;
        const AgentSignature& sig = lang_.sigs[lab.agent];
        for (size_t k = 0; k < lab.attr_exprs.size(); ++k) {
          Value v = eval_expr(lab.attr_exprs[k], empty_env);
          if (type_of(v) != sig.attr_types[k])
            throw EvalError("attribute " + std::to_string(k + 1) + " of " +
                            sig.name + ": expected " +
                            std::string(to_string(sig.attr_types[k])) +
                            ", got " + to_string(v));
          r.node_attrs[n].push_back(std::move(v));
        }
      }
    }
    instantiate(r, src, trg);
  }

  void run_to_quiescence() {
    while (!ready_.empty()) {
      Ready item;
      if (opts_.lifo) {
        item = ready_.back();
        ready_.pop_back();
      } else {
        item = ready_.front();
        ready_.pop_front();
      }
      execute(item);
    }
  }

  void execute(const Ready& item) {
    item.cell->consumes++;
    item.cell->full = nullptr;
    STask* t = item.task;
    t->done = true;
    if (t->kind == STask::Kind::Forward) {
      forwards_++;
      fill(t->to, item.node);
      return;
    }
    const RuleEntry* entry = lang_.rules.find(t->agent, item.node->agent);
    if (!entry || entry->branches.empty())
      throw MissingRuleError(lang_.sigs.name(t->agent),
                             lang_.sigs.name(item.node->agent));
    Env env{t->attrs, item.node->attrs};
    ResolvedRhs r = resolve_rhs(lang_, *entry, env, t->agent, item.node->agent);
    if (opts_.trace) {
      size_t branch_idx = (size_t)(r.branch - entry->branches.data());
      opts_.trace(interactions_, lang_.sigs.name(t->agent),
                  lang_.sigs.name(item.node->agent), branch_idx);
    }
    interactions_++;
    instantiate(r, t->aux, item.node->aux);
  }

  SeqOutcome finish() {
    SeqOutcome out;
    for (const auto& t : net_->tasks) {
      if (t.done) continue;
      out.blocked.push_back(t.kind == STask::Kind::Reduce
                                ? lang_.sigs.name(t.agent)
                                : std::string("forwarder"));
    }
    out.net = std::move(net_);
    out.interactions = interactions_;
    out.forwards = forwards_;
    out.tasks_spawned = tasks_spawned_;
    return out;
  }

 private:
  const Language& lang_;
  SeqOptions opts_;
  std::unique_ptr<SeqNet> net_;
  std::deque<Ready> ready_;
  std::vector<SPort> port_scratch_;
  std::vector<size_t> offsets_;
  uint64_t interactions_ = 0;
  uint64_t forwards_ = 0;
  uint64_t tasks_spawned_ = 0;
};

} // namespace detail

// Pops ready pairs in deterministic order until the worklist drains and
// returns the net at normal form with the exact rule-application count.
inline SeqOutcome reduce_sequential(const Language& lang,
                                    const CompiledNet& main,
                                    SeqOptions opts = {}) {
  detail::Engine eng(lang, std::move(opts));
  eng.boot(main);
  eng.run_to_quiescence();
  return eng.finish();
}

// Follows the interface connection and extracts the constructor term,
// reading through one sub-term per negative auxiliary port. Iterative: the
// result can be far deeper than the machine stack allows.
inline TermResult readback(const Language& lang, const SCell* start,
                           size_t max_depth = 1'000'000) {
  TermResult result;
  if (!start) return result;

  struct Frame {
    const SNode* node;
    Term* out;
    size_t next_aux = 0;
  };
  std::vector<Frame> stack;
  std::unordered_set<const SCell*> seen;

  auto enter = [&](const SCell* c, Term* out) -> TermResult::Status {
    if (!c->full) return TermResult::Status::Blocked;
    if (!seen.insert(c).second) return TermResult::Status::Cycle;
    if (stack.size() >= max_depth) return TermResult::Status::TooDeep;
    const SNode* n = c->full;
    out->label = lang.sigs.name(n->agent);
    out->attrs = n->attrs;
    stack.push_back(Frame{n, out, 0});
    return TermResult::Status::Ok;
  };

  auto st = enter(start, &result.term);
  if (st != TermResult::Status::Ok) {
    result.status = st;
    return result;
  }
  while (!stack.empty()) {
    Frame& f = stack.back();
    bool descended = false;
    while (f.next_aux < f.node->aux.size()) {
      const SPort& port = f.node->aux[f.next_aux++];
      if (port.pol != Polarity::Neg) continue;
      f.out->kids.emplace_back();
      st = enter(port.cell, &f.out->kids.back());
      if (st != TermResult::Status::Ok) {
        result.status = st;
        return result;
      }
      descended = true;
      break;
    }
    if (!descended) stack.pop_back();
  }
  result.status = TermResult::Status::Ok;
  return result;
}

inline TermResult readback(const Language& lang, const SeqNet& net,
                           const std::string& iface,
                           size_t max_depth = 1'000'000) {
  for (const auto& [name, cell] : net.observed)
    if (name == iface) return readback(lang, cell, max_depth);
  throw ConfigError("readback: no observed interface named '" + iface + "'");
}

} // namespace inet::seq
