#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inet/diag.hpp"
#include "inet/polarity.hpp"
#include "inet/value.hpp"

namespace inet {

using AgentId = uint32_t;

enum class AgentKind : uint8_t { Function, Constructor };

// Per-label port polarities (index 0 is the principal port) plus the types
// of the label's attributes. Total arity = port_polarities.size().
struct AgentSignature {
  std::string name;
  std::vector<Polarity> port_polarities;
  std::vector<AttrType> attr_types;

  size_t arity() const { return port_polarities.size(); }
  size_t aux_arity() const { return port_polarities.size() - 1; }
  Polarity principal() const { return port_polarities[0]; }
  AgentKind kind() const {
    return principal() == Polarity::Neg ? AgentKind::Function
                                        : AgentKind::Constructor;
  }
};

class SignatureTable {
 public:
  AgentId add(AgentSignature sig) {
    auto [it, fresh] = index_.emplace(sig.name, (AgentId)sigs_.size());
    if (!fresh) throw ConfigError("duplicate agent signature: " + sig.name);
    sigs_.push_back(std::move(sig));
    return it->second;
  }

  std::optional<AgentId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const AgentSignature& operator[](AgentId id) const { return sigs_[id]; }
  const std::string& name(AgentId id) const { return sigs_[id].name; }
  size_t size() const { return sigs_.size(); }

  const std::vector<AgentSignature>& all() const { return sigs_; }

 private:
  std::vector<AgentSignature> sigs_;
  std::unordered_map<std::string, AgentId> index_;
};

inline AgentKind classify(const SignatureTable& sigs, const std::string& name) {
  auto id = sigs.find(name);
  if (!id) throw ConfigError("classify: unknown agent label " + name);
  return sigs[*id].kind();
}

} // namespace inet
