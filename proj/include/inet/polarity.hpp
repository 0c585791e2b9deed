#pragma once

#include <cstdint>
#include <string_view>

namespace inet {

// Ports are directed: Pos is an output end, Neg an input end. Connections
// always join one Pos port with one Neg port.
enum class Polarity : uint8_t { Neg = 0, Pos = 1 };

constexpr Polarity opposite(Polarity p) {
  return p == Polarity::Neg ? Polarity::Pos : Polarity::Neg;
}

constexpr std::string_view to_string(Polarity p) {
  return p == Polarity::Neg ? "Neg" : "Pos";
}

} // namespace inet
