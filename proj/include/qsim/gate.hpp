/// @file  gate.hpp
/// @brief Gate library and circuit container

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsim {

enum class GateKind { X, Y, Z, H, S, T, RX90, RY90, CNOT, CZ, Toffoli, Fredkin };

/// Text mnemonic: x y z h s t rx ry cx cz ccx fredkin.
[[nodiscard]] std::string_view mnemonic(GateKind kind) noexcept;
[[nodiscard]] std::optional<GateKind> gate_from_mnemonic(std::string_view text) noexcept;

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<std::size_t> controls;
  std::vector<std::size_t> targets;

  static Gate single(GateKind kind, std::size_t target) { return {kind, {}, {target}}; }
  static Gate cnot(std::size_t control, std::size_t target) { return {GateKind::CNOT, {control}, {target}}; }
  static Gate cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {a}, {b}}; }
  static Gate toffoli(std::vector<std::size_t> controls, std::size_t target) {
    return {GateKind::Toffoli, std::move(controls), {target}};
  }
  static Gate fredkin(std::vector<std::size_t> controls, std::size_t t1, std::size_t t2) {
    return {GateKind::Fredkin, std::move(controls), {t1, t2}};
  }

  /// Every operand, controls first.
  [[nodiscard]] std::vector<std::size_t> operands() const;

  friend bool operator==(const Gate &, const Gate &) = default;
};

/// Throws std::invalid_argument on wrong arity, an index >= n, or a repeated operand.
void validate_gate(const Gate &gate, std::size_t n);

/// Gates that increase the √2 exponent by one.
[[nodiscard]] constexpr bool raises_k(GateKind kind) noexcept {
  return kind == GateKind::H || kind == GateKind::RX90 || kind == GateKind::RY90;
}

struct Circuit {
  std::size_t qubits = 0;
  std::optional<std::string> init;
  std::vector<Gate> gates;
  std::vector<std::size_t> measure;

  friend bool operator==(const Circuit &, const Circuit &) = default;
};

} // namespace qsim
