#include "qsim/gate.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace qsim {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 12> kMnemonics{{
    {GateKind::X, "x"},
    {GateKind::Y, "y"},
    {GateKind::Z, "z"},
    {GateKind::H, "h"},
    {GateKind::S, "s"},
    {GateKind::T, "t"},
    {GateKind::RX90, "rx"},
    {GateKind::RY90, "ry"},
    {GateKind::CNOT, "cx"},
    {GateKind::CZ, "cz"},
    {GateKind::Toffoli, "ccx"},
    {GateKind::Fredkin, "fredkin"},
}};

} // namespace

std::string_view mnemonic(GateKind kind) noexcept {
  for (const auto &[k, name] : kMnemonics)
    if (k == kind) return name;
  return "?";
}

std::optional<GateKind> gate_from_mnemonic(std::string_view text) noexcept {
  for (const auto &[k, name] : kMnemonics)
    if (name == text) return k;
  return std::nullopt;
}

std::vector<std::size_t> Gate::operands() const {
  std::vector<std::size_t> all = controls;
  all.insert(all.end(), targets.begin(), targets.end());
  return all;
}

void validate_gate(const Gate &gate, std::size_t n) {
  const std::string name(mnemonic(gate.kind));
  std::size_t want_targets = 1;
  switch (gate.kind) {
  case GateKind::X:
  case GateKind::Y:
  case GateKind::Z:
  case GateKind::H:
  case GateKind::S:
  case GateKind::T:
  case GateKind::RX90:
  case GateKind::RY90:
    if (!gate.controls.empty()) throw std::invalid_argument(name + ": takes no controls");
    break;
  case GateKind::CNOT:
  case GateKind::CZ:
    if (gate.controls.size() != 1) throw std::invalid_argument(name + ": needs exactly one control");
    break;
  case GateKind::Toffoli:
    if (gate.controls.empty()) throw std::invalid_argument(name + ": needs at least one control");
    break;
  case GateKind::Fredkin:
    want_targets = 2;
    break;
  }
  if (gate.targets.size() != want_targets)
    throw std::invalid_argument(name + ": expected " + std::to_string(want_targets) + " target(s)");

  auto ops = gate.operands();
  for (std::size_t q : ops)
    if (q >= n) throw std::invalid_argument(name + ": qubit " + std::to_string(q) + " out of range");
  std::sort(ops.begin(), ops.end());
  if (std::adjacent_find(ops.begin(), ops.end()) != ops.end())
    throw std::invalid_argument(name + ": repeated operand");
}

} // namespace qsim
