/// @file  kernels.hpp
/// @brief Gate application on sliced states by Boolean formula manipulation

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qsim/gate.hpp"
#include "qsim/sliced_state.hpp"

namespace qsim {

struct AddResult {
  SliceVector sum;
  bdd::Bdd overflow;  ///< carry into the sign bit xor carry out of it
};

/// Two's-complement ripple-carry addition of two slice vectors of equal width.
[[nodiscard]] AddResult ripple_add(bdd::Manager &mgr, const SliceVector &a, const SliceVector &b,
                                   const bdd::Bdd &carry_in);

/// Applies `gate` in place. On signed overflow in any family the result is
/// discarded, the width is doubled and the gate is applied again.
/// Returns the number of width doublings.
std::size_t apply_gate(SlicedState &state, const Gate &gate);

struct GateStats {
  std::size_t live_nodes = 0;  ///< manager-wide live nodes after the gate
  std::size_t r = 0;
  std::int64_t k = 0;
  std::size_t growths = 0;
};

using GateObserver = std::function<void(std::size_t gate_index, const SlicedState &state)>;

/// Applies every gate in order; the manager may collect garbage or reorder between gates.
std::vector<GateStats> apply_circuit(SlicedState &state, const Circuit &circuit, const GateObserver &observer = {});

} // namespace qsim
