/// @file  dense.hpp
/// @brief Dense exact reference simulator

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsim/algebraic.hpp"
#include "qsim/gate.hpp"
#include "qsim/sliced_state.hpp"

namespace qsim {

/// 2^n amplitudes sharing one exponent k. Index bit (n−1−q) holds qubit q.
struct DenseState {
  std::size_t n = 0;
  std::int64_t k = 0;
  std::vector<AlgebraicAmplitude> amps;

  [[nodiscard]] std::size_t dimension() const noexcept { return amps.size(); }
};

inline constexpr std::size_t kDenseLimit = 16;

[[nodiscard]] DenseState dense_basis_state(std::size_t n, std::string_view bits = {});
void apply_dense(DenseState &state, const Gate &gate);
[[nodiscard]] DenseState simulate_dense(const Circuit &circuit, std::size_t limit = kDenseLimit);

/// Brute-force probability that the listed qubits take the listed values.
[[nodiscard]] ExactProb dense_probability(const DenseState &state, const std::vector<std::size_t> &qubits,
                                          const std::vector<bool> &values);

struct Divergence {
  std::size_t index = 0;
  std::string bitstring;
  AlgebraicAmplitude sliced;
  AlgebraicAmplitude dense;
};

struct CompareReport {
  bool equal = true;
  std::optional<Divergence> first_divergence;
};

/// Exact comparison after normalizing each pair to a common exponent.
[[nodiscard]] CompareReport compare(const SlicedState &state, const DenseState &dense);
[[nodiscard]] CompareReport compare(const DenseState &lhs, const DenseState &rhs);

/// Bitstring of a dense index, qubit 0 first.
[[nodiscard]] std::string index_bits(std::size_t index, std::size_t n);

} // namespace qsim
