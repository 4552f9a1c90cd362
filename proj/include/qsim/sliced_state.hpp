/// @file  sliced_state.hpp
/// @brief n-qubit state as 4r bit-slice BDDs sharing one √2-exponent

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsim/algebraic.hpp"
#include "qsim/bdd.hpp"

namespace qsim {

/// Coefficient families of (a·ω³ + b·ω² + c·ω + d).
enum class Family : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };
inline constexpr std::array<Family, 4> kFamilies{Family::A, Family::B, Family::C, Family::D};

/// Slice i holds bit i of the integer; the last slice is the two's-complement sign.
using SliceVector = std::vector<bdd::Bdd>;
using FamilySlices = std::array<SliceVector, 4>;

inline constexpr std::size_t kDefaultSliceWidth = 32;
inline constexpr std::size_t kDefaultEnumerationLimit = 16;

class SlicedState {
public:
  SlicedState(bdd::Manager &mgr, std::vector<bdd::VarId> qubit_vars, FamilySlices slices, std::int64_t k);

  [[nodiscard]] bdd::Manager &manager() const noexcept { return *mgr_; }
  [[nodiscard]] std::size_t qubits() const noexcept { return vars_.size(); }
  [[nodiscard]] std::size_t width() const noexcept { return slices_[0].size(); }
  [[nodiscard]] std::int64_t k() const noexcept { return k_; }
  [[nodiscard]] bdd::VarId qubit_var(std::size_t q) const { return vars_.at(q); }
  [[nodiscard]] const std::vector<bdd::VarId> &qubit_vars() const noexcept { return vars_; }

  [[nodiscard]] const FamilySlices &slices() const noexcept { return slices_; }
  [[nodiscard]] const SliceVector &family(Family f) const noexcept { return slices_[static_cast<int>(f)]; }
  [[nodiscard]] const bdd::Bdd &slice(Family f, std::size_t bit) const { return family(f).at(bit); }

  /// Replace all slices at once. Every family must have the same width >= 1.
  void assign(FamilySlices slices, std::int64_t k);
  /// Overwrite one slice; intended for tests and fault injection.
  void set_slice(Family f, std::size_t bit, bdd::Bdd value);

  /// Total BDD nodes shared across all 4r slices.
  [[nodiscard]] std::size_t node_count() const;

private:
  bdd::Manager *mgr_;
  std::vector<bdd::VarId> vars_;
  FamilySlices slices_;
  std::int64_t k_;
};

/// Basis state |bits⟩ over n fresh manager variables; bits[j] is qubit j.
/// An empty `bits` means all zeros.
[[nodiscard]] SlicedState init_basis_state(bdd::Manager &mgr, std::size_t n, std::string_view bits = {},
                                           std::size_t r_init = kDefaultSliceWidth);

/// Amplitude at the basis index given as a bitstring (character j is qubit j).
[[nodiscard]] AlgebraicAmplitude decode_amplitude(const SlicedState &state, std::string_view index);
[[nodiscard]] AlgebraicAmplitude decode_amplitude(const SlicedState &state, const std::vector<bool> &qubit_values);

/// All 2^n amplitudes in index order, qubit 0 being the most significant bit.
[[nodiscard]] std::vector<AlgebraicAmplitude> decode_all(const SlicedState &state,
                                                         std::size_t limit = kDefaultEnumerationLimit);

/// Sign-extend every family to `new_r` slices.
void grow_slices(SlicedState &state, std::size_t new_r);

/// Indicator of basis indices with a nonzero amplitude.
[[nodiscard]] bdd::Bdd nonzero_support(const SlicedState &state);

struct IndexedAmplitude {
  std::string index;
  AlgebraicAmplitude amplitude;
};

/// Nonzero amplitudes in ascending index order. Throws std::length_error if
/// more than `max_entries` indices are nonzero.
[[nodiscard]] std::vector<IndexedAmplitude> nonzero_amplitudes(const SlicedState &state,
                                                               std::size_t max_entries = std::size_t{1} << 16);

/// Σ over all indices of the abs2 numerators, as (U, V). Requires n <= limit.
[[nodiscard]] Abs2Numerator total_abs2_numerator(const SlicedState &state,
                                                 std::size_t limit = kDefaultEnumerationLimit);

} // namespace qsim
