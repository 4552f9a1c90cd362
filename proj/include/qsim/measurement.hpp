/// @file  measurement.hpp
/// @brief Monolithic hyperfunction over all slices, exact outcome probabilities, collapse and sampling

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsim/algebraic.hpp"
#include "qsim/bdd.hpp"
#include "qsim/sliced_state.hpp"

namespace qsim {

struct MeasurementRecord {
  struct Entry {
    std::size_t qubit;
    bool outcome;
    ExactProb probability;  ///< conditional probability at the time of measurement
  };
  std::vector<Entry> entries;
  ExactProb s2{1};  ///< product of 1/p over all entries
};

struct Outcome {
  std::string bits;  ///< one character per measured qubit, in measurement order
  ExactProb probability;
};

/// F = x₀x₁F→a ∨ x₀¬x₁F→b ∨ ¬x₀x₁F→c ∨ ¬x₀¬x₁F→d with F→f = ⋁ᵢ gᵢ·F^{f,i}.
///
/// Building it fixes the variable order (measured qubits first, in the given
/// order, then the other qubits in their current relative order, then x₀, x₁, x₂...) and turns automatic
/// reordering off until the object is destroyed. The source state must not
/// receive further gates while a hyperfunction built from it is in use.
class Hyperfunction {
public:
  Hyperfunction(const SlicedState &state, std::vector<std::size_t> measured);
  ~Hyperfunction();
  Hyperfunction(const Hyperfunction &) = delete;
  Hyperfunction &operator=(const Hyperfunction &) = delete;

  [[nodiscard]] const bdd::Bdd &function() const noexcept { return root_; }
  [[nodiscard]] std::size_t qubits() const noexcept { return n_; }
  [[nodiscard]] std::size_t width() const noexcept { return r_; }
  [[nodiscard]] std::int64_t k() const noexcept { return k_; }
  [[nodiscard]] const std::vector<std::size_t> &measured() const noexcept { return measured_; }
  /// x₀, x₁, then the slice-index variables x₂... (x₂ is the least significant bit).
  [[nodiscard]] const std::vector<bdd::VarId> &encoding_vars() const noexcept { return enc_vars_; }
  /// gᵢ over the slice-index variables.
  [[nodiscard]] bdd::Bdd slice_code(std::size_t i) const;

  /// Probability mass below `node`, over the qubit levels from its own level down.
  [[nodiscard]] ExactProb node_probability(const bdd::Bdd &node);
  /// Σ|α|² over all indices; exactly 1 for any state produced by gates.
  [[nodiscard]] ExactProb total_probability();
  /// Pr of the given outcomes for the first `prefix.size()` measured qubits. No collapse.
  [[nodiscard]] ExactProb joint_probability(const std::vector<bool> &prefix);
  /// Pr[q = 1] for every measured qubit, before any collapse.
  [[nodiscard]] std::vector<ExactProb> marginals();
  /// Outcomes of nonzero probability over the whole measured list in ascending
  /// bit order. Stops after `max_outcomes`, setting `truncated`.
  [[nodiscard]] std::vector<Outcome> outcomes(std::size_t max_outcomes, bool &truncated);

  /// Measures the next qubit in the measured list, drawing the outcome from
  /// `rng` unless `forced`. Throws std::out_of_range when no qubit is left and
  /// std::domain_error when a forced outcome has probability 0.
  bool measure_next(std::optional<bool> forced, std::mt19937_64 &rng);
  [[nodiscard]] std::size_t remaining() const noexcept { return measured_.size() - next_; }
  [[nodiscard]] const MeasurementRecord &record() const noexcept { return record_; }
  /// F with every losing branch of the recorded outcomes replaced by 0.
  [[nodiscard]] bdd::Bdd collapsed_function();

  /// Histogram over the still unmeasured part of the measured list, each shot
  /// continuing from the current collapse point. Deterministic per seed.
  [[nodiscard]] std::map<std::string, std::size_t> sample(std::size_t shots, std::uint64_t seed);

private:
  struct Numer {
    BigInt u, v;  ///< (u + v√2) / 2^k
  };

  [[nodiscard]] std::size_t level_cap(const bdd::Bdd &f) const;
  const Numer &prob(const bdd::Bdd &node);
  Numer leaf_numerator(const bdd::Bdd &node) const;
  /// Mass of the sub-function at `node` over qubit levels `from`..n−1.
  Numer mass(const bdd::Bdd &node, std::size_t from);
  void establish_order();
  void check_epoch();
  bool draw(const Numer &w0, const Numer &w1, std::mt19937_64 &rng) const;
  [[nodiscard]] ExactProb to_prob(const Numer &w) const;

  bdd::Manager *mgr_;
  std::size_t n_, r_;
  std::int64_t k_;
  std::vector<std::size_t> measured_;
  std::vector<bdd::VarId> qubit_vars_;
  std::vector<bdd::VarId> enc_vars_;
  std::vector<int> role_;  ///< per manager variable: -1 other, 0 x₀, 1 x₁, 2+j slice-index bit j
  bdd::Bdd root_;
  bool saved_auto_reorder_;
  std::uint64_t epoch_;
  std::unordered_map<bdd::NodeId, std::pair<bdd::Bdd, Numer>> memo_;  ///< handle pins the node id

  bdd::Bdd cursor_;
  std::size_t next_ = 0;
  MeasurementRecord record_;
};

[[nodiscard]] inline Hyperfunction build_hyperfunction(const SlicedState &state, std::vector<std::size_t> measured) {
  return Hyperfunction(state, std::move(measured));
}

} // namespace qsim
