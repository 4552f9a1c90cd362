#include "qsim/sliced_state.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

namespace qsim {

using bdd::Bdd;
using bdd::Manager;
using bdd::VarId;

SlicedState::SlicedState(Manager &mgr, std::vector<VarId> qubit_vars, FamilySlices slices, std::int64_t k)
    : mgr_(&mgr), vars_(std::move(qubit_vars)), k_(k) {
  assign(std::move(slices), k);
}

void SlicedState::assign(FamilySlices slices, std::int64_t k) {
  const std::size_t r = slices[0].size();
  if (r == 0) throw std::invalid_argument("SlicedState: slice width must be at least 1");
  for (const auto &fam : slices) {
    if (fam.size() != r) throw std::invalid_argument("SlicedState: families have different widths");
    for (const auto &f : fam)
      if (!f.is_valid() || f.manager() != mgr_) throw std::invalid_argument("SlicedState: slice from foreign manager");
  }
  slices_ = std::move(slices);
  k_ = k;
}

void SlicedState::set_slice(Family f, std::size_t bit, Bdd value) {
  auto &fam = slices_[static_cast<int>(f)];
  if (bit >= fam.size()) throw std::out_of_range("SlicedState::set_slice: bit out of range");
  fam[bit] = std::move(value);
}

std::size_t SlicedState::node_count() const {
  std::vector<Bdd> roots;
  roots.reserve(4 * width());
  for (const auto &fam : slices_) roots.insert(roots.end(), fam.begin(), fam.end());
  return mgr_->node_count(roots);
}

SlicedState init_basis_state(Manager &mgr, std::size_t n, std::string_view bits, std::size_t r_init) {
  if (n == 0) throw std::invalid_argument("init_basis_state: need at least one qubit");
  if (r_init == 0) throw std::invalid_argument("init_basis_state: slice width must be at least 1");
  if (!bits.empty() && bits.size() != n) throw std::invalid_argument("init_basis_state: bitstring length != n");
  for (char ch : bits)
    if (ch != '0' && ch != '1') throw std::invalid_argument("init_basis_state: bitstring must contain only 0/1");

  std::vector<VarId> vars;
  vars.reserve(n);
  for (std::size_t j = 0; j < n; ++j) vars.push_back(mgr.new_var());

  bdd::Cube cube;
  for (std::size_t j = 0; j < n; ++j) cube.add({vars[j], !bits.empty() && bits[j] == '1'});

  FamilySlices slices;
  for (auto &fam : slices) fam.assign(r_init, mgr.zero());
  slices[static_cast<int>(Family::D)][0] = mgr.cube(cube);
  return SlicedState(mgr, std::move(vars), std::move(slices), 0);
}

namespace {

// Highest slice that differs from the sign slice, plus two; slices above are
// sign extension and do not change the value.
std::size_t effective_width(const SliceVector &fam) {
  const std::size_t r = fam.size();
  std::size_t w = 1;
  for (std::size_t i = r - 1; i-- > 0;) {
    if (!(fam[i] == fam[r - 1])) {
      w = i + 2;
      break;
    }
  }
  return w;
}

struct Decoder {
  const SlicedState &state;
  std::array<std::size_t, 4> widths{};
  std::vector<bool> assignment;

  explicit Decoder(const SlicedState &s) : state(s), assignment(s.manager().var_count(), false) {
    for (std::size_t f = 0; f < 4; ++f) widths[f] = effective_width(s.slices()[f]);
  }

  void set(std::size_t q, bool value) { assignment[state.qubit_var(q).index] = value; }

  BigInt integer(std::size_t f) const {
    const auto &fam = state.slices()[f];
    const std::size_t w = widths[f];
    const Manager &mgr = state.manager();
    BigInt value = 0;
    for (std::size_t i = 0; i + 1 < w; ++i)
      if (mgr.eval(fam[i], assignment)) mpz_setbit(value.get_mpz_t(), i);
    if (mgr.eval(fam[w - 1], assignment)) {
      BigInt sign = 1;
      mpz_mul_2exp(sign.get_mpz_t(), sign.get_mpz_t(), w - 1);
      value -= sign;
    }
    return value;
  }

  AlgebraicAmplitude amplitude() const {
    return {integer(0), integer(1), integer(2), integer(3), state.k()};
  }
};

} // namespace

AlgebraicAmplitude decode_amplitude(const SlicedState &state, std::string_view index) {
  if (index.size() != state.qubits()) throw std::invalid_argument("decode_amplitude: index length != n");
  Decoder dec(state);
  for (std::size_t q = 0; q < index.size(); ++q) {
    if (index[q] != '0' && index[q] != '1') throw std::invalid_argument("decode_amplitude: index must be 0/1");
    dec.set(q, index[q] == '1');
  }
  return dec.amplitude();
}

AlgebraicAmplitude decode_amplitude(const SlicedState &state, const std::vector<bool> &qubit_values) {
  if (qubit_values.size() != state.qubits()) throw std::invalid_argument("decode_amplitude: index length != n");
  Decoder dec(state);
  for (std::size_t q = 0; q < qubit_values.size(); ++q) dec.set(q, qubit_values[q]);
  return dec.amplitude();
}

std::vector<AlgebraicAmplitude> decode_all(const SlicedState &state, std::size_t limit) {
  const std::size_t n = state.qubits();
  if (n > limit || n >= 63) throw std::length_error("decode_all: qubit count exceeds enumeration limit");
  Decoder dec(state);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<AlgebraicAmplitude> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    for (std::size_t q = 0; q < n; ++q) dec.set(q, (idx >> (n - 1 - q)) & 1U);
    out.push_back(dec.amplitude());
  }
  return out;
}

void grow_slices(SlicedState &state, std::size_t new_r) {
  if (new_r <= state.width()) throw std::invalid_argument("grow_slices: new width must exceed current width");
  FamilySlices grown = state.slices();
  for (auto &fam : grown) {
    const Bdd sign = fam.back();
    fam.resize(new_r, sign);
  }
  state.assign(std::move(grown), state.k());
}

Bdd nonzero_support(const SlicedState &state) {
  Manager &mgr = state.manager();
  Bdd acc = mgr.zero();
  for (const auto &fam : state.slices())
    for (const auto &f : fam) acc |= f;
  return acc;
}

std::vector<IndexedAmplitude> nonzero_amplitudes(const SlicedState &state, std::size_t max_entries) {
  const Manager &mgr = state.manager();
  const std::size_t n = state.qubits();
  std::vector<std::size_t> qubit_of(mgr.var_count(), std::numeric_limits<std::size_t>::max());
  for (std::size_t q = 0; q < n; ++q) qubit_of[state.qubit_var(q).index] = q;

  const Bdd support = nonzero_support(state);

  // Collect satisfying paths as partial assignments ('-' = free).
  std::vector<std::string> indices;
  std::string partial(n, '-');
  std::size_t total = 0;

  struct Frame {
    Bdd node;
    std::size_t qubit;
    int stage;
  };
  std::vector<Frame> stack;
  auto emit = [&](const std::string &path) {
    const auto free_count = static_cast<std::size_t>(std::count(path.begin(), path.end(), '-'));
    if (free_count >= 63 || (std::size_t{1} << free_count) > max_entries - total)
      throw std::length_error("nonzero_amplitudes: too many nonzero amplitudes");
    total += std::size_t{1} << free_count;
    std::vector<std::size_t> free_pos;
    for (std::size_t q = 0; q < n; ++q)
      if (path[q] == '-') free_pos.push_back(q);
    std::string idx = path;
    for (std::size_t m = 0; m < (std::size_t{1} << free_count); ++m) {
      for (std::size_t j = 0; j < free_pos.size(); ++j) idx[free_pos[j]] = ((m >> j) & 1U) ? '1' : '0';
      indices.push_back(idx);
    }
  };

  if (support.is_one()) emit(partial);
  else if (!support.is_zero()) {
    stack.push_back({support, qubit_of[support.var().index], 0});
    while (!stack.empty()) {
      Frame &top = stack.back();
      if (top.stage == 2) {
        partial[top.qubit] = '-';
        stack.pop_back();
        continue;
      }
      const bool branch = top.stage == 1;
      ++top.stage;
      partial[top.qubit] = branch ? '1' : '0';
      Bdd child = branch ? top.node.high() : top.node.low();
      if (child.is_zero()) continue;
      if (child.is_one()) {
        emit(partial);
        continue;
      }
      const std::size_t q = qubit_of[child.var().index];
      if (q == std::numeric_limits<std::size_t>::max())
        throw std::logic_error("nonzero_amplitudes: slice depends on a non-qubit variable");
      stack.push_back({std::move(child), q, 0});
    }
  }

  std::sort(indices.begin(), indices.end());
  std::vector<IndexedAmplitude> out;
  out.reserve(indices.size());
  for (auto &idx : indices) {
    AlgebraicAmplitude amp = decode_amplitude(state, idx);
    out.push_back({std::move(idx), std::move(amp)});
  }
  return out;
}

Abs2Numerator total_abs2_numerator(const SlicedState &state, std::size_t limit) {
  Abs2Numerator total{0, 0};
  for (const auto &amp : decode_all(state, limit)) {
    auto [u, v] = abs2_numerator(amp);
    total.u += u;
    total.v += v;
  }
  return total;
}

} // namespace qsim
