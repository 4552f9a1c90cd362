#include "qsim/dense.hpp"

#include <stdexcept>
#include <utility>

namespace qsim {

namespace {

AlgebraicAmplitude times_i(const AlgebraicAmplitude &x) { return x.times_omega().times_omega(); }

AlgebraicAmplitude same_k_sum(const AlgebraicAmplitude &x, const AlgebraicAmplitude &y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d, x.k + 1};
}

} // namespace

std::string index_bits(std::size_t index, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t q = 0; q < n; ++q)
    if ((index >> (n - 1 - q)) & 1U) s[q] = '1';
  return s;
}

DenseState dense_basis_state(std::size_t n, std::string_view bits) {
  if (n == 0) throw std::invalid_argument("dense_basis_state: need at least one qubit");
  if (n > 30) throw std::length_error("dense_basis_state: too many qubits");
  if (!bits.empty() && bits.size() != n) throw std::invalid_argument("dense_basis_state: bitstring length != n");
  DenseState st;
  st.n = n;
  st.amps.assign(std::size_t{1} << n, AlgebraicAmplitude{});
  std::size_t idx = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const char ch = bits.empty() ? '0' : bits[q];
    if (ch != '0' && ch != '1') throw std::invalid_argument("dense_basis_state: bitstring must contain only 0/1");
    if (ch == '1') idx |= std::size_t{1} << (n - 1 - q);
  }
  st.amps[idx].d = 1;
  return st;
}

void apply_dense(DenseState &st, const Gate &gate) {
  validate_gate(gate, st.n);
  const std::size_t n = st.n;
  auto bit = [n](std::size_t q) { return std::size_t{1} << (n - 1 - q); };
  std::size_t ctrl_mask = 0;
  for (std::size_t c : gate.controls) ctrl_mask |= bit(c);
  const std::size_t tmask = bit(gate.targets[0]);

  if (gate.kind == GateKind::Fredkin) {
    const std::size_t umask = bit(gate.targets[1]);
    for (std::size_t i = 0; i < st.amps.size(); ++i)
      if ((i & ctrl_mask) == ctrl_mask && (i & tmask) && !(i & umask))
        std::swap(st.amps[i], st.amps[(i & ~tmask) | umask]);
    return;
  }
  if (gate.kind == GateKind::CZ) {
    for (std::size_t i = 0; i < st.amps.size(); ++i)
      if ((i & ctrl_mask) == ctrl_mask && (i & tmask)) st.amps[i] = -st.amps[i];
    return;
  }

  for (std::size_t i0 = 0; i0 < st.amps.size(); ++i0) {
    if (i0 & tmask) continue;
    if ((i0 & ctrl_mask) != ctrl_mask) continue;
    AlgebraicAmplitude &x0 = st.amps[i0];
    AlgebraicAmplitude &x1 = st.amps[i0 | tmask];
    switch (gate.kind) {
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli:
      std::swap(x0, x1);
      break;
    case GateKind::Y: {
      AlgebraicAmplitude n0 = -times_i(x1), n1 = times_i(x0);
      x0 = std::move(n0);
      x1 = std::move(n1);
      break;
    }
    case GateKind::Z:
      x1 = -x1;
      break;
    case GateKind::S:
      x1 = times_i(x1);
      break;
    case GateKind::T:
      x1 = x1.times_omega();
      break;
    case GateKind::H: {
      AlgebraicAmplitude n0 = same_k_sum(x0, x1), n1 = same_k_sum(x0, -x1);
      x0 = std::move(n0);
      x1 = std::move(n1);
      break;
    }
    case GateKind::RX90: {
      AlgebraicAmplitude n0 = same_k_sum(x0, -times_i(x1)), n1 = same_k_sum(x1, -times_i(x0));
      x0 = std::move(n0);
      x1 = std::move(n1);
      break;
    }
    case GateKind::RY90: {
      AlgebraicAmplitude n0 = same_k_sum(x0, -x1), n1 = same_k_sum(x0, x1);
      x0 = std::move(n0);
      x1 = std::move(n1);
      break;
    }
    case GateKind::CZ:
    case GateKind::Fredkin:
      break;
    }
  }
  if (raises_k(gate.kind)) ++st.k;
}

DenseState simulate_dense(const Circuit &circuit, std::size_t limit) {
  if (circuit.qubits > limit) throw std::length_error("simulate_dense: qubit count exceeds limit");
  DenseState st = dense_basis_state(circuit.qubits, circuit.init.value_or(std::string{}));
  for (const Gate &g : circuit.gates) apply_dense(st, g);
  return st;
}

ExactProb dense_probability(const DenseState &st, const std::vector<std::size_t> &qubits,
                            const std::vector<bool> &values) {
  if (qubits.size() != values.size()) throw std::invalid_argument("dense_probability: size mismatch");
  std::size_t mask = 0, want = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    if (qubits[j] >= st.n) throw std::invalid_argument("dense_probability: qubit out of range");
    const std::size_t b = std::size_t{1} << (st.n - 1 - qubits[j]);
    mask |= b;
    if (values[j]) want |= b;
  }
  BigInt u = 0, v = 0;
  for (std::size_t i = 0; i < st.amps.size(); ++i) {
    if ((i & mask) != want) continue;
    auto num = abs2_numerator(st.amps[i]);
    u += num.u;
    v += num.v;
  }
  return ExactProb(Rational(u), Rational(v)).scaled_pow2(-static_cast<long>(st.k));
}

namespace {

CompareReport compare_vectors(const std::vector<AlgebraicAmplitude> &lhs, const std::vector<AlgebraicAmplitude> &rhs,
                              std::size_t n) {
  CompareReport rep;
  if (lhs.size() != rhs.size()) {
    rep.equal = false;
    return rep;
  }
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!equivalent(lhs[i], rhs[i])) {
      rep.equal = false;
      rep.first_divergence = Divergence{i, index_bits(i, n), lhs[i], rhs[i]};
      return rep;
    }
  }
  return rep;
}

std::vector<AlgebraicAmplitude> with_shared_k(const DenseState &st) {
  std::vector<AlgebraicAmplitude> out = st.amps;
  for (auto &a : out) a.k = st.k;
  return out;
}

} // namespace

CompareReport compare(const SlicedState &state, const DenseState &dense) {
  if (state.qubits() != dense.n) return {false, std::nullopt};
  return compare_vectors(decode_all(state, dense.n), with_shared_k(dense), dense.n);
}

CompareReport compare(const DenseState &lhs, const DenseState &rhs) {
  if (lhs.n != rhs.n) return {false, std::nullopt};
  return compare_vectors(with_shared_k(lhs), with_shared_k(rhs), lhs.n);
}

} // namespace qsim
