#include "qsim/kernels.hpp"

#include <stdexcept>
#include <utility>

namespace qsim {

using bdd::Bdd;
using bdd::Cube;
using bdd::Manager;

AddResult ripple_add(Manager &mgr, const SliceVector &a, const SliceVector &b, const Bdd &carry_in) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("ripple_add: operand widths differ");
  if (carry_in.manager() != &mgr) throw std::invalid_argument("ripple_add: carry from foreign manager");
  const std::size_t r = a.size();
  AddResult out;
  out.sum.reserve(r);
  Bdd carry = carry_in;
  Bdd carry_into_sign = carry_in;
  for (std::size_t i = 0; i < r; ++i) {
    if (i == r - 1) carry_into_sign = carry;
    const Bdd ab_or = a[i] | b[i];
    out.sum.push_back(a[i] ^ b[i] ^ carry);
    carry = (a[i] & b[i]) | (ab_or & carry);
  }
  out.overflow = carry ^ carry_into_sign;
  return out;
}

namespace {

constexpr int kA = 0, kB = 1, kC = 2, kD = 3;

class Kernel {
public:
  Kernel(Manager &mgr, const SlicedState &state) : m_(mgr), s_(state), r_(state.width()) {}

  [[nodiscard]] bool overflowed() const noexcept { return overflow_; }
  [[nodiscard]] const SliceVector &in(int fam) const { return s_.slices()[fam]; }
  [[nodiscard]] Bdd q(std::size_t qubit) { return m_.var(s_.qubit_var(qubit)); }

  template <class Fn> SliceVector map(const SliceVector &src, Fn &&fn) {
    SliceVector out;
    out.reserve(src.size());
    for (const auto &f : src) out.push_back(fn(f));
    return out;
  }

  SliceVector add(const SliceVector &a, const SliceVector &b, const Bdd &c0) {
    AddResult res = ripple_add(m_, a, b, c0);
    if (!res.overflow.is_zero()) overflow_ = true;
    return std::move(res.sum);
  }

  /// −x where cond holds, x elsewhere.
  SliceVector negate_where(const SliceVector &x, const Bdd &cond) {
    if (cond.is_zero()) return x;
    SliceVector flipped = map(x, [&](const Bdd &f) { return f ^ cond; });
    return add(flipped, SliceVector(r_, m_.zero()), cond);
  }

  /// x with qubit t's value inverted: ite(q_t, F|¬q_t, F|q_t).
  SliceVector swap_qubit(const SliceVector &x, std::size_t t) {
    const Bdd qt = q(t);
    const Bdd lo = m_.literal({s_.qubit_var(t), false});
    return map(x, [&](const Bdd &f) {
      if (f.is_constant()) return f;
      return m_.ite(qt, m_.cofactor(f, lo), m_.cofactor(f, qt));
    });
  }

  SliceVector select(const Bdd &cond, const SliceVector &then_v, const SliceVector &else_v) {
    SliceVector out;
    out.reserve(r_);
    for (std::size_t i = 0; i < r_; ++i) out.push_back(m_.ite(cond, then_v[i], else_v[i]));
    return out;
  }

  Bdd control_cube(const std::vector<std::size_t> &controls) {
    Bdd acc = m_.one();
    for (std::size_t c : controls) acc &= q(c);
    return acc;
  }

  Bdd cube_with(const std::vector<std::size_t> &controls, std::initializer_list<std::pair<std::size_t, bool>> extra) {
    Cube cube;
    for (std::size_t c : controls) cube.add({s_.qubit_var(c), true});
    for (auto [qubit, phase] : extra) cube.add({s_.qubit_var(qubit), phase});
    return m_.cube(cube);
  }

  FamilySlices run(const Gate &g) {
    FamilySlices out;
    const std::size_t t = g.targets[0];
    switch (g.kind) {
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli: {
      const Bdd ctrl = control_cube(g.controls);
      const Bdd qt = q(t);
      const Bdd c0 = cube_with(g.controls, {{t, false}});
      const Bdd c1 = cube_with(g.controls, {{t, true}});
      for (int f = 0; f < 4; ++f)
        out[f] = map(in(f), [&](const Bdd &x) {
          if (x.is_constant()) return x;
          return m_.ite(ctrl, m_.ite(qt, m_.cofactor(x, c0), m_.cofactor(x, c1)), x);
        });
      break;
    }
    case GateKind::Fredkin: {
      const std::size_t u = g.targets[1];
      const Bdd qt = q(t);
      const Bdd active = control_cube(g.controls) & (qt ^ q(u));
      const Bdd c01 = cube_with(g.controls, {{t, false}, {u, true}});
      const Bdd c10 = cube_with(g.controls, {{t, true}, {u, false}});
      for (int f = 0; f < 4; ++f)
        out[f] = map(in(f), [&](const Bdd &x) {
          if (x.is_constant()) return x;
          return m_.ite(active, m_.ite(qt, m_.cofactor(x, c01), m_.cofactor(x, c10)), x);
        });
      break;
    }
    case GateKind::Z: {
      const Bdd qt = q(t);
      for (int f = 0; f < 4; ++f) out[f] = negate_where(in(f), qt);
      break;
    }
    case GateKind::CZ: {
      const Bdd cond = q(g.controls[0]) & q(t);
      for (int f = 0; f < 4; ++f) out[f] = negate_where(in(f), cond);
      break;
    }
    case GateKind::S: {
      // |1⟩ component times i: (a,b,c,d) → (c,d,−a,−b)
      const Bdd qt = q(t);
      out[kA] = select(qt, in(kC), in(kA));
      out[kB] = select(qt, in(kD), in(kB));
      out[kC] = negate_where(select(qt, in(kA), in(kC)), qt);
      out[kD] = negate_where(select(qt, in(kB), in(kD)), qt);
      break;
    }
    case GateKind::T: {
      // |1⟩ component times ω: (a,b,c,d) → (b,c,d,−a)
      const Bdd qt = q(t);
      out[kA] = select(qt, in(kB), in(kA));
      out[kB] = select(qt, in(kC), in(kB));
      out[kC] = select(qt, in(kD), in(kC));
      out[kD] = negate_where(select(qt, in(kA), in(kD)), qt);
      break;
    }
    case GateKind::Y: {
      // new α_q = (q ? i : −i)·α_{¬q}
      const Bdd qt = q(t);
      const Bdd nq = ~qt;
      out[kA] = negate_where(swap_qubit(in(kC), t), nq);
      out[kB] = negate_where(swap_qubit(in(kD), t), nq);
      out[kC] = negate_where(swap_qubit(in(kA), t), qt);
      out[kD] = negate_where(swap_qubit(in(kB), t), qt);
      break;
    }
    case GateKind::H:
    case GateKind::RY90: {
      // H: α0 + α1 | α0 − α1;  RY90: α0 − α1 | α0 + α1
      const Bdd qt = q(t);
      const Bdd lo = m_.literal({s_.qubit_var(t), false});
      const Bdd neg = g.kind == GateKind::H ? qt : ~qt;
      for (int f = 0; f < 4; ++f) {
        SliceVector gv = map(in(f), [&](const Bdd &x) { return m_.cofactor(x, lo); });
        SliceVector dv = map(in(f), [&](const Bdd &x) { return m_.cofactor(x, qt) ^ neg; });
        out[f] = add(gv, dv, neg);
      }
      break;
    }
    case GateKind::RX90: {
      // new α_q = α_q − i·α_{¬q}
      const Bdd one = m_.one(), zero = m_.zero();
      auto inverted = [&](const SliceVector &x) { return map(x, [&](const Bdd &f) { return ~f; }); };
      out[kA] = add(in(kA), inverted(swap_qubit(in(kC), t)), one);
      out[kB] = add(in(kB), inverted(swap_qubit(in(kD), t)), one);
      out[kC] = add(in(kC), swap_qubit(in(kA), t), zero);
      out[kD] = add(in(kD), swap_qubit(in(kB), t), zero);
      break;
    }
    }
    return out;
  }

private:
  Manager &m_;
  const SlicedState &s_;
  std::size_t r_;
  bool overflow_ = false;
};

} // namespace

std::size_t apply_gate(SlicedState &state, const Gate &gate) {
  validate_gate(gate, state.qubits());
  std::size_t growths = 0;
  for (;;) {
    Kernel kernel(state.manager(), state);
    FamilySlices next = kernel.run(gate);
    if (!kernel.overflowed()) {
      state.assign(std::move(next), state.k() + (raises_k(gate.kind) ? 1 : 0));
      return growths;
    }
    next = {};
    grow_slices(state, 2 * state.width());
    ++growths;
  }
}

std::vector<GateStats> apply_circuit(SlicedState &state, const Circuit &circuit, const GateObserver &observer) {
  if (circuit.qubits != state.qubits()) throw std::invalid_argument("apply_circuit: qubit count mismatch");
  std::vector<GateStats> stats;
  stats.reserve(circuit.gates.size());
  bdd::Manager &mgr = state.manager();
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const std::size_t grew = apply_gate(state, circuit.gates[i]);
    mgr.checkpoint();
    stats.push_back({mgr.stats().live, state.width(), state.k(), grew});
    if (observer) observer(i, state);
  }
  return stats;
}

} // namespace qsim
