#include <doctest.h>

#include <algorithm>

#include "qsim/dense.hpp"
#include "qsim/kernels.hpp"
#include "test_util.hpp"

using namespace qsim;
using bdd::Bdd;
using bdd::Manager;

namespace {

SliceVector bits_of(Manager &mgr, long value, std::size_t r) {
  SliceVector out;
  for (std::size_t i = 0; i < r; ++i) out.push_back(mgr.constant(((value >> i) & 1) != 0));
  return out;
}

long const_value(const SliceVector &s) {
  long v = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE(s[i].is_constant());
    if (s[i].is_one()) v |= 1L << i;
  }
  if (s.back().is_one()) v -= 1L << s.size();
  return v;
}

// Runs the same gates on both simulators starting from `bits`.
void check_against_oracle(std::size_t n, const std::string &bits, const std::vector<Gate> &gates, std::size_t r) {
  Manager mgr;
  auto st = init_basis_state(mgr, n, bits, r);
  auto dense = dense_basis_state(n, bits);
  for (const Gate &g : gates) {
    apply_gate(st, g);
    apply_dense(dense, g);
  }
  const auto rep = compare(st, dense);
  if (!rep.equal && rep.first_divergence) {
    INFO("index " << rep.first_divergence->bitstring << " sliced " << rep.first_divergence->sliced.to_string()
                  << " dense " << rep.first_divergence->dense.to_string());
    CHECK(rep.equal);
  }
  CHECK(rep.equal);
  CHECK(st.k() == dense.k);
}

std::vector<AlgebraicAmplitude> sorted_tuples(std::vector<AlgebraicAmplitude> v) {
  std::sort(v.begin(), v.end(), [](const AlgebraicAmplitude &x, const AlgebraicAmplitude &y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.c != y.c) return x.c < y.c;
    return x.d < y.d;
  });
  return v;
}

bool same_values(const std::vector<AlgebraicAmplitude> &x, const std::vector<AlgebraicAmplitude> &y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!equivalent(x[i], y[i])) return false;
  return true;
}

} // namespace

TEST_CASE("ripple_add examples") {
  Manager mgr;
  SUBCASE("1 + 1 overflows in two bits") {
    auto res = ripple_add(mgr, bits_of(mgr, 1, 2), bits_of(mgr, 1, 2), mgr.zero());
    CHECK(const_value(res.sum) == -2);
    CHECK(res.overflow.is_one());
  }
  SUBCASE("additive identity") {
    auto v = mgr.var(mgr.new_var());
    SliceVector a{v, ~v, mgr.one()};
    auto res = ripple_add(mgr, a, bits_of(mgr, 0, 3), mgr.zero());
    CHECK(res.sum == a);
    CHECK(res.overflow.is_zero());
  }
  SUBCASE("negating zero") {
    auto res = ripple_add(mgr, bits_of(mgr, 0, 4), bits_of(mgr, -1, 4), mgr.one());
    CHECK(const_value(res.sum) == 0);
    CHECK(res.overflow.is_zero());
  }
  SUBCASE("exhaustive four-bit constants") {
    for (long x = -8; x < 8; ++x)
      for (long y = -8; y < 8; ++y)
        for (int c = 0; c < 2; ++c) {
          auto res = ripple_add(mgr, bits_of(mgr, x, 4), bits_of(mgr, y, 4), mgr.constant(c != 0));
          const long exact = x + y + c;
          const bool fits = exact >= -8 && exact < 8;
          CHECK(res.overflow.is_one() == !fits);
          if (fits) CHECK(const_value(res.sum) == exact);
        }
  }
}

TEST_CASE("single-gate slice formulas") {
  Manager mgr;
  SUBCASE("X on |0>") {
    auto st = init_basis_state(mgr, 1);
    const Bdd q0 = mgr.var(st.qubit_var(0));
    CHECK(st.slice(Family::D, 0) == ~q0);
    apply_gate(st, Gate::single(GateKind::X, 0));
    CHECK(st.slice(Family::D, 0) == q0);
  }
  SUBCASE("H on |0>") {
    auto st = init_basis_state(mgr, 1);
    apply_gate(st, Gate::single(GateKind::H, 0));
    CHECK(st.slice(Family::D, 0).is_one());
    CHECK(st.k() == 1);
  }
  SUBCASE("T on |+>") {
    auto st = init_basis_state(mgr, 1);
    apply_gate(st, Gate::single(GateKind::H, 0));
    apply_gate(st, Gate::single(GateKind::T, 0));
    const Bdd q0 = mgr.var(st.qubit_var(0));
    CHECK(st.slice(Family::C, 0) == q0);
    CHECK(st.slice(Family::D, 0) == ~q0);
    CHECK(st.k() == 1);
  }
  SUBCASE("Bell") {
    auto st = init_basis_state(mgr, 2);
    apply_gate(st, Gate::single(GateKind::H, 0));
    apply_gate(st, Gate::cnot(0, 1));
    const Bdd q0 = mgr.var(st.qubit_var(0)), q1 = mgr.var(st.qubit_var(1));
    CHECK(st.slice(Family::D, 0) == ~(q0 ^ q1));
    CHECK(st.k() == 1);
  }
  SUBCASE("invalid operands") {
    auto st = init_basis_state(mgr, 2);
    CHECK_THROWS_AS(apply_gate(st, Gate::single(GateKind::H, 2)), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(st, Gate::cnot(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(st, Gate{GateKind::Toffoli, {}, {0}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(st, Gate{GateKind::X, {0}, {1}}), std::invalid_argument);
  }
}

TEST_CASE("every gate kind matches the oracle on all basis inputs") {
  std::mt19937_64 rng(101);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (GateKind kind : testing::kAllKinds) {
      const bool multi = kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::Toffoli ||
                         kind == GateKind::Fredkin;
      if (multi && n < 2) continue;
      for (int variant = 0; variant < 4; ++variant) {
        const Gate g = testing::random_gate_of(rng, kind, n);
        for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
          CAPTURE(n);
          CAPTURE(mnemonic(kind));
          check_against_oracle(n, index_bits(idx, n), {g}, 3);
        }
      }
    }
  }
}

TEST_CASE("every gate kind matches the oracle on superposed inputs") {
  std::mt19937_64 rng(202);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (GateKind kind : testing::kAllKinds) {
      for (int variant = 0; variant < 6; ++variant) {
        std::vector<Gate> gates;
        for (int i = 0; i < 8; ++i) gates.push_back(testing::random_gate(rng, n));
        gates.push_back(testing::random_gate_of(rng, kind, n));
        CAPTURE(mnemonic(kind));
        check_against_oracle(n, index_bits(rng() % (1U << n), n), gates, 2);
      }
    }
  }
}

TEST_CASE("random circuits match the oracle up to eight qubits") {
  std::mt19937_64 rng(303);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Gate> gates;
      for (int i = 0; i < 40; ++i) gates.push_back(testing::random_gate(rng, n));
      check_against_oracle(n, index_bits(rng() % (1U << n), n), gates, trial % 2 == 0 ? 2 : 32);
    }
  }
}

TEST_CASE("gate identities on random states") {
  std::mt19937_64 rng(404);
  struct Identity {
    GateKind kind;
    int power;
  };
  const Identity ids[] = {{GateKind::X, 2},    {GateKind::Z, 2},       {GateKind::S, 4},
                          {GateKind::H, 2},    {GateKind::CNOT, 2},    {GateKind::Toffoli, 2},
                          {GateKind::Fredkin, 2}, {GateKind::Y, 2},   {GateKind::T, 8}};
  for (const auto &id : ids) {
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t n = 3 + rng() % 4;
      Manager mgr;
      auto st = init_basis_state(mgr, n, {}, 4);
      const int prefix = static_cast<int>(rng() % 21);
      for (int i = 0; i < prefix; ++i) apply_gate(st, testing::random_gate(rng, n));
      const auto before = decode_all(st);
      const Gate g = testing::random_gate_of(rng, id.kind, n);
      for (int p = 0; p < id.power; ++p) apply_gate(st, g);
      CAPTURE(mnemonic(id.kind));
      CHECK(same_values(decode_all(st), before));
    }
  }
}

TEST_CASE("permutation gates keep r, k and the amplitude multiset") {
  std::mt19937_64 rng(505);
  for (GateKind kind : {GateKind::X, GateKind::CNOT, GateKind::Toffoli, GateKind::Fredkin}) {
    for (int trial = 0; trial < 8; ++trial) {
      const std::size_t n = 3 + rng() % 3;
      Manager mgr;
      auto st = init_basis_state(mgr, n, {}, 8);
      for (int i = 0; i < 15; ++i) apply_gate(st, testing::random_gate(rng, n));
      const auto r = st.width();
      const auto k = st.k();
      const auto before = sorted_tuples(decode_all(st));
      CHECK(apply_gate(st, testing::random_gate_of(rng, kind, n)) == 0);
      CHECK(st.width() == r);
      CHECK(st.k() == k);
      CHECK(sorted_tuples(decode_all(st)) == before);
    }
  }
}

TEST_CASE("overflow triggers growth and stays exact") {
  for (int m : {1, 3, 5, 9}) {
    Manager mgr;
    auto st = init_basis_state(mgr, 2, {}, 2);
    std::size_t growths = 0;
    for (int i = 0; i < 2 * m; ++i) growths += apply_gate(st, Gate::single(GateKind::H, 0));
    const auto a = decode_amplitude(st, "00");
    BigInt want = 1;
    mpz_mul_2exp(want.get_mpz_t(), want.get_mpz_t(), static_cast<mp_bitcnt_t>(m));
    CHECK(a.d == want);
    CHECK(a.a == 0);
    CHECK(a.b == 0);
    CHECK(a.c == 0);
    CHECK(st.k() == 2 * m);
    CHECK(decode_amplitude(st, "10") == AlgebraicAmplitude{0, 0, 0, 0, 2 * m});
    // 2^m needs m + 2 bits in two's complement; r doubles from 2
    std::size_t want_r = 2, want_growths = 0;
    while (want_r < static_cast<std::size_t>(m) + 2) {
      want_r *= 2;
      ++want_growths;
    }
    CHECK(st.width() == want_r);
    CHECK(growths == want_growths);
    CHECK(growths >= 1);
  }
}

TEST_CASE("apply_circuit") {
  Manager mgr;
  SUBCASE("empty circuit leaves the state alone") {
    auto st = init_basis_state(mgr, 2, "10");
    const auto before = decode_all(st);
    auto stats = apply_circuit(st, Circuit{2, {}, {}, {}});
    CHECK(stats.empty());
    CHECK(decode_all(st) == before);
  }
  SUBCASE("X twice") {
    auto st = init_basis_state(mgr, 3, "101");
    const auto before = decode_all(st);
    apply_circuit(st, Circuit{3, {}, {Gate::single(GateKind::X, 1), Gate::single(GateKind::X, 1)}, {}});
    CHECK(decode_all(st) == before);
  }
  SUBCASE("H twice") {
    auto st = init_basis_state(mgr, 1);
    std::vector<std::int64_t> ks;
    auto stats = apply_circuit(st, Circuit{1, {}, {Gate::single(GateKind::H, 0), Gate::single(GateKind::H, 0)}, {}},
                               [&](std::size_t, const SlicedState &s) { ks.push_back(s.k()); });
    CHECK(decode_amplitude(st, "0") == AlgebraicAmplitude{0, 0, 0, 2, 2});
    CHECK(ks == std::vector<std::int64_t>{1, 2});
    REQUIRE(stats.size() == 2);
    CHECK(stats[1].k == 2);
    CHECK(stats[1].r == kDefaultSliceWidth);
  }
  SUBCASE("qubit count mismatch") {
    auto st = init_basis_state(mgr, 2);
    CHECK_THROWS_AS(apply_circuit(st, Circuit{3, {}, {}, {}}), std::invalid_argument);
  }
}

TEST_CASE("compare reports injected faults") {
  Manager mgr;
  Circuit c{3, {}, {Gate::single(GateKind::H, 0), Gate::cnot(0, 1), Gate::single(GateKind::T, 2)}, {}};
  auto st = init_basis_state(mgr, 3);
  apply_circuit(st, c);
  const auto dense = simulate_dense(c);
  CHECK(compare(st, dense).equal);

  const Bdd q0 = mgr.var(st.qubit_var(0)), q1 = mgr.var(st.qubit_var(1)), q2 = mgr.var(st.qubit_var(2));
  st.set_slice(Family::B, 0, q0 & ~q1 & q2);  // index 101
  const auto rep = compare(st, dense);
  CHECK_FALSE(rep.equal);
  REQUIRE(rep.first_divergence);
  CHECK(rep.first_divergence->bitstring == "101");
  CHECK(rep.first_divergence->index == 5);
}
