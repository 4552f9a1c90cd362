#include "qsim/measurement.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

namespace qsim {

using bdd::Bdd;
using bdd::Cube;
using bdd::VarId;

namespace {

// Exact sign of u + v√2 for integers.
int sign_zsqrt2(const BigInt &u, const BigInt &v) {
  const int su = sgn(u), sv = sgn(v);
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  const BigInt lhs = u * u, rhs = 2 * v * v;
  return lhs > rhs ? su : sv;
}

BigInt shifted(const BigInt &x, std::size_t bits) {
  BigInt out;
  mpz_mul_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  return out;
}

} // namespace

Hyperfunction::Hyperfunction(const SlicedState &state, std::vector<std::size_t> measured)
    : mgr_(&state.manager()), n_(state.qubits()), r_(state.width()), k_(state.k()),
      measured_(std::move(measured)), saved_auto_reorder_(mgr_->auto_reorder()) {
  std::vector<bool> seen(n_, false);
  for (std::size_t q : measured_) {
    if (q >= n_) throw std::invalid_argument("build_hyperfunction: measured qubit out of range");
    if (seen[q]) throw std::invalid_argument("build_hyperfunction: measured qubit listed twice");
    seen[q] = true;
  }

  const std::size_t index_bits = r_ <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(r_ - 1));
  for (std::size_t j = 0; j < 2 + index_bits; ++j) enc_vars_.push_back(mgr_->new_var());

  qubit_vars_ = state.qubit_vars();
  mgr_->set_auto_reorder(false);
  try {
    establish_order();

    role_.assign(mgr_->var_count(), -1);
    for (std::size_t j = 0; j < enc_vars_.size(); ++j) role_[enc_vars_[j].index] = static_cast<int>(j);

    const Bdd x0 = mgr_->var(enc_vars_[0]), x1 = mgr_->var(enc_vars_[1]);
    const std::array<Bdd, 4> selector{x0 & x1, x0 & ~x1, ~x0 & x1, ~x0 & ~x1};

    Bdd acc = mgr_->zero();
    for (std::size_t f = 0; f < 4; ++f) {
      // slices that are equal share one disjunction of their index codes
      std::vector<std::pair<Bdd, Bdd>> groups;
      std::unordered_map<bdd::NodeId, std::size_t> group_of;
      const SliceVector &fam = state.slices()[f];
      for (std::size_t i = 0; i < r_; ++i) {
        if (fam[i].is_zero()) continue;
        auto [it, fresh] = group_of.try_emplace(fam[i].id(), groups.size());
        if (fresh) groups.emplace_back(fam[i], mgr_->zero());
        groups[it->second].second |= slice_code(i);
      }
      Bdd fam_fn = mgr_->zero();
      for (const auto &[slice, codes] : groups) fam_fn |= slice & codes;
      acc |= selector[f] & fam_fn;
    }
    root_ = acc;
  } catch (...) {
    mgr_->set_auto_reorder(saved_auto_reorder_);
    throw;
  }
  epoch_ = mgr_->reorder_epoch();
  cursor_ = root_;
}

Hyperfunction::~Hyperfunction() { mgr_->set_auto_reorder(saved_auto_reorder_); }

Bdd Hyperfunction::slice_code(std::size_t i) const {
  Cube cube;
  for (std::size_t j = 2; j < enc_vars_.size(); ++j) cube.add({enc_vars_[j], ((i >> (j - 2)) & 1U) != 0});
  return mgr_->cube(cube);
}

std::size_t Hyperfunction::level_cap(const Bdd &f) const { return std::min(mgr_->node_level(f), n_); }

void Hyperfunction::establish_order() {
  std::vector<VarId> order;
  order.reserve(mgr_->var_count());
  std::vector<bool> placed(mgr_->var_count(), false);
  auto place = [&](VarId v) {
    order.push_back(v);
    placed[v.index] = true;
  };
  std::vector<bool> is_qubit(mgr_->var_count(), false);
  for (VarId v : qubit_vars_) is_qubit[v.index] = true;
  for (std::size_t q : measured_) place(qubit_vars_[q]);
  // unmeasured qubits keep their current relative order
  const std::vector<VarId> current = mgr_->order();
  for (VarId v : current)
    if (is_qubit[v.index] && !placed[v.index]) place(v);
  for (VarId v : enc_vars_) place(v);
  for (VarId v : current)
    if (!placed[v.index]) place(v);
  mgr_->set_order(order);
  epoch_ = mgr_->reorder_epoch();
}

void Hyperfunction::check_epoch() {
  if (mgr_->reorder_epoch() == epoch_) return;
  memo_.clear();
  establish_order();
}

Hyperfunction::Numer Hyperfunction::leaf_numerator(const Bdd &node) const {
  const std::array<std::pair<bool, bool>, 4> sel{{{true, true}, {true, false}, {false, true}, {false, false}}};
  std::array<BigInt, 4> coef;
  for (std::size_t f = 0; f < 4; ++f) {
    BigInt value = 0;
    for (std::size_t i = 0; i < r_; ++i) {
      Bdd cur = node;
      while (!cur.is_constant()) {
        const int role = role_.at(cur.var().index);
        bool bit;
        if (role == 0) bit = sel[f].first;
        else if (role == 1) bit = sel[f].second;
        else if (role >= 2) bit = ((i >> (role - 2)) & 1U) != 0;
        else throw std::logic_error("Hyperfunction: unexpected variable below the qubit levels");
        cur = bit ? cur.high() : cur.low();
      }
      if (cur.is_one()) {
        if (i + 1 == r_) value -= shifted(BigInt(1), i);
        else mpz_setbit(value.get_mpz_t(), i);
      }
    }
    coef[f] = value;
  }
  auto num = abs2_numerator(AlgebraicAmplitude{coef[0], coef[1], coef[2], coef[3], 0});
  return {std::move(num.u), std::move(num.v)};
}

const Hyperfunction::Numer &Hyperfunction::prob(const Bdd &node) {
  check_epoch();
  if (auto it = memo_.find(node.id()); it != memo_.end()) return it->second.second;
  std::vector<Bdd> stack{node};
  while (!stack.empty()) {
    const Bdd f = stack.back();
    if (memo_.count(f.id())) {
      stack.pop_back();
      continue;
    }
    const std::size_t lvl = level_cap(f);
    if (lvl >= n_) {
      memo_.emplace(f.id(), std::make_pair(f, leaf_numerator(f)));
      stack.pop_back();
      continue;
    }
    const Bdd lo = f.low(), hi = f.high();
    const auto lo_it = memo_.find(lo.id()), hi_it = memo_.find(hi.id());
    if (lo_it == memo_.end() || hi_it == memo_.end()) {
      if (lo_it == memo_.end()) stack.push_back(lo);
      if (hi_it == memo_.end()) stack.push_back(hi);
      continue;
    }
    Numer p;
    const std::size_t slo = level_cap(lo) - lvl - 1, shi = level_cap(hi) - lvl - 1;
    p.u = shifted(lo_it->second.second.u, slo) + shifted(hi_it->second.second.u, shi);
    p.v = shifted(lo_it->second.second.v, slo) + shifted(hi_it->second.second.v, shi);
    memo_.emplace(f.id(), std::make_pair(f, std::move(p)));
    stack.pop_back();
  }
  return memo_.at(node.id()).second;
}

Hyperfunction::Numer Hyperfunction::mass(const Bdd &node, std::size_t from) {
  const std::size_t lvl = level_cap(node);
  if (lvl < from) throw std::logic_error("Hyperfunction: node above the requested level");
  const Numer &p = prob(node);
  return {shifted(p.u, lvl - from), shifted(p.v, lvl - from)};
}

ExactProb Hyperfunction::to_prob(const Numer &w) const {
  return ExactProb(Rational(w.u), Rational(w.v)).scaled_pow2(-static_cast<long>(k_));
}

ExactProb Hyperfunction::node_probability(const Bdd &node) {
  check_epoch();
  if (node.manager() != mgr_) throw std::invalid_argument("node_probability: node from foreign manager");
  return to_prob(prob(node));
}

ExactProb Hyperfunction::total_probability() {
  check_epoch();
  return to_prob(mass(root_, 0));
}

ExactProb Hyperfunction::joint_probability(const std::vector<bool> &prefix) {
  check_epoch();
  if (prefix.size() > measured_.size()) throw std::invalid_argument("joint_probability: too many outcomes");
  Bdd cur = root_;
  for (std::size_t t = 0; t < prefix.size(); ++t) {
    if (level_cap(cur) > t) continue;
    cur = prefix[t] ? cur.high() : cur.low();
  }
  return to_prob(mass(cur, prefix.size()));
}

std::vector<ExactProb> Hyperfunction::marginals() {
  check_epoch();
  const std::size_t m = measured_.size();
  std::vector<Numer> direct(m), ranged(m + 1);
  auto add_to = [](Numer &dst, const BigInt &u, const BigInt &v) {
    dst.u += u;
    dst.v += v;
  };
  auto add_range = [&](std::size_t from, std::size_t to, const BigInt &u, const BigInt &v) {
    if (from >= to) return;
    add_to(ranged[from], u, v);
    add_to(ranged[to], -u, -v);
  };

  const std::size_t lroot = level_cap(root_);
  if (lroot > 0) {
    const Numer &p = prob(root_);
    add_range(0, std::min(lroot, m), shifted(p.u, lroot - 1), shifted(p.v, lroot - 1));
  }

  // top-down multiplicities over the measured levels
  std::vector<std::vector<Bdd>> by_level(m);
  std::unordered_map<bdd::NodeId, BigInt> up;
  if (lroot < m) {
    by_level[lroot].push_back(root_);
    up[root_.id()] = shifted(BigInt(1), lroot);
  }
  for (std::size_t lvl = 0; lvl < m; ++lvl) {
    for (const Bdd &node : by_level[lvl]) {
      const BigInt mult = up.at(node.id());
      for (int o = 0; o < 2; ++o) {
        const Bdd child = o ? node.high() : node.low();
        if (child.is_zero()) continue;
        const std::size_t lc = level_cap(child);
        const Numer &pc = prob(child);
        const std::size_t skip = lc - lvl - 1;
        if (o == 1) {
          const BigInt w = shifted(mult, skip);
          add_to(direct[lvl], w * pc.u, w * pc.v);
        }
        if (skip > 0) {
          const BigInt half = shifted(mult, skip - 1);
          add_range(lvl + 1, std::min(lc, m), half * pc.u, half * pc.v);
        }
        if (lc < m) {
          auto [it, fresh] = up.try_emplace(child.id(), 0);
          if (fresh) by_level[lc].push_back(child);
          it->second += shifted(mult, skip);
        }
      }
    }
  }

  std::vector<ExactProb> out;
  out.reserve(m);
  Numer running;
  for (std::size_t t = 0; t < m; ++t) {
    running.u += ranged[t].u;
    running.v += ranged[t].v;
    out.push_back(to_prob({direct[t].u + running.u, direct[t].v + running.v}));
  }
  return out;
}

std::vector<Outcome> Hyperfunction::outcomes(std::size_t max_outcomes, bool &truncated) {
  check_epoch();
  truncated = false;
  std::vector<Outcome> out;
  const std::size_t m = measured_.size();
  if (root_.is_zero()) return out;

  struct Frame {
    Bdd node;
    std::size_t t;
    int stage;
  };
  std::string buf(m, '0');
  std::vector<Frame> stack{{root_, 0, 0}};
  while (!stack.empty()) {
    Frame &top = stack.back();
    if (top.t == m) {
      if (out.size() == max_outcomes) {
        truncated = true;
        return out;
      }
      out.push_back({buf, to_prob(mass(top.node, m))});
      stack.pop_back();
      continue;
    }
    if (top.stage == 2) {
      stack.pop_back();
      continue;
    }
    const int o = top.stage++;
    buf[top.t] = o ? '1' : '0';
    Bdd child = level_cap(top.node) > top.t ? top.node : (o ? top.node.high() : top.node.low());
    if (child.is_zero()) continue;
    const std::size_t next_t = top.t + 1;
    stack.push_back({std::move(child), next_t, 0});
  }
  return out;
}

bool Hyperfunction::draw(const Numer &w0, const Numer &w1, std::mt19937_64 &rng) const {
  // U / 2^128 < w0 / (w0 + w1)  ⇔  2^128·w0 − U·(w0 + w1) > 0
  const std::uint64_t hi = rng(), lo = rng();
  BigInt u_rand = shifted(BigInt(static_cast<unsigned long>(hi)), 64) + BigInt(static_cast<unsigned long>(lo));
  const BigInt du = shifted(w0.u, 128) - u_rand * (w0.u + w1.u);
  const BigInt dv = shifted(w0.v, 128) - u_rand * (w0.v + w1.v);
  return sign_zsqrt2(du, dv) <= 0;
}

bool Hyperfunction::measure_next(std::optional<bool> forced, std::mt19937_64 &rng) {
  check_epoch();
  if (next_ >= measured_.size()) throw std::out_of_range("measure_next: no measured qubit left");
  const std::size_t t = next_;
  const bool skip = level_cap(cursor_) > t;
  Bdd c0 = skip ? cursor_ : cursor_.low();
  Bdd c1 = skip ? cursor_ : cursor_.high();
  const Numer w0 = mass(c0, t + 1), w1 = mass(c1, t + 1);
  const bool outcome = forced ? *forced : draw(w0, w1, rng);
  const ExactProb p = record_.s2 * to_prob(outcome ? w1 : w0);
  if (p.is_zero()) throw std::domain_error("measure_next: outcome has probability 0");
  record_.s2 = record_.s2 / p;
  record_.entries.push_back({measured_[t], outcome, p});
  cursor_ = outcome ? std::move(c1) : std::move(c0);
  ++next_;
  return outcome;
}

Bdd Hyperfunction::collapsed_function() {
  Cube cube;
  for (std::size_t t = 0; t < record_.entries.size(); ++t) {
    const VarId v = qubit_vars_[measured_[t]];
    cube.add({v, record_.entries[t].outcome});
  }
  return root_ & mgr_->cube(cube);
}

std::map<std::string, std::size_t> Hyperfunction::sample(std::size_t shots, std::uint64_t seed) {
  check_epoch();
  std::mt19937_64 rng(seed);
  std::map<std::string, std::size_t> hist;
  const std::size_t m = measured_.size();
  struct Split {
    Bdd c0, c1;
    Numer w0, w1;
  };
  std::map<std::pair<bdd::NodeId, std::size_t>, Split> splits;
  auto split_at = [&](const Bdd &node, std::size_t t) -> const Split & {
    auto key = std::make_pair(node.id(), t);
    if (auto it = splits.find(key); it != splits.end()) return it->second;
    const bool skip = level_cap(node) > t;
    Split s{skip ? node : node.low(), skip ? node : node.high(), {}, {}};
    s.w0 = mass(s.c0, t + 1);
    s.w1 = mass(s.c1, t + 1);
    return splits.emplace(key, std::move(s)).first->second;
  };
  std::string bits;
  for (std::size_t shot = 0; shot < shots; ++shot) {
    bits.clear();
    Bdd cur = cursor_;
    for (std::size_t t = next_; t < m; ++t) {
      const Split &s = split_at(cur, t);
      const bool o = draw(s.w0, s.w1, rng);
      bits.push_back(o ? '1' : '0');
      cur = o ? s.c1 : s.c0;
    }
    ++hist[bits];
  }
  return hist;
}

} // namespace qsim
