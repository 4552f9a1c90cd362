#include "qsim/bdd.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <unordered_set>

namespace qsim::bdd {

Cube::Cube(std::initializer_list<Literal> literals) {
  for (const Literal &lit : literals) add(lit);
}

void Cube::add(Literal lit) {
  for (const Literal &present : literals_) {
    if (present.var == lit.var) {
      if (present.phase != lit.phase)
        throw std::invalid_argument("cube contains variable " + std::to_string(lit.var.index) +
                                    " in both phases");
      return;
    }
  }
  literals_.push_back(lit);
}

VarId Bdd::var() const {
  if (!mgr_ || is_constant()) throw std::logic_error("var() of a constant or invalid BDD");
  return VarId{mgr_->nodes_[node_].var};
}

Bdd Bdd::low() const {
  if (!mgr_ || is_constant()) throw std::logic_error("low() of a constant or invalid BDD");
  return {mgr_, mgr_->nodes_[node_].low};
}

Bdd Bdd::high() const {
  if (!mgr_ || is_constant()) throw std::logic_error("high() of a constant or invalid BDD");
  return {mgr_, mgr_->nodes_[node_].high};
}

Manager::Manager(ManagerConfig config) : config_(config), gc_threshold_(config.gc_threshold) {
  nodes_.push_back({kTerminalVar, 0, 0, 1, kNil});
  nodes_.push_back({kTerminalVar, 1, 1, 1, kNil});
  cache_.resize(std::size_t{1} << config_.cache_bits);
}

Manager::~Manager() = default;

VarId Manager::new_var() {
  const auto index = static_cast<std::uint32_t>(var_to_level_.size());
  subtables_.push_back(Subtable{std::vector<NodeId>(kMinBuckets, kNil), 0});
  var_to_level_.push_back(level_to_var_.size());
  level_to_var_.push_back(index);
  return VarId{index};
}

std::size_t Manager::bucket_of(NodeId low, NodeId high, std::size_t mask) noexcept {
  std::uint64_t h = (std::uint64_t{low} * 0x9e3779b97f4a7c15ull) ^ (std::uint64_t{high} * 0xc2b2ae3d27d4eb4full);
  h ^= h >> 29;
  return static_cast<std::size_t>(h) & mask;
}

void Manager::rehash_subtable(Subtable &table, std::size_t size) {
  std::vector<NodeId> buckets(size, kNil);
  const std::size_t mask = buckets.size() - 1;
  for (NodeId head : table.buckets) {
    for (NodeId n = head; n != kNil;) {
      const NodeId next = nodes_[n].next;
      const std::size_t b = bucket_of(nodes_[n].low, nodes_[n].high, mask);
      nodes_[n].next = buckets[b];
      buckets[b] = n;
      n = next;
    }
  }
  table.buckets = std::move(buckets);
}

NodeId Manager::alloc_node() {
  const std::size_t allocated = nodes_.size() - 2 - free_count_;
  if (!in_reorder_) {
    if (allocated >= config_.node_budget)
      throw NodeBudgetExceeded("node budget of " + std::to_string(config_.node_budget) + " exceeded");
    if (deadline_ && (++allocations_ & 0x3fff) == 0 && std::chrono::steady_clock::now() > *deadline_)
      throw TimeLimitExceeded("time limit exceeded");
  }
  NodeId n;
  if (free_list_ != kNil) {
    n = free_list_;
    free_list_ = nodes_[n].next;
    --free_count_;
  } else {
    n = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({});
  }
  peak_ = std::max(peak_, allocated + 1);
  return n;
}

void Manager::link(NodeId n) {
  Subtable &table = subtables_[nodes_[n].var];
  if (table.count >= table.buckets.size()) rehash_subtable(table, table.buckets.size() * 2);
  const std::size_t b = bucket_of(nodes_[n].low, nodes_[n].high, table.buckets.size() - 1);
  nodes_[n].next = table.buckets[b];
  table.buckets[b] = n;
  ++table.count;
}

void Manager::unlink(NodeId n) {
  Subtable &table = subtables_[nodes_[n].var];
  const std::size_t b = bucket_of(nodes_[n].low, nodes_[n].high, table.buckets.size() - 1);
  NodeId *slot = &table.buckets[b];
  while (*slot != n) {
    assert(*slot != kNil);
    slot = &nodes_[*slot].next;
  }
  *slot = nodes_[n].next;
  --table.count;
}

void Manager::free_node(NodeId n) {
  assert(nodes_[n].ref == 0);
  unlink(n);
  nodes_[n].var = kFreeVar;
  nodes_[n].next = free_list_;
  free_list_ = n;
  ++free_count_;
  --dead_;
}

NodeId Manager::mk(std::uint32_t var, NodeId low, NodeId high) {
  if (low == high) return low;
  Subtable &table = subtables_[var];
  const std::size_t b = bucket_of(low, high, table.buckets.size() - 1);
  for (NodeId n = table.buckets[b]; n != kNil; n = nodes_[n].next) {
    if (nodes_[n].low == low && nodes_[n].high == high) return n;
  }
  const NodeId n = alloc_node();
  nodes_[n] = Node{var, low, high, 0, kNil};
  ++dead_;
  link(n);
  inc_ref(low);
  inc_ref(high);
  return n;
}

// ---------------------------------------------------------------------------
// Operation cache

std::size_t Manager::cache_slot(Op op, NodeId f, NodeId g, NodeId h) const noexcept {
  std::uint64_t x = static_cast<std::uint64_t>(op) * 0x9e3779b97f4a7c15ull;
  x ^= std::uint64_t{f} * 0xbf58476d1ce4e5b9ull;
  x ^= std::uint64_t{g} * 0x94d049bb133111ebull;
  x ^= std::uint64_t{h} * 0xd6e8feb86659fd93ull;
  x ^= x >> 31;
  return static_cast<std::size_t>(x) & (cache_.size() - 1);
}

bool Manager::cache_lookup(Op op, NodeId f, NodeId g, NodeId h, NodeId &result) {
  ++counters_.cache_lookups;
  const CacheEntry &e = cache_[cache_slot(op, f, g, h)];
  if (e.op == op && e.f == f && e.g == g && e.h == h) {
    ++counters_.cache_hits;
    result = e.result;
    return true;
  }
  return false;
}

void Manager::cache_insert(Op op, NodeId f, NodeId g, NodeId h, NodeId result) {
  cache_[cache_slot(op, f, g, h)] = CacheEntry{op, f, g, h, result};
}

void Manager::cache_clear() { std::fill(cache_.begin(), cache_.end(), CacheEntry{}); }

// ---------------------------------------------------------------------------
// Recursive operations. Raw node ids are only valid until the next GC, which
// never happens inside these functions.

NodeId Manager::apply_rec(Op op, NodeId f, NodeId g) {
  switch (op) {
  case Op::And:
    if (f == 0 || g == 0) return 0;
    if (f == 1 || f == g) return g;
    if (g == 1) return f;
    break;
  case Op::Or:
    if (f == 1 || g == 1) return 1;
    if (f == 0 || f == g) return g;
    if (g == 0) return f;
    break;
  case Op::Xor:
    if (f == g) return 0;
    if (f == 0) return g;
    if (g == 0) return f;
    if (f == 1) return not_rec(g);
    if (g == 1) return not_rec(f);
    break;
  default:
    assert(false);
  }
  if (f > g) std::swap(f, g);

  NodeId result;
  if (cache_lookup(op, f, g, 0, result)) return result;

  const std::size_t lf = level(f), lg = level(g);
  const std::size_t top = std::min(lf, lg);
  const std::uint32_t var = level_to_var_[top];
  const NodeId f0 = lf == top ? nodes_[f].low : f, f1 = lf == top ? nodes_[f].high : f;
  const NodeId g0 = lg == top ? nodes_[g].low : g, g1 = lg == top ? nodes_[g].high : g;

  const NodeId r0 = apply_rec(op, f0, g0);
  const NodeId r1 = apply_rec(op, f1, g1);
  result = mk(var, r0, r1);
  cache_insert(op, f, g, 0, result);
  return result;
}

NodeId Manager::not_rec(NodeId f) {
  if (f < 2) return f ^ 1;
  NodeId result;
  if (cache_lookup(Op::Not, f, 0, 0, result)) return result;
  const std::uint32_t var = nodes_[f].var;
  const NodeId low = nodes_[f].low, high = nodes_[f].high;
  const NodeId r0 = not_rec(low);
  const NodeId r1 = not_rec(high);
  result = mk(var, r0, r1);
  cache_insert(Op::Not, f, 0, 0, result);
  return result;
}

NodeId Manager::ite_rec(NodeId f, NodeId g, NodeId h) {
  if (f == 1) return g;
  if (f == 0) return h;
  if (g == h) return g;
  if (f == g) g = 1;
  if (f == h) h = 0;
  if (g == 1 && h == 0) return f;
  if (g == 0 && h == 1) return not_rec(f);
  if (g == 1) return apply_rec(Op::Or, f, h);
  if (h == 0) return apply_rec(Op::And, f, g);

  NodeId result;
  if (cache_lookup(Op::Ite, f, g, h, result)) return result;

  const std::size_t lf = level(f), lg = level(g), lh = level(h);
  const std::size_t top = std::min({lf, lg, lh});
  const std::uint32_t var = level_to_var_[top];
  auto cof = [&](NodeId n, std::size_t ln, bool high) {
    return ln == top ? (high ? nodes_[n].high : nodes_[n].low) : n;
  };
  const NodeId f0 = cof(f, lf, false), f1 = cof(f, lf, true);
  const NodeId g0 = cof(g, lg, false), g1 = cof(g, lg, true);
  const NodeId h0 = cof(h, lh, false), h1 = cof(h, lh, true);

  const NodeId r0 = ite_rec(f0, g0, h0);
  const NodeId r1 = ite_rec(f1, g1, h1);
  result = mk(var, r0, r1);
  cache_insert(Op::Ite, f, g, h, result);
  return result;
}

NodeId Manager::cofactor_rec(NodeId f, NodeId cube) {
  if (f < 2) return f;
  const std::size_t lf = level(f);
  // Literals above f's top variable do not affect it.
  while (cube >= 2 && level(cube) < lf)
    cube = nodes_[cube].low == 0 ? nodes_[cube].high : nodes_[cube].low;
  if (cube == 1) return f;

  NodeId result;
  if (cache_lookup(Op::Cofactor, f, cube, 0, result)) return result;

  const std::uint32_t var = nodes_[f].var;
  const NodeId low = nodes_[f].low, high = nodes_[f].high;
  if (level(cube) == lf) {
    const bool phase = nodes_[cube].low == 0;
    const NodeId rest = phase ? nodes_[cube].high : nodes_[cube].low;
    result = cofactor_rec(phase ? high : low, rest);
  } else {
    const NodeId r0 = cofactor_rec(low, cube);
    const NodeId r1 = cofactor_rec(high, cube);
    result = mk(var, r0, r1);
  }
  cache_insert(Op::Cofactor, f, cube, 0, result);
  return result;
}

// ---------------------------------------------------------------------------
// Public operations

void Manager::maybe_gc() {
  const std::size_t allocated = nodes_.size() - 2 - free_count_;
  const bool near_budget = allocated > config_.node_budget - config_.node_budget / 8;
  // Only the roots of dead subgraphs are counted in dead_, so collect
  // whenever the threshold is passed; gc() then resets it to twice the
  // surviving node count.
  if ((allocated > gc_threshold_ || near_budget) && dead_ > 0) gc();
  if (cache_.size() < allocated && cache_.size() < (std::size_t{1} << 22)) {
    cache_.assign(cache_.size() * 2, CacheEntry{});
  }
}

template <class Fn> Bdd Manager::run_op(Fn &&fn) {
  maybe_gc();
  try {
    return Bdd(this, fn());
  } catch (const NodeBudgetExceeded &) {
    if (dead_ == 0) throw;
    gc();
    return Bdd(this, fn());
  }
}

void Manager::check_owner(const Bdd &f) const {
  if (f.mgr_ != this) throw std::invalid_argument("BDD handle belongs to a different manager");
}

Bdd Manager::var(VarId v) { return literal(Literal{v, true}); }

Bdd Manager::literal(Literal lit) {
  if (lit.var.index >= var_count())
    throw std::out_of_range("unknown variable " + std::to_string(lit.var.index));
  return run_op([&] { return lit.phase ? mk(lit.var.index, 0, 1) : mk(lit.var.index, 1, 0); });
}

Bdd Manager::cube(const Cube &cube) {
  std::vector<Literal> lits(cube.literals().begin(), cube.literals().end());
  for (const Literal &lit : lits) {
    if (lit.var.index >= var_count())
      throw std::out_of_range("unknown variable " + std::to_string(lit.var.index));
  }
  std::sort(lits.begin(), lits.end(), [&](const Literal &a, const Literal &b) {
    return var_to_level_[a.var.index] > var_to_level_[b.var.index];
  });
  return run_op([&] {
    NodeId r = 1;
    for (const Literal &lit : lits) r = lit.phase ? mk(lit.var.index, 0, r) : mk(lit.var.index, r, 0);
    return r;
  });
}

Bdd Manager::apply(BinaryOp op, const Bdd &f, const Bdd &g) {
  check_owner(f);
  check_owner(g);
  const Op internal = op == BinaryOp::And ? Op::And : op == BinaryOp::Or ? Op::Or : Op::Xor;
  return run_op([&] { return apply_rec(internal, f.node_, g.node_); });
}

Bdd Manager::negate(const Bdd &f) {
  check_owner(f);
  return run_op([&] { return not_rec(f.node_); });
}

Bdd Manager::ite(const Bdd &f, const Bdd &g, const Bdd &h) {
  check_owner(f);
  check_owner(g);
  check_owner(h);
  return run_op([&] { return ite_rec(f.node_, g.node_, h.node_); });
}

Bdd Manager::cofactor(const Bdd &f, const Cube &c) {
  check_owner(f);
  if (c.empty()) return f;
  const Bdd cube_bdd = cube(c);
  return run_op([&] { return cofactor_rec(f.node_, cube_bdd.node_); });
}

Bdd Manager::cofactor(const Bdd &f, const Bdd &c) {
  check_owner(f);
  if (!is_cube(c)) throw std::invalid_argument("cofactor: argument is not a cube");
  return run_op([&] { return cofactor_rec(f.node_, c.node_); });
}

bool Manager::is_cube(const Bdd &f) const {
  check_owner(f);
  NodeId n = f.node_;
  if (n == 0) return false;
  while (n >= 2) {
    const Node &node = nodes_[n];
    if (node.low == 0) n = node.high;
    else if (node.high == 0) n = node.low;
    else return false;
  }
  return true;
}

bool Manager::eval(const Bdd &f, const std::vector<bool> &assignment) const {
  check_owner(f);
  NodeId n = f.node_;
  while (n >= 2) {
    const std::uint32_t var = nodes_[n].var;
    if (var >= assignment.size())
      throw std::invalid_argument("assignment does not cover variable " + std::to_string(var));
    n = assignment[var] ? nodes_[n].high : nodes_[n].low;
  }
  return n == 1;
}

std::size_t Manager::level_of(VarId v) const {
  if (v.index >= var_count()) throw std::out_of_range("unknown variable " + std::to_string(v.index));
  return var_to_level_[v.index];
}

VarId Manager::var_at_level(std::size_t level) const {
  if (level >= var_count()) throw std::out_of_range("level out of range");
  return VarId{level_to_var_[level]};
}

std::vector<VarId> Manager::order() const {
  std::vector<VarId> out;
  out.reserve(level_to_var_.size());
  for (std::uint32_t v : level_to_var_) out.push_back(VarId{v});
  return out;
}

std::size_t Manager::gc() {
  std::vector<NodeId> stack;
  for (NodeId n = 2; n < nodes_.size(); ++n) {
    if (nodes_[n].var != kFreeVar && nodes_[n].ref == 0) stack.push_back(n);
  }
  std::size_t reclaimed = 0;
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    const NodeId low = nodes_[n].low, high = nodes_[n].high;
    free_node(n);
    ++reclaimed;
    for (NodeId child : {low, high}) {
      if (child < 2) continue;
      dec_ref(child);
      if (nodes_[child].ref == 0) stack.push_back(child);
    }
  }
  // bucket arrays sized for a transient peak make later level scans slow
  for (Subtable &table : subtables_) {
    if (table.buckets.size() > kMinBuckets && table.count * 4 < table.buckets.size())
      rehash_subtable(table, std::max(kMinBuckets, std::bit_ceil(table.count)));
  }
  cache_clear();
  ++counters_.gc_runs;
  gc_threshold_ = std::max(config_.gc_threshold, 2 * (nodes_.size() - 2 - free_count_));
  return reclaimed;
}

std::size_t Manager::node_count(const Bdd &f) const { return node_count(std::span<const Bdd>(&f, 1)); }

std::size_t Manager::node_count(std::span<const Bdd> roots) const {
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack;
  for (const Bdd &f : roots) {
    check_owner(f);
    stack.push_back(f.node_);
  }
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (n < 2 || !seen.insert(n).second) continue;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return seen.size();
}

Stats Manager::stats() const noexcept {
  Stats s = counters_;
  s.allocated = nodes_.size() - 2 - free_count_;
  s.live = s.allocated - dead_;
  s.peak = peak_;
  return s;
}

bool Manager::check_invariants() const {
  std::vector<std::uint32_t> parents(nodes_.size(), 0);
  std::vector<std::size_t> per_var(var_count(), 0);
  for (NodeId n = 2; n < nodes_.size(); ++n) {
    const Node &node = nodes_[n];
    if (node.var == kFreeVar) continue;
    if (node.var >= var_count()) return false;
    if (node.low == node.high) return false;
    if (level(node.low) <= level(n) || level(node.high) <= level(n)) return false;
    ++parents[node.low];
    ++parents[node.high];
    ++per_var[node.var];
  }
  std::size_t dead = 0;
  for (NodeId n = 2; n < nodes_.size(); ++n) {
    if (nodes_[n].var == kFreeVar) continue;
    if (nodes_[n].ref < parents[n]) return false;
    if (nodes_[n].ref == 0) ++dead;
  }
  if (dead != dead_) return false;
  for (std::uint32_t v = 0; v < var_count(); ++v) {
    const Subtable &table = subtables_[v];
    if (table.count != per_var[v]) return false;
    std::unordered_set<std::uint64_t> keys;
    std::size_t chained = 0;
    for (NodeId head : table.buckets) {
      for (NodeId n = head; n != kNil; n = nodes_[n].next) {
        if (nodes_[n].var != v) return false;
        if (!keys.insert((std::uint64_t{nodes_[n].low} << 32) | nodes_[n].high).second) return false;
        ++chained;
      }
    }
    if (chained != table.count) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reordering. Requires a store without dead nodes, so each entry point runs a
// GC first; nodes that die during a swap are reclaimed immediately.

void Manager::swap_adjacent(std::size_t lvl) {
  const std::uint32_t x = level_to_var_[lvl];
  const std::uint32_t y = level_to_var_[lvl + 1];

  std::vector<NodeId> moved;
  for (NodeId head : subtables_[x].buckets) {
    for (NodeId n = head; n != kNil; n = nodes_[n].next) {
      const NodeId f0 = nodes_[n].low, f1 = nodes_[n].high;
      if ((f0 >= 2 && nodes_[f0].var == y) || (f1 >= 2 && nodes_[f1].var == y)) moved.push_back(n);
    }
  }
  for (NodeId u : moved) unlink(u);

  for (NodeId u : moved) {
    const NodeId f0 = nodes_[u].low, f1 = nodes_[u].high;
    const bool f0y = f0 >= 2 && nodes_[f0].var == y;
    const bool f1y = f1 >= 2 && nodes_[f1].var == y;
    const NodeId f00 = f0y ? nodes_[f0].low : f0, f01 = f0y ? nodes_[f0].high : f0;
    const NodeId f10 = f1y ? nodes_[f1].low : f1, f11 = f1y ? nodes_[f1].high : f1;

    const NodeId new_low = mk(x, f00, f10);
    inc_ref(new_low);
    const NodeId new_high = mk(x, f01, f11);
    inc_ref(new_high);

    nodes_[u].var = y;
    nodes_[u].low = new_low;
    nodes_[u].high = new_high;
    link(u);
    dec_ref(f0);
    dec_ref(f1);
  }

  // Former y nodes only referenced by rewritten x nodes are now dead.
  std::vector<NodeId> dead;
  for (NodeId head : subtables_[y].buckets) {
    for (NodeId n = head; n != kNil; n = nodes_[n].next) {
      if (nodes_[n].ref == 0) dead.push_back(n);
    }
  }
  while (!dead.empty()) {
    const NodeId n = dead.back();
    dead.pop_back();
    const NodeId low = nodes_[n].low, high = nodes_[n].high;
    free_node(n);
    for (NodeId child : {low, high}) {
      if (child < 2) continue;
      dec_ref(child);
      if (nodes_[child].ref == 0) dead.push_back(child);
    }
  }

  level_to_var_[lvl] = y;
  level_to_var_[lvl + 1] = x;
  var_to_level_[y] = lvl;
  var_to_level_[x] = lvl + 1;
}

void Manager::move_to_level(std::uint32_t var, std::size_t target) {
  while (var_to_level_[var] > target) swap_adjacent(var_to_level_[var] - 1);
  while (var_to_level_[var] < target) swap_adjacent(var_to_level_[var]);
}

void Manager::set_order(std::span<const VarId> order) {
  const std::size_t n = var_count();
  if (order.size() != n) throw std::invalid_argument("order must list every variable exactly once");
  std::vector<bool> seen(n, false);
  for (VarId v : order) {
    if (v.index >= n || seen[v.index]) throw std::invalid_argument("order is not a permutation");
    seen[v.index] = true;
  }
  bool changed = false;
  for (std::size_t t = 0; t < n; ++t) changed |= var_to_level_[order[t].index] != t;
  if (!changed) return;

  gc();
  in_reorder_ = true;
  for (std::size_t t = 0; t < n; ++t) move_to_level(order[t].index, t);
  in_reorder_ = false;
  cache_clear();
  ++reorder_epoch_;
  ++counters_.reorder_runs;
}

void Manager::sift_variable(std::uint32_t var, std::size_t &swaps_left) {
  constexpr double kMaxGrowth = 1.2;
  const std::size_t n = var_count();
  auto size = [&] { return nodes_.size() - 2 - free_count_; };
  std::size_t best_size = size();
  std::size_t best_level = var_to_level_[var];

  auto track = [&] {
    if (size() < best_size) {
      best_size = size();
      best_level = var_to_level_[var];
    }
  };
  auto go_down = [&] {
    while (var_to_level_[var] + 1 < n && swaps_left > 0) {
      swap_adjacent(var_to_level_[var]);
      --swaps_left;
      track();
      if (double(size()) > kMaxGrowth * double(best_size)) break;
    }
  };
  auto go_up = [&] {
    while (var_to_level_[var] > 0 && swaps_left > 0) {
      swap_adjacent(var_to_level_[var] - 1);
      --swaps_left;
      track();
      if (double(size()) > kMaxGrowth * double(best_size)) break;
    }
  };

  if (var_to_level_[var] * 2 >= n) {
    go_down();
    go_up();
  } else {
    go_up();
    go_down();
  }
  move_to_level(var, best_level);
}

void Manager::sift_reorder() {
  constexpr std::size_t kMaxSiftedVars = 1000;
  constexpr std::size_t kMaxSwaps = 500000;

  gc();
  std::vector<std::uint32_t> vars(var_count());
  std::iota(vars.begin(), vars.end(), 0u);
  std::stable_sort(vars.begin(), vars.end(), [&](std::uint32_t a, std::uint32_t b) {
    return subtables_[a].count > subtables_[b].count;
  });
  if (vars.size() > kMaxSiftedVars) vars.resize(kMaxSiftedVars);

  in_reorder_ = true;
  std::size_t swaps_left = kMaxSwaps;
  for (std::uint32_t v : vars) {
    if (subtables_[v].count == 0 || swaps_left == 0) continue;
    sift_variable(v, swaps_left);
  }
  in_reorder_ = false;
  cache_clear();
  ++reorder_epoch_;
  ++counters_.reorder_runs;
  nodes_at_last_reorder_ = nodes_.size() - 2 - free_count_;
}

void Manager::checkpoint() {
  maybe_gc();
  if (!config_.auto_reorder) return;
  const std::size_t trigger = 2 * std::max<std::size_t>(nodes_at_last_reorder_, 4096);
  if (nodes_.size() - 2 - free_count_ - dead_ <= trigger) return;
  // children of dead nodes still look referenced; collect before deciding
  if (dead_ > 0) gc();
  if (nodes_.size() - 2 - free_count_ > trigger) sift_reorder();
}

} // namespace qsim::bdd
