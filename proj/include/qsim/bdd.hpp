/// @file  bdd.hpp
/// @brief Reduced ordered binary decision diagrams (plain edges, no complement)

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsim::bdd {

/// Variable identifier. Stable across reordering; its *level* is not.
struct VarId {
  std::uint32_t index = 0;

  friend constexpr bool operator==(VarId, VarId) = default;
  friend constexpr auto operator<=>(VarId, VarId) = default;
};

struct Literal {
  VarId var;
  bool phase = true;  ///< true: positive literal `v`, false: `¬v`
};

/// Conjunction of literals over distinct variables.
class Cube {
public:
  Cube() = default;
  Cube(std::initializer_list<Literal> literals);

  /// Adds a literal. Re-adding the same literal is a no-op; adding the
  /// opposite phase of a present variable throws std::invalid_argument.
  void add(Literal lit);

  [[nodiscard]] std::span<const Literal> literals() const noexcept { return literals_; }
  [[nodiscard]] bool empty() const noexcept { return literals_.empty(); }

private:
  std::vector<Literal> literals_;
};

class BddError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Live node count would exceed the configured budget (memory-out analog).
class NodeBudgetExceeded : public BddError {
public:
  using BddError::BddError;
};

/// The manager's deadline passed during an operation (timeout analog).
class TimeLimitExceeded : public BddError {
public:
  using BddError::BddError;
};

using NodeId = std::uint32_t;

struct ManagerConfig {
  std::size_t node_budget = std::size_t{1} << 26;
  /// log2 of the initial operation-cache size
  unsigned cache_bits = 16;
  /// GC is considered at operation entry once this many nodes are allocated
  std::size_t gc_threshold = std::size_t{1} << 20;
  /// Sifting is triggered at checkpoints when the node count doubled
  bool auto_reorder = false;
};

struct Stats {
  std::size_t allocated = 0;  ///< nodes in the store, including dead ones
  std::size_t live = 0;       ///< allocated minus unreferenced nodes
  std::size_t peak = 0;       ///< maximum of `allocated` ever reached
  std::uint64_t cache_lookups = 0;
  std::uint64_t cache_hits = 0;
  std::size_t gc_runs = 0;
  std::size_t reorder_runs = 0;

  [[nodiscard]] double cache_hit_rate() const noexcept {
    return cache_lookups == 0 ? 0.0 : double(cache_hits) / double(cache_lookups);
  }
};

enum class BinaryOp : std::uint8_t { And, Or, Xor };

class Manager;

/// Reference-counted handle to a node of one Manager.
///
/// Two handles from the same manager compare equal iff they denote the same
/// Boolean function. A handle must not outlive its manager.
class Bdd {
public:
  Bdd() noexcept = default;
  Bdd(const Bdd &other) noexcept;
  Bdd(Bdd &&other) noexcept : mgr_(other.mgr_), node_(other.node_) { other.mgr_ = nullptr; }
  Bdd &operator=(const Bdd &rhs) noexcept;
  Bdd &operator=(Bdd &&rhs) noexcept;
  ~Bdd();

  [[nodiscard]] bool is_valid() const noexcept { return mgr_ != nullptr; }
  [[nodiscard]] bool is_zero() const noexcept { return node_ == 0; }
  [[nodiscard]] bool is_one() const noexcept { return node_ == 1; }
  [[nodiscard]] bool is_constant() const noexcept { return node_ < 2; }
  [[nodiscard]] NodeId id() const noexcept { return node_; }
  [[nodiscard]] Manager *manager() const noexcept { return mgr_; }

  /// Top variable; requires a non-constant function.
  [[nodiscard]] VarId var() const;
  /// Else/then children; requires a non-constant function.
  [[nodiscard]] Bdd low() const;
  [[nodiscard]] Bdd high() const;

  Bdd operator~() const;
  Bdd operator&(const Bdd &rhs) const;
  Bdd operator|(const Bdd &rhs) const;
  Bdd operator^(const Bdd &rhs) const;
  Bdd &operator&=(const Bdd &rhs) { return *this = *this & rhs; }
  Bdd &operator|=(const Bdd &rhs) { return *this = *this | rhs; }
  Bdd &operator^=(const Bdd &rhs) { return *this = *this ^ rhs; }

  friend bool operator==(const Bdd &lhs, const Bdd &rhs) noexcept {
    return lhs.mgr_ == rhs.mgr_ && lhs.node_ == rhs.node_;
  }

private:
  friend class Manager;
  Bdd(Manager *mgr, NodeId node) noexcept;  // takes a new reference

  Manager *mgr_ = nullptr;
  NodeId node_ = 0;
};

/// Owns a BDD forest: node store, per-variable unique tables, operation cache.
///
/// Single-threaded. Garbage collection only runs at the entry of public
/// operations (or on explicit `gc()`), so results held in `Bdd` handles are
/// always safe.
class Manager {
public:
  explicit Manager(ManagerConfig config = {});
  Manager(const Manager &) = delete;
  Manager &operator=(const Manager &) = delete;
  ~Manager();

  /// Registers a fresh variable at the bottom of the order.
  VarId new_var();
  [[nodiscard]] std::size_t var_count() const noexcept { return var_to_level_.size(); }

  [[nodiscard]] Bdd zero() { return {this, 0}; }
  [[nodiscard]] Bdd one() { return {this, 1}; }
  [[nodiscard]] Bdd constant(bool value) { return {this, value ? NodeId{1} : NodeId{0}}; }
  /// The function that is 1 iff `v` is 1. Throws std::out_of_range for an unknown variable.
  Bdd var(VarId v);
  Bdd literal(Literal lit);
  /// Conjunction of the literals of `cube`.
  Bdd cube(const Cube &cube);

  Bdd apply(BinaryOp op, const Bdd &f, const Bdd &g);
  Bdd negate(const Bdd &f);
  Bdd ite(const Bdd &f, const Bdd &g, const Bdd &h);
  /// f with every cube variable substituted by its phase.
  Bdd cofactor(const Bdd &f, const Cube &cube);
  /// Same, with the cube already built (e.g. by `cube()`). Throws
  /// std::invalid_argument if `cube` is not a conjunction of literals.
  Bdd cofactor(const Bdd &f, const Bdd &cube);
  [[nodiscard]] bool is_cube(const Bdd &f) const;

  /// Truth value under `assignment`, indexed by VarId::index. Throws
  /// std::invalid_argument if a variable on the evaluated path is not covered.
  [[nodiscard]] bool eval(const Bdd &f, const std::vector<bool> &assignment) const;

  [[nodiscard]] std::size_t level_of(VarId v) const;
  [[nodiscard]] VarId var_at_level(std::size_t level) const;
  [[nodiscard]] std::vector<VarId> order() const;
  /// Level of the node's top variable; constants sit below every variable.
  [[nodiscard]] std::size_t node_level(const Bdd &f) const noexcept { return level(f.node_); }

  /// Reorders so that `order[i]` is at level i. `order` must be a permutation
  /// of all registered variables. Every handle keeps denoting its function.
  void set_order(std::span<const VarId> order);
  /// One pass of Rudell-style sifting over all variables.
  void sift_reorder();
  /// Safe point between client steps: runs sifting when auto reordering is on
  /// and the node count doubled since the last reorder.
  void checkpoint();
  void set_auto_reorder(bool on) noexcept { config_.auto_reorder = on; }
  [[nodiscard]] bool auto_reorder() const noexcept { return config_.auto_reorder; }
  /// Incremented by every reordering; lets clients invalidate level-based caches.
  [[nodiscard]] std::uint64_t reorder_epoch() const noexcept { return reorder_epoch_; }

  /// Reclaims every node no longer reachable from a live handle.
  std::size_t gc();

  /// Internal nodes in the shared DAG of the given functions.
  [[nodiscard]] std::size_t node_count(const Bdd &f) const;
  [[nodiscard]] std::size_t node_count(std::span<const Bdd> roots) const;

  [[nodiscard]] Stats stats() const noexcept;
  [[nodiscard]] std::size_t node_budget() const noexcept { return config_.node_budget; }
  void set_node_budget(std::size_t budget) noexcept { config_.node_budget = budget; }
  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) noexcept {
    deadline_ = deadline;
  }

  /// Reduced-ness and uniqueness audit of the whole store (tests only; O(store)).
  [[nodiscard]] bool check_invariants() const;

private:
  friend class Bdd;

  static constexpr std::uint32_t kTerminalVar = 0xffffffffu;
  static constexpr std::uint32_t kFreeVar = 0xfffffffeu;
  static constexpr std::uint32_t kNil = 0xffffffffu;

  struct Node {
    std::uint32_t var;
    NodeId low;
    NodeId high;
    std::uint32_t ref;
    NodeId next;  // unique-table chain, or free list
  };

  static constexpr std::size_t kMinBuckets = 8;
  struct Subtable {
    std::vector<NodeId> buckets;
    std::size_t count = 0;
  };

  enum class Op : std::uint32_t { None = 0, And, Or, Xor, Not, Ite, Cofactor };

  struct CacheEntry {
    Op op = Op::None;
    NodeId f = 0, g = 0, h = 0;
    NodeId result = 0;
  };

  void inc_ref(NodeId n) noexcept {
    if (n < 2) return;
    if (nodes_[n].ref++ == 0) --dead_;
  }
  void dec_ref(NodeId n) noexcept {
    if (n < 2) return;
    if (--nodes_[n].ref == 0) ++dead_;
  }

  [[nodiscard]] std::size_t level(NodeId n) const noexcept {
    return n < 2 ? terminal_level() : var_to_level_[nodes_[n].var];
  }
  [[nodiscard]] static std::size_t terminal_level() noexcept { return ~std::size_t{0}; }

  NodeId mk(std::uint32_t var, NodeId low, NodeId high);
  NodeId alloc_node();
  void free_node(NodeId n);
  void link(NodeId n);
  void unlink(NodeId n);
  void rehash_subtable(Subtable &table, std::size_t size);
  [[nodiscard]] static std::size_t bucket_of(NodeId low, NodeId high, std::size_t mask) noexcept;

  NodeId apply_rec(Op op, NodeId f, NodeId g);
  NodeId not_rec(NodeId f);
  NodeId ite_rec(NodeId f, NodeId g, NodeId h);
  NodeId cofactor_rec(NodeId f, NodeId cube);

  [[nodiscard]] bool cache_lookup(Op op, NodeId f, NodeId g, NodeId h, NodeId &result);
  void cache_insert(Op op, NodeId f, NodeId g, NodeId h, NodeId result);
  void cache_clear();
  [[nodiscard]] std::size_t cache_slot(Op op, NodeId f, NodeId g, NodeId h) const noexcept;

  /// Runs a recursive operation at a safe point, retrying once after GC
  /// when the node budget is hit.
  template <class Fn> Bdd run_op(Fn &&fn);
  void maybe_gc();
  void check_owner(const Bdd &f) const;

  void swap_adjacent(std::size_t level);
  void sift_variable(std::uint32_t var, std::size_t &swaps_left);
  void move_to_level(std::uint32_t var, std::size_t target);

  ManagerConfig config_;
  std::vector<Node> nodes_;
  std::vector<Subtable> subtables_;  // indexed by variable
  std::vector<std::size_t> var_to_level_;
  std::vector<std::uint32_t> level_to_var_;
  std::vector<CacheEntry> cache_;
  NodeId free_list_ = kNil;
  std::size_t free_count_ = 0;
  std::size_t dead_ = 0;
  std::size_t peak_ = 0;
  std::size_t gc_threshold_;
  std::size_t nodes_at_last_reorder_ = 0;
  std::uint64_t reorder_epoch_ = 0;
  std::uint64_t allocations_ = 0;
  bool in_reorder_ = false;  // swaps may not fail halfway
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  mutable Stats counters_;
};

inline Bdd::Bdd(Manager *mgr, NodeId node) noexcept : mgr_(mgr), node_(node) { mgr_->inc_ref(node_); }

inline Bdd::Bdd(const Bdd &other) noexcept : mgr_(other.mgr_), node_(other.node_) {
  if (mgr_) mgr_->inc_ref(node_);
}

inline Bdd &Bdd::operator=(const Bdd &rhs) noexcept {
  if (rhs.mgr_) rhs.mgr_->inc_ref(rhs.node_);
  if (mgr_) mgr_->dec_ref(node_);
  mgr_ = rhs.mgr_;
  node_ = rhs.node_;
  return *this;
}

inline Bdd &Bdd::operator=(Bdd &&rhs) noexcept {
  if (this != &rhs) {
    if (mgr_) mgr_->dec_ref(node_);
    mgr_ = std::exchange(rhs.mgr_, nullptr);
    node_ = rhs.node_;
  }
  return *this;
}

inline Bdd::~Bdd() {
  if (mgr_) mgr_->dec_ref(node_);
}

inline Bdd Bdd::operator~() const { return mgr_->negate(*this); }
inline Bdd Bdd::operator&(const Bdd &rhs) const { return mgr_->apply(BinaryOp::And, *this, rhs); }
inline Bdd Bdd::operator|(const Bdd &rhs) const { return mgr_->apply(BinaryOp::Or, *this, rhs); }
inline Bdd Bdd::operator^(const Bdd &rhs) const { return mgr_->apply(BinaryOp::Xor, *this, rhs); }

} // namespace qsim::bdd
