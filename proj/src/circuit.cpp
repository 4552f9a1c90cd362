#include "qsim/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <unordered_set>
#include <vector>

namespace qsim {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column), message_(message) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

class Parser {
public:
  Circuit run(std::string_view text) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line_;
      handle_line(tokenize(text.substr(pos, end - pos)));
      pos = end + 1;
    }
    if (!have_qubits_) throw ParseError(1, 1, "missing .qubits directive");
    return std::move(c_);
  }

private:
  [[noreturn]] void fail(const Token &tok, const std::string &msg) const { throw ParseError(line_, tok.column, msg); }

  std::size_t number(const Token &tok) const {
    std::size_t value = 0;
    const char *first = tok.text.data(), *last = first + tok.text.size();
    if (tok.text.empty() || tok.text[0] < '0' || tok.text[0] > '9') fail(tok, "expected a non-negative integer");
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) fail(tok, "number out of range");
    if (ec != std::errc() || ptr != last) fail(tok, "expected a non-negative integer, got '" + std::string(tok.text) + "'");
    return value;
  }

  std::size_t qubit(const Token &tok) const {
    const std::size_t q = number(tok);
    if (q >= c_.qubits) fail(tok, "qubit index " + std::to_string(q) + " out of range");
    return q;
  }

  void handle_line(const std::vector<Token> &toks) {
    if (toks.empty()) return;
    const Token &head = toks[0];
    if (after_measure_) fail(head, ".measure must be the last statement");
    if (head.text.front() == '.') {
      directive(toks);
      return;
    }
    if (!have_qubits_) fail(head, "missing .qubits directive before first gate");
    gate(toks);
  }

  void directive(const std::vector<Token> &toks) {
    const Token &head = toks[0];
    if (head.text == ".qubits") {
      if (have_qubits_) fail(head, "duplicate .qubits directive");
      if (toks.size() != 2) fail(head, ".qubits takes exactly one argument");
      const std::size_t n = number(toks[1]);
      if (n == 0) fail(toks[1], "qubit count must be at least 1");
      if (n > kMaxQubits) fail(toks[1], "qubit count too large");
      c_.qubits = n;
      have_qubits_ = true;
      return;
    }
    if (!have_qubits_) fail(head, "missing .qubits directive before " + std::string(head.text));
    if (head.text == ".init") {
      if (c_.init) fail(head, "duplicate .init directive");
      if (!c_.gates.empty()) fail(head, ".init must precede all gates");
      if (toks.size() != 2) fail(head, ".init takes exactly one bitstring");
      const Token &bits = toks[1];
      if (bits.text.size() != c_.qubits)
        fail(bits, ".init bitstring has length " + std::to_string(bits.text.size()) + ", expected " +
                       std::to_string(c_.qubits));
      for (std::size_t i = 0; i < bits.text.size(); ++i)
        if (bits.text[i] != '0' && bits.text[i] != '1')
          throw ParseError(line_, bits.column + i, ".init bitstring may only contain 0 and 1");
      c_.init = std::string(bits.text);
      return;
    }
    if (head.text == ".measure") {
      if (toks.size() < 2) fail(head, ".measure needs at least one qubit");
      std::unordered_set<std::size_t> seen;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const std::size_t q = qubit(toks[i]);
        if (!seen.insert(q).second) fail(toks[i], "qubit " + std::to_string(q) + " measured twice");
        c_.measure.push_back(q);
      }
      after_measure_ = true;
      return;
    }
    fail(head, "unknown directive '" + std::string(head.text) + "'");
  }

  void gate(const std::vector<Token> &toks) {
    const Token &head = toks[0];
    const auto kind = gate_from_mnemonic(head.text);
    if (!kind) fail(head, "unknown gate '" + std::string(head.text) + "'");
    const std::size_t argc = toks.size() - 1;
    std::vector<std::size_t> ops;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      const std::size_t q = qubit(toks[i]);
      if (std::find(ops.begin(), ops.end(), q) != ops.end()) fail(toks[i], "duplicate operand " + std::to_string(q));
      ops.push_back(q);
    }
    const std::string name(head.text);
    Gate g{*kind, {}, {}};
    switch (*kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
      if (argc != 2) fail(head, name + " takes 2 operands, got " + std::to_string(argc));
      g.controls = {ops[0]};
      g.targets = {ops[1]};
      break;
    case GateKind::Toffoli:
      if (argc < 2) fail(head, name + " takes at least 2 operands, got " + std::to_string(argc));
      g.controls.assign(ops.begin(), ops.end() - 1);
      g.targets = {ops.back()};
      break;
    case GateKind::Fredkin:
      if (argc < 2) fail(head, name + " takes at least 2 operands, got " + std::to_string(argc));
      g.controls.assign(ops.begin(), ops.end() - 2);
      g.targets.assign(ops.end() - 2, ops.end());
      break;
    default:
      if (argc != 1) fail(head, name + " takes 1 operand, got " + std::to_string(argc));
      g.targets = {ops[0]};
      break;
    }
    c_.gates.push_back(std::move(g));
  }

  Circuit c_;
  std::size_t line_ = 0;
  bool have_qubits_ = false;
  bool after_measure_ = false;
};

// Uniform integer in [0, bound) by rejection; unlike std::uniform_int_distribution
// this gives the same stream on every standard library.
std::size_t uniform_below(std::mt19937_64 &rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

std::vector<std::size_t> distinct_qubits(std::mt19937_64 &rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + uniform_below(rng, n - i)]);
  pool.resize(count);
  return pool;
}

} // namespace

Circuit parse_circuit(std::string_view text) { return Parser{}.run(text); }

std::string serialize_circuit(const Circuit &c) {
  std::string out = ".qubits " + std::to_string(c.qubits) + "\n";
  if (c.init) out += ".init " + *c.init + "\n";
  for (const Gate &g : c.gates) {
    out += mnemonic(g.kind);
    for (std::size_t q : g.operands()) out += ' ' + std::to_string(q);
    out += '\n';
  }
  if (!c.measure.empty()) {
    out += ".measure";
    for (std::size_t q : c.measure) out += ' ' + std::to_string(q);
    out += '\n';
  }
  return out;
}

Circuit gen_random(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random: need at least 2 qubits");
  std::vector<GateKind> pool{GateKind::X, GateKind::Y, GateKind::Z,    GateKind::H,  GateKind::S,
                             GateKind::T, GateKind::CNOT, GateKind::CZ};
  if (n >= 3) {
    pool.push_back(GateKind::Toffoli);
    pool.push_back(GateKind::Fredkin);
  }
  std::mt19937_64 rng(seed);
  Circuit c;
  c.qubits = n;
  for (std::size_t q = 0; q < n; ++q) c.gates.push_back(Gate::single(GateKind::H, q));
  for (std::size_t i = 0; i < 3 * n; ++i) {
    const GateKind kind = pool[uniform_below(rng, pool.size())];
    switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ: {
      auto q = distinct_qubits(rng, n, 2);
      c.gates.push_back({kind, {q[0]}, {q[1]}});
      break;
    }
    case GateKind::Toffoli: {
      auto q = distinct_qubits(rng, n, 3);
      c.gates.push_back(Gate::toffoli({q[0], q[1]}, q[2]));
      break;
    }
    case GateKind::Fredkin: {
      auto q = distinct_qubits(rng, n, 3);
      c.gates.push_back(Gate::fredkin({q[0]}, q[1], q[2]));
      break;
    }
    default:
      c.gates.push_back(Gate::single(kind, uniform_below(rng, n)));
      break;
    }
  }
  return c;
}

Circuit gen_ghz(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gen_ghz: need at least 1 qubit");
  Circuit c;
  c.qubits = n;
  c.gates.push_back(Gate::single(GateKind::H, 0));
  for (std::size_t i = 0; i + 1 < n; ++i) c.gates.push_back(Gate::cnot(i, i + 1));
  for (std::size_t q = 0; q < n; ++q) c.measure.push_back(q);
  return c;
}

Circuit gen_bv(std::size_t n, std::optional<std::string> hidden) {
  if (n < 2) throw std::invalid_argument("gen_bv: need at least 2 qubits");
  const std::string s = hidden.value_or(std::string(n - 1, '1'));
  if (s.size() != n - 1) throw std::invalid_argument("gen_bv: hidden string must have n-1 bits");
  if (s.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("gen_bv: hidden string may only contain 0 and 1");
  const std::size_t anc = n - 1;
  Circuit c;
  c.qubits = n;
  c.gates.push_back(Gate::single(GateKind::X, anc));
  for (std::size_t q = 0; q < n; ++q) c.gates.push_back(Gate::single(GateKind::H, q));
  for (std::size_t i = 0; i < anc; ++i)
    if (s[i] == '1') c.gates.push_back(Gate::cnot(i, anc));
  for (std::size_t q = 0; q < anc; ++q) c.gates.push_back(Gate::single(GateKind::H, q));
  for (std::size_t q = 0; q < anc; ++q) c.measure.push_back(q);
  return c;
}

} // namespace qsim
