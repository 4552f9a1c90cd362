// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--only N]... [--keep DIR]
//
// Criteria 3, 4 and 5 drive the qsim executable as a child process and take
// its wall time and peak RSS from wait4().

#include <fcntl.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qsim/circuit.hpp"
#include "qsim/dense.hpp"
#include "qsim/driver.hpp"
#include "qsim/kernels.hpp"
#include "qsim/measurement.hpp"
#include "test_util.hpp"

using namespace qsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Collects failure notes for one criterion.
struct Verdict {
  std::vector<std::string> problems;
  std::vector<std::string> notes;
  void fail(std::string why) {
    if (problems.size() < 8) problems.push_back(std::move(why));
  }
  void note(std::string what) { notes.push_back(std::move(what)); }
  bool ok() const { return problems.empty(); }
};

struct ChildResult {
  int exit_code = -1;
  double wall_seconds = 0;
  long max_rss_kb = 0;
  std::string out;
};

fs::path g_workdir;

ChildResult run_child(const std::vector<std::string> &args, const fs::path &stdout_file) {
  std::vector<char *> argv;
  for (const std::string &a : args) argv.push_back(const_cast<char *>(a.c_str()));
  argv.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid == 0) {
    const int fd = ::open(stdout_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) _exit(127);
    dup2(fd, STDOUT_FILENO);
    ::close(fd);
    execv(argv[0], argv.data());
    _exit(127);
  }
  ChildResult r;
  if (pid < 0) return r;
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.max_rss_kb = usage.ru_maxrss;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  std::ifstream in(stdout_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

fs::path write_circuit(const std::string &name, const Circuit &c) {
  const fs::path p = g_workdir / name;
  std::ofstream(p) << serialize_circuit(c);
  return p;
}

std::optional<json> run_qsim(const fs::path &circuit, std::vector<std::string> extra, ChildResult &child,
                             Verdict &v) {
  std::vector<std::string> args{QSIM_BINARY, "run"};
  for (std::string &a : extra) args.push_back(std::move(a));
  args.push_back(circuit.string());
  child = run_child(args, fs::path(circuit.string() + ".json"));
  if (child.exit_code != 0) {
    v.fail(circuit.filename().string() + ": qsim exited with " + std::to_string(child.exit_code));
    return std::nullopt;
  }
  try {
    return json::parse(child.out);
  } catch (const std::exception &e) {
    v.fail(circuit.filename().string() + ": unreadable report");
    return std::nullopt;
  }
}

std::string fmt(double x, int digits = 1) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << x;
  return ss.str();
}

bool all_equivalent(const std::vector<AlgebraicAmplitude> &a, const std::vector<AlgebraicAmplitude> &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equivalent(a[i], b[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// 1 and 2: oracle equivalence and exact normalization over the same runs.

void oracle_sweep(Verdict &c1, Verdict &c2) {
  std::size_t cases = 0, states = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (std::size_t i = 0; i < 20; ++i) {
      const std::uint64_t seed = 1000 * n + i;
      const Circuit circuit = gen_random(n, seed);
      bdd::Manager mgr;
      SlicedState state = init_basis_state(mgr, n);
      auto check_norm = [&](std::size_t gate, const SlicedState &s) {
        ++states;
        const Abs2Numerator t = total_abs2_numerator(s, n);
        BigInt two_k;
        mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(s.k()));
        if (t.u != two_k || t.v != 0)
          c2.fail("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " after gate " +
                  std::to_string(gate) + ": sum u=" + t.u.get_str() + " v=" + t.v.get_str() + " k=" +
                  std::to_string(s.k()));
      };
      check_norm(0, state);
      (void)apply_circuit(state, circuit, [&](std::size_t g, const SlicedState &s) { check_norm(g + 1, s); });

      const DenseState dense = simulate_dense(circuit);
      if (!all_equivalent(decode_all(state, n), dense.amps)) {
        const CompareReport rep = compare(state, dense);
        std::string where = rep.first_divergence ? " at |" + rep.first_divergence->bitstring + ">" : "";
        c1.fail("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " differs" + where);
      }
      ++cases;
    }
  }
  c1.note(std::to_string(cases) + " circuits");
  c2.note(std::to_string(states) + " states");
}

// ---------------------------------------------------------------------------
// 3: GHZ at 10000 qubits through the CLI.

void ghz_scale(Verdict &v) {
  ChildResult small, big;
  const auto r1 = run_qsim(write_circuit("ghz1000.q", gen_ghz(1000)), {"--enumeration-limit", "2"}, small, v);
  const auto r2 = run_qsim(write_circuit("ghz10000.q", gen_ghz(10000)), {"--enumeration-limit", "2"}, big, v);
  if (!r1 || !r2) return;
  if (big.wall_seconds > 600) v.fail("wall time " + fmt(big.wall_seconds) + " s > 600 s");
  if (big.max_rss_kb > 2L * 1024 * 1024) v.fail("peak RSS " + std::to_string(big.max_rss_kb) + " kB > 2 GB");
  const json &m = (*r2)["measurement"];
  if (m["marginals"][0]["qubit"] != 0 || m["marginals"][0]["p0"]["exact"] != "1/2")
    v.fail("Pr[q0=0] = " + m["marginals"][0]["p0"]["exact"].dump());
  const std::string zeros(10000, '0'), ones(10000, '1');
  if (m["probabilities"].size() != 2 || m["probabilities"][zeros]["exact"] != "1/2" ||
      m["probabilities"][ones]["exact"] != "1/2")
    v.fail("outcome distribution is not {0..0: 1/2, 1..1: 1/2}");
  const double n1 = (*r1)["nodes"]["slices"].get<double>(), n2 = (*r2)["nodes"]["slices"].get<double>();
  const double ratio = n2 / n1;
  if (ratio > 12) v.fail("slice node ratio " + fmt(ratio, 2) + " > 12");
  v.note(fmt(big.wall_seconds) + " s, " + std::to_string(big.max_rss_kb / 1024) + " MB, slice nodes " +
         fmt(n1, 0) + " -> " + fmt(n2, 0) + " (x" + fmt(ratio, 2) + ")");
}

// ---------------------------------------------------------------------------
// 4: BV at 1000 qubits through the CLI, and the full distribution at n <= 10.

void bv(Verdict &v) {
  ChildResult child;
  const auto r = run_qsim(write_circuit("bv1000.q", gen_bv(1000)), {"--enumeration-limit", "2"}, child, v);
  if (r) {
    if (child.wall_seconds > 600) v.fail("wall time " + fmt(child.wall_seconds) + " s > 600 s");
    const json &p = (*r)["measurement"]["probabilities"];
    if (p.size() != 1 || !p.contains(std::string(999, '1')) || p[std::string(999, '1')]["exact"] != "1")
      v.fail("n=1000: distribution is not all-ones with probability 1");
    v.note("n=1000 in " + fmt(child.wall_seconds) + " s");
  }

  std::mt19937_64 rng(4);
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      std::string hidden(n - 1, '1');
      if (rep > 0)
        for (char &ch : hidden) ch = rng() % 2 ? '1' : '0';
      const Circuit c = gen_bv(n, hidden);
      const DenseState dense = simulate_dense(c);
      bdd::Manager mgr;
      SlicedState state = init_basis_state(mgr, n);
      (void)apply_circuit(state, c);
      Hyperfunction h(state, c.measure);
      bool truncated = false;
      std::map<std::string, ExactProb> got;
      for (const Outcome &o : h.outcomes(std::size_t{1} << (n - 1), truncated)) got[o.bits] = o.probability;
      for (std::size_t x = 0; x < (std::size_t{1} << (n - 1)); ++x) {
        const std::string bits = index_bits(x, n - 1);
        std::vector<bool> want;
        for (char ch : bits) want.push_back(ch == '1');
        const ExactProb oracle = dense_probability(dense, c.measure, want);
        const ExactProb sliced = got.count(bits) ? got[bits] : ExactProb(0);
        if (!(sliced == oracle)) v.fail("n=" + std::to_string(n) + " s=" + hidden + " outcome " + bits);
        if (bits == hidden && !(oracle == ExactProb(1))) v.fail("oracle does not recover " + hidden);
      }
      ++checked;
    }
  }
  v.note(std::to_string(checked) + " small distributions");
}

// ---------------------------------------------------------------------------
// 5: random circuits at 40 qubits.

void random_desk(Verdict &v) {
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Circuit c = gen_random(40, seed);
    ChildResult child;
    const auto r =
        run_qsim(write_circuit("random40_" + std::to_string(seed) + ".q", c), {"--reorder"}, child, v);
    if (!r) continue;
    worst = std::max(worst, child.wall_seconds);
    if (child.wall_seconds > 60) v.fail("seed " + std::to_string(seed) + ": " + fmt(child.wall_seconds) + " s");
    if ((*r)["gates_after_h_layer"] != 120) v.fail("seed " + std::to_string(seed) + ": gate count");
    if ((*r)["total_probability"]["exact"] != "1")
      v.fail("seed " + std::to_string(seed) + ": total probability " +
             (*r)["total_probability"]["exact"].get<std::string>());
  }
  v.note("10 seeds, slowest " + fmt(worst) + " s");
}

// ---------------------------------------------------------------------------
// 6: gate identities on random states.

void gate_algebra(Verdict &v) {
  std::mt19937_64 rng(6);
  std::size_t checks = 0;
  auto apply_seq = [](SlicedState s, const std::vector<Gate> &gates) {
    for (const Gate &g : gates) (void)apply_gate(s, g);
    return s;
  };
  for (int sample = 0; sample < 50; ++sample) {
    const std::size_t n = 3 + rng() % 6;
    bdd::Manager mgr;
    SlicedState base = init_basis_state(mgr, n);
    const std::size_t depth = 2 * n + rng() % (3 * n);
    for (std::size_t i = 0; i < depth; ++i) (void)apply_gate(base, testing::random_gate(rng, n));
    const std::vector<AlgebraicAmplitude> original = decode_all(base, n);

    auto q = testing::pick_distinct(rng, n, 3);
    const Gate X = Gate::single(GateKind::X, q[0]), Z = Gate::single(GateKind::Z, q[0]);
    const Gate H = Gate::single(GateKind::H, q[0]), S = Gate::single(GateKind::S, q[0]);
    const Gate T = Gate::single(GateKind::T, q[0]);
    const Gate CX = Gate::cnot(q[0], q[1]);
    const Gate CCX = Gate::toffoli({q[0], q[1]}, q[2]);
    const Gate CSWAP = Gate::fredkin({q[0]}, q[1], q[2]);

    struct Identity {
      const char *name;
      std::vector<Gate> lhs, rhs;
    };
    const Identity ids[] = {
        {"X^2=I", {X, X}, {}},          {"Z^2=I", {Z, Z}, {}},           {"H^2=I", {H, H}, {}},
        {"S^2=Z", {S, S}, {Z}},         {"T^2=S", {T, T}, {S}},          {"S^4=I", {S, S, S, S}, {}},
        {"CNOT^2=I", {CX, CX}, {}},     {"Toffoli^2=I", {CCX, CCX}, {}}, {"Fredkin^2=I", {CSWAP, CSWAP}, {}},
    };
    for (const Identity &id : ids) {
      const auto lhs = decode_all(apply_seq(base, id.lhs), n);
      const auto rhs = id.rhs.empty() ? original : decode_all(apply_seq(base, id.rhs), n);
      if (!all_equivalent(lhs, rhs)) v.fail(std::string(id.name) + " on sample " + std::to_string(sample));
      ++checks;
    }
  }
  v.note(std::to_string(checks) + " identity checks");
}

// ---------------------------------------------------------------------------
// 7: growth from r = 2.

void overflow(Verdict &v) {
  Circuit c;
  c.qubits = 1;
  for (int i = 0; i < 40; ++i) c.gates.push_back(Gate::single(GateKind::H, 0));
  RunConfig config;
  config.r_init = 2;
  config.dump_amplitudes = true;
  const json r = run_circuit(c, config);
  if (r["final"]["k"] != 40) v.fail("k = " + r["final"]["k"].dump());
  if (r["final"]["growths"].get<std::size_t>() < 1) v.fail("r never grew");
  if (r["amplitudes"].size() != 1 || r["amplitudes"][0]["index"] != "0" ||
      r["amplitudes"][0]["coeffs"] != json::array({"0", "0", "0", "1048576"}))
    v.fail("amplitudes " + r["amplitudes"].dump());
  v.note("r 2 -> " + r["final"]["r"].dump() + " in " + r["final"]["growths"].dump() + " doublings");
}

// ---------------------------------------------------------------------------
// 8: sequential measurement against joint probabilities, and sampling.

void measurement_chain(Verdict &v) {
  const std::size_t n = 12;
  const Circuit c = gen_ghz(n);
  bdd::Manager mgr;
  SlicedState state = init_basis_state(mgr, n);
  (void)apply_circuit(state, c);

  std::size_t forced = 0;
  for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
    std::vector<bool> bits(n);
    for (std::size_t j = 0; j < n; ++j) bits[j] = ((x >> (n - 1 - j)) & 1U) != 0;
    Hyperfunction joint(state, c.measure);
    const ExactProb want = joint.joint_probability(bits);

    Hyperfunction seq(state, c.measure);
    std::mt19937_64 rng(x);
    ExactProb product(1);
    for (std::size_t j = 0; j < n; ++j) {
      try {
        seq.measure_next(bits[j], rng);
        product = product * seq.record().entries.back().probability;
      } catch (const std::domain_error &) {
        product = ExactProb(0);
        break;
      }
    }
    if (!(product == want)) v.fail("outcome " + index_bits(x, n) + ": " + product.to_string() + " vs " + want.to_string());
    ++forced;
  }

  Hyperfunction h(state, c.measure);
  const std::size_t shots = 100000;
  const auto counts = h.sample(shots, 1);
  bool truncated = false;
  std::map<std::string, ExactProb> exact;
  for (const Outcome &o : h.outcomes(std::size_t{1} << n, truncated)) exact[o.bits] = o.probability;
  for (const auto &[bits, count] : counts)
    if (!exact.count(bits)) v.fail("sampled impossible outcome " + bits);
  for (const auto &[bits, p] : exact) {
    const double pd = p.to_double();
    const double mean = shots * pd, sigma = std::sqrt(shots * pd * (1 - pd));
    const auto it = counts.find(bits);
    const double got = it == counts.end() ? 0 : double(it->second);
    if (std::abs(got - mean) > 4 * sigma)
      v.fail(bits.substr(0, 4) + "...: " + fmt(got, 0) + " outside " + fmt(mean, 0) + " +- " + fmt(4 * sigma, 0));
  }
  v.note(std::to_string(forced) + " forced outcomes, " + std::to_string(shots) + " shots");
}

// ---------------------------------------------------------------------------
// 9: parser round trips, fuzzing and malformed classes.

std::string mutate(std::mt19937_64 &rng, std::string text) {
  static const std::string alphabet = " \t\n#.0123456789-+xyzhstcrfedkinqubmaw";
  const int edits = 1 + static_cast<int>(rng() % 4);
  for (int e = 0; e < edits; ++e) {
    const std::size_t pos = text.empty() ? 0 : rng() % text.size();
    switch (rng() % 5) {
    case 0:
      if (!text.empty()) text.erase(pos, 1 + rng() % 3);
      break;
    case 1:
      text.insert(pos, 1, alphabet[rng() % alphabet.size()]);
      break;
    case 2:
      if (!text.empty()) text[pos] = alphabet[rng() % alphabet.size()];
      break;
    case 3:
      text.insert(pos, rng() % 2 ? "18446744073709551616" : "\n.measure 1\n");
      break;
    default: {
      const std::size_t len = 1 + rng() % 20;
      text.insert(rng() % (text.size() + 1), text.substr(pos, len));
      break;
    }
    }
  }
  return text;
}

void parser(Verdict &v) {
  std::vector<Circuit> corpus;
  for (std::size_t n = 2; n <= 40; ++n) {
    for (std::uint64_t s = 0; s < 3; ++s) corpus.push_back(gen_random(n, s));
    corpus.push_back(gen_ghz(n));
    corpus.push_back(gen_bv(n));
  }
  corpus.push_back(gen_ghz(1));
  corpus.push_back(gen_ghz(10000));
  corpus.push_back(gen_bv(1000));
  for (const Circuit &c : corpus) {
    try {
      if (!(parse_circuit(serialize_circuit(c)) == c)) v.fail("round trip changed a " + std::to_string(c.qubits) + "-qubit circuit");
    } catch (const std::exception &e) {
      v.fail(std::string("generator output rejected: ") + e.what());
    }
  }

  std::mt19937_64 rng(9);
  std::size_t accepted = 0, rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string text = mutate(rng, serialize_circuit(corpus[rng() % (corpus.size() - 2)]));
    try {
      const Circuit c = parse_circuit(text);
      ++accepted;
      if (!(parse_circuit(serialize_circuit(c)) == c)) v.fail("fuzz case " + std::to_string(i) + ": round trip");
    } catch (const ParseError &e) {
      ++rejected;
      if (e.line() == 0 || e.column() == 0 || e.message().empty()) v.fail("fuzz case " + std::to_string(i) + ": bad diagnostic");
    } catch (const std::exception &e) {
      v.fail("fuzz case " + std::to_string(i) + ": unexpected " + e.what());
    }
  }

  const std::pair<const char *, const char *> malformed[] = {
      {"unknown mnemonic", ".qubits 2\nfoo 0\n"},
      {"arity", ".qubits 2\ncx 0\n"},
      {"index out of range", ".qubits 2\nh 5\n"},
      {"duplicate operand", ".qubits 2\ncx 1 1\n"},
      {"missing .qubits", "x 0\n"},
      {"bad number", ".qubits 2\nh one\n"},
      {"bad .init", ".qubits 2\n.init 2\n"},
      {"statement after .measure", ".qubits 2\n.measure 0\nx 1\n"},
      {"unknown directive", ".qubits 2\n.shots 5\n"},
  };
  for (const auto &[what, text] : malformed) {
    try {
      (void)parse_circuit(text);
      v.fail(std::string(what) + ": accepted");
    } catch (const ParseError &e) {
      if (e.line() == 0) v.fail(std::string(what) + ": no position");
    } catch (...) {
      v.fail(std::string(what) + ": wrong exception type");
    }
  }
  v.note(std::to_string(corpus.size()) + " generator circuits, fuzz " + std::to_string(accepted) + " accepted / " +
         std::to_string(rejected) + " rejected");
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> only;
  std::optional<fs::path> keep;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only.insert(std::atoi(argv[++i]));
    else if (std::strcmp(argv[i], "--keep") == 0 && i + 1 < argc) keep = argv[++i];
    else {
      std::cerr << "usage: acceptance [--only N]... [--keep DIR]\n";
      return 2;
    }
  }
  g_workdir = keep ? *keep : fs::temp_directory_path() / ("qsim_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_workdir);

  const char *titles[] = {"",
                          "oracle equivalence, 20 random circuits per n in 2..10",
                          "exact normalization of every intermediate state",
                          "GHZ-10000: <= 10 min, <= 2 GB, Pr[q0=0] = 1/2, linear nodes",
                          "BV-1000 all-ones with probability 1; n <= 10 matches oracle",
                          "random-40: < 60 s, total probability exactly 1 (10 seeds)",
                          "gate algebra on 50 random states",
                          "overflow growth from r = 2 (m = 20)",
                          "GHZ-12 measurement chain and 1e5-shot sampling",
                          "parser round trip, fuzz corpus and malformed input"};
  Verdict verdicts[10];
  auto want = [&](int i) { return only.empty() || only.count(i) != 0; };
  auto guarded = [&](int i, const std::function<void()> &fn) {
    try {
      fn();
    } catch (const std::exception &e) {
      verdicts[i].fail(std::string("exception: ") + e.what());
    }
  };

  if (want(1) || want(2)) guarded(1, [&] { oracle_sweep(verdicts[1], verdicts[2]); });
  if (want(3)) guarded(3, [&] { ghz_scale(verdicts[3]); });
  if (want(4)) guarded(4, [&] { bv(verdicts[4]); });
  if (want(5)) guarded(5, [&] { random_desk(verdicts[5]); });
  if (want(6)) guarded(6, [&] { gate_algebra(verdicts[6]); });
  if (want(7)) guarded(7, [&] { overflow(verdicts[7]); });
  if (want(8)) guarded(8, [&] { measurement_chain(verdicts[8]); });
  if (want(9)) guarded(9, [&] { parser(verdicts[9]); });

  bool all = true;
  for (int i = 1; i <= 9; ++i) {
    if (!want(i)) continue;
    const Verdict &v = verdicts[i];
    all = all && v.ok();
    std::cout << (v.ok() ? "PASS" : "FAIL") << "  criterion " << i << ": " << titles[i];
    if (!v.notes.empty()) {
      std::cout << " [";
      for (std::size_t j = 0; j < v.notes.size(); ++j) std::cout << (j ? "; " : "") << v.notes[j];
      std::cout << "]";
    }
    std::cout << "\n";
    for (const std::string &p : v.problems) std::cout << "      " << p << "\n";
  }
  if (!keep) fs::remove_all(g_workdir);
  return all ? 0 : 1;
}
