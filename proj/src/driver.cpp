#include "qsim/driver.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qsim/bdd.hpp"
#include "qsim/dense.hpp"
#include "qsim/kernels.hpp"
#include "qsim/measurement.hpp"

namespace qsim {

using nlohmann::json;

namespace {

json exact(const ExactProb &p) { return {{"exact", p.to_string()}, {"approx", p.to_double()}}; }

json amplitude_json(const AlgebraicAmplitude &a) {
  return json::array({a.a.get_str(), a.b.get_str(), a.c.get_str(), a.d.get_str()});
}

long peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

// First n gates are H on qubits 0..n-1: the random-circuit recipe. Its
// gate count is quoted without that layer.
std::optional<std::size_t> gates_after_h_layer(const Circuit &c) {
  if (c.gates.size() < c.qubits) return std::nullopt;
  for (std::size_t q = 0; q < c.qubits; ++q)
    if (!(c.gates[q] == Gate::single(GateKind::H, q))) return std::nullopt;
  return c.gates.size() - c.qubits;
}

std::size_t resolve_budget(std::size_t requested) {
  if (requested != 0) return requested;
  if (auto env = env_node_budget()) return *env;
  return bdd::ManagerConfig{}.node_budget;
}

void print_text_run(const json &r, std::ostream &out) {
  out << "qubits " << r["qubits"] << "  gates " << r["gates"];
  if (r.contains("gates_after_h_layer")) out << " (" << r["gates_after_h_layer"] << " after H layer)";
  out << "\n";
  out << "r " << r["final"]["r"] << "  k " << r["final"]["k"] << "  growths " << r["final"]["growths"] << "\n";
  out << "nodes live " << r["nodes"]["live"] << "  peak " << r["nodes"]["peak"] << "  slices "
      << r["nodes"]["slices"] << "\n";
  out << "total probability " << r["total_probability"]["exact"].get<std::string>() << "\n";
  if (r.contains("measurement")) {
    const json &m = r["measurement"];
    for (const json &e : m["marginals"])
      out << "Pr[q" << e["qubit"] << "=1] = " << e["p1"]["exact"].get<std::string>() << "\n";
    for (auto it = m["probabilities"].begin(); it != m["probabilities"].end(); ++it)
      out << it.key() << "  " << it.value()["exact"].get<std::string>() << "\n";
    if (m["truncated"].get<bool>()) out << "(outcome list truncated)\n";
    if (m.contains("counts"))
      for (auto it = m["counts"].begin(); it != m["counts"].end(); ++it)
        out << "sample " << it.key() << "  " << it.value() << "\n";
  }
  if (r.contains("amplitudes")) {
    out << "amplitudes (a b c d) / sqrt2^" << r["final"]["k"] << "\n";
    for (const json &e : r["amplitudes"]) {
      out << e["index"].get<std::string>();
      for (const json &v : e["coeffs"]) out << ' ' << v.get<std::string>();
      out << "\n";
    }
  }
  out << "wall " << r["resources"]["wall_seconds"] << " s  rss " << r["resources"]["peak_rss_kb"] << " kB\n";
}

json failure(const std::string &status, const std::string &message) {
  return {{"schema", kReportSchema}, {"status", status}, {"error", message}};
}

void emit(const json &report, OutputFormat format, std::ostream &out) {
  if (format == OutputFormat::Json)
    out << report.dump(2) << "\n";
  else if (report.value("status", "") != "ok")
    out << report.value("status", "") << ": " << report.value("error", "") << "\n";
  else
    print_text_run(report, out);
}

} // namespace

std::optional<std::size_t> env_node_budget() {
  const char *v = std::getenv("QSIM_NODE_BUDGET");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char *end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) return std::nullopt;
  return static_cast<std::size_t>(n);
}

json run_circuit(const Circuit &circuit, const RunConfig &config) {
  if (config.r_init < 1) throw std::invalid_argument("r_init must be at least 1");
  const auto start = std::chrono::steady_clock::now();

  bdd::ManagerConfig mc;
  mc.node_budget = resolve_budget(config.node_budget);
  mc.auto_reorder = config.reorder;
  bdd::Manager mgr(mc);
  if (config.time_limit)
    mgr.set_deadline(start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(*config.time_limit)));

  SlicedState state = init_basis_state(mgr, circuit.qubits, circuit.init.value_or(""), config.r_init);
  const std::vector<GateStats> per_gate = apply_circuit(state, circuit);
  std::size_t growths = 0;
  for (const GateStats &g : per_gate) growths += g.growths;

  json report;
  report["schema"] = kReportSchema;
  report["status"] = "ok";
  report["qubits"] = circuit.qubits;
  report["gates"] = circuit.gates.size();
  if (auto counted = gates_after_h_layer(circuit)) report["gates_after_h_layer"] = *counted;
  report["config"] = {{"r_init", config.r_init},
                      {"reorder", config.reorder},
                      {"node_budget", mc.node_budget},
                      {"shots", config.shots},
                      {"seed", config.seed}};
  report["final"] = {{"r", state.width()}, {"k", state.k()}, {"growths", growths}};
  const std::size_t slice_nodes = state.node_count();

  if (config.dump_amplitudes) {
    const std::size_t cap = std::size_t{1} << std::min<std::size_t>(config.enumeration_limit, 30);
    json amps = json::array();
    for (const IndexedAmplitude &e : nonzero_amplitudes(state, cap))
      amps.push_back({{"index", e.index}, {"coeffs", amplitude_json(e.amplitude.with_k(state.k()))}});
    report["amplitudes"] = std::move(amps);
  }

  {
    Hyperfunction hyper(state, circuit.measure);
    report["total_probability"] = exact(hyper.total_probability());
    if (!circuit.measure.empty()) {
      json m;
      m["qubits"] = circuit.measure;
      json marg = json::array();
      const std::vector<ExactProb> p1 = hyper.marginals();
      for (std::size_t i = 0; i < p1.size(); ++i)
        marg.push_back({{"qubit", circuit.measure[i]}, {"p0", exact(ExactProb(1) - p1[i])}, {"p1", exact(p1[i])}});
      m["marginals"] = std::move(marg);

      bool truncated = false;
      const std::size_t cap = std::size_t{1} << std::min<std::size_t>(config.enumeration_limit, 30);
      json probs = json::object();
      for (const Outcome &o : hyper.outcomes(cap, truncated)) probs[o.bits] = exact(o.probability);
      m["probabilities"] = std::move(probs);
      m["truncated"] = truncated;
      if (config.shots > 0) m["counts"] = hyper.sample(config.shots, config.seed);
      report["measurement"] = std::move(m);
    }
    report["hyperfunction_nodes"] = mgr.node_count(hyper.function());
  }

  const bdd::Stats st = mgr.stats();
  report["nodes"] = {{"live", st.live}, {"peak", st.peak}, {"slices", slice_nodes}};
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["resources"] = {{"wall_seconds", wall}, {"peak_rss_kb", peak_rss_kb()}};
  return report;
}

int cmd_run(const RunConfig &config, std::istream &in, std::ostream &out, std::ostream &err) {
  std::string text;
  if (config.input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream file(config.input, std::ios::binary);
    if (!file) {
      err << "qsim: cannot open " << config.input << "\n";
      return kExitUsage;
    }
    std::ostringstream ss;
    ss << file.rdbuf();
    text = ss.str();
  }

  Circuit circuit;
  try {
    circuit = parse_circuit(text);
  } catch (const ParseError &e) {
    const std::string where = config.input == "-" ? "<stdin>" : config.input;
    err << where << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
    json r = failure("parse_error", e.message());
    r["line"] = e.line();
    r["column"] = e.column();
    emit(r, config.format, out);
    return kExitParse;
  }

  try {
    emit(run_circuit(circuit, config), config.format, out);
    return kExitOk;
  } catch (const bdd::NodeBudgetExceeded &e) {
    err << "qsim: node budget exceeded: " << e.what() << "\n";
    emit(failure("node_budget_exceeded", e.what()), config.format, out);
    return kExitNodeBudget;
  } catch (const bdd::TimeLimitExceeded &e) {
    err << "qsim: time limit exceeded\n";
    emit(failure("time_limit_exceeded", e.what()), config.format, out);
    return kExitTimeLimit;
  } catch (const std::invalid_argument &e) {
    err << "qsim: " << e.what() << "\n";
    emit(failure("usage_error", e.what()), config.format, out);
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "qsim: internal error: " << e.what() << "\n";
    emit(failure("internal_error", e.what()), config.format, out);
    return kExitInternal;
  }
}

int cmd_gen(const GenConfig &config, std::ostream &out, std::ostream &err) {
  try {
    if (config.hidden && config.family != "bv") throw std::invalid_argument("--hidden only applies to bv");
    if (config.family == "random")
      out << serialize_circuit(gen_random(config.n, config.seed));
    else if (config.family == "ghz")
      out << serialize_circuit(gen_ghz(config.n));
    else if (config.family == "bv")
      out << serialize_circuit(gen_bv(config.n, config.hidden));
    else
      throw std::invalid_argument("unknown family '" + config.family + "' (random, ghz, bv)");
  } catch (const std::invalid_argument &e) {
    err << "qsim gen: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

std::uint64_t check_case_seed(std::uint64_t seed, std::size_t n, std::size_t index) {
  // splitmix64 over the triple
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (1 + n * 1000003ULL + index);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json run_check(const CheckConfig &config) {
  if (config.n_max > kDenseLimit) throw std::invalid_argument("n_max must be at most 16");
  json report{{"schema", kReportSchema}, {"n_max", config.n_max}, {"cases_per_size", config.cases},
              {"seed", config.seed}};
  std::size_t run = 0;
  for (std::size_t n = 2; n <= config.n_max; ++n) {
    for (std::size_t i = 0; i < config.cases; ++i) {
      const std::uint64_t case_seed = check_case_seed(config.seed, n, i);
      const Circuit c = gen_random(n, case_seed);
      bdd::Manager mgr;
      SlicedState state = init_basis_state(mgr, n, "", config.r_init);
      (void)apply_circuit(state, c);
      if (config.tamper) config.tamper(state);
      const DenseState dense = simulate_dense(c);
      const CompareReport cmp = compare(state, dense);
      ++run;
      if (!cmp.equal) {
        const Divergence &d = *cmp.first_divergence;
        report["status"] = "fail";
        report["cases_run"] = run;
        report["first_divergence"] = {{"n", n},
                                      {"case", i},
                                      {"case_seed", case_seed},
                                      {"index", d.index},
                                      {"bitstring", d.bitstring},
                                      {"sliced", d.sliced.to_string()},
                                      {"dense", d.dense.to_string()}};
        return report;
      }
    }
  }
  report["status"] = "pass";
  report["cases_run"] = run;
  return report;
}

int cmd_check(const CheckConfig &config, std::ostream &out, std::ostream &err) {
  json report;
  try {
    report = run_check(config);
  } catch (const std::invalid_argument &e) {
    err << "qsim check: " << e.what() << "\n";
    return kExitUsage;
  }
  const bool pass = report["status"] == "pass";
  if (config.format == OutputFormat::Json) {
    out << report.dump(2) << "\n";
  } else {
    out << report["status"].get<std::string>() << ": " << report["cases_run"] << " cases\n";
    if (!pass) {
      const json &d = report["first_divergence"];
      out << "n=" << d["n"] << " case=" << d["case"] << " index " << d["bitstring"].get<std::string>()
          << " sliced (" << d["sliced"].get<std::string>() << ") dense (" << d["dense"].get<std::string>()
          << ")\n";
    }
  }
  return pass ? kExitOk : kExitCheckFailed;
}

json strip_resources(json report) {
  report.erase("resources");
  return report;
}

} // namespace qsim
