// qsim: bit-sliced BDD quantum circuit simulator.
//
//   qsim run [options] FILE        simulate a circuit (FILE "-" reads stdin)
//   qsim gen {random|ghz|bv} N     print a benchmark circuit
//   qsim check                     cross-check against the dense simulator
//
// Exit codes: 0 ok, 1 usage, 2 parse error, 3 node budget, 4 time limit,
// 5 check mismatch, 6 internal error.

#include <pthread.h>

#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "qsim/driver.hpp"

namespace {

// BDD recursion depth follows the number of variables; give the simulation
// a stack that fits tens of thousands of levels.
constexpr std::size_t kStackBytes = std::size_t{512} << 20;

template <class F> int on_big_stack(F fn) {
  struct Box {
    F *fn;
    int rc = qsim::kExitInternal;
  } box{&fn};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStackBytes);
  pthread_t tid;
  auto body = [](void *p) -> void * {
    auto *b = static_cast<Box *>(p);
    b->rc = (*b->fn)();
    return nullptr;
  };
  if (pthread_create(&tid, &attr, body, &box) != 0) {
    pthread_attr_destroy(&attr);
    return fn();
  }
  pthread_join(tid, nullptr);
  pthread_attr_destroy(&attr);
  return box.rc;
}

const std::map<std::string, qsim::OutputFormat> kFormats{{"json", qsim::OutputFormat::Json},
                                                         {"text", qsim::OutputFormat::Text}};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact quantum circuit simulation on bit-sliced BDDs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qsim 1.0");

  qsim::RunConfig run;
  double time_limit = 0;
  auto *run_cmd = app.add_subcommand("run", "Simulate a circuit file");
  run_cmd->add_option("FILE", run.input, "Circuit file, - for stdin")->required();
  run_cmd->add_option("--r-init", run.r_init, "Initial slice width r")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--reorder", run.reorder, "Enable sifting between gates");
  run_cmd->add_option("--node-budget", run.node_budget, "Live node limit (default: $QSIM_NODE_BUDGET)")
      ->check(CLI::PositiveNumber);
  auto *tl = run_cmd->add_option("--time-limit", time_limit, "Wall-clock limit in seconds")
                 ->check(CLI::PositiveNumber);
  run_cmd->add_option("--shots", run.shots, "Samples drawn from the measured qubits");
  run_cmd->add_option("--seed", run.seed, "Sampling seed");
  run_cmd->add_flag("--dump-amplitudes", run.dump_amplitudes, "List the nonzero amplitudes");
  run_cmd->add_option("--format", run.format, "json or text")->transform(CLI::CheckedTransformer(kFormats));
  run_cmd->add_option("--enumeration-limit", run.enumeration_limit,
                      "Outcome lists and amplitude dumps stop at 2^L entries");

  qsim::GenConfig gen;
  std::string hidden;
  auto *gen_cmd = app.add_subcommand("gen", "Print a benchmark circuit");
  gen_cmd->add_option("FAMILY", gen.family, "random, ghz or bv")
      ->required()
      ->check(CLI::IsMember({"random", "ghz", "bv"}));
  gen_cmd->add_option("N", gen.n, "Qubit count")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed for random");
  auto *hidden_opt = gen_cmd->add_option("--hidden", hidden, "Hidden string for bv (N-1 bits)");

  qsim::CheckConfig check;
  auto *check_cmd = app.add_subcommand("check", "Compare random circuits against the dense simulator");
  check_cmd->add_option("--n-max", check.n_max, "Largest qubit count (<= 16)")->check(CLI::Range(2, 16));
  check_cmd->add_option("--cases", check.cases, "Circuits per qubit count");
  check_cmd->add_option("--seed", check.seed, "Base seed");
  check_cmd->add_option("--r-init", check.r_init, "Initial slice width r")->check(CLI::PositiveNumber);
  check_cmd->add_option("--format", check.format, "json or text")->transform(CLI::CheckedTransformer(kFormats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? qsim::kExitOk : qsim::kExitUsage;
  }

  if (*run_cmd) {
    if (*tl) run.time_limit = time_limit;
    return on_big_stack([&] { return qsim::cmd_run(run, std::cin, std::cout, std::cerr); });
  }
  if (*gen_cmd) {
    if (*hidden_opt) gen.hidden = hidden;
    return qsim::cmd_gen(gen, std::cout, std::cerr);
  }
  return on_big_stack([&] { return qsim::cmd_check(check, std::cout, std::cerr); });
}
