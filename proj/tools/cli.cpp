#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "qlsplab/analysis.hpp"
#include "qlsplab/blockenc.hpp"
#include "qlsplab/encoding.hpp"
#include "qlsplab/error.hpp"
#include "qlsplab/permchain.hpp"
#include "qlsplab/pipeline.hpp"
#include "qlsplab/solver.hpp"

namespace qlsplab::cli {

namespace {

using json = nlohmann::json;

struct GlobalFlags {
  std::uint64_t seed = 1;
  Index n = 2;
  Index q = 1;
  double eps = 1e-3;
  std::int64_t shots = 1;
  std::int64_t reps = kDefaultRepetitions;
  Index dense_cap = kDefaultDenseCap;
  std::string format = "json";
  std::string out;
  std::string chain;
};

// Writes either to the --out file or to the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : *fallback_; }

 private:
  std::ofstream file_;
  std::ostream* fallback_;
};

PermutationChain chain_for(const GlobalFlags& g) {
  if (!g.chain.empty()) return load_chain(g.chain);
  return random_chain(g.n, g.q, g.seed);
}

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_gen(const GlobalFlags& g, std::ostream& out) {
  Sink sink(g.out, out);
  sink.stream() << canonical_dump(chain_to_json(random_chain(g.n, g.q, g.seed))) << '\n';
  return 0;
}

int run_build(const GlobalFlags& g, std::ostream& err) {
  if (g.out.empty()) {
    err << "build: --out is required\n";
    return 2;
  }
  const PermutationChain chain = chain_for(g);
  export_matrix_market(SparseOracleView(chain), g.out, g.dense_cap);
  return 0;
}

int run_solve(const GlobalFlags& g, const std::string& solver, std::ostream& out) {
  const PermutationChain chain = chain_for(g);
  const SparseOracleView view(chain);
  const SolveReport rep = [&] {
    if (solver == "neumann") {
      QueryLedger ledger;
      return solve_neumann(chain, ledger, g.eps);
    }
    return solve_direct(materialize_dense(view, g.dense_cap), view.space());
  }();
  json j = to_json(rep);
  j["solver"] = solver;
  Sink sink(g.out, out);
  sink.stream() << canonical_dump(j) << '\n';
  return 0;
}

int run_sample(const GlobalFlags& g, const std::string& state_path, unsigned workers,
               std::ostream& out) {
  StateVector state = [&] {
    if (!state_path.empty()) {
      std::ifstream in(state_path, std::ios::binary);
      if (!in) throw IoError("cannot open " + state_path);
      const json doc = json::parse(in);
      return state_from_json(doc.contains("state") ? doc.at("state") : doc);
    }
    const PermutationChain chain = chain_for(g);
    const SparseOracleView view(chain);
    return solve_direct(materialize_dense(view, g.dense_cap), view.space()).state;
  }();
  const auto outcomes = sample_outcomes(state, g.shots, g.seed, 0, workers);
  Sink sink(g.out, out);
  if (g.format == "csv") {
    sink.stream() << "shot,index,b,j,x\n";
    for (std::size_t s = 0; s < outcomes.size(); ++s) {
      const BasisIndex& o = outcomes[s];
      sink.stream() << s << ',' << state.space.flatten(o) << ',' << o.b << ',' << o.j << ','
                    << o.x << '\n';
    }
  } else {
    json arr = json::array();
    for (const BasisIndex& o : outcomes) arr.push_back({o.b, o.j, o.x});
    sink.stream() << canonical_dump({{"outcomes", arr}, {"seed", g.seed}}) << '\n';
  }
  return 0;
}

int run_reduce(const GlobalFlags& g, const std::string& solver, bool timings,
               std::ostream& out) {
  ReductionOptions opt;
  opt.domain_size = g.n;
  opt.length = g.q;
  opt.seed = g.seed;
  opt.solver = solver_kind_from_string(solver);
  opt.eps = g.eps;
  opt.max_repetitions = g.reps;
  opt.shots_per_repetition = g.shots;
  opt.dense_cap = g.dense_cap;
  if (!g.chain.empty()) opt.chain = load_chain(g.chain);
  const ReductionReport rep = run_reduction(opt);
  Sink sink(g.out, out);
  sink.stream() << canonical_dump(to_json(rep, timings)) << '\n';
  return 0;
}

int run_verify(const GlobalFlags& g, const std::string& level,
               const std::vector<double>& fault, std::ostream& out) {
  VerifyOptions opt;
  opt.domain_size = g.n;
  opt.length = g.q;
  opt.seed = g.seed;
  opt.dense_cap = g.dense_cap;
  opt.level = level == "full" ? VerifyLevel::kFull : VerifyLevel::kFast;
  if (!fault.empty()) {
    opt.fault = FaultInjection{static_cast<Index>(fault.at(0)), static_cast<Index>(fault.at(1)),
                               fault.size() > 2 ? fault[2] : 1e-3};
  }
  const VerifyResult res = verify_all(opt);
  Sink sink(g.out, out);
  sink.stream() << canonical_dump(res.report) << '\n';
  return res.passed ? 0 : 1;
}

int run_perturb(const GlobalFlags& g, std::vector<double> kappas, std::int64_t trials,
                bool eps_given, std::ostream& out) {
  if (kappas.empty()) kappas = {2.0, 8.0, 32.0};
  std::vector<PerturbationReport> all;
  json groups = json::array();
  bool ok = true;
  for (double kappa : kappas) {
    const double eps = eps_given ? g.eps : 1.0 / (2.0 * kappa * kappa);
    auto reps = check_perturbation_lemma(kappa, eps, trials, g.seed);
    std::int64_t passed = 0;
    for (const auto& r : reps) passed += r.passed() ? 1 : 0;
    ok = ok && passed == static_cast<std::int64_t>(reps.size());
    groups.push_back({{"kappa", kappa}, {"eps", eps}, {"trials", reps.size()},
                      {"passed", passed}});
    all.insert(all.end(), reps.begin(), reps.end());
  }
  const PermutationChain chain = chain_for(g);
  const SparseOracleView view(chain);
  const double kappa = std::max(4.0, kappa_formula(chain.length()));
  const PipelineBoundReport pipe =
      check_pipeline_bound(chain, materialize_dense(view, g.dense_cap), kappa, g.seed);
  ok = ok && pipe.passed();

  Sink sink(g.out, out);
  if (g.format == "csv") {
    sink.stream() << perturbation_csv_header() << '\n';
    for (const auto& r : all) sink.stream() << to_csv_row(r) << '\n';
  } else {
    json trials_json = json::array();
    for (const auto& r : all) trials_json.push_back(to_json(r));
    sink.stream() << canonical_dump({{"lemma_groups", groups},
                                     {"lemma_trials", trials_json},
                                     {"pipeline", to_json(pipe)},
                                     {"passed", ok}})
                  << '\n';
  }
  return ok ? 0 : 1;
}

int run_bench(const GlobalFlags& g, std::ostream& out) {
  using Clock = std::chrono::steady_clock;
  const PermutationChain chain = chain_for(g);
  const SparseOracleView view(chain);
  const Index dim = view.space().dim();
  Sink sink(g.out, out);
  sink.stream() << "phase,N,q,dim,repetition,ms\n";
  const std::int64_t reps = std::max<std::int64_t>(1, std::min<std::int64_t>(g.reps, 20));
  auto time = [&](const char* phase, const std::function<void()>& fn) {
    for (std::int64_t r = 0; r < reps; ++r) {
      const auto t0 = Clock::now();
      fn();
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      sink.stream() << phase << ',' << chain.domain_size() << ',' << chain.length() << ','
                    << dim << ',' << r << ',' << csv_double(ms) << '\n';
    }
  };
  Eigen::MatrixXd a;
  time("materialize_dense", [&] { a = materialize_dense(view, g.dense_cap); });
  time("assemble_via_oracles", [&] {
    QueryLedger ledger;
    assemble_via_oracles(view, ledger, g.dense_cap);
  });
  time("spectral_check", [&] { spectral_check(a, chain.length()); });
  time("solve_direct", [&] { solve_direct(a, view.space()); });
  time("solve_neumann", [&] {
    QueryLedger ledger;
    solve_neumann(chain, ledger, g.eps);
  });
  time("exact_solution_state", [&] { exact_solution_state(chain); });
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qlsplab: permutation-chain linear-system verification lab"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->envname("QLSPLAB_SEED");
  app.add_option("--N", g.n, "Permutation domain size")->envname("QLSPLAB_N")
      ->check(CLI::PositiveNumber);
  app.add_option("--q", g.q, "Chain length")->envname("QLSPLAB_Q")->check(CLI::PositiveNumber);
  app.add_option("--eps", g.eps, "Target error / perturbation size")->envname("QLSPLAB_EPS");
  app.add_option("--shots", g.shots, "Shots (per repetition for reduce)")
      ->envname("QLSPLAB_SHOTS")->check(CLI::PositiveNumber);
  app.add_option("--reps", g.reps, "Maximum repetitions")->envname("QLSPLAB_REPS")
      ->check(CLI::PositiveNumber);
  app.add_option("--dense-cap", g.dense_cap, "Largest dense dimension allowed")
      ->envname("QLSPLAB_DENSE_CAP")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")
      ->envname("QLSPLAB_FORMAT")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Output file (default: standard output)")
      ->envname("QLSPLAB_OUT");
  app.add_option("--chain", g.chain, "permchain-v1 file to use instead of --N/--q/--seed")
      ->envname("QLSPLAB_CHAIN");

  auto* gen = app.add_subcommand("gen", "Generate a random chain file");
  auto* build = app.add_subcommand("build", "Export the encoding matrix as MatrixMarket");

  auto* solve = app.add_subcommand("solve", "Solve A v = e_0 and print a SolveReport");
  std::string solve_solver = "direct";
  solve->add_option("--solver", solve_solver)->check(CLI::IsMember({"direct", "neumann"}));

  auto* sample = app.add_subcommand("sample", "Sample measurement outcomes of a state");
  std::string state_path;
  unsigned workers = 1;
  sample->add_option("--state", state_path, "SolveReport or state JSON");
  sample->add_option("--workers", workers, "Threads used for sampling");

  auto* reduce = app.add_subcommand("reduce", "Run the full reduction");
  std::string reduce_solver = "direct";
  bool no_timings = false;
  reduce->add_option("--solver", reduce_solver)
      ->check(CLI::IsMember({"direct", "neumann", "blockenc"}));
  reduce->add_flag("--no-timings", no_timings, "Omit timings_ms from the report");

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  std::string level = "fast";
  std::vector<double> fault;
  verify->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--inject-fault", fault, "row col [delta]: corrupt one entry (testing)")
      ->expected(2, 3)
      ->group("");

  auto* perturb = app.add_subcommand("perturb", "Perturbation-bound trials");
  std::vector<double> kappas;
  std::int64_t trials = 200;
  perturb->add_option("--kappa", kappas, "Condition numbers to test (default 2 8 32)");
  perturb->add_option("--trials", trials)->check(CLI::NonNegativeNumber);

  auto* bench = app.add_subcommand("bench", "Time each phase; CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(g, out);
    if (*build) return run_build(g, err);
    if (*solve) return run_solve(g, solve_solver, out);
    if (*sample) return run_sample(g, state_path, workers, out);
    if (*reduce) return run_reduce(g, reduce_solver, !no_timings, out);
    if (*verify) return run_verify(g, level, fault, out);
    if (*perturb) return run_perturb(g, kappas, trials, app.count("--eps") > 0, out);
    if (*bench) return run_bench(g, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("qlsplab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qlsplab::cli
