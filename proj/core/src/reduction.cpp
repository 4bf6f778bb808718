#include <chrono>
#include <cmath>
#include <string>

#include "qlsplab/analysis.hpp"
#include "qlsplab/blockenc.hpp"
#include "qlsplab/error.hpp"
#include "qlsplab/pipeline.hpp"
#include "qlsplab/rng.hpp"
#include "qlsplab/solver.hpp"

namespace qlsplab {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kDirect: return "direct";
    case SolverKind::kNeumann: return "neumann";
    case SolverKind::kBlockEnc: return "blockenc";
  }
  return "unknown";
}

SolverKind solver_kind_from_string(const std::string& name) {
  if (name == "direct") return SolverKind::kDirect;
  if (name == "neumann") return SolverKind::kNeumann;
  if (name == "blockenc") return SolverKind::kBlockEnc;
  throw BadParameters("unknown solver \"" + name + "\"");
}

nlohmann::json to_json(const ReductionReport& r, bool include_timings) {
  nlohmann::json j = {{"truth", r.truth},
                      {"success", r.success},
                      {"shots_used", r.shots_used},
                      {"repetitions_used", r.repetitions_used},
                      {"ledger", to_json(r.ledger)},
                      {"solver", {{"kind", to_string(r.solver)}, {"eps", r.solver_eps}}},
                      {"window_mass", r.window_mass},
                      {"N", r.domain_size},
                      {"q", r.length},
                      {"seed", r.seed}};
  j["answer"] = r.answer ? nlohmann::json(*r.answer) : nlohmann::json();
  j["solver"]["truncation_K"] =
      r.truncation_k ? nlohmann::json(*r.truncation_k) : nlohmann::json();
  if (include_timings) j["timings_ms"] = r.timings_ms;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Conjugate gradients on the normal equations B^2 v = B rhs, touching B only
// through the top-left block of the dilation. Each block application is one
// BLOCK_U layer on the ledger.
Eigen::VectorXd solve_through_block(const Eigen::MatrixXd& unitary, Index n,
                                    QueryLedger& ledger) {
  auto apply = [&](const Eigen::VectorXd& x) {
    ledger.begin_layer();
    ledger.record(OracleKind::kBlockU);
    return apply_encoded_block(unitary, x);
  };
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = apply(r);
  Eigen::VectorXd p = z;
  double zz = z.squaredNorm();
  const Index max_iter = 50 * n + 100;
  for (Index it = 0; it < max_iter && r.norm() > 1e-13; ++it) {
    const Eigen::VectorXd w = apply(p);
    const double alpha = zz / w.squaredNorm();
    x += alpha * p;
    r -= alpha * w;
    z = apply(r);
    const double zz_next = z.squaredNorm();
    p = z + (zz_next / zz) * p;
    zz = zz_next;
  }
  if (!(r.norm() <= 1e-10)) throw SingularMatrix("block-encoded solve did not converge");
  return x;
}

}  // namespace

ReductionReport run_reduction(const ReductionOptions& options) {
  if (options.max_repetitions < 1) throw BadParameters("max_repetitions must be >= 1");
  if (options.shots_per_repetition < 1) throw BadParameters("shots per repetition must be >= 1");

  ReductionReport report;
  report.seed = options.seed;
  report.solver = options.solver;

  auto t0 = Clock::now();
  const PermutationChain chain =
      options.chain ? *options.chain
                    : random_chain(options.domain_size, options.length, options.seed);
  report.domain_size = chain.domain_size();
  report.length = chain.length();
  report.truth = prefix_compose(chain, chain.length());
  report.timings_ms["chain"] = elapsed_ms(t0);

  t0 = Clock::now();
  const SparseOracleView view(chain);
  const IndexSpace& space = view.space();
  QueryLedger ledger;
  report.timings_ms["encode"] = elapsed_ms(t0);

  t0 = Clock::now();
  StateVector state{space, {}, false};
  switch (options.solver) {
    case SolverKind::kDirect: {
      const Eigen::MatrixXd a = assemble_via_oracles(view, ledger, options.dense_cap);
      state = solve_direct(a, space).state;
      report.solver_eps = 0.0;
      break;
    }
    case SolverKind::kNeumann: {
      SolveReport solved = solve_neumann(chain, ledger, options.eps);
      state = std::move(solved.state);
      report.truncation_k = solved.truncation_k;
      report.solver_eps = options.eps;
      break;
    }
    case SolverKind::kBlockEnc: {
      const double kappa = kappa_formula(chain.length());
      const double eps_prime =
          options.eps > 0.0 ? options.eps : 1.0 / (2.0 * std::pow(kappa, 5));
      const Eigen::MatrixXd a = materialize_dense(view, options.dense_cap);
      const BlockEncoding enc = build_block_encoding(
          a, BlockEncodingMode::perturbed(eps_prime, options.seed), options.dense_cap);
      const Eigen::VectorXd v = solve_through_block(enc.unitary, space.dim(), ledger);
      state = StateVector{space, std::vector<double>(v.data(), v.data() + v.size()), false}
                  .normalized_copy();
      report.solver_eps = eps_prime;
      break;
    }
  }
  report.window_mass = window_mass(state);
  report.timings_ms["solve"] = elapsed_ms(t0);

  t0 = Clock::now();
  const OutcomeSampler sampler(state, options.seed);
  const auto shots = static_cast<std::uint64_t>(options.shots_per_repetition);
  for (std::int64_t rep = 0; rep < options.max_repetitions && !report.answer; ++rep) {
    std::vector<BasisIndex> batch;
    batch.reserve(shots);
    for (std::uint64_t s = 0; s < shots; ++s) {
      batch.push_back(sampler.draw(static_cast<std::uint64_t>(rep) * shots + s));
    }
    report.shots_used += options.shots_per_repetition;
    report.repetitions_used = rep + 1;
    report.answer = extract_answer(batch, chain.length());
  }
  report.timings_ms["sample"] = elapsed_ms(t0);

  report.success = report.answer && *report.answer == report.truth;
  report.ledger = ledger.summary();
  return report;
}

}  // namespace qlsplab
