#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qlsplab/analysis.hpp"
#include "qlsplab/blockenc.hpp"
#include "qlsplab/error.hpp"
#include "qlsplab/pipeline.hpp"
#include "qlsplab/solver.hpp"

namespace qlsplab {

namespace {

using json = nlohmann::json;

class CheckSink {
 public:
  void add(const std::string& name, bool passed, json details = json::object()) {
    details["passed"] = passed;
    checks_[name] = std::move(details);
    all_passed_ = all_passed_ && passed;
  }

  // A check that throws is recorded as failed with the error text.
  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, false, {{"error", e.what()}});
    }
  }

  bool passed() const { return all_passed_; }
  const json& checks() const { return checks_; }

 private:
  json checks_ = json::object();
  bool all_passed_ = true;
};

void check_structure(const Eigen::MatrixXd& a, CheckSink& sink) {
  const bool symmetric = (a.array() == a.transpose().array()).all();
  bool two_sparse = true;
  for (Index i = 0; i < a.rows(); ++i) {
    const auto row_nnz = (a.row(i).array() != 0.0).count();
    const auto col_nnz = (a.col(i).array() != 0.0).count();
    two_sparse = two_sparse && row_nnz == 2 && col_nnz == 2;
  }
  sink.add("matrix_symmetric", symmetric);
  sink.add("matrix_two_sparse", two_sparse);
}

void check_p_order(const PermutationChain& chain, CheckSink& sink) {
  const Index q = chain.length();
  const Index n = chain.domain_size();
  const Index points = 3 * q * n;
  std::vector<int> hits(static_cast<std::size_t>(points), 0);
  bool returns = true;
  bool inverse_ok = true;
  for (Index j = 0; j < 3 * q; ++j) {
    for (Index x = 0; x < n; ++x) {
      const CyclePoint start{j, x};
      const CyclePoint once = p_step_direct(chain, start, Direction::kForward);
      ++hits[static_cast<std::size_t>(once.j * n + once.x)];
      inverse_ok = inverse_ok && p_step_direct(chain, once, Direction::kInverse) == start;
      CyclePoint p = start;
      for (Index k = 0; k < 3 * q; ++k) p = p_step_direct(chain, p, Direction::kForward);
      returns = returns && p == start;
    }
  }
  const bool bijective = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  sink.add("p_is_permutation", bijective && inverse_ok);
  sink.add("p_power_3q_identity", returns);
}

void check_oracle_costs(const SparseOracleView& view, CheckSink& sink) {
  const IndexSpace& space = view.space();
  const Index q = space.length();
  bool exact = true;
  Index max_charge = 0;
  QueryLedger ledger;
  for (Index row = 0; row < space.dim(); ++row) {
    const BasisIndex r = space.unflatten(row);
    const Direction dir = r.b == 0 ? Direction::kInverse : Direction::kForward;
    const Index expected = p_step_queries(q, r.j, dir) ? 1 : 0;
    for (int k = 1; k <= 2; ++k) {
      const auto before = ledger.summary().total;
      const Index col = oracle_sparse_index(view, ledger, row, k);
      const auto os_charge = ledger.summary().total - before;
      const auto mid = ledger.summary().total;
      oracle_entry(view, ledger, row, col);
      const auto oa_charge = ledger.summary().total - mid;
      // O_A only queries when col is the P-neighbour of row.
      const BasisIndex c = space.unflatten(col);
      const Index expected_oa = (c.j == r.j && c.x == r.x) ? 0 : expected;
      exact = exact && os_charge == expected && oa_charge == expected_oa;
      max_charge = std::max<Index>(max_charge, std::max(os_charge, oa_charge));
    }
  }
  sink.add("sparse_oracles_one_pi_query", exact && max_charge <= 1,
           {{"max_pi_per_call", max_charge}});

  QueryLedger outer;
  BlockEncodingAdapter adapter(view, outer);
  for (Index row = 0; row < space.dim(); ++row) adapter.apply(row);
  const LedgerSummary s = outer.summary();
  const bool adapter_ok =
      s.of(OracleKind::kSparseS).total == 2 * space.dim() &&
      s.of(OracleKind::kSparseA).total == 2 * space.dim() &&
      s.pi_equivalents == 4 * adapter.applications() &&
      adapter.pi_queries_used() <= 4 * adapter.applications();
  sink.add("block_encoding_four_pi_queries", adapter_ok,
           {{"applications", adapter.applications()},
            {"pi_equivalents", s.pi_equivalents},
            {"pi_queries_used", adapter.pi_queries_used()}});
}

}  // namespace

VerifyResult verify_all(const VerifyOptions& options) {
  const bool full = options.level == VerifyLevel::kFull;
  const PermutationChain chain =
      random_chain(options.domain_size, options.length, options.seed);
  const SparseOracleView view(chain);
  const IndexSpace& space = view.space();
  const Index q = chain.length();
  CheckSink sink;

  Eigen::MatrixXd a = materialize_dense(view, options.dense_cap);
  if (options.fault) {
    a(options.fault->row, options.fault->col) += options.fault->delta;
  }

  check_structure(a, sink);
  sink.run("oracle_matches_dense", [&] {
    QueryLedger scratch;
    const Eigen::MatrixXd via = assemble_via_oracles(view, scratch, options.dense_cap);
    sink.add("oracle_matches_dense", (via.array() == a.array()).all());
  });
  check_p_order(chain, sink);
  if (space.dim() <= 100000) {
    bool ok = true;
    for (Index i = 0; i < space.dim(); ++i) ok = ok && space.flatten(space.unflatten(i)) == i;
    sink.add("index_flattening_bijective", ok);
  }
  check_oracle_costs(view, sink);

  sink.run("spectral_bounds", [&] {
    const SpectralReport rep = spectral_check(a, q, options.delta, options.dense_cap);
    const bool tight = std::abs(rep.inv_norm - rep.kappa_formula) <= 1e-9;
    const bool unit_iff_even = (std::abs(rep.op_norm - 1.0) <= 1e-9) == (q % 2 == 0);
    const Index min_q = min_length_for_delta(options.delta);
    const bool kappa_applies = q >= min_q;
    json details = to_json(rep);
    details["inv_norm_tight"] = tight;
    details["op_norm_one_iff_q_even"] = unit_iff_even;
    details["kappa_bound_min_q"] = min_q;
    sink.add("spectral_bounds",
             rep.op_norm_ok && rep.inv_norm_ok && tight && unit_iff_even &&
                 (!kappa_applies || rep.kappa_ok),
             std::move(details));
  });

  const ExactSolution exact = exact_solution_state(chain);
  {
    const double mass = window_mass(exact.state);
    const double expected = success_probability(q);
    sink.add("window_probability",
             std::abs(mass - expected) <= 1e-12 && mass >= success_probability_floor() - 1e-15,
             {{"mass", mass}, {"closed_form", expected},
              {"floor", success_probability_floor()}});
  }
  {
    const Index truth = prefix_compose(chain, q);
    const std::vector<Index> xs = xj_table(chain);
    bool ok = block0_mass(exact.state) == 0.0;
    for (Index j = 0; j < 3 * q; ++j) {
      const Index xj = xs[static_cast<std::size_t>(j)];
      if (j <= q) ok = ok && xj == prefix_compose(chain, j);
      else if (j <= 2 * q) ok = ok && xj == truth;
      else ok = ok && xj == prefix_compose(chain, 3 * q - j);
    }
    sink.add("window_outcomes_carry_answer", ok, {{"answer", truth}});
  }

  sink.run("direct_matches_closed_form", [&] {
    const SolveReport direct = solve_direct(a, space);
    const double dist = distance(direct.state, exact.state);
    sink.add("direct_matches_closed_form", dist <= 1e-10 && direct.residual <= 1e-10,
             {{"distance", dist}, {"residual", direct.residual}});
  });

  sink.run("closed_form_inverse", [&] {
    const Eigen::MatrixXd inv = closed_form_inverse(chain, options.dense_cap);
    const double err =
        (a * inv - Eigen::MatrixXd::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff();
    sink.add("closed_form_inverse", err <= 1e-10, {{"max_abs_error", err}});
  });

  sink.run("neumann_certified", [&] {
    bool ok = true;
    json runs = json::array();
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      QueryLedger ledger;
      const SolveReport rep = solve_neumann(chain, ledger, eps);
      const double err = distance(rep.state, exact.state);
      const Index bound = neumann_depth_bound(q, eps);
      const bool pass = err <= eps && rep.ledger_delta.depth <= bound &&
                        rep.ledger_delta.width <= 1;
      ok = ok && pass;
      runs.push_back({{"eps", eps}, {"error", err}, {"K", *rep.truncation_k},
                      {"depth", rep.ledger_delta.depth}, {"depth_bound", bound}});
    }
    sink.add("neumann_certified", ok, {{"runs", runs}});
  });

  if (full || 2 * space.dim() <= 1024) {
    sink.run("block_encoding_exact", [&] {
      const BlockEncoding enc =
          build_block_encoding(a, BlockEncodingMode::exact(), options.dense_cap);
      sink.add("block_encoding_exact", enc.report.defect <= 1e-10, to_json(enc.report));
    });
  }

  sink.run("perturbation_bounds", [&] {
    const std::int64_t trials = full ? 200 : 20;
    bool ok = true;
    std::int64_t count = 0;
    for (double kappa : {2.0, 8.0, 32.0}) {
      for (const auto& rep :
           check_perturbation_lemma(kappa, 1.0 / (2.0 * kappa * kappa), trials, options.seed)) {
        ok = ok && rep.passed();
        ++count;
      }
    }
    sink.add("perturbation_bounds", ok, {{"trials", count}});
  });

  sink.run("pipeline_perturbation", [&] {
    const double kappa = std::max(4.0, kappa_formula(q));
    const PipelineBoundReport rep = check_pipeline_bound(chain, a, kappa, options.seed);
    sink.add("pipeline_perturbation", rep.passed(), to_json(rep));
  });

  VerifyResult result;
  result.passed = sink.passed();
  result.report = {{"instance",
                    {{"N", options.domain_size},
                     {"q", options.length},
                     {"seed", options.seed},
                     {"dim", space.dim()},
                     {"level", full ? "full" : "fast"},
                     {"fault_injected", options.fault.has_value()}}},
                   {"checks", sink.checks()},
                   {"passed", result.passed}};
  return result;
}

}  // namespace qlsplab
