#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qlsplab/encoding.hpp"
#include "qlsplab/ledger.hpp"
#include "qlsplab/permchain.hpp"

namespace qlsplab {

/// Oracle calls per block-encoding application for a 2-sparse matrix, and the
/// O_pi queries they reduce to.
struct BlockCostModel {
  std::int64_t os_calls = 2;
  std::int64_t oa_calls = 2;
  std::int64_t pi_calls = 4;
};

struct BlockEncodingReport {
  double alpha = 2.0;
  Index ancillas = 1;             // one qubit in the explicit dilation
  Index circuit_ancillas = 0;     // ceil(log2 n) + 3 for the sparse-access circuit
  double declared_eps = 0.0;
  double defect = 0.0;            // ||alpha <0|U|0> - A||
  BlockCostModel cost_model;
};

nlohmann::json to_json(const BlockEncodingReport& report);

/// `perturbation` = 0 builds the exact dilation; otherwise A is replaced by
/// A + E with E a random symmetric matrix of spectral norm exactly
/// `perturbation` before dilating.
struct BlockEncodingMode {
  double perturbation = 0.0;
  std::uint64_t seed = 0;

  static BlockEncodingMode exact() { return {}; }
  static BlockEncodingMode perturbed(double eps, std::uint64_t seed) { return {eps, seed}; }
};

struct BlockEncoding {
  Eigen::MatrixXd unitary;        // 2n x 2n
  BlockEncodingReport report;
};

/// Spectral norm of a symmetric matrix (largest |eigenvalue|).
double symmetric_norm(const Eigen::MatrixXd& m);
/// Spectral norm of a general matrix via the largest eigenvalue of M^T M.
double spectral_norm(const Eigen::MatrixXd& m);

/// Symmetric Gaussian matrix scaled to spectral norm exactly `norm`.
Eigen::MatrixXd random_symmetric(Index n, double norm, std::uint64_t seed);

/// U = [[B/2, S], [S, -B/2]] with S = sqrt(I - B^2/4), B = A (+ E). S comes
/// from the eigendecomposition of B with 1 - lambda^2/4 clamped to [0, 1].
/// Throws NormTooLarge if ||A|| > 1 + 1e-9, TooLarge if 2n exceeds the cap.
BlockEncoding build_block_encoding(const Eigen::MatrixXd& a, BlockEncodingMode mode,
                                   Index dense_cap = kDefaultDenseCap);

/// ||alpha * U[0:n, 0:n] - A||. Throws NotUnitary if ||U U^T - I|| > 1e-10.
double verify_block_encoding(const Eigen::MatrixXd& u, const Eigen::MatrixXd& a,
                             double alpha);

/// Top-left block of U applied to x, i.e. (U [x; 0])[0:n].
Eigen::VectorXd apply_encoded_block(const Eigen::MatrixXd& u, const Eigen::VectorXd& x);

/// Cost adapter for one application of U_A against the sparse oracles of a
/// view. Each application opens a layer holding 2 SPARSE_S + 2 SPARSE_A
/// events on the caller's ledger; the underlying O_s/O_A evaluations really
/// run, with their O_pi calls counted on an internal ledger.
class BlockEncodingAdapter {
 public:
  BlockEncodingAdapter(const SparseOracleView& view, QueryLedger& ledger)
      : view_(&view), ledger_(&ledger) {}

  /// Fetches the two (column, value) pairs of `row` through the oracles.
  std::vector<std::pair<Index, double>> apply(Index row);

  std::int64_t applications() const noexcept { return applications_; }
  /// O_pi queries spent by the oracle evaluations so far.
  std::int64_t pi_queries_used() const { return inner_.summary().total; }

 private:
  const SparseOracleView* view_;
  QueryLedger* ledger_;
  QueryLedger inner_;
  std::int64_t applications_ = 0;
};

struct PerturbationReport {
  double eps = 0.0;         // ||A - B||
  double kappa = 0.0;
  double inv_gap = 0.0;     // ||A^{-1} - B^{-1}||
  double sol_gap = 0.0;     // normalized-solution distance for |x> = e_0
  double bound_inv = 0.0;   // kappa^2 eps / (1 - kappa eps)
  double bound_sol = 0.0;   // kappa^2 (kappa + 1) eps / (1 - kappa eps)
  std::int64_t trial = 0;

  bool passed() const;
};

nlohmann::json to_json(const PerturbationReport& report);
std::string perturbation_csv_header();
std::string to_csv_row(const PerturbationReport& report);

/// Both gaps and both bounds for explicit A, B. Throws BadParameters unless
/// kappa >= 1 and ||A - B|| < 1/kappa.
PerturbationReport perturbation_report(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       double kappa);

/// Random trials: A = Q diag(lambda) Q^T with lambda ~ U[1/kappa, 1] and Q a
/// random orthogonal matrix; B = A + E with ||E|| <= eps and B <= I. Trial t
/// uses its own counter-derived stream. BadParameters unless kappa >= 1 and
/// 0 < eps < 1/kappa.
std::vector<PerturbationReport> check_perturbation_lemma(double kappa, double eps,
                                                         std::int64_t trials,
                                                         std::uint64_t seed,
                                                         Index dim = 8);

struct PipelineBoundReport {
  double kappa = 0.0;
  double eps_prime = 0.0;       // 1/(2 kappa^5) unless overridden
  double kappa_prime = 0.0;     // 2 kappa / (1 - 2 kappa eps')
  double defect = 0.0;          // ||2A' - A||
  double distance = 0.0;        // normalized-solution distance
  double bound = 0.0;           // 2 kappa^2 (2 kappa + 1) eps' / (1 - kappa eps')
  bool within_bound = false;
  bool below_inverse_kappa = false;
  bool spectrum_in_range = false;   // sigma(A') within [1/kappa', 1]
  double wrong_answer_mass = 0.0;   // window mass of A'^{-1} e_0 at x != Pi_q(0)

  bool passed() const { return within_bound && below_inverse_kappa; }
};

nlohmann::json to_json(const PipelineBoundReport& report);

/// Perturbed half-scale system A' with ||2A' - A|| = eps'. Throws BadKappa
/// for kappa < 4.
PipelineBoundReport check_pipeline_bound(const PermutationChain& chain,
                                         const Eigen::MatrixXd& a, double kappa,
                                         std::uint64_t seed,
                                         std::optional<double> eps_prime = std::nullopt);

}  // namespace qlsplab
