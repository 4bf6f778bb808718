#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qlsplab/analysis.hpp"
#include "qlsplab/encoding.hpp"
#include "qlsplab/ledger.hpp"
#include "qlsplab/permchain.hpp"

namespace qlsplab {

struct SolveReport {
  StateVector state;                        // normalized
  double residual = 0.0;                    // ||A v - e_0|| / ||v||
  std::optional<Index> truncation_k;        // Neumann only
  Index p_steps = 0;                        // sequential P applications
  LedgerSummary ledger_delta;
};

/// Amplitudes below this magnitude are dropped when serializing a state.
inline constexpr double kStateSerializationFloor = 1e-15;

nlohmann::json to_json(const SolveReport& report);
nlohmann::json state_to_json(const StateVector& state);
/// Inverse of state_to_json; the result is re-normalized. Throws SchemaError.
StateVector state_from_json(const nlohmann::json& j);

/// Pivoted LU solve of A v = e_0. Throws SingularMatrix when A is numerically
/// singular or the scale-free residual exceeds `tolerance`.
SolveReport solve_direct(const Eigen::MatrixXd& a, const IndexSpace& space,
                         double tolerance = 1e-10);

/// Certified truncation: the smallest K >= 1 with
///   (1+r) r^K / ((1-r) ||v_exact||) <= eps / 2,   r = e^{-1/q}.
Index neumann_truncation(Index length, double eps);

/// ceil(3q ln(4 / (eps (1 - e^{-1/q})))), the depth budget the Neumann
/// solver is checked against.
Index neumann_depth_bound(Index length, double eps);

/// Partial sum sum_{k<K} e^{-k/q} P^k |0,0> in the b = 1 block, built with K-1
/// sequential apply_p_step calls, one ledger layer each. Steps through the
/// identity segment leave their layer empty, so ledger depth counts only the
/// steps that query O_pi (<= K-1). Throws BadEps unless 0 < eps < 1.
SolveReport solve_neumann(const PermutationChain& chain, QueryLedger& ledger, double eps);

/// Inverse-CDF sampler over the support of a state. Shot s uses output s of
/// the counter-based stream for `seed`, so any sharding of shots gives the
/// same outcomes.
class OutcomeSampler {
 public:
  OutcomeSampler(const StateVector& state, std::uint64_t seed);

  BasisIndex draw(std::uint64_t shot) const;
  const IndexSpace& space() const noexcept { return space_; }

 private:
  IndexSpace space_;
  std::uint64_t key_;
  std::vector<Index> support_;
  std::vector<double> cdf_;
};

/// `shots` outcomes starting at shot index `first_shot`; `workers` > 1 shards
/// the shots across threads with identical results.
std::vector<BasisIndex> sample_outcomes(const StateVector& state, std::int64_t shots,
                                        std::uint64_t seed, std::uint64_t first_shot = 0,
                                        unsigned workers = 1);

/// x of the first outcome with q+1 <= j <= 2q.
std::optional<Index> extract_answer(const std::vector<BasisIndex>& outcomes, Index length);

}  // namespace qlsplab
