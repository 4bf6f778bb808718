#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qlsplab/encoding.hpp"
#include "qlsplab/ledger.hpp"
#include "qlsplab/permchain.hpp"

namespace qlsplab {

// ---- canonical JSON -------------------------------------------------------

/// Sorted keys, no whitespace, floats as %.17g. Two equal documents always
/// serialize to identical bytes.
std::string canonical_dump(const nlohmann::json& j);

// ---- chain files (permchain-v1) -------------------------------------------

inline constexpr const char* kChainFormat = "permchain-v1";

nlohmann::json chain_to_json(const PermutationChain& chain);
/// Throws SchemaError naming the field, BadShape, or NotABijection.
PermutationChain chain_from_json(const nlohmann::json& j);

void store_chain(const PermutationChain& chain, const std::filesystem::path& path);
PermutationChain load_chain(const std::filesystem::path& path);

// ---- end-to-end reduction -------------------------------------------------

enum class SolverKind { kDirect, kNeumann, kBlockEnc };

std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& name);

/// ceil(ln(100) / 0.015): repetitions for >= 99% success at the 0.015 floor.
inline constexpr std::int64_t kDefaultRepetitions = 308;

struct ReductionOptions {
  Index domain_size = 2;
  Index length = 1;
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::kDirect;
  // Neumann: target state error. Block-encoding: perturbation eps'; 0 means
  // the default 1/(2 kappa^5) with kappa = kappa_formula(q).
  double eps = 1e-3;
  std::int64_t max_repetitions = kDefaultRepetitions;
  std::int64_t shots_per_repetition = 1;
  Index dense_cap = kDefaultDenseCap;
  /// Solve this chain instead of generating one from the seed.
  std::optional<PermutationChain> chain;
};

struct ReductionReport {
  std::optional<Index> answer;
  Index truth = 0;
  bool success = false;
  std::int64_t shots_used = 0;
  std::int64_t repetitions_used = 0;
  LedgerSummary ledger;
  SolverKind solver = SolverKind::kDirect;
  double solver_eps = 0.0;
  std::optional<Index> truncation_k;
  double window_mass = 0.0;
  Index domain_size = 0;
  Index length = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> timings_ms;
};

/// JSON form; timings live under "timings_ms" and are the only field that
/// differs between runs with equal inputs.
nlohmann::json to_json(const ReductionReport& report, bool include_timings = true);

ReductionReport run_reduction(const ReductionOptions& options);

// ---- verification suite ---------------------------------------------------

enum class VerifyLevel { kFast, kFull };

/// Test hook: adds `delta` to one dense entry before the checks run.
struct FaultInjection {
  Index row = 0;
  Index col = 0;
  double delta = 1e-3;
};

struct VerifyOptions {
  Index domain_size = 4;
  Index length = 2;
  std::uint64_t seed = 1;
  VerifyLevel level = VerifyLevel::kFast;
  Index dense_cap = kDefaultDenseCap;
  double delta = 0.1;
  std::optional<FaultInjection> fault;
};

struct VerifyResult {
  bool passed = false;
  nlohmann::json report;
};

/// Runs every structural, spectral, probabilistic, oracle-cost and
/// perturbation check on one random instance and reports pass/fail per check.
VerifyResult verify_all(const VerifyOptions& options);

}  // namespace qlsplab
