#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace qlsplab {

enum class OracleKind : std::uint8_t { kPi = 0, kSparseS, kSparseA, kBlockU };

inline constexpr std::size_t kOracleKindCount = 4;

std::string_view to_string(OracleKind kind);

/// O_pi queries needed to realize one query of `kind`: O_s and O_A each take
/// one, the block-encoding takes 2 O_s + 2 O_A, i.e. four.
std::int64_t pi_equivalents(OracleKind kind);

struct QueryCounts {
  std::int64_t total = 0;
  std::int64_t depth = 0;
  std::int64_t width = 0;

  friend bool operator==(const QueryCounts&, const QueryCounts&) = default;
};

struct LedgerSummary {
  std::int64_t total = 0;
  std::int64_t depth = 0;
  std::int64_t width = 0;
  // Indexed by OracleKind. Per-kind depth counts layers holding that kind.
  std::array<QueryCounts, kOracleKindCount> per_kind{};
  std::int64_t pi_equivalents = 0;

  const QueryCounts& of(OracleKind kind) const {
    return per_kind[static_cast<std::size_t>(kind)];
  }
  QueryCounts overall() const { return {total, depth, width}; }

  friend bool operator==(const LedgerSummary&, const LedgerSummary&) = default;
};

/// Summary of two phases executed one after the other.
LedgerSummary combine_sequential(const LedgerSummary& first,
                                 const LedgerSummary& second);

nlohmann::json to_json(const LedgerSummary& summary);

/// One entry of the append-only event log. A layer break carries no count.
struct LedgerEvent {
  bool layer_break = false;
  OracleKind kind = OracleKind::kPi;
  std::int64_t count = 0;

  friend bool operator==(const LedgerEvent&, const LedgerEvent&) = default;
};

/// Append-only record of oracle invocations grouped into parallel layers.
///
/// Callers open a layer with begin_layer(); every query recorded until the
/// next begin_layer() belongs to that layer, i.e. is one k-parallel query.
/// Recording into a fresh ledger implicitly opens the first layer. Empty
/// layers do not contribute to depth.
///
/// Single writer only. Use one ledger per worker and combine summaries.
class QueryLedger {
 public:
  using Mark = std::size_t;

  void begin_layer();
  void record(OracleKind kind, std::int64_t count = 1);

  LedgerSummary summary() const { return summary_since(0); }
  /// Summary restricted to the events appended after `mark`.
  LedgerSummary summary_since(Mark mark) const;
  Mark mark() const noexcept { return events_.size(); }

  std::span<const LedgerEvent> events() const noexcept { return events_; }

  static QueryLedger replay(std::span<const LedgerEvent> events);

 private:
  std::vector<LedgerEvent> events_;
};

}  // namespace qlsplab
