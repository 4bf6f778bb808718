#include "qlsplab/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace qlsplab {

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kPi: return "PI";
    case OracleKind::kSparseS: return "SPARSE_S";
    case OracleKind::kSparseA: return "SPARSE_A";
    case OracleKind::kBlockU: return "BLOCK_U";
  }
  return "UNKNOWN";
}

std::int64_t pi_equivalents(OracleKind kind) {
  switch (kind) {
    case OracleKind::kPi:
    case OracleKind::kSparseS:
    case OracleKind::kSparseA:
      return 1;
    case OracleKind::kBlockU:
      return 4;
  }
  return 0;
}

void QueryLedger::begin_layer() {
  events_.push_back(LedgerEvent{.layer_break = true});
}

void QueryLedger::record(OracleKind kind, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("negative query count");
  if (count == 0) return;
  events_.push_back(LedgerEvent{.layer_break = false, .kind = kind, .count = count});
}

LedgerSummary QueryLedger::summary_since(Mark mark) const {
  LedgerSummary out;
  std::array<std::int64_t, kOracleKindCount> layer_kind{};

  auto close_layer = [&] {
    std::int64_t layer_total = 0;
    for (std::size_t k = 0; k < kOracleKindCount; ++k) {
      const std::int64_t n = layer_kind[k];
      if (n == 0) continue;
      auto& slot = out.per_kind[k];
      slot.total += n;
      slot.depth += 1;
      slot.width = std::max(slot.width, n);
      out.pi_equivalents += n * pi_equivalents(static_cast<OracleKind>(k));
      layer_total += n;
    }
    if (layer_total > 0) {
      out.total += layer_total;
      out.depth += 1;
      out.width = std::max(out.width, layer_total);
    }
    layer_kind.fill(0);
  };

  for (std::size_t i = std::min(mark, events_.size()); i < events_.size(); ++i) {
    const LedgerEvent& e = events_[i];
    if (e.layer_break) {
      close_layer();
    } else {
      layer_kind[static_cast<std::size_t>(e.kind)] += e.count;
    }
  }
  close_layer();
  return out;
}

QueryLedger QueryLedger::replay(std::span<const LedgerEvent> events) {
  QueryLedger ledger;
  for (const LedgerEvent& e : events) {
    if (e.layer_break) {
      ledger.begin_layer();
    } else {
      ledger.record(e.kind, e.count);
    }
  }
  return ledger;
}

LedgerSummary combine_sequential(const LedgerSummary& first,
                                 const LedgerSummary& second) {
  LedgerSummary out;
  out.total = first.total + second.total;
  out.depth = first.depth + second.depth;
  out.width = std::max(first.width, second.width);
  out.pi_equivalents = first.pi_equivalents + second.pi_equivalents;
  for (std::size_t k = 0; k < kOracleKindCount; ++k) {
    out.per_kind[k].total = first.per_kind[k].total + second.per_kind[k].total;
    out.per_kind[k].depth = first.per_kind[k].depth + second.per_kind[k].depth;
    out.per_kind[k].width = std::max(first.per_kind[k].width, second.per_kind[k].width);
  }
  return out;
}

nlohmann::json to_json(const LedgerSummary& summary) {
  nlohmann::json per_kind = nlohmann::json::object();
  for (std::size_t k = 0; k < kOracleKindCount; ++k) {
    const auto& c = summary.per_kind[k];
    per_kind[std::string(to_string(static_cast<OracleKind>(k)))] = {
        {"total", c.total}, {"depth", c.depth}, {"width", c.width}};
  }
  return {{"total", summary.total},
          {"depth", summary.depth},
          {"width", summary.width},
          {"pi_equivalents", summary.pi_equivalents},
          {"per_oracle", per_kind}};
}

}  // namespace qlsplab
