#include <gtest/gtest.h>

#include "qlsplab/ledger.hpp"

using namespace qlsplab;

TEST(Ledger, Empty) {
  const QueryLedger l;
  EXPECT_EQ(l.summary().overall(), (QueryCounts{0, 0, 0}));
}

TEST(Ledger, SequentialSingleQueries) {
  QueryLedger l;
  for (int i = 0; i < 3; ++i) {
    l.begin_layer();
    l.record(OracleKind::kPi);
  }
  EXPECT_EQ(l.summary().overall(), (QueryCounts{3, 3, 1}));
}

TEST(Ledger, ParallelLayers) {
  QueryLedger l;
  for (int layer = 0; layer < 2; ++layer) {
    l.begin_layer();
    for (int i = 0; i < 4; ++i) l.record(OracleKind::kPi);
  }
  EXPECT_EQ(l.summary().overall(), (QueryCounts{8, 2, 4}));
}

TEST(Ledger, EmptyLayersAndZeroCountsAreIgnored) {
  QueryLedger l;
  l.begin_layer();
  l.begin_layer();
  l.record(OracleKind::kPi, 0);
  l.begin_layer();
  l.record(OracleKind::kPi, 2);
  l.begin_layer();
  EXPECT_EQ(l.summary().overall(), (QueryCounts{2, 1, 2}));
}

TEST(Ledger, RecordWithoutLayerOpensOne) {
  QueryLedger l;
  l.record(OracleKind::kSparseS);
  EXPECT_EQ(l.summary().overall(), (QueryCounts{1, 1, 1}));
}

TEST(Ledger, InvariantsOnMixedLog) {
  QueryLedger l;
  const std::vector<std::vector<std::pair<OracleKind, int>>> layers = {
      {{OracleKind::kPi, 3}},
      {{OracleKind::kSparseS, 2}, {OracleKind::kSparseA, 2}},
      {},
      {{OracleKind::kBlockU, 1}, {OracleKind::kPi, 5}},
  };
  for (const auto& layer : layers) {
    l.begin_layer();
    for (auto [k, n] : layer) l.record(k, n);
  }
  const auto s = l.summary();
  EXPECT_EQ(s.total, 13);
  EXPECT_EQ(s.depth, 3);
  EXPECT_EQ(s.width, 6);
  EXPECT_LE(s.depth, s.total);
  EXPECT_LE(s.width, s.total);
  EXPECT_LE(s.total, s.depth * s.width);
  EXPECT_EQ(s.of(OracleKind::kPi).total, 8);
  EXPECT_EQ(s.of(OracleKind::kPi).depth, 2);
  EXPECT_EQ(s.of(OracleKind::kPi).width, 5);
  EXPECT_EQ(s.of(OracleKind::kBlockU).total, 1);
  EXPECT_EQ(s.pi_equivalents, 8 + 2 + 2 + 4);
}

TEST(Ledger, ReplayReproducesSummary) {
  QueryLedger l;
  l.record(OracleKind::kPi, 2);
  l.begin_layer();
  l.record(OracleKind::kSparseA);
  const auto replayed = QueryLedger::replay(l.events());
  EXPECT_EQ(replayed.summary(), l.summary());
}

TEST(Ledger, SummarySinceMark) {
  QueryLedger l;
  l.record(OracleKind::kPi, 7);
  const auto m = l.mark();
  l.begin_layer();
  l.record(OracleKind::kPi);
  l.begin_layer();
  l.record(OracleKind::kPi);
  EXPECT_EQ(l.summary_since(m).overall(), (QueryCounts{2, 2, 1}));
}

TEST(Ledger, CombineSequential) {
  QueryLedger a, b;
  a.record(OracleKind::kPi, 4);
  b.record(OracleKind::kPi, 1);
  b.begin_layer();
  b.record(OracleKind::kPi, 6);
  const auto c = combine_sequential(a.summary(), b.summary());
  EXPECT_EQ(c.overall(), (QueryCounts{11, 3, 6}));
}

TEST(Ledger, PiEquivalents) {
  EXPECT_EQ(pi_equivalents(OracleKind::kPi), 1);
  EXPECT_EQ(pi_equivalents(OracleKind::kSparseS), 1);
  EXPECT_EQ(pi_equivalents(OracleKind::kSparseA), 1);
  EXPECT_EQ(pi_equivalents(OracleKind::kBlockU), 4);
  EXPECT_EQ(to_string(OracleKind::kBlockU), "BLOCK_U");
}

TEST(Ledger, JsonShape) {
  QueryLedger l;
  l.record(OracleKind::kPi, 2);
  const auto j = to_json(l.summary());
  EXPECT_EQ(j.at("total"), 2);
  EXPECT_EQ(j.at("per_oracle").at("PI").at("width"), 2);
}
