#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "../oracles.hpp"
#include "qlsplab/encoding.hpp"
#include "qlsplab/error.hpp"

using namespace qlsplab;

namespace {

const double kC1 = 1.0 / (1.0 + std::exp(-1.0));
const double kD1 = std::exp(-1.0) / (1.0 + std::exp(-1.0));

std::vector<std::vector<long>> tables_of(const PermutationChain& c) {
  std::vector<std::vector<long>> t;
  for (Index j = 1; j <= c.length(); ++j) {
    const auto im = c.forward(j).images();
    t.emplace_back(im.begin(), im.end());
  }
  return t;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qlsplab_" + name);
}

}  // namespace

TEST(IndexSpace, FlattenRoundTripAndRange) {
  const IndexSpace s(3, 2);
  EXPECT_EQ(s.dim(), 36);
  EXPECT_EQ(s.flatten({0, 0, 0}), 0);
  EXPECT_EQ(s.flatten({1, 0, 0}), 18);
  std::set<Index> seen;
  for (Index i = 0; i < s.dim(); ++i) {
    const auto b = s.unflatten(i);
    EXPECT_EQ(s.flatten(b), i);
    seen.insert(i);
  }
  EXPECT_EQ(static_cast<Index>(seen.size()), s.dim());
  EXPECT_THROW(s.flatten({2, 0, 0}), IndexOutOfRange);
  EXPECT_THROW(s.flatten({0, 6, 0}), IndexOutOfRange);
  EXPECT_THROW(s.flatten({0, 0, 3}), IndexOutOfRange);
  EXPECT_THROW(s.unflatten(36), IndexOutOfRange);
  EXPECT_THROW(s.unflatten(-1), IndexOutOfRange);
}

TEST(PStep, SwapExamples) {
  const auto sw = chain_from_arrays(2, 1, {{1, 0}});
  QueryLedger l;
  EXPECT_EQ(apply_p_step(sw, l, {0, 0}, Direction::kForward), (CyclePoint{1, 1}));
  EXPECT_EQ(apply_p_step(sw, l, {2, 1}, Direction::kForward), (CyclePoint{0, 0}));
  EXPECT_EQ(l.summary().total, 2);
}

TEST(PStep, IdentitySegmentIsFree) {
  const auto c = random_chain(5, 3, 11);
  for (Index x = 0; x < 5; ++x) {
    QueryLedger l;
    EXPECT_EQ(apply_p_step(c, l, {3, x}, Direction::kForward), (CyclePoint{4, x}));
    EXPECT_EQ(l.summary().total, 0);
  }
}

TEST(PStep, InverseUndoesForwardAndCostsMatch) {
  const auto c = random_chain(6, 3, 2);
  for (Index j = 0; j < 9; ++j) {
    for (Index x = 0; x < 6; ++x) {
      QueryLedger l;
      const auto fwd = apply_p_step(c, l, {j, x}, Direction::kForward);
      EXPECT_EQ(l.summary().total, p_step_queries(3, j, Direction::kForward) ? 1 : 0);
      EXPECT_EQ(fwd, p_step_direct(c, {j, x}, Direction::kForward));
      EXPECT_EQ(apply_p_step(c, l, fwd, Direction::kInverse), (CyclePoint{j, x}));
    }
  }
}

TEST(PStep, PowerThreeQIsIdentity) {
  for (Index q : {1, 2, 5}) {
    const auto c = random_chain(7, q, static_cast<std::uint64_t>(q));
    for (Index j = 0; j < 3 * q; ++j) {
      for (Index x = 0; x < 7; ++x) {
        CyclePoint p{j, x};
        for (Index k = 0; k < 3 * q; ++k) {
          p = p_step_direct(c, p, Direction::kForward);
          if (k + 1 < 3 * q) EXPECT_FALSE(p == (CyclePoint{j, x}) && p.j == j);
        }
        EXPECT_EQ(p, (CyclePoint{j, x}));
      }
    }
  }
}

TEST(SparseIndex, SwapExamples) {
  const auto sw = chain_from_arrays(2, 1, {{1, 0}});
  const SparseOracleView v(sw);
  QueryLedger l;
  EXPECT_EQ(oracle_sparse_index(v, l, 6, 1), 0);
  EXPECT_EQ(oracle_sparse_index(v, l, 6, 2), 3);
  EXPECT_EQ(oracle_sparse_index(v, l, 0, 1), 6);
  EXPECT_EQ(oracle_sparse_index(v, l, 0, 2), 11);
  EXPECT_THROW(oracle_sparse_index(v, l, 0, 3), BadK);
  EXPECT_THROW(oracle_sparse_index(v, l, 0, 0), BadK);
  EXPECT_THROW(oracle_sparse_index(v, l, 12, 1), IndexOutOfRange);
}

TEST(SparseIndex, IdentityChainOrdering) {
  const auto id = chain_from_arrays(1, 1, {{0}});
  const SparseOracleView v(id);
  QueryLedger l;
  EXPECT_EQ(oracle_sparse_index(v, l, 1, 1), 3);
  EXPECT_EQ(oracle_sparse_index(v, l, 1, 2), 4);
}

TEST(OracleEntry, Examples) {
  const auto sw = chain_from_arrays(2, 1, {{1, 0}});
  const SparseOracleView v(sw);
  QueryLedger l;
  EXPECT_NEAR(oracle_entry(v, l, 6, 0), 0.7310585786, 1e-10);
  EXPECT_NEAR(oracle_entry(v, l, 6, 3), -0.2689414214, 1e-10);
  for (Index i = 0; i < 12; ++i) EXPECT_EQ(oracle_entry(v, l, i, i), 0.0);
  const auto id = chain_from_arrays(1, 1, {{0}});
  const SparseOracleView vi(id);
  EXPECT_NEAR(oracle_entry(vi, l, 3, 0), kC1, 1e-15);
}

TEST(OracleEntry, EachCallChargesAtMostOnePiQuery) {
  const auto c = random_chain(3, 2, 9);
  const SparseOracleView v(c);
  const Index dim = v.space().dim();
  for (Index r = 0; r < dim; ++r) {
    for (Index col = 0; col < dim; ++col) {
      QueryLedger l;
      oracle_entry(v, l, r, col);
      EXPECT_LE(l.summary().total, 1);
      EXPECT_EQ(l.summary().total, l.summary().of(OracleKind::kPi).total);
    }
    for (int k = 1; k <= 2; ++k) {
      QueryLedger l;
      oracle_sparse_index(v, l, r, k);
      EXPECT_LE(l.summary().total, 1);
    }
  }
}

TEST(Materialize, MatchesIndependentBlockFormula) {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto c = random_chain(4, 3, seed);
    const SparseOracleView v(c);
    const Eigen::MatrixXd a = materialize_dense(v);
    const Eigen::MatrixXd ref = oracle::encoding_matrix(tables_of(c), 4);
    EXPECT_LE((a - ref).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Materialize, StructureOfSmallCases) {
  const auto id = chain_from_arrays(1, 1, {{0}});
  const Eigen::MatrixXd a = materialize_dense(SparseOracleView(id));
  ASSERT_EQ(a.rows(), 6);
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (Index r = 0; r < 6; ++r) EXPECT_EQ((a.row(r).array() != 0.0).count(), 2);

  const auto sw = chain_from_arrays(2, 1, {{1, 0}});
  const Eigen::MatrixXd b = materialize_dense(SparseOracleView(sw));
  ASSERT_EQ(b.rows(), 12);
  EXPECT_NEAR(b(6, 0), kC1, 1e-10);
  EXPECT_NEAR(b(6, 3), -kD1, 1e-10);
  EXPECT_EQ((b.row(6).array() != 0.0).count(), 2);
}

TEST(Materialize, OracleAssemblyAgreesAndIsCharged) {
  const auto c = random_chain(5, 2, 4);
  const SparseOracleView v(c);
  QueryLedger l;
  const Eigen::MatrixXd via = assemble_via_oracles(v, l);
  EXPECT_EQ((via - materialize_dense(v)).cwiseAbs().maxCoeff(), 0.0);
  const auto s = l.summary();
  EXPECT_EQ(s.depth, 2);
  EXPECT_LE(s.total, 4 * v.space().dim());
  EXPECT_GT(s.total, 0);
}

TEST(Materialize, RowEntriesDirectAgree) {
  const auto c = random_chain(3, 3, 8);
  const SparseOracleView v(c);
  const Eigen::MatrixXd a = materialize_dense(v);
  for (Index r = 0; r < v.space().dim(); ++r) {
    const auto e = row_entries_direct(v, r);
    EXPECT_LT(e[0].first, e[1].first);
    EXPECT_EQ(a(r, e[0].first), e[0].second);
    EXPECT_EQ(a(r, e[1].first), e[1].second);
  }
}

TEST(Materialize, CapEnforced) {
  const auto c = random_chain(4, 2, 1);
  EXPECT_THROW(materialize_dense(SparseOracleView(c), 47), TooLarge);
  EXPECT_NO_THROW(materialize_dense(SparseOracleView(c), 48));
}

TEST(MatrixMarket, EntryCountsAndRoundTrip) {
  const auto id = chain_from_arrays(1, 1, {{0}});
  const auto path = temp_file("id.mtx");
  export_matrix_market(SparseOracleView(id), path);
  std::ifstream in(path);
  std::string header, sizes;
  std::getline(in, header);
  EXPECT_EQ(header, "%%MatrixMarket matrix coordinate real general");
  std::getline(in, sizes);
  EXPECT_EQ(sizes, "6 6 12");

  const auto sw = chain_from_arrays(2, 1, {{1, 0}});
  const auto path2 = temp_file("sw.mtx");
  const SparseOracleView v(sw);
  export_matrix_market(v, path2);
  const Eigen::MatrixXd back = read_matrix_market(path2);
  EXPECT_LE((back - materialize_dense(v)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ((back.array() != 0.0).count(), 24);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST(MatrixMarket, MissingFileIsIoError) {
  EXPECT_THROW(read_matrix_market("/nonexistent/dir/x.mtx"), IoError);
}
