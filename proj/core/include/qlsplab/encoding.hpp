#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>

#include <Eigen/Dense>

#include "qlsplab/ledger.hpp"
#include "qlsplab/permchain.hpp"

namespace qlsplab {

inline constexpr Index kDefaultDenseCap = 32768;

/// Coordinate (b, j, x) of the 6qN-dimensional space: b in {0,1},
/// j in [0, 3q), x in [0, N).
struct BasisIndex {
  Index b = 0;
  Index j = 0;
  Index x = 0;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Flattening b*3qN + j*N + x; |0,0,0> is index 0 and each b-block is contiguous.
class IndexSpace {
 public:
  IndexSpace(Index domain_size, Index length);

  Index domain_size() const noexcept { return n_; }
  Index length() const noexcept { return q_; }
  Index cycle() const noexcept { return 3 * q_; }
  Index block_dim() const noexcept { return 3 * q_ * n_; }
  Index dim() const noexcept { return 6 * q_ * n_; }

  Index flatten(const BasisIndex& idx) const;
  BasisIndex unflatten(Index flat) const;

  friend bool operator==(const IndexSpace&, const IndexSpace&) = default;

 private:
  Index n_;
  Index q_;
};

/// A point (j, x) of the 3qN-dimensional register that P acts on.
struct CyclePoint {
  Index j = 0;
  Index x = 0;

  friend bool operator==(const CyclePoint&, const CyclePoint&) = default;
};

enum class Direction { kForward, kInverse };

/// True iff the P step starting at layer j in `dir` goes through a
/// permutation (and so costs one O_pi query). The middle segment is free.
bool p_step_queries(Index length, Index j, Direction dir);

/// One application of P (or P^{-1}) via O_pi:
///   j in [0, q):   (j, x) -> (j+1, pi_{j+1}(x))
///   j in [q, 2q):  (j, x) -> (j+1, x)
///   j in [2q, 3q): (j, x) -> ((j+1) mod 3q, pi_{3q-j}^{-1}(x))
/// Charges one PI event exactly when p_step_queries() says so.
CyclePoint apply_p_step(const PermutationChain& chain, QueryLedger& ledger,
                        CyclePoint from, Direction dir);

/// Same map without oracle accounting; the reference path.
CyclePoint p_step_direct(const PermutationChain& chain, CyclePoint from, Direction dir);

/// Oracle-backed view of
///   A = c * ( |0><1| (x) (I - e^{-1/q} P) + |1><0| (x) (I - e^{-1/q} P^{-1}) ),
/// c = 1/(1 + e^{-1/q}). Row (0,u) has non-zeros at (1,u) -> c and
/// (1,P^{-1}u) -> -d; row (1,u) at (0,u) -> c and (0,Pu) -> -d, d = e^{-1/q} c.
class SparseOracleView {
 public:
  explicit SparseOracleView(const PermutationChain& chain);

  const PermutationChain& chain() const noexcept { return *chain_; }
  const IndexSpace& space() const noexcept { return space_; }
  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

 private:
  const PermutationChain* chain_;
  IndexSpace space_;
  double c_;
  double d_;
};

/// O_s: the k-th (k = 1, 2) non-zero column of `row`, ascending order.
/// At most one PI event per call.
Index oracle_sparse_index(const SparseOracleView& view, QueryLedger& ledger,
                          Index row, int k);

/// O_A: A[row, col] in {0, c, -d}. At most one PI event per call; pairs that
/// cannot be P-neighbours are resolved without a query.
double oracle_entry(const SparseOracleView& view, QueryLedger& ledger, Index row,
                    Index col);

/// The two (column, value) pairs of `row`, ascending by column, computed
/// without touching a ledger.
std::array<std::pair<Index, double>, 2> row_entries_direct(const SparseOracleView& view,
                                                           Index row);

/// Dense A straight from the block definition (no ledger). TooLarge above cap.
Eigen::MatrixXd materialize_dense(const SparseOracleView& view,
                                  Index dense_cap = kDefaultDenseCap);

/// Dense A assembled only through O_s and O_A; every call is charged to
/// `ledger`. O_s queries for all rows form one layer, O_A queries another.
Eigen::MatrixXd assemble_via_oracles(const SparseOracleView& view, QueryLedger& ledger,
                                     Index dense_cap = kDefaultDenseCap);

/// MatrixMarket "coordinate real general", 1-based, sorted by (row, col),
/// values printed with %.17g.
void export_matrix_market(const SparseOracleView& view,
                          const std::filesystem::path& path,
                          Index dense_cap = kDefaultDenseCap);
void export_matrix_market(const Eigen::MatrixXd& dense,
                          const std::filesystem::path& path);
Eigen::MatrixXd read_matrix_market(const std::filesystem::path& path);

}  // namespace qlsplab
