#include "qlsplab/encoding.hpp"

#include <cmath>
#include <string>

#include "qlsplab/error.hpp"

namespace qlsplab {

namespace {

Index mod(Index a, Index m) {
  const Index r = a % m;
  return r < 0 ? r + m : r;
}

void check_point(const PermutationChain& chain, CyclePoint p) {
  if (p.j < 0 || p.j >= 3 * chain.length() || p.x < 0 || p.x >= chain.domain_size()) {
    throw IndexOutOfRange("cycle point (" + std::to_string(p.j) + ", " +
                          std::to_string(p.x) + ") out of range");
  }
}

void check_too_large(Index dim, Index cap) {
  if (dim > cap) {
    throw TooLarge("dimension " + std::to_string(dim) + " exceeds dense cap " +
                   std::to_string(cap));
  }
}

// Which O_pi index realizes the step, or 0 for the identity segment.
Index oracle_index_for_step(Index q, Index j, Direction dir) {
  if (dir == Direction::kForward) {
    if (j < q) return j + 1;                 // pi_{j+1}
    if (j < 2 * q) return 0;
    return q + (3 * q - j);                  // pi_{3q-j}^{-1}
  }
  // Undo the forward step that landed on j, which started from j - 1.
  const Index src = mod(j - 1, 3 * q);
  if (src < q) return q + (src + 1);         // pi_{src+1}^{-1}
  if (src < 2 * q) return 0;
  return 3 * q - src;                        // pi_{3q-src}
}

Index apply_oracle_index(const PermutationChain& chain, Index oracle_j, Index x) {
  const Index q = chain.length();
  return oracle_j <= q ? chain.forward(oracle_j)(x) : chain.inverse(oracle_j - q)(x);
}

Index next_layer(Index q, Index j, Direction dir) {
  return dir == Direction::kForward ? mod(j + 1, 3 * q) : mod(j - 1, 3 * q);
}

}  // namespace

IndexSpace::IndexSpace(Index domain_size, Index length) : n_(domain_size), q_(length) {
  if (n_ < 1 || q_ < 1) throw BadShape("index space needs N >= 1 and q >= 1");
}

Index IndexSpace::flatten(const BasisIndex& idx) const {
  if (idx.b < 0 || idx.b > 1 || idx.j < 0 || idx.j >= cycle() || idx.x < 0 ||
      idx.x >= n_) {
    throw IndexOutOfRange("basis index (" + std::to_string(idx.b) + ", " +
                          std::to_string(idx.j) + ", " + std::to_string(idx.x) +
                          ") out of range");
  }
  return idx.b * block_dim() + idx.j * n_ + idx.x;
}

BasisIndex IndexSpace::unflatten(Index flat) const {
  if (flat < 0 || flat >= dim()) {
    throw IndexOutOfRange("flat index " + std::to_string(flat) + " outside [0, " +
                          std::to_string(dim()) + ")");
  }
  const Index b = flat / block_dim();
  const Index rest = flat % block_dim();
  return {b, rest / n_, rest % n_};
}

bool p_step_queries(Index length, Index j, Direction dir) {
  return oracle_index_for_step(length, j, dir) != 0;
}

CyclePoint apply_p_step(const PermutationChain& chain, QueryLedger& ledger,
                        CyclePoint from, Direction dir) {
  check_point(chain, from);
  const Index q = chain.length();
  const Index oj = oracle_index_for_step(q, from.j, dir);
  const Index x = oj == 0 ? from.x : oracle_pi(chain, ledger, oj, from.x);
  return {next_layer(q, from.j, dir), x};
}

CyclePoint p_step_direct(const PermutationChain& chain, CyclePoint from, Direction dir) {
  check_point(chain, from);
  const Index q = chain.length();
  const Index oj = oracle_index_for_step(q, from.j, dir);
  const Index x = oj == 0 ? from.x : apply_oracle_index(chain, oj, from.x);
  return {next_layer(q, from.j, dir), x};
}

SparseOracleView::SparseOracleView(const PermutationChain& chain)
    : chain_(&chain), space_(chain.domain_size(), chain.length()) {
  const double decay = std::exp(-1.0 / static_cast<double>(chain.length()));
  c_ = 1.0 / (1.0 + decay);
  d_ = decay * c_;
}

namespace {

void check_flat(const IndexSpace& space, Index i) {
  if (i < 0 || i >= space.dim()) {
    throw IndexOutOfRange("flat index " + std::to_string(i) + " outside [0, " +
                          std::to_string(space.dim()) + ")");
  }
}

// Row (0,u) pairs with (1, P^{-1}u); row (1,u) with (0, Pu).
Direction shift_direction(Index b) {
  return b == 0 ? Direction::kInverse : Direction::kForward;
}

}  // namespace

Index oracle_sparse_index(const SparseOracleView& view, QueryLedger& ledger, Index row,
                          int k) {
  const IndexSpace& space = view.space();
  check_flat(space, row);
  if (k != 1 && k != 2) throw BadK("k must be 1 or 2, got " + std::to_string(k));
  const BasisIndex r = space.unflatten(row);
  const Index other = 1 - r.b;
  const Index diag = space.flatten({other, r.j, r.x});
  const CyclePoint p = apply_p_step(view.chain(), ledger, {r.j, r.x}, shift_direction(r.b));
  const Index shifted = space.flatten({other, p.j, p.x});
  const Index lo = std::min(diag, shifted);
  const Index hi = std::max(diag, shifted);
  return k == 1 ? lo : hi;
}

double oracle_entry(const SparseOracleView& view, QueryLedger& ledger, Index row,
                    Index col) {
  const IndexSpace& space = view.space();
  check_flat(space, row);
  check_flat(space, col);
  const BasisIndex r = space.unflatten(row);
  const BasisIndex c = space.unflatten(col);
  if (r.b == c.b) return 0.0;
  if (r.j == c.j && r.x == c.x) return view.c();
  const Direction dir = shift_direction(r.b);
  if (c.j != next_layer(space.length(), r.j, dir)) return 0.0;
  const CyclePoint p = apply_p_step(view.chain(), ledger, {r.j, r.x}, dir);
  return p.x == c.x ? -view.d() : 0.0;
}

std::array<std::pair<Index, double>, 2> row_entries_direct(const SparseOracleView& view,
                                                           Index row) {
  const IndexSpace& space = view.space();
  check_flat(space, row);
  const BasisIndex r = space.unflatten(row);
  const Index other = 1 - r.b;
  const CyclePoint p = p_step_direct(view.chain(), {r.j, r.x}, shift_direction(r.b));
  std::pair<Index, double> diag{space.flatten({other, r.j, r.x}), view.c()};
  std::pair<Index, double> shifted{space.flatten({other, p.j, p.x}), -view.d()};
  if (shifted.first < diag.first) return {shifted, diag};
  return {diag, shifted};
}

Eigen::MatrixXd materialize_dense(const SparseOracleView& view, Index dense_cap) {
  const IndexSpace& space = view.space();
  check_too_large(space.dim(), dense_cap);
  const PermutationChain& chain = view.chain();
  const Index half = space.block_dim();
  const Index n = space.domain_size();

  // Top-right block is c*I - d*P, bottom-left its transpose. P maps column
  // (j, x) to row p_step(j, x); the same constants go to both triangles.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(space.dim(), space.dim());
  for (Index j = 0; j < space.cycle(); ++j) {
    for (Index x = 0; x < n; ++x) {
      const Index w = j * n + x;
      const CyclePoint to = p_step_direct(chain, {j, x}, Direction::kForward);
      const Index u = to.j * n + to.x;
      a(w, half + w) = view.c();
      a(half + w, w) = view.c();
      a(u, half + w) = -view.d();
      a(half + w, u) = -view.d();
    }
  }
  return a;
}

Eigen::MatrixXd assemble_via_oracles(const SparseOracleView& view, QueryLedger& ledger,
                                     Index dense_cap) {
  const Index dim = view.space().dim();
  check_too_large(dim, dense_cap);
  std::vector<std::array<Index, 2>> cols(static_cast<std::size_t>(dim));
  ledger.begin_layer();
  for (Index row = 0; row < dim; ++row) {
    cols[static_cast<std::size_t>(row)] = {oracle_sparse_index(view, ledger, row, 1),
                                           oracle_sparse_index(view, ledger, row, 2)};
  }
  ledger.begin_layer();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (Index row = 0; row < dim; ++row) {
    for (Index col : cols[static_cast<std::size_t>(row)]) {
      a(row, col) = oracle_entry(view, ledger, row, col);
    }
  }
  return a;
}

}  // namespace qlsplab
