#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qlsplab/ledger.hpp"

namespace qlsplab {

// Elements and indices share one signed type so modular index arithmetic
// never wraps.
using Index = std::int64_t;

/// A bijection on {0..N-1} stored as its image table.
class Permutation {
 public:
  /// Throws NotABijection (index 0) when `images` is not a permutation.
  explicit Permutation(std::vector<Index> images);

  static Permutation identity(Index size);
  static bool is_bijection(std::span<const Index> images);

  Index size() const noexcept { return static_cast<Index>(images_.size()); }
  Index operator()(Index x) const { return images_.at(static_cast<std::size_t>(x)); }
  std::span<const Index> images() const noexcept { return images_; }
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<Index> images, Unchecked) : images_(std::move(images)) {}

  std::vector<Index> images_;
};

/// pi_1, ..., pi_q over {0..N-1} with precomputed inverses. Permutations are
/// addressed 1-based, elements 0-based. Immutable once built.
class PermutationChain {
 public:
  PermutationChain(Index domain_size, std::vector<Permutation> perms);

  Index domain_size() const noexcept { return domain_size_; }
  Index length() const noexcept { return static_cast<Index>(perms_.size()); }

  /// pi_j for 1 <= j <= q.
  const Permutation& forward(Index j) const;
  /// pi_j^{-1} for 1 <= j <= q.
  const Permutation& inverse(Index j) const;

  friend bool operator==(const PermutationChain& a, const PermutationChain& b) {
    return a.domain_size_ == b.domain_size_ && a.perms_ == b.perms_;
  }

 private:
  Index domain_size_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> inv_perms_;
};

/// Validates q tables of length N. Throws BadShape on length mismatch and
/// NotABijection carrying the 1-based table index.
PermutationChain chain_from_arrays(Index domain_size, Index length,
                                   const std::vector<std::vector<Index>>& tables);

/// Independent uniform permutations by seeded Fisher-Yates over one splitmix64
/// stream: for i = N-1 down to 1 swap slot i with slot uniform_below(i+1),
/// starting from the identity, for pi_1 then pi_2 and so on.
PermutationChain random_chain(Index domain_size, Index length, std::uint64_t seed);

/// Pi_j(0) by direct composition; Pi_0(0) = 0.
Index prefix_compose(const PermutationChain& chain, Index j);

/// O_pi: pi_j(x) for 1 <= j <= q, pi_{j-q}^{-1}(x) for q < j <= 2q.
/// Appends one PI event to the ledger's current layer.
Index oracle_pi(const PermutationChain& chain, QueryLedger& ledger, Index j,
                Index x);

}  // namespace qlsplab
