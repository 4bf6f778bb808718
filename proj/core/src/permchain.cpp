#include "qlsplab/permchain.hpp"

#include <numeric>
#include <string>

#include "qlsplab/error.hpp"
#include "qlsplab/rng.hpp"

namespace qlsplab {

bool Permutation::is_bijection(std::span<const Index> images) {
  const auto n = static_cast<Index>(images.size());
  std::vector<bool> seen(images.size(), false);
  for (Index v : images) {
    if (v < 0 || v >= n) return false;
    if (seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

Permutation::Permutation(std::vector<Index> images) : images_(std::move(images)) {
  if (!is_bijection(images_)) {
    throw NotABijection(0, "permutation table is not a bijection");
  }
}

Permutation Permutation::identity(Index size) {
  std::vector<Index> images(static_cast<std::size_t>(size));
  std::iota(images.begin(), images.end(), Index{0});
  return Permutation(std::move(images), Unchecked{});
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) {
    inv[static_cast<std::size_t>(images_[x])] = static_cast<Index>(x);
  }
  return Permutation(std::move(inv), Unchecked{});
}

PermutationChain::PermutationChain(Index domain_size, std::vector<Permutation> perms)
    : domain_size_(domain_size), perms_(std::move(perms)) {
  if (domain_size_ < 1) throw BadShape("chain domain size N must be >= 1");
  if (perms_.empty()) throw BadShape("chain length q must be >= 1");
  inv_perms_.reserve(perms_.size());
  for (const Permutation& p : perms_) {
    if (p.size() != domain_size_) {
      throw BadShape("permutation size " + std::to_string(p.size()) +
                     " does not match N = " + std::to_string(domain_size_));
    }
    inv_perms_.push_back(p.inverse());
  }
}

const Permutation& PermutationChain::forward(Index j) const {
  if (j < 1 || j > length()) {
    throw IndexOutOfRange("permutation index " + std::to_string(j) +
                          " outside [1, " + std::to_string(length()) + "]");
  }
  return perms_[static_cast<std::size_t>(j - 1)];
}

const Permutation& PermutationChain::inverse(Index j) const {
  if (j < 1 || j > length()) {
    throw IndexOutOfRange("permutation index " + std::to_string(j) +
                          " outside [1, " + std::to_string(length()) + "]");
  }
  return inv_perms_[static_cast<std::size_t>(j - 1)];
}

PermutationChain chain_from_arrays(Index domain_size, Index length,
                                   const std::vector<std::vector<Index>>& tables) {
  if (domain_size < 1 || length < 1) {
    throw BadShape("N and q must both be >= 1");
  }
  if (static_cast<Index>(tables.size()) != length) {
    throw BadShape("expected " + std::to_string(length) + " tables, got " +
                   std::to_string(tables.size()));
  }
  std::vector<Permutation> perms;
  perms.reserve(tables.size());
  for (std::size_t j = 0; j < tables.size(); ++j) {
    if (static_cast<Index>(tables[j].size()) != domain_size) {
      throw BadShape("table " + std::to_string(j + 1) + " has length " +
                     std::to_string(tables[j].size()) + ", expected " +
                     std::to_string(domain_size));
    }
    if (!Permutation::is_bijection(tables[j])) {
      const auto idx = static_cast<Index>(j + 1);
      throw NotABijection(idx, "table " + std::to_string(idx) + " is not a bijection");
    }
    perms.emplace_back(tables[j]);
  }
  return PermutationChain(domain_size, std::move(perms));
}

PermutationChain random_chain(Index domain_size, Index length, std::uint64_t seed) {
  if (domain_size < 1 || length < 1) {
    throw BadShape("N and q must both be >= 1");
  }
  rng::SplitMix64 gen(seed);
  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(length));
  for (Index j = 0; j < length; ++j) {
    std::vector<Index> images(static_cast<std::size_t>(domain_size));
    std::iota(images.begin(), images.end(), Index{0});
    for (Index i = domain_size - 1; i >= 1; --i) {
      const auto k = static_cast<Index>(gen.uniform_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(k)]);
    }
    perms.emplace_back(std::move(images));
  }
  return PermutationChain(domain_size, std::move(perms));
}

Index prefix_compose(const PermutationChain& chain, Index j) {
  if (j < 0 || j > chain.length()) {
    throw IndexOutOfRange("prefix length " + std::to_string(j) + " outside [0, " +
                          std::to_string(chain.length()) + "]");
  }
  Index x = 0;
  for (Index i = 1; i <= j; ++i) x = chain.forward(i)(x);
  return x;
}

Index oracle_pi(const PermutationChain& chain, QueryLedger& ledger, Index j, Index x) {
  const Index q = chain.length();
  if (j < 1 || j > 2 * q) {
    throw IndexOutOfRange("oracle index j = " + std::to_string(j) + " outside [1, " +
                          std::to_string(2 * q) + "]");
  }
  if (x < 0 || x >= chain.domain_size()) {
    throw IndexOutOfRange("oracle element x = " + std::to_string(x) + " outside [0, " +
                          std::to_string(chain.domain_size()) + ")");
  }
  ledger.record(OracleKind::kPi);
  return j <= q ? chain.forward(j)(x) : chain.inverse(j - q)(x);
}

}  // namespace qlsplab
