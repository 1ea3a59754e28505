#pragma once

#include "tate/linalg.hpp"

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tate {

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite group as a full multiplication table. Index 0 is always the
// identity; the remaining elements keep the order of construction.
class FiniteGroup {
 public:
  using Index = std::size_t;
  using Table = std::vector<std::vector<Index>>;

  // Z/n generated by s; element k is s^k.
  static FiniteGroup cyclic(std::size_t n);
  // Validates Latin property, identity and (order <= 64) associativity.
  static FiniteGroup from_table(const Table& table, std::vector<std::string> labels = {});
  // Closure of permutations of {0..n-1}, n <= 8, images given 0-based.
  // Composition is (ab)(x) = a(b(x)).
  static FiniteGroup from_permutations(const std::vector<std::vector<std::size_t>>& generators);
  // Element (a, b) has index a * |H| + b.
  static FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

  std::size_t order() const noexcept { return table_.size(); }
  static constexpr Index identity() noexcept { return 0; }
  Index mul(Index a, Index b) const { return table_[a][b]; }
  Index inverse(Index a) const { return inverse_[a]; }
  const Table& table() const noexcept { return table_; }
  const std::string& label(Index a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  // A small generating set, fixed at construction.
  const std::vector<Index>& generators() const noexcept { return generators_; }

  std::size_t element_order(Index a) const;
  std::size_t exponent() const;
  bool is_abelian() const;
  bool is_cyclic() const;

  // Stable fingerprint of the table, used for memo and cache keys.
  std::string digest() const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

 private:
  FiniteGroup(Table table, std::vector<std::string> labels);
  void validate() const;
  void compute_generators();

  Table table_;
  std::vector<Index> inverse_;
  std::vector<std::string> labels_;
  std::vector<Index> generators_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

struct SubgroupEmbedding {
  GroupPtr subgroup;
  GroupPtr parent;
  std::vector<FiniteGroup::Index> inclusion;  // subgroup index -> parent index
};

// Smallest subgroup containing `elements`; elements enter in closure order.
SubgroupEmbedding subgroup_closure(const GroupPtr& g, const std::vector<FiniteGroup::Index>& elements);

// Invariants of G/[G,G], from the commutator subgroup closure.
AbelianGroupData abelianization_invariants(const FiniteGroup& g);

// A Sylow p-subgroup, grown greedily from the trivial group.
SubgroupEmbedding sylow_subgroup(const GroupPtr& g, std::size_t p);

std::vector<std::size_t> prime_divisors(std::size_t n);

}  // namespace tate
