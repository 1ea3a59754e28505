#pragma once

#include "tate/group.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tate {

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GModule;
using ModulePtr = std::shared_ptr<const GModule>;

// Extra data carried by Hom_Z(X, N). Elements are stored in coordinates of
// the lattice L = {F : F R_X' in span R_N} where X' is the normalized source;
// `embedding` maps those coordinates to row-major n_N x n_X' matrices, and
// `from_source` maps original source coordinates to normalized ones.
struct HomData {
  ModulePtr source;
  ModulePtr target;
  IntMatrix embedding;    // (n_N * n_X') x rank
  IntMatrix from_source;  // n_X' x n_X
  bool plain = true;      // embedding and from_source are identities
};

// A finitely generated Z[G]-module Z^n / span(relations) with one action
// matrix per group element. Relations are stored in column Hermite form.
struct GModule {
  GroupPtr group;
  std::size_t rank = 0;
  IntMatrix relations;            // rank x k
  std::vector<IntMatrix> action;  // indexed by group element
  std::string name;
  std::shared_ptr<const HomData> hom;

  bool zfree() const noexcept { return relations.cols() == 0; }
  const IntMatrix& act(FiniteGroup::Index g) const { return action[g]; }
  // Sum of all action matrices.
  IntMatrix norm() const;
  // Exact content key for memo tables.
  const std::string& key() const;
  // Short hex digest of key().
  std::string digest() const;
  // Invariants of the underlying abelian group.
  AbelianGroupData underlying_group() const;
  // Whether two vectors agree modulo the relations.
  bool equivalent(std::span<const Integer> a, std::span<const Integer> b) const;
  bool is_zero_element(std::span<const Integer> v) const;

  mutable std::string key_cache;
};

// Builds a module from generator actions only; the rest of the action table is
// filled in by multiplying along the group's closure order.
ModulePtr make_module(GroupPtr g, std::size_t rank, IntMatrix relations,
                      const std::vector<IntMatrix>& generator_action, std::string name);
// Builds a module from a full action table.
ModulePtr make_module_full(GroupPtr g, std::size_t rank, IntMatrix relations,
                           std::vector<IntMatrix> action, std::string name,
                           std::shared_ptr<const HomData> hom = nullptr);

// Verifies action[e] = 1, action[g]action[h] = action[gh] and stability of
// the relation lattice, all modulo relations. Throws ModuleError naming the
// failing check.
void check_invariants(const GModule& m);

ModulePtr trivial_module(const GroupPtr& g, std::size_t free_rank, const std::vector<Integer>& torsion = {});
ModulePtr regular_module(const GroupPtr& g);
// Basis b_h = h - e for h != e, in table order.
ModulePtr augmentation_ideal(const GroupPtr& g);
ModulePtr hom_module(const ModulePtr& source, const ModulePtr& target);
ModulePtr dual_module(const ModulePtr& m);
ModulePtr tensor_module(const ModulePtr& a, const ModulePtr& b);
ModulePtr tensor_power(const ModulePtr& m, std::size_t k);
ModulePtr direct_sum(const ModulePtr& a, const ModulePtr& b);
ModulePtr restrict_module(const ModulePtr& m, const SubgroupEmbedding& emb);

struct GModuleMap {
  ModulePtr source;
  ModulePtr target;
  IntMatrix matrix;  // target.rank x source.rank

  Vector operator()(std::span<const Integer> v) const { return matrix * v; }
  bool is_well_defined() const;
  bool is_equivariant() const;
};

GModuleMap identity_map(const ModulePtr& m);
GModuleMap compose(const GModuleMap& f, const GModuleMap& g);  // f after g
GModuleMap tensor_maps(const GModuleMap& f, const GModuleMap& g, ModulePtr source = nullptr,
                       ModulePtr target = nullptr);
// Hom(X, f): F -> f o F.
GModuleMap hom_postcompose(const ModulePtr& x, const GModuleMap& f);
// Hom(f, N): F -> F o f.
GModuleMap hom_precompose(const GModuleMap& f, const ModulePtr& n);

struct NormalizedModule {
  ModulePtr module;
  GModuleMap to;    // original -> normalized
  GModuleMap from;  // normalized -> original
};
// Relations become diag(d_1 | d_2 | ...), torsion coordinates first.
NormalizedModule normalize_module(const ModulePtr& m);

// Hom elements as matrices in original coordinates (n_N x n_X) and back.
IntMatrix hom_matrix(const GModule& h, std::span<const Integer> coords);
Vector hom_element(const GModule& h, const IntMatrix& f);

// Bilinear G-map left x right -> out, stored as sparse terms.
struct PairingMap {
  struct Term {
    std::size_t out, left, right;
    Integer coef;
  };
  ModulePtr left;
  ModulePtr right;
  ModulePtr out;
  std::vector<Term> terms;

  Vector operator()(std::span<const Integer> a, std::span<const Integer> b) const;
  // Accumulates eta(a, b) into acc.
  void accumulate(Vector& acc, std::span<const Integer> a, std::span<const Integer> b) const;
  // out.rank x (left.rank * right.rank)
  IntMatrix matrix() const;
  bool is_equivariant() const;
};

PairingMap make_pairing(ModulePtr left, ModulePtr right, ModulePtr out, const IntMatrix& bilinear);
// Hom(X, A) x Hom(X', X) -> Hom(X', A), f (x) phi -> f o phi.
PairingMap composition_pairing(const ModulePtr& hom_x_a, const ModulePtr& hom_xp_x);
// Hom(X', X) x (X' (x) M) -> X (x) M.
PairingMap evaluation_pairing(const ModulePtr& hom_xp_x, const ModulePtr& xp_tensor_m, const ModulePtr& m);
// Hom(X, Z) x X -> Z.
PairingMap evaluation_to_scalars(const ModulePtr& dual_x, const ModulePtr& x);
// A x B -> A (x) B.
PairingMap tensor_pairing(const ModulePtr& a, const ModulePtr& b);
// Z x M -> M and M x Z -> M.
PairingMap left_unit_pairing(const ModulePtr& z, const ModulePtr& m);
PairingMap right_unit_pairing(const ModulePtr& m, const ModulePtr& z);

// Permutation of tensor factors: coordinates of f_0 (x) ... (x) f_{k-1}
// (first factor most significant) sent to factor order perm, i.e. output
// factor j is input factor perm[j]. Returns the output index of every input
// index.
std::vector<std::size_t> tensor_factor_permutation(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& perm);

}  // namespace tate
