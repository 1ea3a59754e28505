#pragma once

#include "tate/cup.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tate {

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetError : public EncodingError {
 public:
  BudgetError(const std::string& what, std::size_t searched) : EncodingError(what), searched(searched) {}
  std::size_t searched;
};

inline constexpr std::size_t default_budget = 10000;

struct CupCheck {
  std::string identity;  // "x' cup x = [id_X']" or "x cup x' = [id_X]"
  bool passed = false;
  Vector product;   // canonical coordinates
  Vector expected;  // canonical coordinates of the identity class
  Vector residual;  // product - expected, reduced
};

struct EncodingCertificate {
  ModulePtr x_module;        // X
  ModulePtr x_prime_module;  // X'
  int r = 0;
  CohomClass x;        // in H^r(G, Hom(X', X))
  CohomClass x_prime;  // in H^-r(G, Hom(X, X'))
  std::vector<CupCheck> checks;

  bool valid() const;
  // First failed identity, or empty.
  std::string failure() const;
};

EncodingCertificate verify_encoding_elements(TateContext& ctx, const ModulePtr& x_mod, const ModulePtr& xp_mod, int r,
                                             const CohomClass& x, const CohomClass& x_prime);

// The two elements exhibited for (I_G, Z, 1): x(g) = g - 1 in H^1(G, Hom(Z, I_G))
// and x'(h - 1) = -[h = g0] in H^-1(G, Hom(I_G, Z)) for a fixed g0 != e.
std::pair<CohomClass, CohomClass> canonical_augmentation_elements(TateContext& ctx, const GroupPtr& g,
                                                                  std::size_t g0 = 1);

struct EncodingModuleVerdict {
  bool encoding = false;
  AbelianGroupData degree_r;  // H^r(G, X)
  AbelianGroupData endo;      // H^0(G, Hom(X, X))
  std::string reason;
};

// Throws EncodingError for modules with torsion.
EncodingModuleVerdict is_encoding_module(TateContext& ctx, const ModulePtr& x, int r);

struct EncodingSearch {
  std::optional<EncodingCertificate> certificate;
  std::size_t searched = 0;     // class pairs examined
  std::size_t space = 0;        // |H^r| * |H^-r|
  bool exhausted = false;       // whole space searched
  std::size_t orbit_size = 0;   // distinct [u] cup x over units u
  bool orbit_verifies = false;  // each ([u] cup x, x' cup [u^-1]) verifies
};

EncodingSearch find_encoding_element(TateContext& ctx, const ModulePtr& x_mod, const ModulePtr& xp_mod, int r,
                                     std::size_t budget = default_budget);

struct EquivalenceSearch {
  std::optional<std::pair<CohomClass, CohomClass>> witnesses;  // phi in H^0(Hom(X', X)), phi' in H^0(Hom(X, X'))
  std::size_t searched = 0;
  std::size_t space = 0;
  bool exhausted = false;
};

EquivalenceSearch cohomologically_equivalent(TateContext& ctx, const ModulePtr& x, const ModulePtr& xp,
                                             std::size_t budget = default_budget);

struct ZeroVerdict {
  bool zero = false;
  std::string route;  // "endomorphisms" or "sylow"
  AbelianGroupData endo;  // filled on the endomorphism route
};

// H^0(G, Hom(X, X)) = 0. Large Z-free modules are decided on Sylow
// subgroups (two consecutive vanishing degrees each).
ZeroVerdict is_cohomologically_zero(TateContext& ctx, const ModulePtr& x);

struct DualityReport {
  int degree = 0;
  AbelianGroupData left;   // H^i(G, Hom(X, Z))
  AbelianGroupData right;  // H^-i(G, X)
  IntMatrix values;        // entries mod |G|
  bool nondegenerate = false;
};

DualityReport duality_pairing_matrix(TateContext& ctx, const ModulePtr& x, int i);

struct NodeCertificate {
  std::string node;
  AbelianGroupData kernel_mod_image;  // trivial when exact
  bool exact = false;
};

struct ExactSequenceReport {
  std::vector<ModulePtr> modules;  // X = I^r, P_r, ..., P_1, Z
  std::vector<GModuleMap> maps;    // modules[k] -> modules[k + 1]
  std::vector<NodeCertificate> nodes;
  std::vector<ZeroVerdict> projective;  // for P_r, ..., P_1
  bool valid() const;
};

ExactSequenceReport encoding_resolution(TateContext& ctx, const GroupPtr& g, std::size_t r);

struct RingTable {
  AbelianGroupData additive;
  std::vector<Vector> elements;  // canonical coordinates, enumeration order
  std::vector<std::vector<std::size_t>> add, mul;
  std::size_t one = 0;
  std::vector<std::size_t> units;
  bool generated_by_identity = false;
};

RingTable endo_ring_table(TateContext& ctx, const ModulePtr& x, std::size_t budget = default_budget);

// Restriction of classes of degree >= -1 along a subgroup; `target` is the
// coefficient module over the subgroup.
CohomClass restrict_class(TateContext& ctx, const CohomClass& x, const SubgroupEmbedding& emb, const ModulePtr& target);

}  // namespace tate
