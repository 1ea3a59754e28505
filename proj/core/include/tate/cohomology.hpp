#pragma once

#include "tate/module.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tate {

class CohomologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public CohomologyError {
 public:
  using CohomologyError::CohomologyError;
};

class NotCocycleError : public CohomologyError {
 public:
  NotCocycleError(const std::string& what, std::vector<std::size_t> violated)
      : CohomologyError(what), violated(std::move(violated)) {}
  std::vector<std::size_t> violated;  // indices of nonzero coordinates of d(v)
};

// Normalized inhomogeneous cochains: functions on (G \ {e})^i, tuples indexed
// lexicographically with the first argument most significant. Element g != e
// is digit g - 1.
struct BarShape {
  std::size_t group_order;
  std::size_t degree;
  std::size_t tuples() const;
  std::vector<std::size_t> decode(std::size_t index) const;  // group elements
  std::size_t encode(const std::vector<std::size_t>& elements) const;
};

// Coboundary C^i -> C^{i+1}; i = 0 gives f -> (g -> g f - f).
IntMatrix bar_differential(const GModule& m, std::size_t i);
Vector apply_bar_differential(const GModule& m, std::size_t i, std::span<const Integer> f);

enum class Pipeline { norm_fixed, norm_kernel, bar, shifted };

// A computed Tate group. Representatives live at `level` (cochain degree,
// -1 for the norm kernel) in `level_module` = module (x) I_G^{(x) shift}.
class CohomologyGroup {
 public:
  int degree = 0;
  ModulePtr module;
  ModulePtr level_module;
  std::size_t shift = 0;
  int level = 0;
  Pipeline pipeline = Pipeline::bar;
  AbelianGroupData invariants;
  std::vector<Vector> representatives;

  // False when only invariants are available (shifted pipeline substituting
  // for an over-ceiling bar complex).
  bool reducible() const { return reducible_; }
  std::size_t cochain_dimension() const { return space_dim_; }
  bool is_trivial() const { return invariants.is_trivial(); }
  Integer order() const { return invariants.order(); }

  bool is_cocycle(std::span<const Integer> v) const;
  // Canonical coordinates, torsion entries reduced; throws NotCocycleError.
  Vector reduce(std::span<const Integer> v) const;
  // Representative for canonical coordinates.
  Vector lift(std::span<const Integer> coords) const;

  // Assembled by TateContext.
  struct Reduction {
    std::size_t space_dim = 0;
    std::shared_ptr<LatticeSolver> cocycles;  // over the cocycle basis
    IntMatrix project;                        // kept rows of U
    std::vector<Integer> divisors;            // per canonical coordinate, 0 = free
    std::function<std::vector<std::size_t>(std::span<const Integer>)> violations;
  };
  void set_reduction(Reduction r);

 private:
  bool reducible_ = false;
  std::size_t space_dim_ = 0;
  Reduction red_;
};

using CohomologyPtr = std::shared_ptr<const CohomologyGroup>;

// Memoizes Tate groups by (module content, degree). Not thread-safe; use one
// context per thread.
class TateContext {
 public:
  explicit TateContext(std::size_t ceiling = 100000) : ceiling_(ceiling) {}

  CohomologyPtr cohomology(const ModulePtr& m, int degree);
  // Explicit pipelines; cohomology() dispatches between them.
  CohomologyPtr bar_cohomology(const ModulePtr& m, std::size_t degree);
  // H^0(G, Hom(I_G^{(x) degree}, M)); invariants only in terms of M.
  CohomologyPtr shifted_cohomology(const ModulePtr& m, std::size_t degree);

  std::size_t ceiling() const { return ceiling_; }
  void set_ceiling(std::size_t c) { ceiling_ = c; }
  // Compare bar and shifted pipelines on every bar computation.
  void set_cross_check(bool on) { cross_check_ = on; }

  // Cached I_G and I_G^{(x) s} for a group.
  ModulePtr augmentation(const GroupPtr& g);
  ModulePtr augmentation_power(const GroupPtr& g, std::size_t s);
  ModulePtr trivial_z(const GroupPtr& g);
  // M (x) I_G^{(x) s}, canonical flattening.
  ModulePtr shifted_module(const ModulePtr& m, std::size_t s);

  std::size_t memo_size() const { return memo_.size(); }

 private:
  CohomologyPtr compute_fixed(const ModulePtr& m);
  CohomologyPtr compute_norm_kernel(const ModulePtr& m);

  std::size_t ceiling_;
  bool cross_check_ = false;
  std::map<std::pair<std::string, int>, CohomologyPtr> memo_;
  std::map<std::pair<std::string, std::size_t>, ModulePtr> powers_;
  std::map<std::string, ModulePtr> trivial_;
};

// A Tate class: for degree >= -1 the representative sits at that level in
// the module itself; for degree <= -2 it sits at level -1 in M (x) I^{(x) s}
// with s = -1 - degree, i.e. it is stored as x cup c^s.
struct CohomClass {
  int degree = 0;
  ModulePtr module;
  std::size_t shift = 0;
  Vector rep;

  int level() const { return degree + static_cast<int>(shift); }
};

std::size_t storage_shift(int degree);

CohomClass class_of(TateContext& ctx, const ModulePtr& m, int degree, Vector v);
CohomClass zero_class(TateContext& ctx, const ModulePtr& m, int degree);
CohomClass generator_class(TateContext& ctx, const ModulePtr& m, int degree, std::size_t k);
CohomClass class_from_coordinates(TateContext& ctx, const ModulePtr& m, int degree, std::span<const Integer> coords);

Vector coordinates(TateContext& ctx, const CohomClass& x);
bool classes_equal(TateContext& ctx, const CohomClass& x, const CohomClass& y);
bool is_zero_class(TateContext& ctx, const CohomClass& x);
CohomClass add(const CohomClass& x, const CohomClass& y);
CohomClass scale(const CohomClass& x, const Integer& k);

// phi: M -> N equivariant; applies phi (x) id on every cochain value.
CohomClass induced_map(TateContext& ctx, const GModuleMap& phi, const CohomClass& x);

// x -> x cup c with c(g) = g - e, landing in degree + 1 over M (x) I_G.
CohomClass shift_up(TateContext& ctx, const CohomClass& x);
// Inverse of shift_up; `base` is M where y lives over M (x) I_G.
CohomClass shift_down(TateContext& ctx, const CohomClass& y, const ModulePtr& base);
// Level -1 representative moved to level 0 by one more cup with c.
CohomClass raise_to_level0(TateContext& ctx, const CohomClass& x);

struct ShortExactSequence {
  GModuleMap inclusion;   // A -> B
  GModuleMap projection;  // B -> C
};

// Checks exactness and a Z-splitting; throws CohomologyError("not exact" /
// "not Z-split") with a witness.
IntMatrix check_short_exact(const ShortExactSequence& ses);
CohomClass connecting_delta(TateContext& ctx, const ShortExactSequence& ses, const CohomClass& x);

// (M (x) I_G) -> M (x) Z[G] -> M tensored with the augmentation sequence.
ShortExactSequence augmentation_sequence(TateContext& ctx, const ModulePtr& m);

}  // namespace tate
