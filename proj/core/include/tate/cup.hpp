#pragma once

#include "tate/cohomology.hpp"

namespace tate {

class UnsupportedDegreesError : public CohomologyError {
 public:
  using CohomologyError::CohomologyError;
};

// x in H^p(A), y in H^q(B), eta: A x B -> C. Direct formulas for p, q >= 0,
// (0, q), (p, 0), (-1, 1) and (1, -1); everything else is reduced by raising
// negative arguments to level 0 and shifting the product back down with sign
// (-1)^(shift of x * q).
CohomClass cup(TateContext& ctx, const CohomClass& x, const CohomClass& y, const PairingMap& eta);

// Always takes the raise/shift-down route (used to cross-check direct cases).
CohomClass cup_by_shifting(TateContext& ctx, const CohomClass& x, const CohomClass& y, const PairingMap& eta);

// (A (x) I^a) x (B (x) I^b) -> C (x) I^(a+b), eta on the first factors and
// juxtaposition on the I_G factors.
PairingMap shifted_pairing(TateContext& ctx, const PairingMap& eta, std::size_t a, std::size_t b);

// B (x) A -> A (x) B as a module map.
GModuleMap swap_map(const ModulePtr& b_tensor_a, const ModulePtr& a, const ModulePtr& b, const ModulePtr& a_tensor_b);

}  // namespace tate
