#pragma once

#include "tate/matrix.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tate {

/// U * A * V = D with U, V unimodular and D diagonal, nonnegative, with
/// each diagonal entry dividing the next. U_inv is U^{-1}, kept alongside U
/// because cokernel generators are read off its columns.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix U_inv;
  IntMatrix D;
  IntMatrix V;

  std::vector<Integer> diagonal() const;
  std::size_t rank() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

/// Finitely generated abelian group Z^n / L in canonical coordinates.
///
/// Canonical coordinates list the torsion coordinates first (one per entry of
/// `torsion`, reduced into [0, d)) followed by `free_rank` free coordinates.
/// `project` maps ambient vectors to canonical coordinates (before reduction)
/// and `lift` maps canonical coordinates back to ambient representatives.
struct AbelianGroupData {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  IntMatrix lift;     // ambient x (torsion + free)
  IntMatrix project;  // (torsion + free) x ambient

  std::size_t num_generators() const { return torsion.size() + free_rank; }
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool is_finite() const { return free_rank == 0; }
  // Group order; zero when infinite.
  Integer order() const;
  // Reduce a canonical coordinate vector into normal form.
  Vector normalize(std::span<const Integer> coords) const;
  // Canonical coordinates of an ambient vector.
  Vector coordinates(std::span<const Integer> ambient) const;
  // "Z/2 + Z/4 + Z" style rendering; "0" for the trivial group.
  std::string to_string() const;
};

/// Z^rows / column-span(a).
AbelianGroupData cokernel_invariants(const IntMatrix& a);

/// Z-basis of {x : a x = 0} as columns, canonical: derived from the reduced
/// row echelon form of the row space, each column's first nonzero entry
/// positive. When the rank of `a` is known in advance, row reduction stops as
/// soon as it is reached.
IntMatrix kernel_basis(const IntMatrix& a, std::optional<std::size_t> known_rank = std::nullopt);

std::size_t rank(const IntMatrix& a);

/// Column Hermite normal form of the lattice spanned by the columns of a:
/// returns a basis (rank columns) in canonical echelon form.
IntMatrix column_hermite_basis(const IntMatrix& a);

/// Solves generators * x = b over Z. Built once per lattice; every solve is
/// forward substitution against a column echelon form.
class LatticeSolver {
 public:
  LatticeSolver() = default;
  explicit LatticeSolver(const IntMatrix& generators);

  std::optional<Vector> solve(std::span<const Integer> b) const;
  bool contains(std::span<const Integer> b) const { return solve(b).has_value(); }

  std::size_t rank() const noexcept { return rank_; }
  std::size_t ambient_dimension() const noexcept { return echelon_.rows(); }
  std::size_t num_generators() const noexcept { return transform_.rows(); }
  // Integer relations among the generators, as columns.
  IntMatrix relations() const;

 private:
  IntMatrix echelon_;    // generators * transform, first rank_ columns nonzero
  IntMatrix transform_;  // unimodular
  std::vector<std::size_t> pivot_rows_;
  std::size_t rank_ = 0;
};

/// x with a x = b modulo column-span(r); nullopt when no solution exists.
std::optional<Vector> solve_mod(const IntMatrix& a, const IntMatrix& r,
                                std::span<const Integer> b);

/// Checks whether every column of `a` lies in the column span of `lattice`.
bool columns_in_span(const IntMatrix& a, const IntMatrix& lattice);

}  // namespace tate
