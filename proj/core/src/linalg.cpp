#include "tate/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tate {

// ---------------------------------------------------------------- Smith form

std::vector<Integer> SmithDecomposition::diagonal() const {
  std::vector<Integer> d;
  const std::size_t n = std::min(D.rows(), D.cols());
  d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) d.push_back(D(i, i));
  return d;
}

std::size_t SmithDecomposition::rank() const {
  std::size_t r = 0;
  const std::size_t n = std::min(D.rows(), D.cols());
  while (r < n && !D(r, r).is_zero()) ++r;
  return r;
}

namespace {

struct SmithState {
  IntMatrix M, U, Ui, V;

  // Row ops are mirrored on U (same op) and U^{-1} (inverse column op).
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    M.swap_rows(a, b);
    U.swap_rows(a, b);
    Ui.swap_cols(a, b);
  }
  void add_row(std::size_t a, std::size_t b, const Integer& k) {  // row a += k row b
    M.add_row_multiple(a, b, k);
    U.add_row_multiple(a, b, k);
    Ui.add_col_multiple(b, a, -k);
  }
  void negate_row(std::size_t a) {
    M.negate_row(a);
    U.negate_row(a);
    Ui.negate_col(a);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    M.swap_cols(a, b);
    V.swap_cols(a, b);
  }
  void add_col(std::size_t a, std::size_t b, const Integer& k) {
    M.add_col_multiple(a, b, k);
    V.add_col_multiple(a, b, k);
  }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithState s{a, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n)};
  IntMatrix& M = s.M;

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t bi = m, bj = n;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (M(i, j).is_zero()) continue;
        if (bi == m || abs(M(i, j)) < abs(M(bi, bj))) {
          bi = i;
          bj = j;
          if (abs(M(bi, bj)).is_one()) break;
        }
      }
      if (bi != m && abs(M(bi, bj)).is_one()) break;
    }
    if (bi == m) break;
    s.swap_rows(t, bi);
    s.swap_cols(t, bj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (M(i, t).is_zero()) continue;
        s.add_row(i, t, -floor_div(M(i, t), M(t, t)));
        if (!M(i, t).is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (M(t, j).is_zero()) continue;
        s.add_col(j, t, -floor_div(M(t, j), M(t, t)));
        if (!M(t, j).is_zero()) clean = false;
      }
      if (!clean) {
        // A remainder smaller than the pivot: move it into place and repeat.
        std::size_t pi = t, pj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (!M(i, t).is_zero() && abs(M(i, t)) < abs(M(pi, pj))) pi = i, pj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (!M(t, j).is_zero() && abs(M(t, j)) < abs(M(pi, pj))) pi = t, pj = j;
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        continue;
      }
      // Divisibility of the trailing block by the pivot.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!divides(M(t, t), M(i, j))) {
            bad = i;
            break;
          }
      if (bad == m) break;
      s.add_row(t, bad, Integer(1));
    }
    if (M(t, t).sign() < 0) s.negate_row(t);
  }
  return {std::move(s.U), std::move(s.Ui), std::move(s.M), std::move(s.V)};
}

// ---------------------------------------------------------------- abelian groups

Integer AbelianGroupData::order() const {
  if (free_rank != 0) return Integer(0);
  Integer o(1);
  for (const auto& d : torsion) o *= d;
  return o;
}

Vector AbelianGroupData::normalize(std::span<const Integer> coords) const {
  Vector out(coords.begin(), coords.end());
  for (std::size_t k = 0; k < torsion.size(); ++k) out[k] = mod_floor(out[k], torsion[k]);
  return out;
}

Vector AbelianGroupData::coordinates(std::span<const Integer> ambient) const {
  return normalize(project * ambient);
}

std::string AbelianGroupData::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : torsion) {
    if (!first) os << " + ";
    os << "Z/" << d;
    first = false;
  }
  for (std::size_t k = 0; k < free_rank; ++k) {
    if (!first) os << " + ";
    os << "Z";
    first = false;
  }
  return os.str();
}

AbelianGroupData cokernel_invariants(const IntMatrix& a) {
  const std::size_t n = a.rows();
  SmithDecomposition snf = smith_normal_form(a);
  const auto diag = snf.diagonal();
  std::vector<std::size_t> torsion_idx, free_idx;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < diag.size() && !diag[k].is_zero()) {
      if (!diag[k].is_one()) torsion_idx.push_back(k);
    } else {
      free_idx.push_back(k);
    }
  }
  AbelianGroupData out;
  out.free_rank = free_idx.size();
  for (auto k : torsion_idx) out.torsion.push_back(diag[k]);
  std::vector<std::size_t> keep = torsion_idx;
  keep.insert(keep.end(), free_idx.begin(), free_idx.end());
  out.project = snf.U.select_rows(keep);
  out.lift = snf.U_inv.select_columns(keep);
  return out;
}

// ---------------------------------------------------------------- kernels

namespace {

void make_primitive(Vector& v) {
  Integer g(0);
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    g = gcd(g, x);
    if (g.is_one()) return;
  }
  if (g.is_zero() || g.is_one()) return;
  for (auto& x : v)
    if (!x.is_zero()) x = div_exact(x, g);
}

// v <- (p/g) v - (v[col]/g) e, cancelling column col; p = e[col] > 0.
void eliminate(Vector& v, const Vector& e, std::size_t col) {
  const Integer& p = e[col];
  if (p.is_one()) {
    const Integer k = v[col];
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!e[i].is_zero()) v[i].sub_mul(k, e[i]);
    return;
  }
  const Integer g = gcd(v[col], p);
  const Integer kv = div_exact(p, g);
  const Integer ke = div_exact(v[col], g);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!kv.is_one() && !v[i].is_zero()) v[i] *= kv;
    if (!e[i].is_zero()) v[i].sub_mul(ke, e[i]);
  }
}

// Fraction-free reduced row echelon form of a row space, built one row at a
// time. Every stored row is primitive with a positive pivot and zeros in all
// other pivot columns.
class RowReducer {
 public:
  explicit RowReducer(std::size_t n) : n_(n), row_of_col_(n, npos) {}

  bool add(Vector v) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (v[j].is_zero() || row_of_col_[j] == npos) continue;
      eliminate(v, rows_[row_of_col_[j]], j);
    }
    std::size_t f = 0;
    while (f < n_ && v[f].is_zero()) ++f;
    if (f == n_) return false;
    make_primitive(v);
    if (v[f].sign() < 0)
      for (auto& x : v) x = -x;
    for (auto& e : rows_) {
      if (e[f].is_zero()) continue;
      eliminate(e, v, f);
      make_primitive(e);
    }
    row_of_col_[f] = rows_.size();
    pivots_.push_back(f);
    rows_.push_back(std::move(v));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  std::size_t pivot_row(std::size_t col) const { return row_of_col_[col]; }
  const Vector& row(std::size_t k) const { return rows_[k]; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  bool is_pivot(std::size_t col) const { return row_of_col_[col] != npos; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t n_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> row_of_col_;
};

// Column echelon form by unimodular column operations. Rows are visited in
// `order`; returns the pivot rows and leaves the rank in *rank.
std::vector<std::size_t> column_echelon(IntMatrix& h, IntMatrix* transform,
                                        const std::vector<std::size_t>& order,
                                        std::size_t* rank) {
  const std::size_t cols = h.cols();
  std::vector<std::size_t> pivot_rows;
  std::size_t r = 0;
  auto swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    h.swap_cols(a, b);
    if (transform) transform->swap_cols(a, b);
  };
  auto addc = [&](std::size_t a, std::size_t b, const Integer& k) {
    h.add_col_multiple(a, b, k);
    if (transform) transform->add_col_multiple(a, b, k);
  };
  for (std::size_t i : order) {
    if (r == cols) break;
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = r; j < cols; ++j) {
        if (h(i, j).is_zero()) continue;
        if (best == cols || abs(h(i, j)) < abs(h(i, best))) best = j;
      }
      if (best == cols) break;
      swap(r, best);
      bool done = true;
      for (std::size_t j = r + 1; j < cols; ++j) {
        if (h(i, j).is_zero()) continue;
        addc(j, r, -floor_div(h(i, j), h(i, r)));
        if (!h(i, j).is_zero()) done = false;
      }
      if (!done) continue;
      if (h(i, r).sign() < 0) {
        h.negate_col(r);
        if (transform) transform->negate_col(r);
      }
      pivot_rows.push_back(i);
      ++r;
      break;
    }
  }
  *rank = r;
  return pivot_rows;
}

std::vector<std::size_t> natural_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

void canonical_sign(IntMatrix& basis) {
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    for (std::size_t r = 0; r < basis.rows(); ++r) {
      if (basis(r, c).is_zero()) continue;
      if (basis(r, c).sign() < 0) basis.negate_col(c);
      break;
    }
  }
}

}  // namespace

std::size_t rank(const IntMatrix& a) {
  RowReducer rr(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) rr.add(a.row_vector(i));
  return rr.rank();
}

IntMatrix kernel_basis(const IntMatrix& a, std::optional<std::size_t> known_rank) {
  const std::size_t n = a.cols();
  const std::size_t stop = known_rank ? std::min(*known_rank, n) : n;
  RowReducer rr(n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (rr.rank() == stop) break;
    rr.add(a.row_vector(i));
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!rr.is_pivot(j)) free_cols.push_back(j);
  const std::size_t f = free_cols.size();
  IntMatrix out(n, f);
  if (f == 0) return out;

  std::vector<std::size_t> big_rows;
  for (std::size_t k = 0; k < rr.rank(); ++k)
    if (!rr.row(k)[rr.pivots()[k]].is_one()) big_rows.push_back(k);

  // Lattice of admissible free-coordinate vectors y; identity when every
  // pivot is 1, otherwise {y : E_S y = 0 mod p_S}.
  IntMatrix free_lattice = IntMatrix::identity(f);
  if (!big_rows.empty()) {
    const std::size_t s = big_rows.size();
    IntMatrix sys(s, f + s);
    for (std::size_t a_ = 0; a_ < s; ++a_) {
      const Vector& e = rr.row(big_rows[a_]);
      for (std::size_t b = 0; b < f; ++b) sys(a_, b) = e[free_cols[b]];
      sys(a_, f + a_) = e[rr.pivots()[big_rows[a_]]];
    }
    IntMatrix h = sys;
    IntMatrix t = IntMatrix::identity(f + s);
    std::size_t r = 0;
    column_echelon(h, &t, natural_order(s), &r);
    IntMatrix gens = t.block(0, r, f, f + s - r);
    free_lattice = column_hermite_basis(gens);
  }

  out = IntMatrix(n, free_lattice.cols());
  for (std::size_t c = 0; c < free_lattice.cols(); ++c) {
    for (std::size_t b = 0; b < f; ++b) out(free_cols[b], c) = free_lattice(b, c);
    for (std::size_t k = 0; k < rr.rank(); ++k) {
      const Vector& e = rr.row(k);
      Integer acc(0);
      for (std::size_t b = 0; b < f; ++b)
        if (!e[free_cols[b]].is_zero() && !free_lattice(b, c).is_zero())
          acc.add_mul(e[free_cols[b]], free_lattice(b, c));
      out(rr.pivots()[k], c) = div_exact(-acc, e[rr.pivots()[k]]);
    }
  }
  canonical_sign(out);
  return out;
}

IntMatrix column_hermite_basis(const IntMatrix& a) {
  IntMatrix h = a;
  std::size_t r = 0;
  auto pivots = column_echelon(h, nullptr, natural_order(a.rows()), &r);
  for (std::size_t t = 0; t < r; ++t) {
    const std::size_t i = pivots[t];
    for (std::size_t j = 0; j < t; ++j) {
      if (h(i, j).is_zero()) continue;
      Integer q = floor_div(h(i, j), h(i, t));
      if (!q.is_zero()) h.add_col_multiple(j, t, -q);
    }
  }
  return h.block(0, 0, a.rows(), r);
}

// ---------------------------------------------------------------- lattice solver

LatticeSolver::LatticeSolver(const IntMatrix& generators)
    : echelon_(generators), transform_(IntMatrix::identity(generators.cols())) {
  // Sparse rows first: kernel bases carry unit rows, which then pivot at once.
  std::vector<std::size_t> nnz(generators.rows(), 0);
  for (std::size_t i = 0; i < generators.rows(); ++i)
    for (const auto& x : generators.row(i))
      if (!x.is_zero()) ++nnz[i];
  std::vector<std::size_t> order = natural_order(generators.rows());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nnz[a] < nnz[b]; });
  order.erase(std::remove_if(order.begin(), order.end(), [&](std::size_t i) { return nnz[i] == 0; }),
              order.end());
  pivot_rows_ = column_echelon(echelon_, &transform_, order, &rank_);
}

std::optional<Vector> LatticeSolver::solve(std::span<const Integer> b) const {
  if (b.size() != echelon_.rows()) throw std::invalid_argument("LatticeSolver: dimension mismatch");
  Vector w(rank_);
  for (std::size_t t = 0; t < rank_; ++t) {
    const std::size_t i = pivot_rows_[t];
    Integer s = b[i];
    for (std::size_t j = 0; j < t; ++j)
      if (!echelon_(i, j).is_zero() && !w[j].is_zero()) s.sub_mul(echelon_(i, j), w[j]);
    if (!divides(echelon_(i, t), s)) return std::nullopt;
    w[t] = div_exact(s, echelon_(i, t));
  }
  for (std::size_t i = 0; i < echelon_.rows(); ++i) {
    Integer s(0);
    for (std::size_t j = 0; j < rank_; ++j)
      if (!echelon_(i, j).is_zero() && !w[j].is_zero()) s.add_mul(echelon_(i, j), w[j]);
    if (s != b[i]) return std::nullopt;
  }
  Vector x(transform_.rows());
  for (std::size_t r = 0; r < transform_.rows(); ++r)
    for (std::size_t j = 0; j < rank_; ++j)
      if (!transform_(r, j).is_zero() && !w[j].is_zero()) x[r].add_mul(transform_(r, j), w[j]);
  return x;
}

IntMatrix LatticeSolver::relations() const {
  return transform_.block(0, rank_, transform_.rows(), transform_.cols() - rank_);
}

std::optional<Vector> solve_mod(const IntMatrix& a, const IntMatrix& r, std::span<const Integer> b) {
  LatticeSolver solver(hstack(a, r));
  auto x = solver.solve(b);
  if (!x) return std::nullopt;
  x->resize(a.cols());
  return x;
}

bool columns_in_span(const IntMatrix& a, const IntMatrix& lattice) {
  LatticeSolver solver(lattice);
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!solver.contains(a.column(c))) return false;
  return true;
}

}  // namespace tate
