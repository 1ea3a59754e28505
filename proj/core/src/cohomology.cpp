#include "tate/cohomology.hpp"

#include <sstream>

namespace tate {

// ---------------------------------------------------------------- bar cochains

std::size_t BarShape::tuples() const {
  std::size_t k = 1;
  for (std::size_t i = 0; i < degree; ++i) k *= group_order - 1;
  return k;
}

std::vector<std::size_t> BarShape::decode(std::size_t index) const {
  const std::size_t m = group_order - 1;
  std::vector<std::size_t> out(degree);
  for (std::size_t j = degree; j-- > 0;) {
    out[j] = index % m + 1;
    index /= m;
  }
  return out;
}

std::size_t BarShape::encode(const std::vector<std::size_t>& elements) const {
  std::size_t idx = 0;
  for (auto g : elements) idx = idx * (group_order - 1) + (g - 1);
  return idx;
}

namespace {

void add_block(IntMatrix& d, std::size_t row_block, std::size_t col_block, std::size_t n, const IntMatrix* a,
               int sign) {
  for (std::size_t r = 0; r < n; ++r) {
    if (a) {
      for (std::size_t c = 0; c < n; ++c) {
        const Integer& x = (*a)(r, c);
        if (x.is_zero()) continue;
        if (sign > 0) d(row_block * n + r, col_block * n + c) += x;
        else d(row_block * n + r, col_block * n + c) -= x;
      }
    } else {
      d(row_block * n + r, col_block * n + r) += Integer(sign);
    }
  }
}

// Calls term(out_tuple, src_tuple, element or npos, sign) for every term of
// the coboundary of a degree-i normalized cochain.
template <class F>
void for_each_bar_term(const FiniteGroup& g, std::size_t i, F&& term) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  const std::size_t order = g.order();
  if (order <= 1) return;
  if (i == 0) {
    for (std::size_t h = 1; h < order; ++h) {
      term(h - 1, 0, h, 1);
      term(h - 1, 0, npos, -1);
    }
    return;
  }
  BarShape out{order, i + 1}, src{order, i};
  std::vector<std::size_t> sub(i);
  for (std::size_t t = 0; t < out.tuples(); ++t) {
    auto els = out.decode(t);
    std::copy(els.begin() + 1, els.end(), sub.begin());
    term(t, src.encode(sub), els[0], 1);
    for (std::size_t j = 1; j <= i; ++j) {
      const std::size_t h = g.mul(els[j - 1], els[j]);
      if (h == 0) continue;
      std::size_t w = 0;
      for (std::size_t k = 0; k < j - 1; ++k) sub[w++] = els[k];
      sub[w++] = h;
      for (std::size_t k = j + 1; k <= i; ++k) sub[w++] = els[k];
      term(t, src.encode(sub), npos, (j % 2) ? -1 : 1);
    }
    std::copy(els.begin(), els.end() - 1, sub.begin());
    term(t, src.encode(sub), npos, ((i + 1) % 2) ? -1 : 1);
  }
}

}  // namespace

IntMatrix bar_differential(const GModule& m, std::size_t i) {
  const auto& g = *m.group;
  const std::size_t n = m.rank;
  BarShape out{g.order(), i + 1}, src{g.order(), i};
  IntMatrix d(out.tuples() * n, src.tuples() * n);
  for_each_bar_term(g, i, [&](std::size_t t, std::size_t s, std::size_t h, int sign) {
    add_block(d, t, s, n, h == static_cast<std::size_t>(-1) ? nullptr : &m.action[h], sign);
  });
  return d;
}

Vector apply_bar_differential(const GModule& m, std::size_t i, std::span<const Integer> f) {
  const auto& g = *m.group;
  const std::size_t n = m.rank;
  BarShape out{g.order(), i + 1};
  Vector r(out.tuples() * n);
  for_each_bar_term(g, i, [&](std::size_t t, std::size_t s, std::size_t h, int sign) {
    std::span<const Integer> block = f.subspan(s * n, n);
    if (h == static_cast<std::size_t>(-1)) {
      for (std::size_t k = 0; k < n; ++k) {
        if (sign > 0) r[t * n + k] += block[k];
        else r[t * n + k] -= block[k];
      }
    } else {
      Vector v = m.action[h] * block;
      for (std::size_t k = 0; k < n; ++k) r[t * n + k] += v[k];
    }
  });
  return r;
}

// ---------------------------------------------------------------- groups

bool CohomologyGroup::is_cocycle(std::span<const Integer> v) const {
  if (!reducible_) throw CohomologyError("group was computed without reduction data");
  if (v.size() != space_dim_) return false;
  return red_.cocycles->solve(v).has_value();
}

Vector CohomologyGroup::reduce(std::span<const Integer> v) const {
  if (!reducible_) throw CohomologyError("group was computed without reduction data");
  if (v.size() != space_dim_)
    throw CohomologyError("cochain has length " + std::to_string(v.size()) + ", expected " +
                          std::to_string(space_dim_));
  auto y = red_.cocycles->solve(v);
  if (!y) {
    auto bad = red_.violations ? red_.violations(v) : std::vector<std::size_t>{};
    std::ostringstream os;
    os << "not a cocycle in degree " << degree << "; violated relations:";
    for (std::size_t k = 0; k < bad.size() && k < 8; ++k) os << " " << bad[k];
    if (bad.size() > 8) os << " ...";
    throw NotCocycleError(os.str(), std::move(bad));
  }
  return invariants.normalize(red_.project * *y);
}

Vector CohomologyGroup::lift(std::span<const Integer> coords) const {
  Vector v(space_dim_);
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k].is_zero()) continue;
    for (std::size_t i = 0; i < space_dim_; ++i)
      if (!representatives[k][i].is_zero()) v[i].add_mul(coords[k], representatives[k][i]);
  }
  return v;
}

void CohomologyGroup::set_reduction(Reduction r) {
  space_dim_ = r.space_dim;
  reducible_ = static_cast<bool>(r.cocycles);
  red_ = std::move(r);
}

namespace {

std::size_t column_rank(const IntMatrix& b) { return rank(b.transpose()); }

// Z~ / B~ where Z~ is the projection to the first n coordinates of
// ker(system) and B~ is spanned by the columns of `boundaries`.
void build_subquotient(CohomologyGroup& h, const IntMatrix& system, std::size_t n, const IntMatrix& boundaries,
                       std::function<std::vector<std::size_t>(std::span<const Integer>)> violations) {
  const std::size_t brank = column_rank(boundaries);
  IntMatrix k = kernel_basis(system, system.cols() - brank);
  IntMatrix zb = k.block(0, 0, n, k.cols());
  if (zb.cols() != brank) throw CohomologyError("internal: cocycle rank differs from coboundary rank");
  auto solver = std::make_shared<LatticeSolver>(zb);
  IntMatrix c(zb.cols(), boundaries.cols());
  for (std::size_t j = 0; j < boundaries.cols(); ++j) {
    auto y = solver->solve(boundaries.column(j));
    if (!y) throw CohomologyError("internal: coboundary is not a cocycle");
    c.set_column(j, *y);
  }
  auto snf = smith_normal_form(c);
  auto diag = snf.diagonal();
  std::vector<std::size_t> keep;
  std::vector<Integer> divisors;
  for (std::size_t t = 0; t < zb.cols(); ++t) {
    Integer d = t < diag.size() ? diag[t] : Integer(0);
    if (d.is_one()) continue;
    keep.push_back(t);
    divisors.push_back(d);
  }
  AbelianGroupData inv;
  for (const auto& d : divisors) {
    if (d.is_zero()) ++inv.free_rank;
    else inv.torsion.push_back(d);
  }
  inv.project = snf.U.select_rows(keep);
  IntMatrix lift_cols = snf.U_inv.select_columns(keep);
  inv.lift = zb * lift_cols;
  h.invariants = inv;
  h.representatives.clear();
  for (std::size_t j = 0; j < keep.size(); ++j) h.representatives.push_back(inv.lift.column(j));
  CohomologyGroup::Reduction red;
  red.space_dim = n;
  red.cocycles = solver;
  red.project = inv.project;
  red.divisors = divisors;
  red.violations = std::move(violations);
  h.set_reduction(std::move(red));
}

// Indices i with residual[i] nonzero, after discounting residual blocks
// that vanish modulo the relations.
std::vector<std::size_t> residual_violations(const GModule& m, const Vector& residual) {
  std::vector<std::size_t> out;
  const std::size_t n = m.rank;
  if (n == 0) return out;
  for (std::size_t b = 0; b * n < residual.size(); ++b) {
    std::span<const Integer> blk(residual.data() + b * n, n);
    if (m.is_zero_element(blk)) continue;
    for (std::size_t k = 0; k < n; ++k)
      if (!blk[k].is_zero()) out.push_back(b * n + k);
  }
  return out;
}

void guard_rank(const GModule& m, std::size_t ceiling) {
  if (m.rank > ceiling)
    throw ResourceError("module " + m.name + " has rank " + std::to_string(m.rank) + "; ceiling is " +
                        std::to_string(ceiling));
}

IntMatrix relation_blocks(const IntMatrix& r, std::size_t copies) {
  return kron(IntMatrix::identity(copies), r);
}

}  // namespace

// ---------------------------------------------------------------- context

ModulePtr TateContext::augmentation(const GroupPtr& g) { return augmentation_power(g, 1); }

ModulePtr TateContext::augmentation_power(const GroupPtr& g, std::size_t s) {
  auto key = std::make_pair(g->digest(), s);
  auto it = powers_.find(key);
  if (it != powers_.end()) return it->second;
  ModulePtr out = s == 0 ? trivial_z(g) : (s == 1 ? augmentation_ideal(g) : tensor_module(augmentation_power(g, s - 1), augmentation(g)));
  powers_[key] = out;
  return out;
}

ModulePtr TateContext::trivial_z(const GroupPtr& g) {
  auto it = trivial_.find(g->digest());
  if (it != trivial_.end()) return it->second;
  auto z = trivial_module(g, 1);
  trivial_[g->digest()] = z;
  return z;
}

ModulePtr TateContext::shifted_module(const ModulePtr& m, std::size_t s) {
  if (s == 0) return m;
  return tensor_module(m, augmentation_power(m->group, s));
}

CohomologyPtr TateContext::compute_fixed(const ModulePtr& m) {
  guard_rank(*m, ceiling_);
  auto h = std::make_shared<CohomologyGroup>();
  h->degree = 0;
  h->module = h->level_module = m;
  h->level = 0;
  h->pipeline = Pipeline::norm_fixed;
  const std::size_t n = m->rank;
  const auto& gens = m->group->generators();
  IntMatrix stacked(gens.size() * n, n);
  for (std::size_t s = 0; s < gens.size(); ++s) {
    IntMatrix d = m->action[gens[s]] - IntMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) stacked(s * n + r, c) = d(r, c);
  }
  IntMatrix system = hstack(stacked, relation_blocks(m->relations, gens.size()));
  IntMatrix boundaries = hstack(m->norm(), m->relations);
  ModulePtr keep = m;
  build_subquotient(*h, system, n, boundaries, [keep, gens](std::span<const Integer> v) {
    Vector r;
    for (auto s : gens) {
      Vector w = keep->action[s] * v;
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= v[k];
      r.insert(r.end(), w.begin(), w.end());
    }
    return residual_violations(*keep, r);
  });
  return h;
}

CohomologyPtr TateContext::compute_norm_kernel(const ModulePtr& m) {
  guard_rank(*m, ceiling_);
  auto h = std::make_shared<CohomologyGroup>();
  h->degree = -1;
  h->module = h->level_module = m;
  h->level = -1;
  h->pipeline = Pipeline::norm_kernel;
  const std::size_t n = m->rank;
  IntMatrix norm = m->norm();
  IntMatrix system = hstack(norm, m->relations);
  IntMatrix boundaries = m->relations;
  for (auto s : m->group->generators()) boundaries = hstack(m->action[s] - IntMatrix::identity(n), boundaries);
  ModulePtr keep = m;
  build_subquotient(*h, system, n, boundaries, [keep, norm](std::span<const Integer> v) {
    return residual_violations(*keep, norm * v);
  });
  return h;
}

CohomologyPtr TateContext::bar_cohomology(const ModulePtr& m, std::size_t i) {
  if (i == 0) throw CohomologyError("bar pipeline starts in degree 1");
  auto key = std::make_pair("bar|" + m->key(), static_cast<int>(i));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const std::size_t order = m->group->order();
  BarShape next{order, i + 1}, here{order, i}, prev{order, i - 1};
  const std::size_t n = m->rank;
  if (next.tuples() * n > ceiling_)
    throw ResourceError("bar complex in degree " + std::to_string(i) + " needs " +
                        std::to_string(next.tuples() * n) + " cochain entries; ceiling is " +
                        std::to_string(ceiling_));
  auto h = std::make_shared<CohomologyGroup>();
  h->degree = static_cast<int>(i);
  h->module = h->level_module = m;
  h->level = static_cast<int>(i);
  h->pipeline = Pipeline::bar;
  IntMatrix system = hstack(bar_differential(*m, i), relation_blocks(m->relations, next.tuples()));
  IntMatrix boundaries = hstack(bar_differential(*m, i - 1), relation_blocks(m->relations, here.tuples()));
  ModulePtr keep = m;
  build_subquotient(*h, system, here.tuples() * n, boundaries, [keep, i](std::span<const Integer> v) {
    return residual_violations(*keep, apply_bar_differential(*keep, i, v));
  });
  (void)prev;
  if (cross_check_) {
    auto other = shifted_cohomology(m, i);
    if (other->invariants.torsion != h->invariants.torsion || other->invariants.free_rank != h->invariants.free_rank)
      throw CohomologyError("pipelines disagree in degree " + std::to_string(i) + " for " + m->name + ": bar " +
                            h->invariants.to_string() + ", shifted " + other->invariants.to_string());
  }
  memo_[key] = h;
  return h;
}

CohomologyPtr TateContext::shifted_cohomology(const ModulePtr& m, std::size_t i) {
  auto key = std::make_pair("shifted|" + m->key(), static_cast<int>(i));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  ModulePtr hom = hom_module(augmentation_power(m->group, i), m);
  if (hom->rank > ceiling_)
    throw ResourceError("shifted pipeline in degree " + std::to_string(i) + " needs rank " +
                        std::to_string(hom->rank) + "; ceiling is " + std::to_string(ceiling_));
  auto base = cohomology(hom, 0);
  auto h = std::make_shared<CohomologyGroup>();
  h->degree = static_cast<int>(i);
  h->module = m;
  h->level_module = hom;
  h->level = 0;
  h->pipeline = Pipeline::shifted;
  h->invariants = base->invariants;
  h->representatives = base->representatives;
  memo_[key] = h;
  return h;
}

CohomologyPtr TateContext::cohomology(const ModulePtr& m, int degree) {
  auto key = std::make_pair(m->key(), degree);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  CohomologyPtr out;
  if (degree == 0) {
    out = compute_fixed(m);
  } else if (degree == -1) {
    out = compute_norm_kernel(m);
  } else if (degree <= -2) {
    const std::size_t s = storage_shift(degree);
    ModulePtr level = shifted_module(m, s);
    auto base = cohomology(level, -1);
    auto h = std::make_shared<CohomologyGroup>(*base);
    h->degree = degree;
    h->module = m;
    h->level_module = level;
    h->shift = s;
    out = h;
  } else {
    const std::size_t i = static_cast<std::size_t>(degree);
    BarShape next{m->group->order(), i + 1};
    if (next.tuples() * m->rank <= ceiling_) out = bar_cohomology(m, i);
    else out = shifted_cohomology(m, i);
  }
  memo_[key] = out;
  return out;
}

// ---------------------------------------------------------------- classes

std::size_t storage_shift(int degree) { return degree <= -2 ? static_cast<std::size_t>(-1 - degree) : 0; }

namespace {

CohomologyPtr reducible_group(TateContext& ctx, const ModulePtr& m, int degree) {
  auto h = ctx.cohomology(m, degree);
  if (!h->reducible())
    throw ResourceError("degree " + std::to_string(degree) + " over " + m->name +
                        " exceeds the cochain ceiling; classes are unavailable");
  return h;
}

// Product over the tuple g_1 ... g_k.
std::size_t tuple_product(const FiniteGroup& g, const std::vector<std::size_t>& els, std::size_t upto) {
  std::size_t p = 0;
  for (std::size_t k = 0; k < upto; ++k) p = g.mul(p, els[k]);
  return p;
}

// h . b_g in the I_G basis, accumulated with coefficient k into out[base + .].
void add_translated_basis(const FiniteGroup& g, std::size_t h, std::size_t el, const Integer& k, Vector& out,
                          std::size_t base) {
  const std::size_t hg = g.mul(h, el);
  if (hg != 0) out[base + hg - 1] += k;
  if (h != 0) out[base + h - 1] -= k;
}

}  // namespace

CohomClass class_of(TateContext& ctx, const ModulePtr& m, int degree, Vector v) {
  auto h = reducible_group(ctx, m, degree);
  h->reduce(v);
  return {degree, m, storage_shift(degree), std::move(v)};
}

CohomClass zero_class(TateContext& ctx, const ModulePtr& m, int degree) {
  auto h = reducible_group(ctx, m, degree);
  return {degree, m, storage_shift(degree), Vector(h->cochain_dimension())};
}

CohomClass generator_class(TateContext& ctx, const ModulePtr& m, int degree, std::size_t k) {
  auto h = reducible_group(ctx, m, degree);
  if (k >= h->representatives.size()) throw CohomologyError("generator index out of range");
  return {degree, m, storage_shift(degree), h->representatives[k]};
}

CohomClass class_from_coordinates(TateContext& ctx, const ModulePtr& m, int degree, std::span<const Integer> coords) {
  auto h = reducible_group(ctx, m, degree);
  if (coords.size() != h->representatives.size()) throw CohomologyError("coordinate count mismatch");
  return {degree, m, storage_shift(degree), h->lift(coords)};
}

Vector coordinates(TateContext& ctx, const CohomClass& x) {
  return reducible_group(ctx, x.module, x.degree)->reduce(x.rep);
}

bool classes_equal(TateContext& ctx, const CohomClass& x, const CohomClass& y) {
  if (x.degree != y.degree || x.module->key() != y.module->key()) return false;
  return coordinates(ctx, x) == coordinates(ctx, y);
}

bool is_zero_class(TateContext& ctx, const CohomClass& x) {
  for (const auto& c : coordinates(ctx, x))
    if (!c.is_zero()) return false;
  return true;
}

CohomClass add(const CohomClass& x, const CohomClass& y) {
  if (x.degree != y.degree || x.rep.size() != y.rep.size()) throw CohomologyError("adding classes of different groups");
  return {x.degree, x.module, x.shift, x.rep + y.rep};
}

CohomClass scale(const CohomClass& x, const Integer& k) { return {x.degree, x.module, x.shift, tate::scaled(x.rep, k)}; }

CohomClass induced_map(TateContext& ctx, const GModuleMap& phi, const CohomClass& x) {
  if (!phi.is_well_defined() || !phi.is_equivariant()) throw CohomologyError("induced map needs a G-equivariant map");
  if (phi.source->key() != x.module->key()) throw CohomologyError("induced map: class lives over a different module");
  const std::size_t w = ctx.augmentation_power(x.module->group, x.shift)->rank;
  const std::size_t ns = phi.source->rank, nt = phi.target->rank;
  const std::size_t blocks = ns * w == 0 ? 0 : x.rep.size() / (ns * w);
  Vector out(blocks * nt * w);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t o = 0; o < nt; ++o)
      for (std::size_t k = 0; k < ns; ++k) {
        const Integer& f = phi.matrix(o, k);
        if (f.is_zero()) continue;
        for (std::size_t t = 0; t < w; ++t) out[(b * nt + o) * w + t].add_mul(f, x.rep[(b * ns + k) * w + t]);
      }
  if (blocks == 0) out = zero_class(ctx, phi.target, x.degree).rep;
  return {x.degree, phi.target, x.shift, std::move(out)};
}

CohomClass raise_to_level0(TateContext& ctx, const CohomClass& x) {
  if (x.level() != -1) throw CohomologyError("raise_to_level0 expects a level -1 class");
  const auto& g = *x.module->group;
  ModulePtr level = ctx.shifted_module(x.module, x.shift);
  ModulePtr up = ctx.shifted_module(x.module, x.shift + 1);
  const std::size_t n = level->rank, m = g.order() - 1;
  Vector out(n * m);
  for (std::size_t el = 1; el <= m; ++el) {
    Vector ga = level->action[el] * x.rep;
    for (std::size_t k = 0; k < n; ++k) out[k * m + el - 1] -= ga[k];
  }
  return {0, up, 0, std::move(out)};
}

CohomClass shift_up(TateContext& ctx, const CohomClass& x) {
  const auto& g = *x.module->group;
  ModulePtr up = ctx.shifted_module(x.module, 1);
  if (x.degree <= -2) return {x.degree + 1, up, x.shift - 1, x.rep};
  if (x.degree == -1) return raise_to_level0(ctx, x);
  const std::size_t d = static_cast<std::size_t>(x.degree);
  const std::size_t n = x.module->rank, m = g.order() - 1;
  BarShape src{g.order(), d}, dst{g.order(), d + 1};
  Vector out(dst.tuples() * n * m);
  for (std::size_t t = 0; t < dst.tuples(); ++t) {
    auto els = dst.decode(t);
    const std::size_t h = tuple_product(g, els, d);
    std::vector<std::size_t> head(els.begin(), els.end() - 1);
    const std::size_t s = src.encode(head);
    for (std::size_t k = 0; k < n; ++k) {
      const Integer& a = x.rep[s * n + k];
      if (a.is_zero()) continue;
      add_translated_basis(g, h, els[d], a, out, (t * n + k) * m);
    }
  }
  return {x.degree + 1, up, 0, std::move(out)};
}

CohomClass shift_down(TateContext& ctx, const CohomClass& y, const ModulePtr& base) {
  ModulePtr up = ctx.shifted_module(base, 1);
  if (y.module->key() != up->key()) throw CohomologyError("shift_down: class is not over base (x) I_G");
  const int d = y.degree - 1;
  if (d <= -2) return {d, base, y.shift + 1, y.rep};
  auto src = reducible_group(ctx, base, d);
  auto tgt = reducible_group(ctx, up, y.degree);
  const std::size_t k = src->representatives.size(), kt = tgt->representatives.size();
  IntMatrix phi(kt, k);
  for (std::size_t j = 0; j < k; ++j)
    phi.set_column(j, tgt->reduce(shift_up(ctx, CohomClass{d, base, 0, src->representatives[j]}).rep));
  Vector target = tgt->reduce(y.rep);
  IntMatrix mods(kt, 0);
  {
    std::vector<Vector> cols;
    for (std::size_t t = 0; t < kt; ++t)
      if (t < tgt->invariants.torsion.size()) cols.push_back(tate::scaled(unit_vector(kt, t), tgt->invariants.torsion[t]));
    mods = IntMatrix::from_columns(kt, cols);
  }
  auto a = solve_mod(phi, mods, target);
  if (!a) throw CohomologyError("shift_down: class is not in the image of the shift");
  return {d, base, 0, src->lift(*a)};
}

// ---------------------------------------------------------------- connecting maps

IntMatrix check_short_exact(const ShortExactSequence& ses) {
  const GModuleMap& i = ses.inclusion;
  const GModuleMap& p = ses.projection;
  if (i.target->key() != p.source->key()) throw CohomologyError("not exact: maps are not composable");
  for (const auto* f : {&i, &p}) {
    if (!f->is_well_defined()) throw CohomologyError("not exact: a map is not well defined on relations");
    if (!f->is_equivariant()) throw CohomologyError("not exact: a map is not G-equivariant");
  }
  const GModule& a = *i.source;
  const GModule& b = *p.source;
  const GModule& c = *p.target;
  IntMatrix comp = p.matrix * i.matrix;
  for (std::size_t k = 0; k < comp.cols(); ++k)
    if (!c.is_zero_element(comp.column(k)))
      throw CohomologyError("not exact: projection after inclusion is nonzero on generator " + std::to_string(k));
  // Injectivity modulo relations.
  {
    IntMatrix k = kernel_basis(hstack(i.matrix, b.relations));
    for (std::size_t j = 0; j < k.cols(); ++j) {
      Vector v = k.column(j);
      v.resize(a.rank);
      if (!a.is_zero_element(v)) throw CohomologyError("not exact: inclusion has a kernel");
    }
  }
  // ker p inside im i.
  {
    IntMatrix k = kernel_basis(hstack(p.matrix, c.relations));
    LatticeSolver img(hstack(i.matrix, b.relations));
    for (std::size_t j = 0; j < k.cols(); ++j) {
      Vector v = k.column(j);
      v.resize(b.rank);
      if (!img.contains(v)) throw CohomologyError("not exact: kernel of the projection exceeds the image");
    }
  }
  // Section.
  IntMatrix sigma(b.rank, c.rank);
  LatticeSolver onto(hstack(p.matrix, c.relations));
  for (std::size_t k = 0; k < c.rank; ++k) {
    auto x = onto.solve(unit_vector(c.rank, k));
    if (!x) throw CohomologyError("not exact: projection misses generator " + std::to_string(k));
    x->resize(b.rank);
    sigma.set_column(k, *x);
  }
  for (std::size_t k = 0; k < c.relations.cols(); ++k)
    if (!b.is_zero_element(sigma * c.relations.column(k)))
      throw CohomologyError("not Z-split: the section is not defined on relation " + std::to_string(k));
  return sigma;
}

namespace {

CohomClass delta_nonnegative_level(TateContext& ctx, const ShortExactSequence& ses, const IntMatrix& sigma,
                                   const CohomClass& x) {
  const GModule& a = *ses.inclusion.source;
  const GModule& b = *ses.projection.source;
  const GModule& c = *ses.projection.target;
  LatticeSolver pull(hstack(ses.inclusion.matrix, b.relations));
  auto pullback = [&](std::span<const Integer> v) {
    auto y = pull.solve(v);
    if (!y) throw CohomologyError("connecting map: coboundary does not come from the submodule");
    y->resize(a.rank);
    return *y;
  };
  if (x.level() == -1) {
    Vector lifted = sigma * x.rep;
    Vector nb = b.norm() * lifted;
    return class_of(ctx, ses.inclusion.source, 0, pullback(nb));
  }
  const std::size_t d = static_cast<std::size_t>(x.level());
  const std::size_t blocks = c.rank ? x.rep.size() / c.rank : 0;
  Vector lifted(blocks * b.rank);
  for (std::size_t t = 0; t < blocks; ++t) {
    Vector v = sigma * std::span<const Integer>(x.rep.data() + t * c.rank, c.rank);
    std::copy(v.begin(), v.end(), lifted.begin() + t * b.rank);
  }
  Vector db = apply_bar_differential(b, d, lifted);
  const std::size_t out_blocks = b.rank ? db.size() / b.rank : BarShape{b.group->order(), d + 1}.tuples();
  Vector out(out_blocks * a.rank);
  for (std::size_t t = 0; t < out_blocks && b.rank; ++t) {
    Vector v = pullback(std::span<const Integer>(db.data() + t * b.rank, b.rank));
    std::copy(v.begin(), v.end(), out.begin() + t * a.rank);
  }
  return class_of(ctx, ses.inclusion.source, static_cast<int>(d) + 1, std::move(out));
}

}  // namespace

CohomClass connecting_delta(TateContext& ctx, const ShortExactSequence& ses, const CohomClass& x) {
  if (x.module->key() != ses.projection.target->key()) throw CohomologyError("connecting map: class is over the wrong module");
  if (x.degree >= -1) {
    IntMatrix sigma = check_short_exact(ses);
    return delta_nonnegative_level(ctx, ses, sigma, x);
  }
  // Tensor the sequence with I^{(x) s}, connect, then shift down once.
  const std::size_t s = x.shift;
  const auto& g = x.module->group;
  ModulePtr is = ctx.augmentation_power(g, s);
  GModuleMap id_s = identity_map(is);
  ModulePtr as = ctx.shifted_module(ses.inclusion.source, s);
  ModulePtr bs = ctx.shifted_module(ses.inclusion.target, s);
  ModulePtr cs = ctx.shifted_module(ses.projection.target, s);
  ShortExactSequence t{tensor_maps(ses.inclusion, id_s, as, bs), tensor_maps(ses.projection, id_s, bs, cs)};
  IntMatrix sigma = check_short_exact(t);
  CohomClass lifted{-1, cs, 0, x.rep};
  CohomClass d0 = delta_nonnegative_level(ctx, t, sigma, lifted);
  ModulePtr base = ctx.shifted_module(ses.inclusion.source, s - 1);
  CohomClass down = shift_down(ctx, d0, base);
  return {x.degree + 1, ses.inclusion.source, s - 1, down.rep};
}

ShortExactSequence augmentation_sequence(TateContext& ctx, const ModulePtr& m) {
  const auto& g = m->group;
  ModulePtr ig = ctx.augmentation(g);
  ModulePtr zg = regular_module(g);
  ModulePtr z = ctx.trivial_z(g);
  IntMatrix inc(g->order(), g->order() - 1);
  for (std::size_t h = 1; h < g->order(); ++h) {
    inc(h, h - 1) = 1;
    inc(0, h - 1) = -1;
  }
  IntMatrix eps(1, g->order());
  for (std::size_t h = 0; h < g->order(); ++h) eps(0, h) = 1;
  GModuleMap id = identity_map(m);
  ModulePtr mi = ctx.shifted_module(m, 1);
  ModulePtr mzg = tensor_module(m, zg);
  return {tensor_maps(id, GModuleMap{ig, zg, inc}, mi, mzg), GModuleMap{mzg, m, kron(id.matrix, eps)}};
}

}  // namespace tate
