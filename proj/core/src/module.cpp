#include "tate/module.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace tate {

namespace {

IntMatrix clean_relations(std::size_t rank, const IntMatrix& rel) {
  if (rel.cols() == 0 || rel.is_zero()) return IntMatrix(rank, 0);
  if (rel.rows() != rank) throw ModuleError("relation matrix has wrong row count");
  return column_hermite_basis(rel);
}

std::string join_name(const std::string& f, const ModulePtr& a, const ModulePtr& b) {
  return f + "(" + a->name + "," + b->name + ")";
}

// Lattice of vectors whose columns are congruent to 0 modulo span(rel).
bool in_span(const IntMatrix& rel, std::span<const Integer> v) {
  if (is_zero(v)) return true;
  if (rel.cols() == 0) return false;
  return LatticeSolver(rel).contains(v);
}

bool columns_congruent_zero(const IntMatrix& diff, const IntMatrix& rel) {
  if (diff.is_zero()) return true;
  if (rel.cols() == 0) return false;
  LatticeSolver s(rel);
  for (std::size_t c = 0; c < diff.cols(); ++c) {
    Vector col = diff.column(c);
    if (!is_zero(col) && !s.contains(col)) return false;
  }
  return true;
}

struct HomState : HomData {
  IntMatrix to_source;  // n_X x n_X'
  std::shared_ptr<LatticeSolver> solver;
};

}  // namespace

IntMatrix GModule::norm() const {
  IntMatrix n(rank, rank);
  for (const auto& a : action) n += a;
  return n;
}

const std::string& GModule::key() const {
  if (!key_cache.empty()) return key_cache;
  std::ostringstream os;
  os << "r" << rank << "|g" << group->digest() << "|R" << relations.cols() << ":";
  for (const auto& x : relations.data()) os << x << ",";
  for (const auto& a : action) {
    os << "|";
    for (const auto& x : a.data()) os << x << ",";
  }
  key_cache = os.str();
  return key_cache;
}

std::string GModule::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AbelianGroupData GModule::underlying_group() const { return cokernel_invariants(relations); }

bool GModule::equivalent(std::span<const Integer> a, std::span<const Integer> b) const {
  Vector d(a.begin(), a.end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
  return in_span(relations, d);
}

bool GModule::is_zero_element(std::span<const Integer> v) const { return in_span(relations, v); }

ModulePtr make_module_full(GroupPtr g, std::size_t rank, IntMatrix relations, std::vector<IntMatrix> action,
                           std::string name, std::shared_ptr<const HomData> hom) {
  if (action.size() != g->order()) throw ModuleError("action table size differs from group order");
  for (const auto& a : action)
    if (a.rows() != rank || a.cols() != rank) throw ModuleError("action matrix has wrong shape");
  auto m = std::make_shared<GModule>();
  m->group = std::move(g);
  m->rank = rank;
  m->relations = clean_relations(rank, relations);
  m->action = std::move(action);
  m->name = std::move(name);
  m->hom = std::move(hom);
  return m;
}

ModulePtr make_module(GroupPtr g, std::size_t rank, IntMatrix relations,
                      const std::vector<IntMatrix>& generator_action, std::string name) {
  const auto& gens = g->generators();
  if (generator_action.size() != gens.size())
    throw ModuleError("expected " + std::to_string(gens.size()) + " generator matrices, got " +
                      std::to_string(generator_action.size()));
  const std::size_t n = g->order();
  std::vector<IntMatrix> action(n);
  std::vector<bool> done(n, false);
  action[0] = IntMatrix::identity(rank);
  done[0] = true;
  std::vector<FiniteGroup::Index> queue{0};
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto y = g->mul(queue[k], gens[i]);
      if (done[y]) continue;
      action[y] = action[queue[k]] * generator_action[i];
      done[y] = true;
      queue.push_back(y);
    }
  }
  return make_module_full(std::move(g), rank, std::move(relations), std::move(action), std::move(name));
}

void check_invariants(const GModule& m) {
  const auto& g = *m.group;
  const IntMatrix& r = m.relations;
  if (!columns_congruent_zero(m.action[0] - IntMatrix::identity(m.rank), r))
    throw ModuleError("identity does not act trivially");
  for (std::size_t a = 0; a < g.order(); ++a) {
    if (r.cols() && !columns_congruent_zero(m.action[a] * r, r))
      throw ModuleError("action of element " + std::to_string(a) + " does not preserve relations");
    for (std::size_t b = 0; b < g.order(); ++b) {
      if (!columns_congruent_zero(m.action[a] * m.action[b] - m.action[g.mul(a, b)], r))
        throw ModuleError("action is not multiplicative at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    }
  }
}

// ---------------------------------------------------------------- constructors

ModulePtr trivial_module(const GroupPtr& g, std::size_t free_rank, const std::vector<Integer>& torsion) {
  const std::size_t t = torsion.size(), n = t + free_rank;
  IntMatrix rel(n, t);
  std::string name;
  for (std::size_t i = 0; i < t; ++i) {
    if (torsion[i] < Integer(2)) throw ModuleError("torsion entries must be at least 2");
    rel(i, i) = torsion[i];
    name += (name.empty() ? "" : "+") + ("Z/" + torsion[i].to_string());
  }
  if (free_rank == 1) name += (name.empty() ? "" : "+") + std::string("Z");
  else if (free_rank > 1) name += (name.empty() ? "" : "+") + ("Z^" + std::to_string(free_rank));
  if (name.empty()) name = "0";
  return make_module_full(g, n, rel, std::vector<IntMatrix>(g->order(), IntMatrix::identity(n)), name);
}

ModulePtr regular_module(const GroupPtr& g) {
  const std::size_t n = g->order();
  std::vector<IntMatrix> action;
  for (std::size_t a = 0; a < n; ++a) {
    IntMatrix m(n, n);
    for (std::size_t h = 0; h < n; ++h) m(g->mul(a, h), h) = 1;
    action.push_back(std::move(m));
  }
  return make_module_full(g, n, IntMatrix(n, 0), std::move(action), "ZG");
}

ModulePtr augmentation_ideal(const GroupPtr& g) {
  const std::size_t n = g->order(), r = n - 1;
  std::vector<IntMatrix> action;
  for (std::size_t a = 0; a < n; ++a) {
    IntMatrix m(r, r);
    for (std::size_t h = 1; h < n; ++h) {
      const std::size_t gh = g->mul(a, h);
      if (gh != 0) m(gh - 1, h - 1) += 1;
      if (a != 0) m(a - 1, h - 1) -= 1;
    }
    action.push_back(std::move(m));
  }
  return make_module_full(g, r, IntMatrix(r, 0), std::move(action), "IG");
}

ModulePtr hom_module(const ModulePtr& x, const ModulePtr& n) {
  const auto& g = x->group;
  const std::size_t nn = n->rank;
  std::vector<IntMatrix> action;
  if (x->zfree()) {
    const std::size_t nx = x->rank;
    for (std::size_t a = 0; a < g->order(); ++a)
      action.push_back(kron(n->action[a], x->action[g->inverse(a)].transpose()));
    auto data = std::make_shared<HomState>();
    data->source = x;
    data->target = n;
    data->plain = true;
    return make_module_full(g, nn * nx, kron(n->relations, IntMatrix::identity(nx)), std::move(action),
                            join_name("hom", x, n), data);
  }

  auto norm = normalize_module(x);
  const GModule& xp = *norm.module;
  const std::size_t np = xp.rank, t = xp.relations.cols();
  // Column j of F lies in {v : d_j v in span R_N} for torsion coordinates.
  std::vector<IntMatrix> lattices;
  for (std::size_t j = 0; j < np; ++j) {
    if (j < t) {
      const Integer& d = xp.relations(j, j);
      IntMatrix sys = hstack(IntMatrix::identity(nn).scaled(d), n->relations.scaled(Integer(-1)));
      IntMatrix k = kernel_basis(sys);
      lattices.push_back(column_hermite_basis(k.block(0, 0, nn, k.cols())));
    } else {
      lattices.push_back(IntMatrix::identity(nn));
    }
  }
  std::size_t rank = 0;
  for (const auto& l : lattices) rank += l.cols();
  IntMatrix emb(nn * np, rank);
  IntMatrix rel(rank, 0);
  std::vector<Vector> rel_cols;
  std::size_t off = 0;
  for (std::size_t j = 0; j < np; ++j) {
    const IntMatrix& l = lattices[j];
    for (std::size_t c = 0; c < l.cols(); ++c)
      for (std::size_t i = 0; i < nn; ++i) emb(i * np + j, off + c) = l(i, c);
    if (l.cols() && n->relations.cols()) {
      LatticeSolver s(l);
      for (std::size_t c = 0; c < n->relations.cols(); ++c) {
        auto y = s.solve(n->relations.column(c));
        if (!y) throw ModuleError("internal: relation lattice not contained in hom lattice");
        Vector col(rank);
        for (std::size_t k = 0; k < l.cols(); ++k) col[off + k] = (*y)[k];
        rel_cols.push_back(std::move(col));
      }
    }
    off += l.cols();
  }
  rel = IntMatrix::from_columns(rank, rel_cols);

  auto data = std::make_shared<HomState>();
  data->source = x;
  data->target = n;
  data->embedding = emb;
  data->from_source = norm.to.matrix;
  data->to_source = norm.from.matrix;
  data->plain = false;
  data->solver = std::make_shared<LatticeSolver>(emb);
  for (std::size_t a = 0; a < g->order(); ++a) {
    IntMatrix full = kron(n->action[a], xp.action[g->inverse(a)].transpose()) * emb;
    IntMatrix m(rank, rank);
    for (std::size_t c = 0; c < rank; ++c) {
      auto y = data->solver->solve(full.column(c));
      if (!y) throw ModuleError("internal: hom lattice not stable under the action");
      m.set_column(c, *y);
    }
    action.push_back(std::move(m));
  }
  return make_module_full(g, rank, rel, std::move(action), join_name("hom", x, n), data);
}

ModulePtr dual_module(const ModulePtr& m) {
  auto out = hom_module(m, trivial_module(m->group, 1));
  auto copy = std::make_shared<GModule>(*out);
  copy->name = "dual(" + m->name + ")";
  return copy;
}

ModulePtr tensor_module(const ModulePtr& a, const ModulePtr& b) {
  const auto& g = a->group;
  std::vector<IntMatrix> action;
  for (std::size_t k = 0; k < g->order(); ++k) action.push_back(kron(a->action[k], b->action[k]));
  IntMatrix rel = hstack(kron(a->relations, IntMatrix::identity(b->rank)), kron(IntMatrix::identity(a->rank), b->relations));
  return make_module_full(g, a->rank * b->rank, rel, std::move(action), join_name("tensor", a, b));
}

ModulePtr tensor_power(const ModulePtr& m, std::size_t k) {
  if (k == 0) return trivial_module(m->group, 1);
  ModulePtr out = m;
  for (std::size_t i = 1; i < k; ++i) out = tensor_module(out, m);
  if (k > 1) {
    auto copy = std::make_shared<GModule>(*out);
    copy->name = "tpow(" + m->name + "," + std::to_string(k) + ")";
    copy->key_cache.clear();
    return copy;
  }
  return out;
}

ModulePtr direct_sum(const ModulePtr& a, const ModulePtr& b) {
  if (!(*a->group == *b->group)) throw ModuleError("direct sum of modules over different groups");
  std::vector<IntMatrix> action;
  for (std::size_t k = 0; k < a->group->order(); ++k) action.push_back(block_diagonal(a->action[k], b->action[k]));
  return make_module_full(a->group, a->rank + b->rank, block_diagonal(a->relations, b->relations), std::move(action),
                          join_name("sum", a, b));
}

ModulePtr restrict_module(const ModulePtr& m, const SubgroupEmbedding& emb) {
  if (!(*emb.parent == *m->group)) throw ModuleError("subgroup does not embed into the module's group");
  std::vector<IntMatrix> action;
  for (auto idx : emb.inclusion) action.push_back(m->action[idx]);
  return make_module_full(emb.subgroup, m->rank, m->relations, std::move(action), "res(" + m->name + ")");
}

NormalizedModule normalize_module(const ModulePtr& m) {
  const std::size_t n = m->rank;
  if (m->zfree()) return {m, identity_map(m), identity_map(m)};
  auto snf = smith_normal_form(m->relations);
  auto diag = snf.diagonal();
  std::vector<std::size_t> keep;
  std::vector<Integer> divisors;
  for (std::size_t k = 0; k < n; ++k) {
    if (k < diag.size() && diag[k].is_one()) continue;
    keep.push_back(k);
    if (k < diag.size() && !diag[k].is_zero()) divisors.push_back(diag[k]);
  }
  const std::size_t np = keep.size(), t = divisors.size();
  IntMatrix p = snf.U.select_rows(keep);
  IntMatrix q = snf.U_inv.select_columns(keep);
  std::vector<IntMatrix> action;
  for (const auto& a : m->action) {
    IntMatrix b = p * a * q;
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < np; ++j) b(i, j) = mod_floor(b(i, j), divisors[i]);
    action.push_back(std::move(b));
  }
  IntMatrix rel(np, t);
  for (std::size_t i = 0; i < t; ++i) rel(i, i) = divisors[i];
  auto out = make_module_full(m->group, np, rel, std::move(action), m->name);
  return {out, GModuleMap{m, out, p}, GModuleMap{out, m, q}};
}

// ---------------------------------------------------------------- maps

bool GModuleMap::is_well_defined() const {
  if (source->relations.cols() == 0) return true;
  return columns_congruent_zero(matrix * source->relations, target->relations);
}

bool GModuleMap::is_equivariant() const {
  for (auto s : source->group->generators())
    if (!columns_congruent_zero(matrix * source->action[s] - target->action[s] * matrix, target->relations))
      return false;
  return true;
}

GModuleMap identity_map(const ModulePtr& m) { return {m, m, IntMatrix::identity(m->rank)}; }

GModuleMap compose(const GModuleMap& f, const GModuleMap& g) { return {g.source, f.target, f.matrix * g.matrix}; }

GModuleMap tensor_maps(const GModuleMap& f, const GModuleMap& g, ModulePtr source, ModulePtr target) {
  if (!source) source = tensor_module(f.source, g.source);
  if (!target) target = tensor_module(f.target, g.target);
  return {source, target, kron(f.matrix, g.matrix)};
}

IntMatrix hom_matrix(const GModule& h, std::span<const Integer> coords) {
  if (!h.hom) throw ModuleError("module is not a hom module");
  const auto& d = *h.hom;
  const std::size_t nn = d.target->rank, nx = d.source->rank;
  if (d.plain) {
    IntMatrix f(nn, nx);
    for (std::size_t i = 0; i < nn; ++i)
      for (std::size_t j = 0; j < nx; ++j) f(i, j) = coords[i * nx + j];
    return f;
  }
  Vector flat = d.embedding * coords;
  const std::size_t np = d.from_source.rows();
  IntMatrix fp(nn, np);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < np; ++j) fp(i, j) = flat[i * np + j];
  return fp * d.from_source;
}

Vector hom_element(const GModule& h, const IntMatrix& f) {
  if (!h.hom) throw ModuleError("module is not a hom module");
  const auto& d = static_cast<const HomState&>(*h.hom);
  if (d.plain) return f.data();
  IntMatrix fp = f * d.to_source;
  auto y = d.solver->solve(fp.data());
  if (!y) throw ModuleError("matrix does not define a homomorphism on the torsion source");
  return *y;
}

GModuleMap hom_postcompose(const ModulePtr& x, const GModuleMap& f) {
  auto src = hom_module(x, f.source);
  auto tgt = hom_module(x, f.target);
  if (src->hom->plain && tgt->hom->plain) return {src, tgt, kron(f.matrix, IntMatrix::identity(x->rank))};
  IntMatrix m(tgt->rank, src->rank);
  for (std::size_t k = 0; k < src->rank; ++k)
    m.set_column(k, hom_element(*tgt, f.matrix * hom_matrix(*src, unit_vector(src->rank, k))));
  return {src, tgt, m};
}

GModuleMap hom_precompose(const GModuleMap& f, const ModulePtr& n) {
  auto src = hom_module(f.target, n);
  auto tgt = hom_module(f.source, n);
  if (src->hom->plain && tgt->hom->plain) return {src, tgt, kron(IntMatrix::identity(n->rank), f.matrix.transpose())};
  IntMatrix m(tgt->rank, src->rank);
  for (std::size_t k = 0; k < src->rank; ++k)
    m.set_column(k, hom_element(*tgt, hom_matrix(*src, unit_vector(src->rank, k)) * f.matrix));
  return {src, tgt, m};
}

// ---------------------------------------------------------------- pairings

Vector PairingMap::operator()(std::span<const Integer> a, std::span<const Integer> b) const {
  Vector out(this->out->rank);
  accumulate(out, a, b);
  return out;
}

void PairingMap::accumulate(Vector& acc, std::span<const Integer> a, std::span<const Integer> b) const {
  for (const auto& t : terms) {
    if (a[t.left].is_zero() || b[t.right].is_zero()) continue;
    Integer p = a[t.left] * b[t.right];
    acc[t.out].add_mul(p, t.coef);
  }
}

IntMatrix PairingMap::matrix() const {
  IntMatrix m(out->rank, left->rank * right->rank);
  for (const auto& t : terms) m(t.out, t.left * right->rank + t.right) += t.coef;
  return m;
}

bool PairingMap::is_equivariant() const {
  IntMatrix b = matrix();
  const IntMatrix& rel = out->relations;
  // Well defined on relations of either factor.
  if (!columns_congruent_zero(b * kron(left->relations, IntMatrix::identity(right->rank)), rel)) return false;
  if (!columns_congruent_zero(b * kron(IntMatrix::identity(left->rank), right->relations), rel)) return false;
  for (auto s : out->group->generators())
    if (!columns_congruent_zero(b * kron(left->action[s], right->action[s]) - out->action[s] * b, rel)) return false;
  return true;
}

PairingMap make_pairing(ModulePtr left, ModulePtr right, ModulePtr out, const IntMatrix& bilinear) {
  PairingMap p{std::move(left), std::move(right), std::move(out), {}};
  const std::size_t nr = p.right->rank;
  for (std::size_t o = 0; o < bilinear.rows(); ++o)
    for (std::size_t c = 0; c < bilinear.cols(); ++c)
      if (!bilinear(o, c).is_zero()) p.terms.push_back({o, c / nr, c % nr, bilinear(o, c)});
  return p;
}

PairingMap composition_pairing(const ModulePtr& h1, const ModulePtr& h2) {
  if (!h1->hom || !h2->hom) throw ModuleError("composition pairing needs hom modules");
  const ModulePtr& x = h1->hom->source;
  const ModulePtr& a = h1->hom->target;
  const ModulePtr& xp = h2->hom->source;
  if (h2->hom->target->key() != x->key()) throw ModuleError("composition pairing: middle modules differ");
  auto out = hom_module(xp, a);
  PairingMap p{h1, h2, out, {}};
  if (h1->hom->plain && h2->hom->plain && out->hom->plain) {
    const std::size_t na = a->rank, nx = x->rank, np = xp->rank;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t b = 0; b < nx; ++b)
        for (std::size_t c = 0; c < np; ++c) p.terms.push_back({i * np + c, i * nx + b, b * np + c, Integer(1)});
    return p;
  }
  for (std::size_t k = 0; k < h1->rank; ++k) {
    IntMatrix f = hom_matrix(*h1, unit_vector(h1->rank, k));
    for (std::size_t l = 0; l < h2->rank; ++l) {
      Vector v = hom_element(*out, f * hom_matrix(*h2, unit_vector(h2->rank, l)));
      for (std::size_t o = 0; o < v.size(); ++o)
        if (!v[o].is_zero()) p.terms.push_back({o, k, l, v[o]});
    }
  }
  return p;
}

PairingMap evaluation_pairing(const ModulePtr& h, const ModulePtr& xp_m, const ModulePtr& m) {
  if (!h->hom) throw ModuleError("evaluation pairing needs a hom module");
  const ModulePtr& xp = h->hom->source;
  const ModulePtr& x = h->hom->target;
  if (xp_m->rank != xp->rank * m->rank) throw ModuleError("evaluation pairing: shape mismatch");
  auto out = tensor_module(x, m);
  PairingMap p{h, xp_m, out, {}};
  const std::size_t nm = m->rank;
  for (std::size_t k = 0; k < h->rank; ++k) {
    IntMatrix f = hom_matrix(*h, unit_vector(h->rank, k));
    for (std::size_t a = 0; a < f.rows(); ++a)
      for (std::size_t b = 0; b < f.cols(); ++b) {
        if (f(a, b).is_zero()) continue;
        for (std::size_t j = 0; j < nm; ++j) p.terms.push_back({a * nm + j, k, b * nm + j, f(a, b)});
      }
  }
  return p;
}

PairingMap evaluation_to_scalars(const ModulePtr& dual_x, const ModulePtr& x) {
  if (!dual_x->hom) throw ModuleError("evaluation needs a hom module");
  auto z = dual_x->hom->target;
  PairingMap p{dual_x, x, z, {}};
  for (std::size_t k = 0; k < dual_x->rank; ++k) {
    IntMatrix f = hom_matrix(*dual_x, unit_vector(dual_x->rank, k));
    for (std::size_t a = 0; a < f.rows(); ++a)
      for (std::size_t b = 0; b < f.cols(); ++b)
        if (!f(a, b).is_zero()) p.terms.push_back({a, k, b, f(a, b)});
  }
  return p;
}

PairingMap tensor_pairing(const ModulePtr& a, const ModulePtr& b) {
  auto out = tensor_module(a, b);
  PairingMap p{a, b, out, {}};
  for (std::size_t i = 0; i < a->rank; ++i)
    for (std::size_t j = 0; j < b->rank; ++j) p.terms.push_back({i * b->rank + j, i, j, Integer(1)});
  return p;
}

PairingMap left_unit_pairing(const ModulePtr& z, const ModulePtr& m) {
  if (z->rank != 1 || !z->zfree()) throw ModuleError("unit pairing needs trivial Z");
  PairingMap p{z, m, m, {}};
  for (std::size_t k = 0; k < m->rank; ++k) p.terms.push_back({k, 0, k, Integer(1)});
  return p;
}

PairingMap right_unit_pairing(const ModulePtr& m, const ModulePtr& z) {
  if (z->rank != 1 || !z->zfree()) throw ModuleError("unit pairing needs trivial Z");
  PairingMap p{m, z, m, {}};
  for (std::size_t k = 0; k < m->rank; ++k) p.terms.push_back({k, k, 0, Integer(1)});
  return p;
}

std::vector<std::size_t> tensor_factor_permutation(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& perm) {
  const std::size_t k = dims.size();
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::size_t> out_dims(k);
  for (std::size_t j = 0; j < k; ++j) out_dims[j] = dims[perm[j]];
  std::vector<std::size_t> m(total);
  std::vector<std::size_t> idx(k);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t f = k; f-- > 0;) {
      idx[f] = rem % dims[f];
      rem /= dims[f];
    }
    std::size_t o = 0;
    for (std::size_t j = 0; j < k; ++j) o = o * out_dims[j] + idx[perm[j]];
    m[flat] = o;
  }
  return m;
}

}  // namespace tate
