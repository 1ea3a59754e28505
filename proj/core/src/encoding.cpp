#include "tate/encoding.hpp"

#include <limits>
#include <map>
#include <set>

namespace tate {

namespace {

ModulePtr hom(const ModulePtr& a, const ModulePtr& b) { return hom_module(a, b); }

CohomClass identity_class(TateContext& ctx, const ModulePtr& end) {
  return class_of(ctx, end, 0, hom_element(*end, IntMatrix::identity(end->hom->source->rank)));
}

Integer group_size(const AbelianGroupData& a) {
  if (a.free_rank) throw EncodingError("cannot enumerate an infinite group");
  return a.order();
}

std::size_t checked_size(const Integer& n, std::size_t cap) {
  cap = std::min<std::size_t>(cap, std::numeric_limits<std::int64_t>::max() - 1);
  if (n > Integer(static_cast<long long>(cap))) return cap + 1;
  return static_cast<std::size_t>(n.to_int64());
}

// Mixed-radix enumeration; the last coordinate varies fastest.
Vector element_at(const AbelianGroupData& a, std::size_t index) {
  Vector v(a.torsion.size());
  for (std::size_t k = a.torsion.size(); k-- > 0;) {
    const std::size_t d = static_cast<std::size_t>(a.torsion[k].to_int64());
    v[k] = static_cast<long long>(index % d);
    index /= d;
  }
  return v;
}

std::size_t index_of(const AbelianGroupData& a, std::span<const Integer> v) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < a.torsion.size(); ++k)
    idx = idx * static_cast<std::size_t>(a.torsion[k].to_int64()) + static_cast<std::size_t>(v[k].to_int64());
  return idx;
}

// Bilinear table of coordinates of cup(left_i, right_j).
struct CupTable {
  std::vector<std::vector<Vector>> entries;
  CohomologyPtr target;

  Vector combine(std::span<const Integer> a, std::span<const Integer> b) const {
    Vector r(target->invariants.torsion.size() + target->invariants.free_rank);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j].is_zero()) continue;
        Integer k = a[i] * b[j];
        const Vector& e = entries[i][j];
        for (std::size_t t = 0; t < r.size(); ++t) r[t].add_mul(k, e[t]);
      }
    }
    return target->invariants.normalize(r);
  }
};

CupTable cup_table(TateContext& ctx, const ModulePtr& lm, int ld, const ModulePtr& rm, int rd,
                   const PairingMap& eta) {
  auto hl = ctx.cohomology(lm, ld);
  auto hr = ctx.cohomology(rm, rd);
  CupTable t;
  t.target = ctx.cohomology(eta.out, ld + rd);
  t.entries.resize(hl->representatives.size());
  for (std::size_t i = 0; i < hl->representatives.size(); ++i)
    for (std::size_t j = 0; j < hr->representatives.size(); ++j)
      t.entries[i].push_back(
          coordinates(ctx, cup(ctx, generator_class(ctx, lm, ld, i), generator_class(ctx, rm, rd, j), eta)));
  return t;
}

Vector subtract_reduced(const AbelianGroupData& a, const Vector& x, const Vector& y) { return a.normalize(x - y); }

struct PairSearch {
  std::optional<std::pair<Vector, Vector>> found;  // coordinates (x, x')
  std::size_t searched = 0, space = 0;
  bool exhausted = false;
};

// x ranges over H^r(Hom(X', X)), x' over H^-r(Hom(X, X')).
PairSearch search_pairs(TateContext& ctx, const ModulePtr& x_mod, const ModulePtr& xp_mod, int r, std::size_t budget) {
  ModulePtr h_xp_x = hom(xp_mod, x_mod), h_x_xp = hom(x_mod, xp_mod);
  auto h1 = ctx.cohomology(h_xp_x, r);
  auto h2 = ctx.cohomology(h_x_xp, -r);
  const Integer total = group_size(h1->invariants) * group_size(h2->invariants);
  PairSearch out;
  out.space = checked_size(total, static_cast<std::size_t>(-2));
  // x' cup x -> Hom(X', X'), x cup x' -> Hom(X, X).
  auto left_pair = composition_pairing(h_x_xp, h_xp_x);
  auto right_pair = composition_pairing(h_xp_x, h_x_xp);
  CupTable t1 = cup_table(ctx, h_x_xp, -r, h_xp_x, r, left_pair);
  CupTable t2 = cup_table(ctx, h_xp_x, r, h_x_xp, -r, right_pair);
  Vector id1 = coordinates(ctx, identity_class(ctx, left_pair.out));
  Vector id2 = coordinates(ctx, identity_class(ctx, right_pair.out));
  const std::size_t n1 = checked_size(group_size(h1->invariants), budget), n2 = checked_size(group_size(h2->invariants), budget);
  for (std::size_t i = 0; i < n1; ++i) {
    Vector a = element_at(h1->invariants, i);
    for (std::size_t j = 0; j < n2; ++j) {
      if (out.searched >= budget) return out;
      ++out.searched;
      Vector b = element_at(h2->invariants, j);
      if (t1.combine(b, a) == id1 && t2.combine(a, b) == id2) {
        out.found = std::make_pair(a, b);
        return out;
      }
    }
  }
  out.exhausted = true;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- certificates

bool EncodingCertificate::valid() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string EncodingCertificate::failure() const {
  for (const auto& c : checks)
    if (!c.passed) return c.identity;
  return {};
}

EncodingCertificate verify_encoding_elements(TateContext& ctx, const ModulePtr& x_mod, const ModulePtr& xp_mod, int r,
                                             const CohomClass& x, const CohomClass& x_prime) {
  ModulePtr h_xp_x = hom(xp_mod, x_mod), h_x_xp = hom(x_mod, xp_mod);
  if (x.degree != r || x_prime.degree != -r) throw EncodingError("encoding elements have the wrong degrees");
  if (x.module->key() != h_xp_x->key()) throw EncodingError("x must live in Hom(X', X)");
  if (x_prime.module->key() != h_x_xp->key()) throw EncodingError("x' must live in Hom(X, X')");
  EncodingCertificate cert{x_mod, xp_mod, r, x, x_prime, {}};
  auto run = [&](std::string label, const CohomClass& a, const CohomClass& b, const ModulePtr& ha, const ModulePtr& hb) {
    auto eta = composition_pairing(ha, hb);
    CohomClass prod = cup(ctx, CohomClass{a.degree, ha, a.shift, a.rep}, CohomClass{b.degree, hb, b.shift, b.rep}, eta);
    CupCheck c;
    c.identity = std::move(label);
    c.product = coordinates(ctx, prod);
    c.expected = coordinates(ctx, identity_class(ctx, eta.out));
    c.residual = subtract_reduced(ctx.cohomology(eta.out, 0)->invariants, c.product, c.expected);
    c.passed = is_zero(c.residual);
    cert.checks.push_back(std::move(c));
  };
  run("x' cup x = [id_X']", x_prime, x, h_x_xp, h_xp_x);
  run("x cup x' = [id_X]", x, x_prime, h_xp_x, h_x_xp);
  return cert;
}

std::pair<CohomClass, CohomClass> canonical_augmentation_elements(TateContext& ctx, const GroupPtr& g, std::size_t g0) {
  const std::size_t m = g->order() - 1;
  if (g0 == 0 || g0 > m) throw EncodingError("g0 must be a non-identity element");
  ModulePtr z = ctx.trivial_z(g), ig = ctx.augmentation(g);
  Vector xv(m * m);
  for (std::size_t h = 0; h < m; ++h) xv[h * m + h] = 1;
  Vector xpv(m);
  xpv[g0 - 1] = -1;
  return {class_of(ctx, hom(z, ig), 1, xv), class_of(ctx, hom(ig, z), -1, xpv)};
}

EncodingModuleVerdict is_encoding_module(TateContext& ctx, const ModulePtr& x, int r) {
  if (!x->underlying_group().torsion.empty())
    throw EncodingError("module " + x->name + " has Z-torsion; The Z-free condition is necessary.");
  EncodingModuleVerdict v;
  v.degree_r = ctx.cohomology(x, r)->invariants;
  v.endo = ctx.cohomology(hom(x, x), 0)->invariants;
  const Integer order(static_cast<long long>(x->group->order()));
  const bool deg_ok = v.degree_r.free_rank == 0 && v.degree_r.order() == order && v.degree_r.torsion.size() <= 1;
  const bool endo_ok = v.endo.free_rank == 0 && v.endo.torsion.size() <= 1;
  v.encoding = deg_ok && endo_ok;
  if (!deg_ok) v.reason = "H^" + std::to_string(r) + "(G, X) = " + v.degree_r.to_string() + " is not Z/|G|";
  else if (!endo_ok) v.reason = "H^0(G, Hom(X, X)) = " + v.endo.to_string() + " is not cyclic";
  return v;
}

EncodingSearch find_encoding_element(TateContext& ctx, const ModulePtr& x_mod, const ModulePtr& xp_mod, int r,
                                     std::size_t budget) {
  ModulePtr h_xp_x = hom(xp_mod, x_mod), h_x_xp = hom(x_mod, xp_mod);
  PairSearch s = search_pairs(ctx, x_mod, xp_mod, r, budget);
  EncodingSearch out;
  out.searched = s.searched;
  out.space = s.space;
  out.exhausted = s.exhausted;
  if (!s.found) {
    if (!s.exhausted)
      throw BudgetError("encoding search stopped after " + std::to_string(s.searched) + " of " +
                            std::to_string(s.space) + " class pairs",
                        s.searched);
    return out;
  }
  CohomClass x = class_from_coordinates(ctx, h_xp_x, r, s.found->first);
  CohomClass xp = class_from_coordinates(ctx, h_x_xp, -r, s.found->second);
  out.certificate = verify_encoding_elements(ctx, x_mod, xp_mod, r, x, xp);
  if (!out.certificate->valid()) throw EncodingError("internal: cup table and direct verification disagree");
  // Orbit under units of H^0(Hom(X, X)).
  ModulePtr end = hom(x_mod, x_mod);
  RingTable ring = endo_ring_table(ctx, x_mod, budget);
  auto act = composition_pairing(end, h_xp_x);
  auto act_inv = composition_pairing(h_x_xp, end);
  std::set<Vector> orbit;
  out.orbit_verifies = true;
  for (auto u : ring.units) {
    std::size_t inv = ring.units.front();
    for (auto w : ring.units)
      if (ring.mul[u][w] == ring.one) inv = w;
    auto uc = class_from_coordinates(ctx, end, 0, ring.elements[u]);
    auto ic = class_from_coordinates(ctx, end, 0, ring.elements[inv]);
    CohomClass xu = cup(ctx, uc, x, act);
    CohomClass xpu = cup(ctx, xp, ic, act_inv);
    orbit.insert(coordinates(ctx, xu));
    auto cert = verify_encoding_elements(ctx, x_mod, xp_mod, r, CohomClass{r, h_xp_x, xu.shift, xu.rep},
                                         CohomClass{-r, h_x_xp, xpu.shift, xpu.rep});
    out.orbit_verifies = out.orbit_verifies && cert.valid();
  }
  out.orbit_size = orbit.size();
  return out;
}

EquivalenceSearch cohomologically_equivalent(TateContext& ctx, const ModulePtr& x, const ModulePtr& xp, std::size_t budget) {
  PairSearch s = search_pairs(ctx, x, xp, 0, budget);
  EquivalenceSearch out;
  out.searched = s.searched;
  out.space = s.space;
  out.exhausted = s.exhausted;
  if (s.found) {
    out.witnesses = std::make_pair(class_from_coordinates(ctx, hom(xp, x), 0, s.found->first),
                                   class_from_coordinates(ctx, hom(x, xp), 0, s.found->second));
  } else if (!s.exhausted) {
    throw BudgetError("equivalence search stopped after " + std::to_string(s.searched) + " of " +
                          std::to_string(s.space) + " class pairs",
                      s.searched);
  }
  return out;
}

ZeroVerdict is_cohomologically_zero(TateContext& ctx, const ModulePtr& x) {
  ZeroVerdict v;
  const bool torsion = !x->underlying_group().torsion.empty();
  if (x->rank <= 40 || torsion) {
    v.route = "endomorphisms";
    v.endo = ctx.cohomology(hom(x, x), 0)->invariants;
    v.zero = v.endo.is_trivial();
    return v;
  }
  // Z-free: [id] = 0 iff cohomologically trivial iff every Sylow restriction
  // has two consecutive vanishing degrees.
  v.route = "sylow";
  v.zero = true;
  for (auto p : prime_divisors(x->group->order())) {
    auto emb = sylow_subgroup(x->group, p);
    auto res = restrict_module(x, emb);
    if (!ctx.cohomology(res, 0)->is_trivial() || !ctx.cohomology(res, -1)->is_trivial()) {
      v.zero = false;
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------- duality

DualityReport duality_pairing_matrix(TateContext& ctx, const ModulePtr& x, int i) {
  if (!x->underlying_group().torsion.empty()) throw EncodingError("duality needs a Z-free module");
  const auto& g = x->group;
  ModulePtr z = ctx.trivial_z(g);
  ModulePtr dx = hom(x, z);
  DualityReport rep;
  rep.degree = i;
  auto ha = ctx.cohomology(dx, i);
  auto hb = ctx.cohomology(x, -i);
  rep.left = ha->invariants;
  rep.right = hb->invariants;
  const long long n = static_cast<long long>(g->order());
  const std::size_t ka = ha->representatives.size(), kb = hb->representatives.size();
  rep.values = IntMatrix(ka, kb);
  if (n == 1) {
    rep.nondegenerate = true;
    return rep;
  }
  // Coordinate of [1] in H^0(G, Z) is a unit mod |G|.
  Vector one = coordinates(ctx, class_of(ctx, z, 0, to_vector({1})));
  Integer e = one.at(0);
  auto [gcd_e, inv_e, unused] = extended_gcd(e, Integer(n));
  (void)gcd_e;
  (void)unused;
  auto eta = evaluation_to_scalars(dx, x);
  for (std::size_t a = 0; a < ka; ++a)
    for (std::size_t b = 0; b < kb; ++b) {
      Vector c = coordinates(ctx, cup(ctx, generator_class(ctx, dx, i, a), generator_class(ctx, x, -i, b), eta));
      rep.values(a, b) = mod_floor(c.at(0) * inv_e, Integer(n));
    }
  // Induced map H_a -> Hom(H_b, Q/Z) = sum Z/b_k, in character coordinates.
  if (rep.left.free_rank || rep.right.free_rank) return rep;
  IntMatrix phi(kb, ka);
  IntMatrix mods(kb, kb);
  for (std::size_t k = 0; k < kb; ++k) {
    const Integer& bk = rep.right.torsion[k];
    mods(k, k) = bk;
    for (std::size_t a = 0; a < ka; ++a) {
      Integer num = rep.values(a, k) * bk;
      if (!divides(Integer(n), num)) return rep;  // not a pairing into (1/|G|)Z/Z
      phi(k, a) = div_exact(num, Integer(n));
    }
  }
  const bool onto = cokernel_invariants(hstack(phi, mods)).is_trivial();
  rep.nondegenerate = onto && rep.left.order() == rep.right.order();
  return rep;
}

// ---------------------------------------------------------------- resolutions

bool ExactSequenceReport::valid() const {
  for (const auto& n : nodes)
    if (!n.exact) return false;
  for (const auto& p : projective)
    if (!p.zero) return false;
  return !nodes.empty();
}

ExactSequenceReport encoding_resolution(TateContext& ctx, const GroupPtr& g, std::size_t r) {
  if (r == 0) throw EncodingError("resolution length must be at least 1");
  const std::size_t n = g->order();
  ModulePtr zg = regular_module(g);
  IntMatrix inc(n, n - 1), eps(1, n);
  for (std::size_t h = 0; h < n; ++h) eps(0, h) = 1;
  for (std::size_t h = 1; h < n; ++h) {
    inc(h, h - 1) = 1;
    inc(0, h - 1) = -1;
  }
  auto width = [&](std::size_t k) { return ctx.augmentation_power(g, k)->rank; };
  auto p = [&](std::size_t k) { return k == 1 ? zg : tensor_module(zg, ctx.augmentation_power(g, k - 1)); };
  ExactSequenceReport rep;
  rep.modules.push_back(ctx.augmentation_power(g, r));
  for (std::size_t k = r; k >= 1; --k) rep.modules.push_back(p(k));
  rep.modules.push_back(ctx.trivial_z(g));
  // I^r -> P_r.
  rep.maps.push_back({rep.modules[0], rep.modules[1], kron(inc, IntMatrix::identity(width(r - 1)))});
  // P_{k+1} -> P_k: (inc (x) id) o (eps (x) id).
  for (std::size_t k = r - 1; k >= 1; --k) {
    IntMatrix down = kron(eps, IntMatrix::identity(width(k)));
    IntMatrix up = kron(inc, IntMatrix::identity(width(k - 1)));
    rep.maps.push_back({p(k + 1), p(k), up * down});
  }
  rep.maps.push_back({rep.modules[r], rep.modules[r + 1], eps});
  for (const auto& f : rep.maps)
    if (!f.is_equivariant()) throw EncodingError("internal: resolution map is not equivariant");
  for (std::size_t k = 0; k < rep.modules.size(); ++k) {
    const auto& m = *rep.modules[k];
    NodeCertificate node;
    node.node = k == 0 ? "I_G^" + std::to_string(r) : (k == r + 1 ? "Z" : "P_" + std::to_string(r + 1 - k));
    IntMatrix ker = k + 1 < rep.modules.size() ? kernel_basis(rep.maps[k].matrix) : IntMatrix::identity(m.rank);
    IntMatrix img = k > 0 ? rep.maps[k - 1].matrix : IntMatrix(m.rank, 0);
    LatticeSolver in_ker(ker);
    IntMatrix coords(ker.cols(), img.cols());
    bool contained = true;
    for (std::size_t j = 0; j < img.cols() && contained; ++j) {
      auto y = in_ker.solve(img.column(j));
      if (!y) contained = false;
      else coords.set_column(j, *y);
    }
    if (contained) {
      node.kernel_mod_image = cokernel_invariants(coords);
      node.exact = node.kernel_mod_image.is_trivial();
    }
    rep.nodes.push_back(std::move(node));
  }
  for (std::size_t k = 1; k <= r; ++k) rep.projective.push_back(is_cohomologically_zero(ctx, rep.modules[k]));
  return rep;
}

// ---------------------------------------------------------------- endomorphism ring

RingTable endo_ring_table(TateContext& ctx, const ModulePtr& x, std::size_t budget) {
  ModulePtr end = hom(x, x);
  auto h = ctx.cohomology(end, 0);
  RingTable t;
  t.additive = h->invariants;
  const std::size_t size = checked_size(group_size(t.additive), budget);
  if (size * size > budget)
    throw BudgetError("endomorphism ring of order " + t.additive.order().to_string() + " exceeds the budget", 0);
  for (std::size_t i = 0; i < size; ++i) t.elements.push_back(element_at(t.additive, i));
  auto eta = composition_pairing(end, end);
  CupTable table = cup_table(ctx, end, 0, end, 0, eta);
  t.add.assign(size, std::vector<std::size_t>(size));
  t.mul.assign(size, std::vector<std::size_t>(size));
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b) {
      t.add[a][b] = index_of(t.additive, t.additive.normalize(t.elements[a] + t.elements[b]));
      t.mul[a][b] = index_of(t.additive, table.combine(t.elements[a], t.elements[b]));
    }
  Vector one = coordinates(ctx, identity_class(ctx, end));
  t.one = index_of(t.additive, one);
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b)
      if (t.mul[a][b] == t.one && t.mul[b][a] == t.one) {
        t.units.push_back(a);
        break;
      }
  // Additive order of [id] equals the ring order.
  std::size_t k = 1, cur = t.one;
  while (cur != 0 && k <= size) {
    cur = t.add[cur][t.one];
    ++k;
  }
  t.generated_by_identity = size == 1 || (cur == 0 && k == size);
  return t;
}

// ---------------------------------------------------------------- restriction

CohomClass restrict_class(TateContext& ctx, const CohomClass& x, const SubgroupEmbedding& emb, const ModulePtr& target) {
  const auto& parent = *emb.parent;
  const auto& sub = *emb.subgroup;
  if (target->rank != x.module->rank) throw EncodingError("restriction target has the wrong rank");
  const std::size_t n = x.module->rank;
  if (x.degree <= -2) throw UnsupportedDegreesError("restriction below degree -1 is not supported");
  if (x.degree == 0) return class_of(ctx, target, 0, x.rep);
  if (x.degree == -1) {
    // Sum over representatives t of right cosets H t.
    std::vector<bool> seen(parent.order(), false);
    Vector out(n);
    for (std::size_t t = 0; t < parent.order(); ++t) {
      if (seen[t]) continue;
      for (auto h : emb.inclusion) seen[parent.mul(h, t)] = true;
      Vector v = x.module->action[t] * x.rep;
      for (std::size_t k = 0; k < n; ++k) out[k] += v[k];
    }
    return class_of(ctx, target, -1, out);
  }
  const std::size_t d = static_cast<std::size_t>(x.degree);
  BarShape src{parent.order(), d}, dst{sub.order(), d};
  Vector out(dst.tuples() * n);
  std::vector<std::size_t> img(d);
  for (std::size_t t = 0; t < dst.tuples(); ++t) {
    auto els = dst.decode(t);
    for (std::size_t k = 0; k < d; ++k) img[k] = emb.inclusion[els[k]];
    const std::size_t s = src.encode(img);
    std::copy(x.rep.begin() + s * n, x.rep.begin() + (s + 1) * n, out.begin() + t * n);
  }
  return class_of(ctx, target, x.degree, std::move(out));
}

}  // namespace tate
