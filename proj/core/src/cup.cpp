#include "tate/cup.hpp"

namespace tate {

namespace {

void check_pairing(const CohomClass& x, const CohomClass& y, const PairingMap& eta) {
  if (eta.left->key() != x.module->key() || eta.right->key() != y.module->key())
    throw CohomologyError("cup: pairing does not match the coefficient modules");
  if (x.module->group->digest() != y.module->group->digest()) throw CohomologyError("cup: classes over different groups");
}

// Front/back face product of nonnegative-level cochains.
Vector cup_cochains(const PairingMap& eta, std::size_t p, std::span<const Integer> a, std::size_t q,
                    std::span<const Integer> b) {
  const auto& g = *eta.left->group;
  const std::size_t na = eta.left->rank, nb = eta.right->rank, nc = eta.out->rank;
  BarShape head{g.order(), p}, tail{g.order(), q}, out{g.order(), p + q};
  Vector r(out.tuples() * nc);
  Vector acc(nc);
  for (std::size_t hi = 0; hi < head.tuples(); ++hi) {
    std::span<const Integer> av = a.subspan(hi * na, na);
    if (is_zero(av)) continue;
    std::size_t h = 0;
    for (auto el : head.decode(hi)) h = g.mul(h, el);
    for (std::size_t ti = 0; ti < tail.tuples(); ++ti) {
      std::span<const Integer> bv = b.subspan(ti * nb, nb);
      if (is_zero(bv)) continue;
      Vector hb = h == 0 ? Vector(bv.begin(), bv.end()) : eta.right->action[h] * bv;
      std::fill(acc.begin(), acc.end(), Integer(0));
      eta.accumulate(acc, av, hb);
      const std::size_t t = hi * tail.tuples() + ti;
      for (std::size_t k = 0; k < nc; ++k) r[t * nc + k] = acc[k];
    }
  }
  return r;
}

CohomClass direct_cup(TateContext& ctx, const CohomClass& x, const CohomClass& y, const PairingMap& eta) {
  const int p = x.degree, q = y.degree;
  const auto& g = *eta.left->group;
  const std::size_t nc = eta.out->rank;
  if (p >= 0 && q >= 0) {
    Vector r = cup_cochains(eta, static_cast<std::size_t>(p), x.rep, static_cast<std::size_t>(q), y.rep);
    return class_of(ctx, eta.out, p + q, std::move(r));
  }
  if (p == 0) {
    // eta(a, -) (x) id on the stored representative of y.
    const std::size_t w = ctx.augmentation_power(eta.out->group, y.shift)->rank;
    Vector r(nc * w);
    for (const auto& t : eta.terms) {
      const Integer& av = x.rep[t.left];
      if (av.is_zero()) continue;
      Integer k = t.coef * av;
      for (std::size_t u = 0; u < w; ++u) r[t.out * w + u].add_mul(k, y.rep[t.right * w + u]);
    }
    return class_of(ctx, eta.out, q, std::move(r));
  }
  if (q == 0) {
    const std::size_t w = ctx.augmentation_power(eta.out->group, x.shift)->rank;
    Vector r(nc * w);
    for (const auto& t : eta.terms) {
      const Integer& bv = y.rep[t.right];
      if (bv.is_zero()) continue;
      Integer k = t.coef * bv;
      for (std::size_t u = 0; u < w; ++u) r[t.out * w + u].add_mul(k, x.rep[t.left * w + u]);
    }
    return class_of(ctx, eta.out, p, std::move(r));
  }
  const std::size_t na = eta.left->rank, nb = eta.right->rank;
  Vector r(nc);
  if (p == -1 && q == 1) {
    // -sum_g eta(g a, b(g))
    for (std::size_t el = 1; el < g.order(); ++el) {
      Vector ga = eta.left->action[el] * x.rep;
      eta.accumulate(r, ga, std::span<const Integer>(y.rep).subspan((el - 1) * nb, nb));
    }
    for (auto& v : r) v = -v;
    return class_of(ctx, eta.out, 0, std::move(r));
  }
  if (p == 1 && q == -1) {
    // sum_g eta(a(g), g b)
    for (std::size_t el = 1; el < g.order(); ++el) {
      Vector gb = eta.right->action[el] * y.rep;
      eta.accumulate(r, std::span<const Integer>(x.rep).subspan((el - 1) * na, na), gb);
    }
    return class_of(ctx, eta.out, 0, std::move(r));
  }
  throw UnsupportedDegreesError("no direct formula");
}

bool has_direct_formula(int p, int q) {
  return (p >= 0 && q >= 0) || p == 0 || q == 0 || (p == -1 && q == 1) || (p == 1 && q == -1);
}

std::string degree_pair(int p, int q) { return "(" + std::to_string(p) + ", " + std::to_string(q) + ")"; }

}  // namespace

PairingMap shifted_pairing(TateContext& ctx, const PairingMap& eta, std::size_t a, std::size_t b) {
  const auto& g = eta.out->group;
  const std::size_t wa = ctx.augmentation_power(g, a)->rank, wb = ctx.augmentation_power(g, b)->rank;
  PairingMap out;
  out.left = ctx.shifted_module(eta.left, a);
  out.right = ctx.shifted_module(eta.right, b);
  out.out = ctx.shifted_module(eta.out, a + b);
  out.terms.reserve(eta.terms.size() * wa * wb);
  for (const auto& t : eta.terms)
    for (std::size_t u = 0; u < wa; ++u)
      for (std::size_t v = 0; v < wb; ++v)
        out.terms.push_back({(t.out * wa + u) * wb + v, t.left * wa + u, t.right * wb + v, t.coef});
  return out;
}

CohomClass cup_by_shifting(TateContext& ctx, const CohomClass& x, const CohomClass& y, const PairingMap& eta) {
  check_pairing(x, y, eta);
  const int p = x.degree, q = y.degree;
  try {
    CohomClass xr = p < 0 ? raise_to_level0(ctx, x) : x;
    CohomClass yr = q < 0 ? raise_to_level0(ctx, y) : y;
    const std::size_t ta = p < 0 ? static_cast<std::size_t>(-p) : 0;
    const std::size_t tb = q < 0 ? static_cast<std::size_t>(-q) : 0;
    if (ta + tb == 0) return direct_cup(ctx, x, y, eta);
    PairingMap wide = shifted_pairing(ctx, eta, ta, tb);
    CohomClass z = direct_cup(ctx, xr, yr, wide);
    if ((ta * static_cast<std::size_t>(q < 0 ? -q : q)) % 2 == 1) z = scale(z, Integer(-1));
    for (std::size_t t = ta + tb; t-- > 0;) z = shift_down(ctx, z, ctx.shifted_module(eta.out, t));
    return {p + q, eta.out, storage_shift(p + q), std::move(z.rep)};
  } catch (const ResourceError& e) {
    throw UnsupportedDegreesError("unsupported degrees " + degree_pair(p, q) + ": " + e.what());
  }
}

CohomClass cup(TateContext& ctx, const CohomClass& x, const CohomClass& y, const PairingMap& eta) {
  check_pairing(x, y, eta);
  if (!has_direct_formula(x.degree, y.degree)) return cup_by_shifting(ctx, x, y, eta);
  try {
    return direct_cup(ctx, x, y, eta);
  } catch (const ResourceError& e) {
    throw UnsupportedDegreesError("unsupported degrees " + degree_pair(x.degree, y.degree) + ": " + e.what());
  }
}

GModuleMap swap_map(const ModulePtr& b_tensor_a, const ModulePtr& a, const ModulePtr& b, const ModulePtr& a_tensor_b) {
  auto perm = tensor_factor_permutation({b->rank, a->rank}, {1, 0});
  IntMatrix m(a_tensor_b->rank, b_tensor_a->rank);
  for (std::size_t i = 0; i < perm.size(); ++i) m(perm[i], i) = 1;
  return {b_tensor_a, a_tensor_b, std::move(m)};
}

}  // namespace tate
