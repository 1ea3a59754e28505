#include "tate/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace tate {

FiniteGroup::FiniteGroup(Table table, std::vector<std::string> labels)
    : table_(std::move(table)), labels_(std::move(labels)) {
  validate();
  const std::size_t n = table_.size();
  inverse_.assign(n, 0);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (table_[a][b] == 0) inverse_[a] = b;
  if (labels_.size() != n) {
    labels_.clear();
    for (Index a = 0; a < n; ++a) labels_.push_back(a == 0 ? "e" : "g" + std::to_string(a));
  }
  compute_generators();
}

void FiniteGroup::validate() const {
  const std::size_t n = table_.size();
  if (n == 0) throw GroupError("group table is empty");
  for (Index a = 0; a < n; ++a) {
    if (table_[a].size() != n) throw GroupError("row " + std::to_string(a) + " has wrong length");
    std::vector<bool> seen(n, false);
    for (Index b = 0; b < n; ++b) {
      Index c = table_[a][b];
      if (c >= n) throw GroupError("entry out of range in row " + std::to_string(a));
      if (seen[c]) throw GroupError("row " + std::to_string(a) + " is not a permutation (Latin square violated)");
      seen[c] = true;
    }
  }
  for (Index b = 0; b < n; ++b) {
    std::vector<bool> seen(n, false);
    for (Index a = 0; a < n; ++a) {
      if (seen[table_[a][b]])
        throw GroupError("column " + std::to_string(b) + " is not a permutation (Latin square violated)");
      seen[table_[a][b]] = true;
    }
  }
  for (Index a = 0; a < n; ++a)
    if (table_[0][a] != a || table_[a][0] != a) throw GroupError("index 0 is not the identity");
  if (n <= 64) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
            std::ostringstream os;
            os << "associativity fails for triple (" << a << ", " << b << ", " << c << ")";
            throw GroupError(os.str());
          }
  }
}

void FiniteGroup::compute_generators() {
  // Greedy: add the first element outside the current closure.
  generators_.clear();
  const std::size_t n = order();
  std::vector<bool> in(n, false);
  in[0] = true;
  std::vector<Index> members{0};
  for (Index g = 1; g < n; ++g) {
    if (in[g]) continue;
    generators_.push_back(g);
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (Index s : generators_) {
        Index y = table_[members[k]][s];
        if (!in[y]) {
          in[y] = true;
          members.push_back(y);
        }
      }
    }
  }
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw GroupError("cyclic group order must be at least 1");
  Table t(n, std::vector<Index>(n));
  std::vector<std::string> labels;
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    labels.push_back(a == 0 ? "e" : (a == 1 ? "s" : "s^" + std::to_string(a)));
  }
  FiniteGroup g(std::move(t), std::move(labels));
  if (n > 1) g.generators_ = {1};
  return g;
}

FiniteGroup FiniteGroup::from_table(const Table& table, std::vector<std::string> labels) {
  const std::size_t n = table.size();
  if (n == 0) throw GroupError("group table is empty");
  for (const auto& row : table)
    if (row.size() != n) throw GroupError("group table is not square");
  // Find the identity and move it to index 0, preserving the other order.
  Index e = n;
  for (Index a = 0; a < n && e == n; ++a) {
    bool ok = true;
    for (Index b = 0; b < n && ok; ++b) ok = table[a][b] == b && table[b][a] == b;
    if (ok) e = a;
  }
  if (e == n) throw GroupError("group table has no identity element");
  std::vector<Index> perm;  // new index -> old index
  perm.push_back(e);
  for (Index a = 0; a < n; ++a)
    if (a != e) perm.push_back(a);
  std::vector<Index> inv(n);
  for (Index k = 0; k < n; ++k) inv[perm[k]] = k;
  Table t(n, std::vector<Index>(n));
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      if (table[perm[a]][perm[b]] >= n) throw GroupError("group table entry out of range");
      t[a][b] = inv[table[perm[a]][perm[b]]];
    }
  std::vector<std::string> l;
  if (labels.size() == n)
    for (Index k = 0; k < n; ++k) l.push_back(labels[perm[k]]);
  return FiniteGroup(std::move(t), std::move(l));
}

namespace {

std::string cycle_notation(const std::vector<std::size_t>& p) {
  std::ostringstream os;
  std::vector<bool> seen(p.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == i) continue;
    os << "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      os << (first ? "" : " ") << j + 1;
      first = false;
      j = p[j];
    }
    os << ")";
    any = true;
  }
  return any ? os.str() : "e";
}

}  // namespace

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<std::size_t>>& generators) {
  std::size_t points = 0;
  for (const auto& g : generators) points = std::max(points, g.size());
  if (points > 8) throw GroupError("permutation groups are limited to 8 points");
  using Perm = std::vector<std::size_t>;
  std::vector<Perm> gens;
  for (const auto& g : generators) {
    Perm p(points);
    std::iota(p.begin(), p.end(), 0);
    std::vector<bool> hit(points, false);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] >= points || hit[g[i]]) throw GroupError("generator is not a permutation");
      hit[g[i]] = true;
      p[i] = g[i];
    }
    gens.push_back(p);
  }
  auto compose = [](const Perm& a, const Perm& b) {
    Perm c(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
    return c;
  };
  Perm id(points);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Perm> elems{id};
  std::map<Perm, std::size_t> index{{id, 0}};
  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (const auto& s : gens) {
      Perm y = compose(elems[k], s);
      if (index.emplace(y, elems.size()).second) elems.push_back(y);
    }
  }
  const std::size_t n = elems.size();
  Table t(n, std::vector<Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
  std::vector<std::string> labels;
  for (const auto& p : elems) labels.push_back(cycle_notation(p));
  FiniteGroup g(std::move(t), std::move(labels));
  std::vector<Index> gidx;
  for (const auto& s : gens) {
    Index i = index.at(s);
    if (i != 0 && std::find(gidx.begin(), gidx.end(), i) == gidx.end()) gidx.push_back(i);
  }
  g.generators_ = gidx;
  return g;
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t m = h.order(), n = g.order() * m;
  Table t(n, std::vector<Index>(n));
  std::vector<std::string> labels;
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) t[a][b] = g.mul(a / m, b / m) * m + h.mul(a % m, b % m);
    labels.push_back("(" + g.label(a / m) + "," + h.label(a % m) + ")");
  }
  FiniteGroup out(std::move(t), std::move(labels));
  std::vector<Index> gens;
  for (Index s : g.generators()) gens.push_back(s * m);
  for (Index s : h.generators()) gens.push_back(s);
  out.generators_ = gens;
  return out;
}

std::size_t FiniteGroup::element_order(Index a) const {
  std::size_t k = 1;
  for (Index x = a; x != 0; x = mul(x, a)) ++k;
  return k;
}

std::size_t FiniteGroup::exponent() const {
  std::size_t e = 1;
  for (Index a = 0; a < order(); ++a) e = std::lcm(e, element_order(a));
  return e;
}

bool FiniteGroup::is_abelian() const {
  for (Index a = 0; a < order(); ++a)
    for (Index b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool FiniteGroup::is_cyclic() const {
  for (Index a = 0; a < order(); ++a)
    if (element_order(a) == order()) return true;
  return false;
}

std::string FiniteGroup::digest() const {
  std::ostringstream os;
  os << order() << ":";
  for (const auto& row : table_)
    for (Index x : row) os << x << ",";
  return os.str();
}

namespace {

std::vector<FiniteGroup::Index> closure(const FiniteGroup& g, const std::vector<FiniteGroup::Index>& gens) {
  std::vector<bool> in(g.order(), false);
  std::vector<FiniteGroup::Index> members{0};
  in[0] = true;
  for (auto s : gens)
    if (!in[s]) {
      in[s] = true;
      members.push_back(s);
    }
  for (std::size_t k = 0; k < members.size(); ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      for (auto y : {g.mul(members[k], members[j]), g.mul(members[j], members[k])}) {
        if (!in[y]) {
          in[y] = true;
          members.push_back(y);
        }
      }
    }
  }
  return members;
}

}  // namespace

SubgroupEmbedding subgroup_closure(const GroupPtr& g, const std::vector<FiniteGroup::Index>& elements) {
  for (auto x : elements)
    if (x >= g->order()) throw GroupError("element index out of range");
  auto members = closure(*g, elements);
  const std::size_t n = members.size();
  std::vector<std::size_t> local(g->order(), n);
  for (std::size_t k = 0; k < n; ++k) local[members[k]] = k;
  FiniteGroup::Table t(n, std::vector<FiniteGroup::Index>(n));
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t[a][b] = local[g->mul(members[a], members[b])];
    labels.push_back(g->label(members[a]));
  }
  return {make_group(FiniteGroup::from_table(t, labels)), g, members};
}

AbelianGroupData abelianization_invariants(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<FiniteGroup::Index> comms;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      comms.push_back(g.mul(g.mul(a, b), g.mul(g.inverse(a), g.inverse(b))));
  auto k = closure(g, comms);
  // Coset label: smallest index in gK.
  std::vector<std::size_t> coset(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t m = n;
    for (auto x : k) m = std::min(m, g.mul(a, x));
    coset[a] = m;
  }
  // Relation lattice of the quotient on the generators, via a spanning tree.
  const auto& gens = g.generators();
  const std::size_t r = gens.size();
  std::map<std::size_t, Vector> word;
  word[coset[0]] = Vector(r);
  std::vector<std::size_t> queue{coset[0]};
  std::vector<Vector> relations;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::size_t c = queue[q];
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t d = coset[g.mul(c, gens[i])];
      Vector w = word[c];
      w[i] += 1;
      auto it = word.find(d);
      if (it == word.end()) {
        word.emplace(d, w);
        queue.push_back(d);
      } else {
        relations.push_back(w - it->second);
      }
    }
  }
  return cokernel_invariants(IntMatrix::from_columns(r, relations));
}

std::vector<std::size_t> prime_divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

SubgroupEmbedding sylow_subgroup(const GroupPtr& g, std::size_t p) {
  std::size_t target = 1, n = g->order();
  while (n % p == 0) {
    target *= p;
    n /= p;
  }
  auto is_p_power = [p](std::size_t m) {
    while (m % p == 0) m /= p;
    return m == 1;
  };
  std::vector<FiniteGroup::Index> gens;
  std::size_t size = 1;
  while (size < target) {
    bool grown = false;
    for (FiniteGroup::Index x = 1; x < g->order() && !grown; ++x) {
      if (!is_p_power(g->element_order(x))) continue;
      auto trial = gens;
      trial.push_back(x);
      auto members = closure(*g, trial);
      if (members.size() > size && is_p_power(members.size())) {
        gens = std::move(trial);
        size = members.size();
        grown = true;
      }
    }
    if (!grown) throw GroupError("sylow search stalled");
  }
  return subgroup_closure(g, gens);
}

}  // namespace tate
