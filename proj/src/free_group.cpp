#include "valg/free_group.hpp"

#include <algorithm>
#include <numeric>

namespace valg {

Rat FiniteMetricSpace::diameter() const {
  Rat m = 0;
  for (const Rat& v : dist)
    if (v > m) m = v;
  return m;
}

std::vector<std::string> validate_metric(const FiniteMetricSpace& x) {
  std::vector<std::string> out;
  const std::size_t n = x.size();
  if (n == 0) out.push_back("point set must be nonempty");
  if (x.dist.size() != n * n) {
    out.push_back("distance table must be dense n x n");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (x.d(i, i) != 0) out.push_back("nonzero diagonal at " + x.points[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x.d(i, j) != x.d(j, i)) out.push_back("asymmetric distance " + x.points[i] + "," + x.points[j]);
      if (x.d(i, j) <= 0) out.push_back("non-positive distance " + x.points[i] + "," + x.points[j]);
    }
  }
  for (std::size_t i = 0; i < n && out.empty(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (x.d(i, k) > x.d(i, j) + x.d(j, k)) {
          out.push_back("triangle inequality fails at " + x.points[i] + "," + x.points[j] + "," +
                        x.points[k]);
          return out;
        }
  return out;
}

FiniteMetricSpace make_metric_space(std::vector<std::string> points, std::vector<Rat> dist) {
  FiniteMetricSpace x{std::move(points), std::move(dist)};
  auto violations = validate_metric(x);
  if (!violations.empty()) fail("invalid-metric", violations.front());
  return x;
}

Rat separation_radius(const FiniteMetricSpace& x, const std::vector<std::size_t>& subset) {
  if (subset.size() < 2) return Rat(0);
  Rat best = 0;
  for (std::size_t i : subset) {
    Rat nearest;
    bool first = true;
    for (std::size_t j : subset) {
      if (i == j) continue;
      if (first || x.d(i, j) < nearest) {
        nearest = x.d(i, j);
        first = false;
      }
    }
    if (nearest > best) best = nearest;
  }
  return best;
}

Elem FreeValuedGroup::pair_difference(std::size_t i, std::size_t j) const {
  const std::size_t last = space.size() - 1;
  Elem e = carrier.zero();
  if (i != last) e = carrier.add(e, carrier.basis(i));
  if (j != last) e = carrier.sub(e, carrier.basis(j));
  return e;
}

std::vector<std::size_t> FreeValuedGroup::support(Elem f) const {
  auto c = carrier.coords(f);
  std::vector<std::size_t> supp;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) supp.push_back(i);
    sum += c[i];
  }
  if (sum % static_cast<std::int64_t>(n) != 0) supp.push_back(space.size() - 1);
  return supp;
}

ValuedGroup FreeValuedGroup::as_valued_group() const {
  return ValuedGroup{carrier, value, cap, n};
}

FreeValuedGroup free_group(const FiniteMetricSpace& x, std::uint64_t n, Cap r,
                           std::uint64_t order_bound, Exec exec) {
  if (n < 2) fail("precondition", "exponent must be at least 2");
  auto violations = validate_metric(x);
  if (!violations.empty()) fail("invalid-metric", violations.front());
  if (r == Cap::one && x.diameter() > 1)
    fail("precondition", "cap 1 requires a metric space of diameter at most 1");

  FreeValuedGroup fvg;
  fvg.space = x;
  fvg.n = n;
  fvg.cap = r;
  fvg.carrier = FiniteAbelianGroup(
      std::vector<std::uint64_t>(x.size() - 1, n), order_bound);

  CostFunction cost{fvg.carrier, std::vector<ExtRat>(fvg.carrier.order())};
  cost.cost[0] = Rat(0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j) continue;
      Elem e = fvg.pair_difference(i, j);
      if (!cost.cost[e] || x.d(i, j) < *cost.cost[e]) cost.cost[e] = x.d(i, j);
    }

  Semivalue completed = complete_cost_semivalue(cost, Cap::infinite, n, exec);
  if (r == Cap::one) completed = cap_semivalue_at(completed, Rat(1));
  completed.cap = r;
  fvg.value = semivalue_to_value(completed).value;

  // Lower bound through the support separation radius, and the isometry of
  // the difference embedding, both exact.
  for (Elem f = 1; f < fvg.carrier.order(); ++f)
    if (fvg.value[f] < separation_radius(x, fvg.support(f)))
      fail("internal", "value drops below the support separation radius");
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j) continue;
      if (fvg.value[fvg.pair_difference(i, j)] != x.d(i, j))
        fail("internal", "difference embedding is not isometric");
    }
  return fvg;
}

namespace {

Rat min_matching(const FiniteMetricSpace& x, std::vector<std::size_t>& pts) {
  if (pts.empty()) return Rat(0);
  // First point pairs with each remaining point in turn.
  std::size_t a = pts[0];
  Rat best;
  bool first = true;
  for (std::size_t t = 1; t < pts.size(); ++t) {
    std::size_t b = pts[t];
    std::vector<std::size_t> rest;
    rest.reserve(pts.size() - 2);
    for (std::size_t s = 1; s < pts.size(); ++s)
      if (s != t) rest.push_back(pts[s]);
    Rat cand = x.d(a, b) + min_matching(x, rest);
    if (first || cand < best) {
      best = cand;
      first = false;
    }
  }
  return best;
}

}  // namespace

Rat pd_matching(const FreeValuedGroup& fvg, Elem f) {
  if (fvg.n != 2) fail("precondition", "the matching closed form needs exponent 2");
  if (f == fvg.carrier.zero()) fail("precondition", "f must be nonzero");
  std::vector<std::size_t> supp = fvg.support(f);
  if (supp.size() % 2 != 0) fail("internal", "odd support in the zero-sum exponent-2 group");
  return min_matching(fvg.space, supp);
}

InducedHom induced_hom(const std::vector<Elem>& u, const FreeValuedGroup& fvg,
                       const ValuedGroup& target) {
  if (u.size() != fvg.space.size()) fail("precondition", "one image per point");
  if (!target.group.has_exponent(fvg.n))
    fail("exponent-mismatch", "target group is not annihilated by the exponent");
  for (Elem img : u)
    if (img >= target.group.order()) fail("malformed-element", "image rank out of range");

  const std::size_t last = fvg.space.size() - 1;
  std::vector<Elem> basis_images(fvg.carrier.num_factors());
  for (std::size_t i = 0; i < basis_images.size(); ++i)
    basis_images[i] = target.group.sub(u[i], u[last]);
  GroupHom hom = hom_from_basis_images(fvg.carrier, target.group, basis_images);

  // Least Lipschitz constant of u on pairs.
  Rat c = 0;
  for (std::size_t i = 0; i < fvg.space.size(); ++i)
    for (std::size_t j = 0; j < fvg.space.size(); ++j) {
      if (i == j) continue;
      Rat ratio = target.value[target.group.sub(u[i], u[j])] / fvg.space.d(i, j);
      if (ratio > c) c = ratio;
    }

  bool verified = true;
  for (Elem f = 0; f < fvg.carrier.order() && verified; ++f)
    verified = target.value[hom.table[f]] <= c * fvg.value[f];

  return InducedHom{std::move(hom), std::move(c), verified};
}

ValuedGroup word_metric(const GeneratingSet& f, const Rat& alpha, Exec exec) {
  if (alpha <= 0) fail("precondition", "scale must be positive");
  if (f.weights && f.weights->size() != f.gens.size())
    fail("precondition", "one weight per generator");
  std::vector<bool> in_f(f.group.order(), false);
  for (Elem g : f.gens) {
    if (g >= f.group.order()) fail("malformed-element", "generator rank out of range");
    if (g == f.group.zero()) fail("precondition", "generators must be nonzero");
    in_f[g] = true;
  }
  for (Elem g : f.gens)
    if (!in_f[f.group.neg(g)]) fail("precondition", "generating set is not symmetric");

  CostFunction cost{f.group, std::vector<ExtRat>(f.group.order())};
  cost.cost[0] = Rat(0);
  for (std::size_t i = 0; i < f.gens.size(); ++i) {
    Rat w = f.weights ? (*f.weights)[i] : Rat(1);
    if (w <= 0) fail("precondition", "weights must be positive");
    if (!cost.cost[f.gens[i]] || w < *cost.cost[f.gens[i]]) cost.cost[f.gens[i]] = w;
  }

  CompletionResult completion = complete_cost(cost, exec);
  if (!completion.unreachable.empty()) {
    std::string which;
    for (std::size_t i = 0; i < completion.unreachable.size() && i < 8; ++i)
      which += (i ? "," : "") + std::to_string(completion.unreachable[i]);
    fail("unreachable-elements", "the set does not generate; unreachable: " + which);
  }
  std::vector<Rat> table(f.group.order());
  for (Elem x = 0; x < f.group.order(); ++x) table[x] = alpha * *completion.value[x];
  std::uint64_t exp = f.group.exponent();
  return make_valued_group(f.group, std::move(table), Cap::infinite, exp >= 2 ? exp : 0);
}

}  // namespace valg
