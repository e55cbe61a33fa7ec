#include "valg/gen.hpp"

#include <algorithm>

namespace valg {

FiniteAbelianGroup random_group(Rng& rng, std::uint64_t n, std::uint64_t max_order) {
  std::vector<std::uint64_t> pool;
  if (n == 0) {
    for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9})
      if (q <= max_order) pool.push_back(q);
  } else {
    for (std::uint64_t q = 2; q <= n && q <= max_order; ++q)
      if (n % q == 0) pool.push_back(q);
  }
  std::vector<std::uint64_t> factors;
  std::uint64_t order = 1;
  std::size_t count = 1 + rng.below(3);
  for (std::size_t i = 0; i < count && !pool.empty(); ++i) {
    std::uint64_t q = pool[rng.below(pool.size())];
    if (order * q > max_order) break;
    factors.push_back(q);
    order *= q;
  }
  if (factors.empty() && !pool.empty() && pool[0] <= max_order) factors.push_back(pool[0]);
  return FiniteAbelianGroup(factors);
}

ValuedGroup random_grid_value(Rng& rng, const FiniteAbelianGroup& g, int grid_log2, Cap cap,
                              std::uint64_t exponent) {
  const Rat step = grid_step(grid_log2);
  const std::uint64_t levels = 1ull << grid_log2;  // costs in (0, 1]
  CostFunction cost{g, std::vector<ExtRat>(g.order())};
  cost.cost[0] = Rat(0);
  for (Elem x = 1; x < g.order(); ++x) {
    Elem nx = g.neg(x);
    if (nx < x) {
      cost.cost[x] = cost.cost[nx];
      continue;
    }
    cost.cost[x] = step * Rat(1 + rng.below(levels));
  }
  Semivalue s = complete_cost_semivalue(cost, Cap::infinite, exponent, Exec::serial);
  if (cap == Cap::one) s = cap_semivalue_at(s, Rat(1));
  s.cap = cap;
  ValuedGroup out = semivalue_to_value(s);
  out.exponent = exponent;
  return out;
}

Subgroup random_subgroup(Rng& rng, const FiniteAbelianGroup& g) {
  std::vector<Elem> gens;
  std::size_t count = rng.below(3);
  for (std::size_t i = 0; i < count; ++i) gens.push_back(rng.below(g.order()));
  return subgroup_generated(g, gens);
}

KatetovMap random_katetov(Rng& rng, const ValuedGroup& base, std::size_t domain_size,
                          int grid_log2, Cap cap) {
  const FiniteAbelianGroup& g = base.group;
  const Rat step = grid_step(grid_log2);
  domain_size = std::min<std::size_t>(domain_size, g.order());
  std::vector<Elem> domain;
  while (domain.size() < domain_size) {
    Elem x = rng.below(g.order());
    if (!std::binary_search(domain.begin(), domain.end(), x)) {
      domain.insert(std::upper_bound(domain.begin(), domain.end(), x), x);
    }
  }

  // Virtual points (b_i, t_i) with t_i + t_j >= p(b_i - b_j); offsets at least
  // half the diameter always satisfy the consistency condition.
  Rat diam = base.diameter();
  Rat floor_offset = grid_round_up(diam / 2, grid_log2);
  std::size_t cones = 1 + rng.below(3);
  std::vector<Elem> bs(cones);
  std::vector<Rat> ts(cones);
  for (std::size_t i = 0; i < cones; ++i) {
    bs[i] = rng.below(g.order());
    ts[i] = cones == 1 ? Rat(step * Rat(rng.below(4))) : Rat(floor_offset + step * Rat(rng.below(4)));
  }
  std::vector<Rat> values(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    Rat best = ts[0] + base.p(g.sub(domain[i], bs[0]));
    for (std::size_t c = 1; c < cones; ++c) {
      Rat cand = ts[c] + base.p(g.sub(domain[i], bs[c]));
      if (cand < best) best = cand;
    }
    values[i] = best;
  }
  if (cap == Cap::one)
    for (Rat& v : values)
      if (v > 1) v = 1;
  KatetovMap f{std::move(domain), std::move(values), cap};
  auto violations = validate_katetov(base, f);
  if (!violations.empty()) fail("internal", "generated map is not Katetov");
  return f;
}

FiniteMetricSpace random_metric_space(Rng& rng, std::size_t n, int grid_log2) {
  const Rat step = grid_step(grid_log2);
  const std::uint64_t levels = 2ull << grid_log2;  // raw distances in (0, 2]
  std::vector<std::string> points(n);
  for (std::size_t i = 0; i < n; ++i) points[i] = "p" + std::to_string(i);
  std::vector<Rat> d(n * n, Rat(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rat v = step * Rat(1 + rng.below(levels));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  // Shortest-path closure restores the triangle inequality exactly.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i * n + k] + d[k * n + j] < d[i * n + j]) d[i * n + j] = d[i * n + k] + d[k * n + j];
  return make_metric_space(std::move(points), std::move(d));
}

CostFunction random_cost(Rng& rng, const FiniteAbelianGroup& g, int grid_log2,
                         bool allow_infinite) {
  const Rat step = grid_step(grid_log2);
  const std::uint64_t levels = 2ull << grid_log2;
  CostFunction cost{g, std::vector<ExtRat>(g.order())};
  cost.cost[0] = Rat(0);
  for (Elem x = 1; x < g.order(); ++x) {
    Elem nx = g.neg(x);
    if (nx < x) {
      cost.cost[x] = cost.cost[nx];
      continue;
    }
    if (allow_infinite && rng.chance(1, 4)) continue;  // infinite entry
    cost.cost[x] = step * Rat(1 + rng.below(levels));
  }
  return cost;
}

StepFunction random_stepfn(Rng& rng, const FiniteAbelianGroup& host, std::size_t max_pieces,
                           int grid_log2) {
  const Rat step = grid_step(grid_log2);
  std::size_t pieces = 1 + rng.below(max_pieces);
  StepFunction u{host, {}, {}};
  Rat t = 0;
  for (std::size_t j = 0; j < pieces; ++j) {
    t += step * Rat(1 + rng.below(8));
    u.ends.push_back(t);
    u.vals.push_back(rng.below(host.order()));
  }
  u.canonicalize();
  return u;
}

Modulus random_concave_modulus(Rng& rng, std::size_t segments, int grid_log2) {
  const Rat step = grid_step(grid_log2);
  PL pl;
  Rat x = 0, y = 0;
  Rat slope = Rat(1 + rng.below(4));
  for (std::size_t s = 0; s < segments; ++s) {
    Rat dx = step * Rat(1 + rng.below(6));
    x += dx;
    y += slope * dx;
    pl.points.emplace_back(x, y);
    // Slopes decrease, which keeps the function concave hence subadditive.
    slope = slope * rat_of(static_cast<long>(1 + rng.below(3)), 4);
  }
  pl.points.insert(pl.points.begin(), {Rat(0), Rat(0)});
  pl.tail_slope = rng.chance(1, 2) ? Rat(0) : slope;
  return make_modulus(std::move(pl));
}

}  // namespace valg
