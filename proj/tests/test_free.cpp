#include <doctest.h>

#include <set>

#include "valg/free_group.hpp"
#include "valg/gen.hpp"

using namespace valg;

TEST_CASE("two points generate a single difference") {
  FiniteMetricSpace x = make_metric_space({"a", "b"}, {Rat(0), Rat(5, 3), Rat(5, 3), Rat(0)});
  FreeValuedGroup fvg = free_group(x, 2, Cap::infinite);
  CHECK(fvg.carrier.order() == 2);
  CHECK(fvg.value[fvg.pair_difference(0, 1)] == Rat(5, 3));
}

TEST_CASE("minimum matching beats the greedy pairing") {
  // d(a,b) = d(c,d) = 1, everything else 2.
  std::vector<Rat> d(16, Rat(2));
  for (int i = 0; i < 4; ++i) d[i * 4 + i] = 0;
  d[0 * 4 + 1] = d[1 * 4 + 0] = Rat(1);
  d[2 * 4 + 3] = d[3 * 4 + 2] = Rat(1);
  FiniteMetricSpace x = make_metric_space({"a", "b", "c", "d"}, d);
  FreeValuedGroup fvg = free_group(x, 2, Cap::infinite);
  Elem f = fvg.carrier.add(fvg.carrier.basis(0),
                           fvg.carrier.add(fvg.carrier.basis(1), fvg.carrier.basis(2)));
  CHECK(fvg.support(f).size() == 4);
  CHECK(pd_matching(fvg, f) == Rat(2));
  CHECK(fvg.value[f] == Rat(2));

  Elem pair = fvg.pair_difference(0, 1);
  CHECK(pd_matching(fvg, pair) == Rat(1));
}

TEST_CASE("exponent-2 inclusions are isometric on random spaces") {
  Rng rng(53);
  for (int i = 0; i < 25; ++i) {
    Rng child = rng.child(i);
    std::size_t n = 3 + child.below(3);
    FiniteMetricSpace x = random_metric_space(child, n, 2);
    // Restrict to a subset containing the last point (so the eliminated
    // basepoint is shared).
    std::vector<std::size_t> keep;
    for (std::size_t t = 0; t + 1 < n; ++t)
      if (child.chance(2, 3)) keep.push_back(t);
    if (keep.empty()) keep.push_back(0);
    keep.push_back(n - 1);
    std::vector<std::string> points;
    std::vector<Rat> dist(keep.size() * keep.size(), Rat(0));
    for (std::size_t s = 0; s < keep.size(); ++s) {
      points.push_back(x.points[keep[s]]);
      for (std::size_t t = 0; t < keep.size(); ++t) dist[s * keep.size() + t] = x.d(keep[s], keep[t]);
    }
    FiniteMetricSpace sub = make_metric_space(points, dist);
    FreeValuedGroup fa = free_group(sub, 2, Cap::infinite);
    FreeValuedGroup fx = free_group(x, 2, Cap::infinite);

    std::vector<Elem> u(keep.size());
    for (std::size_t s = 0; s < keep.size(); ++s) u[s] = fx.pair_difference(keep[s], n - 1);
    InducedHom inc = induced_hom(u, fa, fx.as_valued_group());
    for (Elem f = 0; f < fa.carrier.order(); ++f)
      CHECK(fx.value[inc.hom.table[f]] == fa.value[f]);
  }
}

TEST_CASE("hat embedding induces the identity") {
  FiniteMetricSpace x = make_metric_space(
      {"a", "b", "c"}, {Rat(0), Rat(1), Rat(1), Rat(1), Rat(0), Rat(1), Rat(1), Rat(1), Rat(0)});
  FreeValuedGroup fvg = free_group(x, 3, Cap::infinite);
  std::vector<Elem> u(3);
  for (std::size_t j = 0; j < 3; ++j) u[j] = fvg.pair_difference(j, 2);
  InducedHom ind = induced_hom(u, fvg, fvg.as_valued_group());
  for (Elem f = 0; f < fvg.carrier.order(); ++f) CHECK(ind.hom.table[f] == f);
  CHECK(ind.lipschitz_constant == 1);
  CHECK(ind.transfer_verified);
}

TEST_CASE("induced homomorphisms reject exponent mismatches") {
  FiniteMetricSpace x = make_metric_space({"a", "b"}, {Rat(0), Rat(1), Rat(1), Rat(0)});
  FreeValuedGroup fvg = free_group(x, 3, Cap::infinite);
  ValuedGroup target = make_valued_group(FiniteAbelianGroup({2}), {Rat(0), Rat(1)},
                                         Cap::infinite, 2);
  CHECK_THROWS_AS(induced_hom({0, 1}, fvg, target), Error);
}

TEST_CASE("word metric basics") {
  FiniteAbelianGroup g({3, 3, 3});
  std::set<Elem> gens;
  for (std::size_t j = 0; j < 3; ++j) {
    gens.insert(g.basis(j));
    gens.insert(g.neg(g.basis(j)));
    for (std::size_t k = 0; k < 3; ++k)
      if (j != k) gens.insert(g.sub(g.basis(j), g.basis(k)));
  }
  GeneratingSet f{g, {gens.begin(), gens.end()}, std::nullopt};
  ValuedGroup metric = word_metric(f);
  CHECK(metric.p(g.zero()) == 0);
  CHECK(metric.p(g.sub(g.basis(0), g.basis(1))) == 1);
  Elem diag = g.add(g.basis(0), g.add(g.basis(1), g.basis(2)));
  CHECK(metric.p(diag) == 2);
  // Scaling.
  ValuedGroup scaled = word_metric(f, Rat(1, 4));
  CHECK(scaled.p(diag) == Rat(1, 2));

  GeneratingSet partial{g, {g.basis(0), g.neg(g.basis(0))}, std::nullopt};
  CHECK_THROWS_AS(word_metric(partial), Error);

  GeneratingSet asym{g, {g.basis(0)}, std::nullopt};
  CHECK_THROWS_AS(word_metric(asym), Error);
}

TEST_CASE("weighted word metrics agree with the completion of the weighted cost") {
  Rng rng(59);
  for (int i = 0; i < 15; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 12);
    // Generators: all nonzero elements with random weights, symmetrized.
    GeneratingSet f{g, {}, std::vector<Rat>{}};
    CostFunction cost{g, std::vector<ExtRat>(g.order())};
    cost.cost[0] = Rat(0);
    for (Elem x = 1; x < g.order(); ++x) {
      Elem nx = g.neg(x);
      Rat w = nx < x ? *cost.cost[nx] : rat_of(static_cast<long>(1 + child.below(4)), 4);
      cost.cost[x] = w;
      f.gens.push_back(x);
      f.weights->push_back(w);
    }
    ValuedGroup metric = word_metric(f);
    CompletionResult completion = complete_cost(cost);
    for (Elem x = 0; x < g.order(); ++x) CHECK(metric.value[x] == *completion.value[x]);
  }
}

TEST_CASE("free group respects the separation lower bound") {
  Rng rng(61);
  for (int i = 0; i < 15; ++i) {
    Rng child = rng.child(i);
    FiniteMetricSpace x = random_metric_space(child, 2 + child.below(3), 2);
    std::uint64_t n = 2 + child.below(3);
    FreeValuedGroup fvg = free_group(x, n, Cap::infinite);
    for (Elem f = 1; f < fvg.carrier.order(); ++f)
      CHECK(fvg.value[f] >= separation_radius(x, fvg.support(f)));
  }
}
