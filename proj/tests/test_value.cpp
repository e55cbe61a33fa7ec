#include <doctest.h>

#include "valg/gen.hpp"
#include "valg/modulus.hpp"
#include "valg/value.hpp"

using namespace valg;

namespace {

ValuedGroup vg(std::vector<std::uint64_t> factors, std::vector<Rat> table,
               Cap cap = Cap::infinite, std::uint64_t exponent = 0) {
  return make_valued_group(FiniteAbelianGroup(std::move(factors)), std::move(table), cap, exponent);
}

}  // namespace

TEST_CASE("axiom validation with witnesses") {
  FiniteAbelianGroup z2({2}), z3({3}), z4({4});
  CHECK(validate_value_table(z2, {Rat(0), Rat(1)}, Cap::infinite, 0, true).empty());

  auto v2 = validate_value_table(z3, {Rat(0), Rat(1), Rat(3)}, Cap::infinite, 0, true);
  REQUIRE(!v2.empty());
  CHECK(v2.front().axiom == "V2");
  CHECK(v2.front().witness == std::vector<Elem>{1, 2});

  auto v3 = validate_value_table(z4, {Rat(0), Rat(1), Rat(3), Rat(1)}, Cap::infinite, 0, true);
  REQUIRE(!v3.empty());
  CHECK(v3.front().axiom == "V3");
  CHECK(v3.front().witness == std::vector<Elem>{1, 1});
}

TEST_CASE("cost completion on worked fixtures") {
  FiniteAbelianGroup z4({4});
  CostFunction c{z4, {Rat(0), Rat(1), Rat(3), Rat(1)}};
  CompletionResult r = complete_cost(c);
  CHECK(*r.value[0] == 0);
  CHECK(*r.value[1] == 1);
  CHECK(*r.value[2] == 2);
  CHECK(*r.value[3] == 1);
  CHECK(r.unreachable.empty());

  // Idempotence: a table already satisfying the axioms is unchanged.
  ValuedGroup v = vg({4}, {Rat(0), Rat(1), Rat(2), Rat(1)});
  CostFunction as_cost{v.group, {}};
  for (const Rat& x : v.value) as_cost.cost.push_back(x);
  CompletionResult again = complete_cost(as_cost);
  for (Elem x = 0; x < 4; ++x) CHECK(*again.value[x] == v.value[x]);
}

TEST_CASE("diagonal norm in the exponent-3 cube via sparse costs") {
  FiniteAbelianGroup g({3, 3, 3});
  CostFunction c{g, std::vector<ExtRat>(27)};
  c.cost[0] = Rat(0);
  for (std::size_t j = 0; j < 3; ++j) {
    c.cost[g.basis(j)] = Rat(1);
    c.cost[g.neg(g.basis(j))] = Rat(1);
    for (std::size_t k = 0; k < 3; ++k)
      if (j != k) c.cost[g.sub(g.basis(j), g.basis(k))] = Rat(1);
  }
  CompletionResult r = complete_cost(c);
  Elem diag = g.add(g.basis(0), g.add(g.basis(1), g.basis(2)));
  CHECK(*r.value[diag] == 2);
  CHECK(r.unreachable.empty());
}

TEST_CASE("non-generating supports are reported") {
  FiniteAbelianGroup z4({4});
  CostFunction c{z4, {ExtRat(Rat(0)), std::nullopt, ExtRat(Rat(1)), std::nullopt}};
  CompletionResult r = complete_cost(c);
  CHECK(r.unreachable == std::vector<Elem>{1, 3});
  CHECK_THROWS_AS(complete_cost_semivalue(c, Cap::infinite, 0), Error);
}

TEST_CASE("completion is monotone in the cost") {
  Rng rng(29);
  for (int i = 0; i < 20; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 12);
    CostFunction lo = random_cost(child, g, 2, false);
    CostFunction hi = lo;
    for (Elem x = 1; x < g.order(); ++x) {
      Elem nx = g.neg(x);
      if (nx < x) {
        hi.cost[x] = hi.cost[nx];
        continue;
      }
      if (child.chance(1, 2)) *hi.cost[x] += Rat(1, 4);
    }
    CompletionResult a = complete_cost(lo);
    CompletionResult b = complete_cost(hi);
    for (Elem x = 0; x < g.order(); ++x) CHECK(*a.value[x] <= *b.value[x]);
  }
}

TEST_CASE("pushforward values") {
  FiniteAbelianGroup z4({4}), z2({2});
  GroupHom pi = hom_from_basis_images(z4, z2, {1});

  Semivalue s = make_semivalue(z4, {Rat(0), Rat(1, 2), Rat(0), Rat(1, 2)}, Cap::infinite, 0);
  PushedValue pushed = push_value(s, pi);
  CHECK(pushed.is_value);
  CHECK(pushed.result.value == std::vector<Rat>{Rat(0), Rat(1, 2)});

  // A value pushes to a value along any surjection: the zero set stays {0}.
  Semivalue value_source = make_semivalue(z4, {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1, 4)},
                                          Cap::infinite, 0);
  CHECK(push_value(value_source, pi).is_value);

  // A semivalue whose zero set is not inside the kernel is flagged.
  Semivalue degenerate = make_semivalue(z4, {Rat(0), Rat(0), Rat(0), Rat(0)}, Cap::infinite, 0);
  CHECK(!push_value(degenerate, pi).is_value);

  GroupHom not_onto = hom_zero(z4, z2);
  CHECK_THROWS_AS(push_value(s, not_onto), Error);
}

TEST_CASE("caps") {
  ValuedGroup v = vg({4}, {Rat(0), Rat(1), Rat(2), Rat(1)});
  CHECK(cap_value(v, Cap::one).value == std::vector<Rat>{Rat(0), Rat(1), Rat(1), Rat(1)});
  CHECK(cap_value(v, Cap::infinite).value == v.value);
  CHECK(cap_value_at(v, Rat(3, 2)).value ==
        std::vector<Rat>{Rat(0), Rat(1), Rat(3, 2), Rat(1)});
}

TEST_CASE("isometric isomorphism search") {
  ValuedGroup a = vg({2, 2}, {Rat(0), Rat(1), Rat(1), Rat(2)});
  CHECK(isometric_isomorphic(a, a).has_value());

  ValuedGroup b = vg({2, 2}, {Rat(0), Rat(1), Rat(2), Rat(1)});
  auto iso = isometric_isomorphic(a, b);
  REQUIRE(iso.has_value());
  CHECK(hom_is_additive(*iso));
  CHECK(hom_is_isometric(*iso, a.value, b.value));

  ValuedGroup z4v = vg({4}, {Rat(0), Rat(1), Rat(1), Rat(1)});
  ValuedGroup vv = vg({2, 2}, {Rat(0), Rat(1), Rat(1), Rat(1)});
  CHECK(!isometric_isomorphic(z4v, vv).has_value());

  ValuedGroup c = vg({2, 2}, {Rat(0), Rat(1), Rat(1), Rat(1)});
  CHECK(!isometric_isomorphic(a, c).has_value());
}

TEST_CASE("isomorphism search agrees with exhaustive search on random instances") {
  Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 8);
    ValuedGroup a = random_grid_value(child, g, 2, Cap::infinite, 0);
    // Permute by a random automorphism to build an isomorphic copy.
    auto auts = automorphism_tables(g);
    const auto& sigma = auts[child.below(auts.size())];
    std::vector<Rat> permuted(g.order());
    for (Elem x = 0; x < g.order(); ++x) permuted[sigma[x]] = a.value[x];
    ValuedGroup b = make_valued_group(g, permuted, Cap::infinite, 0);
    CHECK(isometric_isomorphic(a, b).has_value());
    CHECK(isometric_isomorphic(b, a).has_value());

    // Exhaustive oracle: scan every bijective homomorphism.
    bool oracle = false;
    for_each_hom(g, g, [&](const std::vector<Elem>& images) {
      GroupHom f = hom_from_basis_images(g, g, images);
      std::vector<bool> hit(g.order(), false);
      bool bijective = true;
      for (Elem x = 0; x < g.order() && bijective; ++x) {
        if (hit[f.table[x]]) bijective = false;
        hit[f.table[x]] = true;
      }
      if (bijective && hom_is_isometric(f, a.value, b.value)) {
        oracle = true;
        return false;
      }
      return true;
    });
    CHECK(oracle);

    // A perturbed copy with a different value multiset is a definite negative.
    std::vector<Rat> tweaked = a.value;
    tweaked[1 + child.below(g.order() - 1)] += Rat(17);
    auto violations = validate_value_table(g, tweaked, Cap::infinite, 0, true);
    if (violations.empty()) {
      ValuedGroup t = make_valued_group(g, tweaked, Cap::infinite, 0);
      CHECK(!isometric_isomorphic(a, t).has_value());
    }
  }
}

TEST_CASE("canonical value tables are automorphism invariants") {
  Rng rng(37);
  for (int i = 0; i < 20; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g({2, 2});
    ValuedGroup a = random_grid_value(child, g, 2, Cap::one, 2);
    auto auts = automorphism_tables(g);
    const auto& sigma = auts[child.below(auts.size())];
    std::vector<Rat> permuted(g.order());
    for (Elem x = 0; x < g.order(); ++x) permuted[x] = a.value[sigma[x]];
    ValuedGroup b = make_valued_group(g, permuted, Cap::one, 2);
    CHECK(canonical_value_table(a) == canonical_value_table(b));
  }
}

TEST_CASE("modulus composed with a value keeps the axioms") {
  Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 8);
    ValuedGroup v = random_grid_value(child, g, 2, Cap::infinite, 0);
    Modulus omega = random_concave_modulus(child, 2, 2);
    std::vector<Rat> composed(g.order());
    for (Elem x = 0; x < g.order(); ++x) composed[x] = omega(v.value[x]);
    // (V2),(V3) always; (V1) iff omega is nonzero away from 0.
    CHECK(validate_value_table(g, composed, Cap::infinite, 0, false).empty());
    if (!omega.zero()) CHECK(validate_value_table(g, composed, Cap::infinite, 0, true).empty());
  }
}
