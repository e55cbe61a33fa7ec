#include <doctest.h>

#include "valg/amalgam.hpp"
#include "valg/gen.hpp"
#include "valg/katetov.hpp"

using namespace valg;

namespace {

ValuedGroup vg(std::vector<std::uint64_t> factors, std::vector<Rat> table,
               Cap cap = Cap::infinite, std::uint64_t exponent = 0) {
  return make_valued_group(FiniteAbelianGroup(std::move(factors)), std::move(table), cap, exponent);
}

ValuedGroup trivial_valued(Cap cap, std::uint64_t exponent) {
  return ValuedGroup{FiniteAbelianGroup{}, {Rat(0)}, cap, exponent};
}

}  // namespace

TEST_CASE("amalgamation over the trivial group is the capped direct sum") {
  ValuedGroup d0 = trivial_valued(Cap::one, 2);
  ValuedGroup d1 = vg({2}, {Rat(0), Rat(3, 4)}, Cap::one, 2);
  ValuedGroup d2 = vg({2}, {Rat(0), Rat(1, 2)}, Cap::one, 2);
  AmalgamResult res = amalgamate(d0, d1, d2, hom_zero(d0.group, d1.group),
                                 hom_zero(d0.group, d2.group));
  REQUIRE(res.result.group.order() == 4);
  const FiniteAbelianGroup& gp = res.result.group;
  Elem a = res.psi1.table[1], b = res.psi2.table[1];
  CHECK(res.result.p(a) == Rat(3, 4));
  CHECK(res.result.p(b) == Rat(1, 2));
  CHECK(res.result.p(gp.add(a, b)) == Rat(1));  // 5/4 capped at 1
}

TEST_CASE("gluing Z_2 into Z_4 along the order-2 element") {
  ValuedGroup d0 = vg({2}, {Rat(0), Rat(1)});
  ValuedGroup d1 = vg({2}, {Rat(0), Rat(1)});
  ValuedGroup d2 = vg({4}, {Rat(0), Rat(1, 2), Rat(1), Rat(1, 2)});
  GroupHom phi1 = hom_identity(d0.group);
  GroupHom phi2 = hom_from_basis_images(d0.group, d2.group, {2});
  AmalgamResult res = amalgamate(d0, d1, d2, phi1, phi2);
  auto iso = isometric_isomorphic(res.result, d2);
  CHECK(iso.has_value());
  CHECK(res.sup_distance == 0);
}

TEST_CASE("amalgamating a group with itself over everything returns it") {
  ValuedGroup d = vg({2, 2}, {Rat(0), Rat(1, 2), Rat(1, 2), Rat(1)});
  GroupHom id = hom_identity(d.group);
  AmalgamResult res = amalgamate(d, d, d, id, id);
  CHECK(isometric_isomorphic(res.result, d).has_value());
}

TEST_CASE("trivial-base amalgams equal the capped direct sum on all small shapes") {
  Rng rng(127);
  std::vector<std::vector<std::uint64_t>> shapes{{2}, {3}, {4}, {5}, {6}, {7}, {8},
                                                 {2, 2}, {2, 3}, {2, 4}, {2, 2, 2}};
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    Rng child = rng.child(s);
    FiniteAbelianGroup g1(shapes[s]);
    FiniteAbelianGroup g2(shapes[(s + 3) % shapes.size()]);
    Cap cap = s % 2 ? Cap::one : Cap::infinite;
    ValuedGroup d1 = random_grid_value(child, g1, 2, cap, 0);
    ValuedGroup d2 = random_grid_value(child, g2, 2, cap, 0);
    ValuedGroup d0 = trivial_valued(cap, 0);
    AmalgamResult res = amalgamate(d0, d1, d2, hom_zero(d0.group, g1), hom_zero(d0.group, g2));
    REQUIRE(res.result.group.order() == g1.order() * g2.order());
    for (Elem x = 0; x < g1.order(); ++x)
      for (Elem y = 0; y < g2.order(); ++y) {
        Rat expected = d1.value[x] + d2.value[y];
        if (cap == Cap::one && expected > 1) expected = 1;
        Elem z = res.result.group.add(res.psi1.table[x], res.psi2.table[y]);
        CHECK(res.result.value[z] == expected);
      }
  }
}

TEST_CASE("completion leaves semivalue-shaped costs unchanged") {
  FiniteAbelianGroup z4({4});
  CostFunction c{z4, {Rat(0), Rat(1, 2), Rat(0), Rat(1, 2)}};
  CompletionResult r = complete_cost(c);
  for (Elem x = 0; x < 4; ++x) CHECK(*r.value[x] == *c.cost[x]);
}

TEST_CASE("amalgamation is symmetric up to isometric isomorphism") {
  Rng rng(43);
  for (int i = 0; i < 15; ++i) {
    Rng child = rng.child(i);
    std::uint64_t n = i % 2 ? 2 : 0;
    FiniteAbelianGroup g1 = random_group(child, n, 8);
    ValuedGroup d1 = random_grid_value(child, g1, 2, Cap::infinite, n);
    Subgroup k = random_subgroup(child, g1);
    AbstractSubgroup ab = abstract_subgroup(k);
    std::vector<Rat> pulled(ab.group.order());
    for (Elem b = 0; b < ab.group.order(); ++b) pulled[b] = d1.value[ab.from_abstract[b]];
    ValuedGroup d0{ab.group, pulled, Cap::infinite, n};
    GroupHom phi{ab.group, g1, ab.from_abstract};
    ValuedGroup d2 = d1;
    AmalgamResult ab_res = amalgamate(d0, d1, d2, phi, phi);
    AmalgamResult ba_res = amalgamate(d0, d2, d1, phi, phi);
    CHECK(isometric_isomorphic(ab_res.result, ba_res.result).has_value());
  }
}

TEST_CASE("coherence of iterated amalgamation over a common subgroup") {
  Rng rng(47);
  for (int i = 0; i < 8; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup ga = random_group(child, 2, 4);
    ValuedGroup a = random_grid_value(child, ga, 2, Cap::infinite, 2);
    Subgroup k = random_subgroup(child, ga);
    AbstractSubgroup ab = abstract_subgroup(k);
    std::vector<Rat> pulled(ab.group.order());
    for (Elem t = 0; t < ab.group.order(); ++t) pulled[t] = a.value[ab.from_abstract[t]];
    ValuedGroup kv{ab.group, pulled, Cap::infinite, 2};
    GroupHom into_a{ab.group, ga, ab.from_abstract};

    // B and C are one-generator extensions of K, so K embeds in all three.
    Rng rb = child.child(1), rc = child.child(2);
    auto cone = [&](Rng& r) {
      Elem base = r.below(kv.group.order());
      Rat offset = rat_of(static_cast<long>(1 + r.below(3)), 4);
      std::vector<Elem> domain{kv.group.zero()};
      std::vector<Rat> values{kv.p(base) + offset};
      return make_katetov(kv, domain, values, Cap::infinite);
    };
    OneGenExtension be = extend_onegen(kv, cone(rb), 2, Cap::infinite);
    OneGenExtension ce = extend_onegen(kv, cone(rc), 2, Cap::infinite);

    AmalgamResult ab_res = amalgamate(kv, a, be.result, into_a, be.embedding);
    GroupHom into_ab = hom_compose(ab_res.psi1, into_a);
    AmalgamResult abc = amalgamate(kv, ab_res.result, ce.result, into_ab, ce.embedding);

    AmalgamResult ac_res = amalgamate(kv, a, ce.result, into_a, ce.embedding);
    GroupHom into_ac = hom_compose(ac_res.psi1, into_a);
    AmalgamResult acb = amalgamate(kv, ac_res.result, be.result, into_ac, be.embedding);

    CHECK(isometric_isomorphic(abc.result, acb.result).has_value());
  }
}

TEST_CASE("almost-isometric correction fixtures") {
  SUBCASE("exact data gives distance zero") {
    ValuedGroup d1 = vg({2}, {Rat(0), Rat(1)});
    Subgroup d0 = full_subgroup(d1.group);
    GroupHom v = hom_identity(d1.group);
    AmalgamResult res = amalgamate_approx(d1, d0, d1, {0, 1}, v, Rat(1, 4));
    CHECK(res.sup_distance == 0);
  }
  SUBCASE("the delta-gated path wins at small eps") {
    ValuedGroup d1 = vg({2}, {Rat(0), Rat(1)});
    ValuedGroup d2 = vg({2}, {Rat(0), Rat(1)});
    Subgroup d0 = trivial_subgroup(d1.group);
    GroupHom v = hom_identity(d1.group);
    AmalgamResult res = amalgamate_approx(d1, d0, d2, {0}, v, Rat(1, 4));
    // A = 2, so the witnesses sit at distance 2*eps = 1/2.
    CHECK(res.sup_distance == Rat(1, 2));
    Elem diff = res.result.group.sub(res.psi1.table[1], res.psi2.table[v.table[1]]);
    CHECK(res.result.p(diff) == Rat(1, 2));
  }
  SUBCASE("the direct path wins once the gate is expensive") {
    ValuedGroup d1 = vg({2}, {Rat(0), Rat(1)});
    ValuedGroup d2 = vg({2}, {Rat(0), Rat(1, 4)});
    Subgroup d0 = trivial_subgroup(d1.group);
    GroupHom v = hom_identity(d1.group);
    v.target = d2.group;
    // v is 7/8-almost isometric: 1/8 <= 1/4 <= 15/8; the gate costs 2*7/8.
    AmalgamResult res = amalgamate_approx(d1, d0, d2, {0}, v, Rat(7, 8));
    Elem diff = res.result.group.sub(res.psi1.table[1], res.psi2.table[1]);
    CHECK(res.result.p(diff) == Rat(5, 4));
  }
  SUBCASE("precondition violations are rejected") {
    ValuedGroup d1 = vg({2}, {Rat(0), Rat(1)});
    ValuedGroup d2 = vg({2}, {Rat(0), Rat(1, 4)});
    GroupHom v = hom_identity(d1.group);
    v.target = d2.group;
    CHECK_THROWS_AS(
        amalgamate_approx(d1, trivial_subgroup(d1.group), d2, {0}, v, Rat(1, 4)), Error);
    CHECK_THROWS_AS(
        amalgamate_approx(d1, trivial_subgroup(d1.group), d1, {0}, hom_identity(d1.group), Rat(2)),
        Error);
  }
}

TEST_CASE("mixed identification fixtures") {
  ValuedGroup d1 = vg({2, 2}, {Rat(0), Rat(1, 2), Rat(1, 2), Rat(1, 2)});
  ValuedGroup d2 = d1;
  Subgroup e1 = subgroup_from_elements(d1.group, {0, 2});  // <e1>
  Subgroup e2 = subgroup_from_elements(d1.group, {0, 1});  // <e2>

  SUBCASE("trivial second identification reduces to the exact glue") {
    Subgroup none = trivial_subgroup(d1.group);
    AmalgamResult res = amalgamate_mixed(d1, e1, none, d2, {0, 2}, {0}, Rat(1, 2));
    CHECK(res.sup_distance == 0);
    for (std::size_t i = 0; i < e1.elements.size(); ++i)
      CHECK(res.psi2.table[e1.elements[i]] == res.psi1.table[e1.elements[i]]);
  }
  SUBCASE("equal identifications glue exactly") {
    AmalgamResult res = amalgamate_mixed(d1, e1, e1, d2, {0, 2}, {0, 2}, Rat(1, 2));
    CHECK(res.sup_distance == 0);
  }
  SUBCASE("genuinely distinct identifications stay within eps") {
    // phi2 sends e2 to e1+e2; pair distances agree exactly, eps = 1/2.
    AmalgamResult res = amalgamate_mixed(d1, e1, e2, d2, {0, 2}, {0, 3}, Rat(1, 2));
    CHECK(res.sup_distance <= Rat(1, 2));
    for (std::size_t i = 0; i < e1.elements.size(); ++i)
      CHECK(res.psi2.table[e1.elements[i]] == res.psi1.table[e1.elements[i]]);
  }
  SUBCASE("incompatible identifications are rejected with a witness") {
    ValuedGroup skew = vg({2, 2}, {Rat(0), Rat(1, 2), Rat(1, 2), Rat(1)});
    // lambda2(e1+e2) = 1 while lambda1(e1-e2) = 1/2: deviation 1/2 > 1/8.
    CHECK_THROWS_AS(amalgamate_mixed(d1, e1, e2, skew, {0, 2}, {0, 1}, Rat(1, 8)), Error);
  }
}
