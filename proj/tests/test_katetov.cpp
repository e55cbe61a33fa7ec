#include <doctest.h>

#include <set>

#include "valg/gen.hpp"
#include "valg/free_group.hpp"
#include "valg/katetov.hpp"

using namespace valg;

namespace {

ValuedGroup vg(std::vector<std::uint64_t> factors, std::vector<Rat> table,
               Cap cap = Cap::infinite, std::uint64_t exponent = 0) {
  return make_valued_group(FiniteAbelianGroup(std::move(factors)), std::move(table), cap, exponent);
}

}  // namespace

TEST_CASE("Katetov validation") {
  ValuedGroup v = vg({2}, {Rat(0), Rat(1)});
  CHECK(validate_katetov(v, KatetovMap{{0, 1}, {Rat(1, 2), Rat(1, 2)}, Cap::infinite}).empty());
  // Lower bound broken: f(0)+f(1) < p(0-1).
  CHECK(!validate_katetov(v, KatetovMap{{0, 1}, {Rat(1, 4), Rat(1, 4)}, Cap::infinite}).empty());
  // Lipschitz side broken.
  CHECK(!validate_katetov(v, KatetovMap{{0, 1}, {Rat(3), Rat(1, 2)}, Cap::infinite}).empty());
}

TEST_CASE("exponent-2 admissibility is the Katetov inequality itself") {
  Rng rng(13);
  for (int i = 0; i < 40; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 2, 8);
    ValuedGroup v = random_grid_value(child, g, 2, Cap::infinite, 2);
    KatetovMap f = random_katetov(child, v, 1 + child.below(4), 2, Cap::infinite);
    CHECK(!admissibility_violation(v, f, 2).has_value());
  }
}

TEST_CASE("the exponent-3 subgroup-form counterexample") {
  ValuedGroup q = vg({3}, {Rat(0), Rat(1), Rat(1)}, Cap::infinite, 3);
  KatetovMap f{{0, 1, 2}, {Rat(3, 2), Rat(1, 2), Rat(1, 2)}, Cap::infinite};
  REQUIRE(validate_katetov(q, f).empty());
  auto w = admissibility_violation(q, f, 3);
  REQUIRE(w.has_value());
  CHECK(w->subgroup_form);
  CHECK(w->lhs == Rat(3, 2));
  CHECK(w->rhs == Rat(1));
  CHECK(!find_realizer(q, f).has_value());
}

TEST_CASE("the constant half map on three generators fails at exponent 5") {
  // Z_5^3 with the word metric of {+-e_j} u {e_j - e_k}; f = 1/2 on the basis.
  FiniteAbelianGroup g({5, 5, 5});
  std::set<Elem> gens;
  for (std::size_t j = 0; j < 3; ++j) {
    gens.insert(g.basis(j));
    gens.insert(g.neg(g.basis(j)));
    for (std::size_t k = 0; k < 3; ++k)
      if (j != k) gens.insert(g.sub(g.basis(j), g.basis(k)));
  }
  ValuedGroup metric = word_metric(GeneratingSet{g, {gens.begin(), gens.end()}, std::nullopt});
  std::vector<Elem> domain{g.basis(0), g.basis(1), g.basis(2)};
  std::sort(domain.begin(), domain.end());
  KatetovMap f = make_katetov(metric, domain, std::vector<Rat>(3, Rat(1, 2)), Cap::infinite);
  auto w = admissibility_violation(metric, f, 5);
  REQUIRE(w.has_value());
  CHECK(w->lhs > w->rhs);
  CHECK(!w->subgroup_form);
}

TEST_CASE("one-generator extension fixtures") {
  SUBCASE("half-distance point next to the single generator") {
    ValuedGroup v = vg({2}, {Rat(0), Rat(1)}, Cap::infinite, 2);
    KatetovMap f{{1}, {Rat(1, 2)}, Cap::infinite};
    OneGenExtension ext = extend_onegen(v, f, 2, Cap::infinite);
    const FiniteAbelianGroup& gp = ext.result.group;
    CHECK(gp.factors() == std::vector<std::uint64_t>{2, 2});
    CHECK(ext.adjoined_order == 2);
    CHECK(ext.bound_m == 1);
    Elem g_embedded = ext.embedding.table[1];
    CHECK(ext.result.p(gp.sub(g_embedded, ext.witness)) == Rat(1, 2));
    CHECK(ext.result.p(ext.witness) == Rat(1));
    CHECK(ext.result.p(g_embedded) == Rat(1));
  }
  SUBCASE("adjoining a rank-3 generator at distance 1/2 from zero") {
    ValuedGroup v = vg({3}, {Rat(0), Rat(1), Rat(1)}, Cap::infinite, 3);
    KatetovMap f{{0}, {Rat(1, 2)}, Cap::infinite};
    OneGenExtension ext = extend_onegen(v, f, 3, Cap::infinite);
    const FiniteAbelianGroup& gp = ext.result.group;
    CHECK(ext.adjoined_order == 3);
    Elem b = ext.witness;
    CHECK(ext.result.p(b) == Rat(1, 2));
    CHECK(ext.result.p(gp.mul(2, b)) == Rat(1, 2));
  }
  SUBCASE("midpoint witness on the two-point domain") {
    ValuedGroup v = vg({2}, {Rat(0), Rat(1)}, Cap::infinite, 2);
    KatetovMap f{{0, 1}, {Rat(1, 2), Rat(1, 2)}, Cap::infinite};
    OneGenExtension ext = extend_onegen(v, f, 2, Cap::infinite);
    Elem b = ext.witness;
    const FiniteAbelianGroup& gp = ext.result.group;
    CHECK(ext.result.p(b) == Rat(1, 2));
    CHECK(ext.result.p(gp.sub(ext.embedding.table[1], b)) == Rat(1, 2));
    CHECK(ext.result.p(ext.embedding.table[1]) == Rat(1));
  }
}

TEST_CASE("extension preconditions are enforced") {
  ValuedGroup v = vg({2}, {Rat(0), Rat(1)}, Cap::infinite, 2);
  // min f = 0: rejected with the realizer hint.
  KatetovMap zero_min{{0, 1}, {Rat(0), Rat(1)}, Cap::infinite};
  CHECK_THROWS_AS(extend_onegen(v, zero_min, 2, Cap::infinite), Error);
  CHECK(find_realizer(v, zero_min).has_value());

  // An inadmissible map is refused with a witness in the message.
  ValuedGroup q = vg({3}, {Rat(0), Rat(1), Rat(1)}, Cap::infinite, 3);
  KatetovMap bad{{0, 1, 2}, {Rat(3, 2), Rat(1, 2), Rat(1, 2)}, Cap::infinite};
  CHECK_THROWS_AS(extend_onegen(q, bad, 3, Cap::infinite), Error);
}

TEST_CASE("realizer search") {
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 12);
    ValuedGroup v = random_grid_value(child, g, 2, Cap::infinite, 0);
    Elem b0 = child.below(g.order());
    std::vector<Elem> domain;
    for (Elem x = 0; x < g.order(); ++x)
      if (child.chance(1, 2)) domain.push_back(x);
    if (domain.empty()) domain.push_back(0);
    std::vector<Rat> values;
    for (Elem a : domain) values.push_back(v.p(g.sub(a, b0)));
    KatetovMap f{domain, values, Cap::infinite};
    auto found = find_realizer(v, f);
    REQUIRE(found.has_value());
    for (std::size_t t = 0; t < domain.size(); ++t)
      CHECK(v.p(g.sub(domain[t], *found)) == values[t]);
  }

  // The two-point half map on Z_2 has no realizer inside the group.
  ValuedGroup v = vg({2}, {Rat(0), Rat(1)}, Cap::infinite, 2);
  KatetovMap half{{0, 1}, {Rat(1, 2), Rat(1, 2)}, Cap::infinite};
  CHECK(!find_realizer(v, half).has_value());
}

TEST_CASE("midpoints are exact halves") {
  SUBCASE("exponent 2") {
    ValuedGroup v = vg({2}, {Rat(0), Rat(1)}, Cap::infinite, 2);
    OneGenExtension ext = midpoint_extend(v, 0, 1);
    const FiniteAbelianGroup& gp = ext.result.group;
    Elem x = ext.embedding.table[0], y = ext.embedding.table[1];
    CHECK(ext.result.p(gp.sub(x, ext.witness)) + ext.result.p(gp.sub(ext.witness, y)) ==
          ext.result.p(gp.sub(x, y)));
  }
  SUBCASE("exponent 3") {
    ValuedGroup v = vg({3}, {Rat(0), Rat(1), Rat(1)}, Cap::infinite, 3);
    OneGenExtension ext = midpoint_extend(v, 0, 1);
    Elem x = ext.embedding.table[0], y = ext.embedding.table[1];
    const FiniteAbelianGroup& gp = ext.result.group;
    CHECK(ext.result.p(gp.sub(x, ext.witness)) == Rat(1, 2));
    CHECK(ext.result.p(gp.sub(ext.witness, y)) == Rat(1, 2));
  }
  ValuedGroup v = vg({2}, {Rat(0), Rat(1)}, Cap::infinite, 2);
  CHECK_THROWS_AS(midpoint_extend(v, 1, 1), Error);
}

TEST_CASE("grid extension fixtures") {
  SUBCASE("round up off the subgroup") {
    ValuedGroup d = vg({3}, {Rat(0), Rat(3, 10), Rat(3, 10)});
    ValuedGroup out = extend_value_grid(d, trivial_subgroup(d.group), 3, Rat(1, 8), Cap::infinite);
    CHECK(out.value == std::vector<Rat>{Rat(0), Rat(3, 8), Rat(3, 8)});
  }
  SUBCASE("already on the grid") {
    ValuedGroup d = vg({3}, {Rat(0), Rat(1, 4), Rat(1, 4)});
    ValuedGroup out = extend_value_grid(d, full_subgroup(d.group), 3, Rat(1, 8), Cap::infinite);
    CHECK(out.value == d.value);
  }
  SUBCASE("cap branch") {
    ValuedGroup d = vg({2}, {Rat(0), Rat(9, 10)}, Cap::one, 2);
    ValuedGroup out = extend_value_grid(d, trivial_subgroup(d.group), 2, Rat(1, 4), Cap::one);
    CHECK(out.value[1] == Rat(1));
  }
  SUBCASE("off-grid subgroup value is a precondition error") {
    ValuedGroup d = vg({2}, {Rat(0), Rat(1, 3)});
    CHECK_THROWS_AS(extend_value_grid(d, full_subgroup(d.group), 2, Rat(1, 4), Cap::infinite),
                    Error);
  }
}

TEST_CASE("modulus extension fixtures") {
  Modulus half = make_modulus(pl_scale(Rat(1, 2), pl_identity()));
  ValuedGroup d = vg({4}, {Rat(0), Rat(1, 2), Rat(1), Rat(1, 2)});
  Subgroup d0 = subgroup_from_elements(d.group, {0, 2});

  SUBCASE("worked table") {
    ModulusExtensionResult ext =
        extend_semivalue_modulus(d, d0, {Rat(0), Rat(1, 4)}, half, std::nullopt);
    CHECK(ext.result.value == std::vector<Rat>{Rat(0), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  }
  SUBCASE("zero on the subgroup propagates to the zero set only") {
    ModulusExtensionResult ext =
        extend_semivalue_modulus(d, d0, {Rat(0), Rat(0)}, half, std::nullopt);
    CHECK(ext.result.value[2] == 0);
    CHECK(ext.result.zero_set() == std::vector<Elem>{0, 2});
  }
  SUBCASE("full subgroup returns lambda0") {
    Subgroup full = full_subgroup(d.group);
    std::vector<Rat> lambda0{Rat(0), Rat(1, 4), Rat(1, 2), Rat(1, 4)};
    ModulusExtensionResult ext = extend_semivalue_modulus(d, full, lambda0, half, std::nullopt);
    CHECK(ext.result.value == lambda0);
  }
  SUBCASE("domination failures carry a witness") {
    CHECK_THROWS_AS(extend_semivalue_modulus(d, d0, {Rat(0), Rat(2)}, half, std::nullopt), Error);
  }
}

TEST_CASE("admissibility of realized maps, randomized") {
  // A map sampled from an actual point always passes the inequality for the
  // group exponent.
  Rng rng(19);
  for (int i = 0; i < 30; ++i) {
    Rng child = rng.child(i);
    std::uint64_t n = 3 + child.below(2);
    FiniteAbelianGroup g = random_group(child, n, 12);
    ValuedGroup v = random_grid_value(child, g, 2, Cap::infinite, n);
    Elem b0 = child.below(g.order());
    std::set<Elem> dom;
    for (int t = 0; t < 4; ++t) dom.insert(child.below(g.order()));
    std::vector<Elem> domain(dom.begin(), dom.end());
    std::vector<Rat> values;
    for (Elem a : domain) values.push_back(v.p(g.sub(a, b0)));
    KatetovMap f{domain, values, Cap::infinite};
    CHECK(find_realizer(v, f).has_value());
    CHECK(!admissibility_violation(v, f, n).has_value());
  }
}
