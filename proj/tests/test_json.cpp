#include <doctest.h>

#include "valg/gen.hpp"
#include "valg/json_io.hpp"

using namespace valg;

TEST_CASE("artifacts round-trip bit-exactly") {
  Rng rng(83);
  for (int i = 0; i < 20; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 12);
    ValuedGroup v = random_grid_value(child, g, 3, Cap::infinite, 0);

    Json vj = valued_group_to_json(v);
    ValuedGroup v2 = valued_group_from_json(Json::parse(vj.dump()));
    CHECK(v2.group == v.group);
    CHECK(v2.value == v.value);
    CHECK(v2.cap == v.cap);
    CHECK(v2.exponent == v.exponent);

    KatetovMap f = random_katetov(child, v, 1 + child.below(4), 3, Cap::infinite);
    KatetovMap f2 = katetov_from_json(g, Json::parse(katetov_to_json(g, f).dump()));
    CHECK(f2.domain == f.domain);
    CHECK(f2.values == f.values);

    FiniteMetricSpace x = random_metric_space(child, 2 + child.below(4), 2);
    FiniteMetricSpace x2 = metric_from_json(Json::parse(metric_to_json(x).dump()));
    CHECK(x2.points == x.points);
    CHECK(x2.dist == x.dist);

    CostFunction c = random_cost(child, g, 3, true);
    CostFunction c2 = cost_from_json(Json::parse(cost_to_json(c).dump()));
    CHECK(c2.cost == c.cost);

    StepFunction u = random_stepfn(child, g, 4, 3);
    auto [u2, host2] = stepfn_from_json(Json::parse(stepfn_to_json(u, v).dump()));
    CHECK(u2 == u);
    CHECK(host2.value == v.value);
  }
}

TEST_CASE("hom serialization uses generator images") {
  FiniteAbelianGroup source({2, 4}), target({8});
  GroupHom f = hom_from_basis_images(source, target, {4, 2});
  Json j = hom_to_json(f);
  CHECK(j.at("images").size() == 2);
  GroupHom f2 = hom_from_json(Json::parse(j.dump()));
  CHECK(f2.table == f.table);
}

TEST_CASE("identical artifacts dump to identical bytes") {
  Rng a(97), b(97);
  FiniteAbelianGroup ga = random_group(a, 2, 8);
  FiniteAbelianGroup gb = random_group(b, 2, 8);
  ValuedGroup va = random_grid_value(a, ga, 2, Cap::one, 2);
  ValuedGroup vb = random_grid_value(b, gb, 2, Cap::one, 2);
  CHECK(valued_group_to_json(va).dump() == valued_group_to_json(vb).dump());
}

TEST_CASE("schema errors carry the offending path") {
  CHECK_THROWS_AS(group_from_json(Json{{"wrong", 1}}), Error);
  CHECK_THROWS_AS(rat_from_string("1/0"), Error);
  CHECK_THROWS_AS(rat_from_string("abc"), Error);
  Json bad = Json{{"factors", {2}}, {"cap", "two"}, {"exponent", 0}, {"value", Json::object()}};
  CHECK_THROWS_AS(valued_group_from_json(bad), Error);
}

TEST_CASE("rational strings are canonical") {
  CHECK(rat_to_string(rat_from_string("6/4")) == "3/2");
  CHECK(rat_to_string(rat_from_string("4/2")) == "2");
  CHECK(rat_to_string(Rat(0)) == "0");
  CHECK(rat_from_string("-7/2") == Rat(-7, 2));
}
