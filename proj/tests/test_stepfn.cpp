#include <doctest.h>

#include "valg/gen.hpp"
#include "valg/stepfn.hpp"

using namespace valg;

namespace {

ValuedGroup vg(std::vector<std::uint64_t> factors, std::vector<Rat> table) {
  return make_valued_group(FiniteAbelianGroup(std::move(factors)), std::move(table),
                           Cap::infinite, 0);
}

}  // namespace

TEST_CASE("integral norm fixtures") {
  ValuedGroup q = vg({2}, {Rat(0), Rat(1)});
  StepFunction hat = step_hat(q.group, 1);
  CHECK(step_norm(step_act(Rat(2), hat), q) == Rat(2));

  // g on [0,1) plus g on [0,3/2) cancels on [0,1).
  StepFunction sum = step_add(hat, step_act(Rat(3, 2), hat));
  REQUIRE(sum.ends.size() == 2);
  CHECK(sum.at(Rat(1, 2)) == 0);
  CHECK(sum.at(Rat(5, 4)) == 1);
  CHECK(step_norm(sum, q) == Rat(1, 2));
}

TEST_CASE("hat is isometric and norms every element exactly") {
  Rng rng(67);
  for (int i = 0; i < 20; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 12);
    ValuedGroup q = random_grid_value(child, g, 2, Cap::infinite, 0);
    for (Elem h = 0; h < g.order(); ++h) CHECK(step_norm(step_hat(g, h), q) == q.value[h]);
    Elem a = child.below(g.order()), b = child.below(g.order());
    StepFunction diff = step_add(step_hat(g, a), step_neg(step_hat(g, b)));
    CHECK(step_norm(diff, q) == q.value[g.sub(a, b)]);
  }
}

TEST_CASE("the action distributes and composes") {
  Rng rng(71);
  for (int i = 0; i < 25; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 8);
    StepFunction u = random_stepfn(child, g, 4, 2);
    StepFunction v = random_stepfn(child, g, 4, 2);
    Rat s = rat_of(static_cast<long>(child.below(8)), 4);
    Rat t = rat_of(static_cast<long>(child.below(8)), 4);
    CHECK(step_act(t, step_add(u, v)) == step_add(step_act(t, u), step_act(t, v)));
    CHECK(step_act(s * t, u) == step_act(s, step_act(t, u)));
    CHECK(step_act(Rat(1), u) == u);
    CHECK(step_act(Rat(0), u).zero());
  }
}

TEST_CASE("canonical decomposition reconstructs the function") {
  Rng rng(73);
  for (int i = 0; i < 25; ++i) {
    Rng child = rng.child(i);
    FiniteAbelianGroup g = random_group(child, 0, 8);
    StepFunction u = random_stepfn(child, g, 5, 2);
    StepFunction rebuilt = step_zero(g);
    for (const auto& [t, h] : step_decomposition(u))
      rebuilt = step_add(rebuilt, step_act(t, step_hat(g, h)));
    CHECK(rebuilt == u);
    // Breakpoints strictly increase and summands are nonzero.
    auto dec = step_decomposition(u);
    for (std::size_t j = 0; j + 1 < dec.size(); ++j) CHECK(dec[j].first < dec[j + 1].first);
    for (const auto& [t, h] : dec) CHECK(h != g.zero());
  }
}

TEST_CASE("host mismatch is rejected") {
  FiniteAbelianGroup a({2}), b({3});
  CHECK_THROWS_AS(step_add(step_hat(a, 1), step_hat(b, 1)), Error);
}

TEST_CASE("norming certificates") {
  NormingReport nabla = norming_validate(norming_nabla(), Rat(1));
  CHECK(nabla.violations.empty());
  CHECK(!nabla.zero_at_zero);
  CHECK(nabla.classification_verified);

  NormingReport id = norming_validate(pl_identity(), Rat(1));
  CHECK(id.violations.empty());
  CHECK(id.zero_at_zero);
  CHECK(id.classification_verified);

  // kappa(0) in (0,1) breaks submultiplicativity at the origin.
  PL low{{{Rat(0), Rat(3, 4)}, {Rat(1), Rat(1)}}, Rat(1)};
  NormingReport bad = norming_validate(low, Rat(1));
  bool nf2 = false;
  for (const auto& v : bad.violations) nf2 = nf2 || v.find("NF2") != std::string::npos;
  CHECK(nf2);

  // kappa(1) != 1 and kappa < id both violate NF1.
  PL shifted{{{Rat(0), Rat(0)}, {Rat(1), Rat(2)}}, Rat(2)};
  NormingReport nf1 = norming_validate(shifted, Rat(2));
  CHECK(!nf1.violations.empty());
  PL sublinear{{{Rat(0), Rat(0)}}, Rat(1, 2)};
  CHECK(!norming_validate(sublinear, Rat(1)).violations.empty());
}

TEST_CASE("subnorm estimates bound the norm from below and attain it") {
  ValuedGroup q = vg({2}, {Rat(0), Rat(1)});
  Rng rng(89);
  for (int i = 0; i < 15; ++i) {
    Rng child = rng.child(i);
    StepFunction u = random_stepfn(child, q.group, 4, 2);
    Rat norm = step_norm(u, q);
    // alpha * ||u|| / max(alpha,1) peaks at alpha >= 1, where it equals ||u||.
    CHECK(subnorm_estimate(u, q, {Rat(1, 2)}) <= norm);
    CHECK(subnorm_estimate(u, q, {Rat(1, 2), Rat(1), Rat(3)}) == norm);
  }
}

TEST_CASE("kappa-norm checks on step functions") {
  ValuedGroup q = vg({4}, {Rat(0), Rat(1, 2), Rat(1), Rat(1, 2)});
  NormingFunction nabla = make_norming(norming_nabla(), Rat(1));
  Rng rng(79);
  std::vector<StepFunction> samples;
  for (int i = 0; i < 10; ++i) {
    Rng child = rng.child(i);
    samples.push_back(random_stepfn(child, q.group, 4, 2));
  }
  std::vector<Rat> ts{Rat(0), Rat(1, 2), Rat(1), Rat(3), Rat(9, 4)};
  KappaNormReport report = check_kappa_norm(samples, ts, nabla, q);
  CHECK(report.violations.empty());
  CHECK(report.homogeneous);
}
