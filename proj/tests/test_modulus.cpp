#include <doctest.h>

#include "valg/gen.hpp"
#include "valg/modulus.hpp"
#include "valg/value.hpp"

using namespace valg;

TEST_CASE("basic moduli and tail slopes") {
  // x -> min(x, 1)
  Modulus capped = make_modulus(PL{{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}, Rat(0)});
  CHECK(capped(Rat(1, 2)) == Rat(1, 2));
  CHECK(capped(Rat(5)) == Rat(1));
  CHECK(tail_slope(capped) == 0);

  Modulus id{pl_identity()};
  CHECK(tail_slope(id) == 1);
}

TEST_CASE("subadditivity is certified exactly") {
  // Convex kink: w(1)=1 but slope 2 afterwards; fails at (1,1).
  PL convex{{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}, Rat(2)};
  auto witness = subadditivity_witness(convex);
  REQUIRE(witness.has_value());
  CHECK(convex(witness->x + witness->y) > convex(witness->x) + convex(witness->y));
  CHECK_THROWS_AS(make_modulus(convex), Error);

  // Concave functions always pass.
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Rng child = rng.child(i);
    Modulus m = random_concave_modulus(child, 1 + child.below(3), 2);
    CHECK(!subadditivity_witness(m.pl).has_value());
  }
}

TEST_CASE("combinators evaluate pointwise and re-verify") {
  Rng rng(5);
  std::vector<Rat> probes{Rat(0), Rat(1, 3), Rat(1), Rat(7, 4), Rat(13)};
  for (int i = 0; i < 25; ++i) {
    Rng child = rng.child(i);
    Modulus a = random_concave_modulus(child, 1 + child.below(3), 2);
    Modulus b = random_concave_modulus(child, 1 + child.below(3), 2);
    Modulus sum = mod_sum(a, b);
    Modulus mx = mod_max(a, b);
    Modulus mn = mod_min(a, b);
    Modulus comp = mod_compose(a, b);
    for (const Rat& x : probes) {
      CHECK(sum(x) == a(x) + b(x));
      CHECK(mx(x) == std::max(a(x), b(x)));
      CHECK(mn(x) == std::min(a(x), b(x)));
      CHECK(comp(x) == a(b(x)));
    }
  }
}

TEST_CASE("the worked triple") {
  Modulus id{pl_identity()};
  OrtTriple t = build_ort_triple(id, id, id, Cap::one);
  CHECK(t.omega.pl == pl_identity());
  CHECK(t.rho(Rat(3)) == 6);       // rho = 2t
  CHECK(t.tau(Rat(1)) == 1);       // tau = min(t, 2)
  CHECK(t.tau(Rat(5)) == 2);
  CHECK(!check_ort(t.omega, t.rho, t.tau, Cap::one).has_value());

  // Unbounded rho with r = infinity: the cap is a no-op.
  OrtTriple u = build_ort_triple(id, id, id, Cap::infinite);
  CHECK(u.tau.pl == pl_identity());
  CHECK(!check_ort(u.omega, u.rho, u.tau, Cap::infinite).has_value());
}

TEST_CASE("the inequality checker rejects a broken triple") {
  Modulus id{pl_identity()};
  Modulus twice = make_modulus(pl_scale(Rat(2), pl_identity()));
  // tau(t) + rho(s) = 2t + s > t + s = rho(omega(t)+s) for t > 0.
  auto witness = check_ort(id, id, twice, Cap::infinite);
  REQUIRE(witness.has_value());
  CHECK(twice(witness->t) + id(witness->s) > id(id(witness->t) + witness->s));
}

TEST_CASE("built triples always satisfy their inequality") {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    Rng child = rng.child(i);
    Modulus w0 = random_concave_modulus(child, 1 + child.below(2), 2);
    Modulus r0 = random_concave_modulus(child, 1 + child.below(2), 2);
    Modulus t0 = random_concave_modulus(child, 1 + child.below(2), 2);
    Cap cap = i % 2 ? Cap::one : Cap::infinite;
    OrtTriple t = build_ort_triple(w0, r0, t0, cap);
    auto witness = check_ort(t.omega, t.rho, t.tau, cap);
    if (witness) {
      CAPTURE(rat_to_string(witness->t));
      CAPTURE(rat_to_string(witness->s));
      CHECK(false);
    }
  }
}
