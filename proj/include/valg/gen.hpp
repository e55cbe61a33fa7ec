#pragma once

#include "valg/free_group.hpp"
#include "valg/katetov.hpp"
#include "valg/modulus.hpp"
#include "valg/rng.hpp"
#include "valg/stepfn.hpp"
#include "valg/value.hpp"

namespace valg {

// Deterministic instance generators for the randomized suites. All draws come
// from the caller's Rng, so a fixed seed reproduces the instance byte for
// byte.

// A finite Abelian group of exponent n (n = 0: unconstrained factors).
FiniteAbelianGroup random_group(Rng& rng, std::uint64_t n, std::uint64_t max_order);

// A grid-valued value on g: metric completion of a random symmetric grid
// cost, capped when cap is one.
ValuedGroup random_grid_value(Rng& rng, const FiniteAbelianGroup& g, int grid_log2, Cap cap,
                              std::uint64_t exponent);

Subgroup random_subgroup(Rng& rng, const FiniteAbelianGroup& g);

// A Katetov map on a random domain: minimum of cones t_i + p(x - b_i) over a
// few virtual points with consistent offsets, grid-valued, capped for cap=one.
KatetovMap random_katetov(Rng& rng, const ValuedGroup& base, std::size_t domain_size,
                          int grid_log2, Cap cap);

// A metric space with grid distances (shortest-path closure of a random
// symmetric table).
FiniteMetricSpace random_metric_space(Rng& rng, std::size_t n, int grid_log2);

CostFunction random_cost(Rng& rng, const FiniteAbelianGroup& g, int grid_log2,
                         bool allow_infinite);

StepFunction random_stepfn(Rng& rng, const FiniteAbelianGroup& host, std::size_t max_pieces,
                           int grid_log2);

// A concave nondecreasing piecewise-linear modulus (concavity gives
// subadditivity for free).
Modulus random_concave_modulus(Rng& rng, std::size_t segments, int grid_log2);

}  // namespace valg
