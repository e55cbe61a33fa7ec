#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valg/value.hpp"

namespace valg {

struct FiniteMetricSpace {
  std::vector<std::string> points;
  std::vector<Rat> dist;  // dense n x n table

  std::size_t size() const { return points.size(); }
  const Rat& d(std::size_t i, std::size_t j) const { return dist[i * points.size() + j]; }
  Rat diameter() const;
};

std::vector<std::string> validate_metric(const FiniteMetricSpace& x);
FiniteMetricSpace make_metric_space(std::vector<std::string> points, std::vector<Rat> dist);

// max over points of the distance to the nearest other point (0 for < 2 points).
Rat separation_radius(const FiniteMetricSpace& x, const std::vector<std::size_t>& subset);

// The zero-sum exponent-N group over a finite metric space, carried by
// Z_N^(n-1) (last coordinate eliminated), valued by the infimum of sums of
// pair distances representing an element as a sum of differences.
struct FreeValuedGroup {
  FiniteMetricSpace space;
  std::uint64_t n = 2;  // exponent
  FiniteAbelianGroup carrier;
  std::vector<Rat> value;
  Cap cap = Cap::infinite;

  // x_hat(i) - x_hat(j) in carrier coordinates.
  Elem pair_difference(std::size_t i, std::size_t j) const;
  // Support of an element in the full Z_N^n presentation (point indices).
  std::vector<std::size_t> support(Elem f) const;
  ValuedGroup as_valued_group() const;
};

FreeValuedGroup free_group(const FiniteMetricSpace& x, std::uint64_t n, Cap r,
                           std::uint64_t order_bound = kDefaultOrderBound,
                           Exec exec = Exec::parallel);

// N=2 closed form: minimum weight over perfect matchings of the support.
Rat pd_matching(const FreeValuedGroup& fvg, Elem f);

// The homomorphism induced by a point map u: X -> target (images per point),
// with the exact Lipschitz-transfer verification.
struct InducedHom {
  GroupHom hom;
  Rat lipschitz_constant;  // least C with q(u(x)-u(y)) <= C d(x,y)
  bool transfer_verified;  // q(hom(f)) <= C p_d(f) for every f
};
InducedHom induced_hom(const std::vector<Elem>& u, const FreeValuedGroup& fvg,
                       const ValuedGroup& target);

struct GeneratingSet {
  FiniteAbelianGroup group;
  std::vector<Elem> gens;                  // symmetric (F = -F), nonzero
  std::optional<std::vector<Rat>> weights; // aligned with gens; default weight 1
};

// The word metric from a symmetric generating set: shortest path from 0 in
// the Cayley graph, optionally scaled by alpha.
ValuedGroup word_metric(const GeneratingSet& f, const Rat& alpha = Rat(1),
                        Exec exec = Exec::parallel);

}  // namespace valg
