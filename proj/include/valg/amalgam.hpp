#pragma once

#include <vector>

#include "valg/value.hpp"

namespace valg {

struct AmalgamResult {
  ValuedGroup result;
  GroupHom psi1, psi2;  // isometric homomorphisms into result
  Rat sup_distance;     // achieved sup-distance bound (0 for the exact square)
};

// Exact amalgamation over a common subgroup: result = (D1 x D2)/{(phi1(x),
// -phi2(x))} with the fiber-minimized value, nulls quotiented out, capped at
// the common class bound. psi2 o phi2 = psi1 o phi1 exactly.
//
// deep_checks re-verifies the quadratic axioms ((V3) of the output,
// additivity of the embeddings) exhaustively; with it off only the linear
// checks run (V1, isometry, the commuting square) - the quadratic ones hold
// by construction. The chain builder turns it off for large stages.
AmalgamResult amalgamate(const ValuedGroup& d0, const ValuedGroup& d1, const ValuedGroup& d2,
                         const GroupHom& phi1, const GroupHom& phi2, Exec exec = Exec::parallel,
                         bool deep_checks = true);

// Almost-isometric correction: u isometric on the subgroup d0 of d1, v an
// eps-almost isometric hom d1 -> d2 with ||u - v|d0|| <= eps. Produces
// isometric w1, w2 with w1|d0 = w2 o u and ||w1 - w2 o v|| <= (1+diam d1)*eps.
// u is given as images aligned with d0.elements.
AmalgamResult amalgamate_approx(const ValuedGroup& d1, const Subgroup& d0,
                                const ValuedGroup& d2, const std::vector<Elem>& u,
                                const GroupHom& v, const Rat& eps, Exec exec = Exec::parallel);

// Two overlapping identifications: phi1 on e1 and phi2 on e2 (subgroups of
// d1), isometric into d2, compatible up to eps on pair distances. Glues along
// phi1 exactly and keeps phi2 within eps: psi2 o phi1 = psi1|e1 and
// ||psi1|e2 - psi2 o phi2|| <= eps. phi maps are aligned with the subgroup
// element lists.
AmalgamResult amalgamate_mixed(const ValuedGroup& d1, const Subgroup& e1, const Subgroup& e2,
                               const ValuedGroup& d2, const std::vector<Elem>& phi1,
                               const std::vector<Elem>& phi2, const Rat& eps,
                               Exec exec = Exec::parallel);

}  // namespace valg
