#pragma once

#include <optional>
#include <vector>

#include "valg/modulus.hpp"
#include "valg/value.hpp"

namespace valg {

// A Katetov map over a valued group: f on a nonempty domain with
// |f(x)-f(y)| <= p(x-y) <= f(x)+f(y), and f <= 1 when cap is one.
struct KatetovMap {
  std::vector<Elem> domain;  // sorted, nonempty
  std::vector<Rat> values;   // aligned with domain
  Cap cap = Cap::infinite;

  std::optional<Rat> at(const FiniteAbelianGroup& g, Elem x) const;
  Rat min_value() const;
  Rat max_value() const;
};

std::vector<AxiomViolation> validate_katetov(const ValuedGroup& base, const KatetovMap& f);
KatetovMap make_katetov(const ValuedGroup& base, std::vector<Elem> domain, std::vector<Rat> values,
                        Cap cap);

// Witness against the exponent-N admissibility inequality
// |p(a_1+...+a_N) - f(a_N)| <= f(a_1)+...+f(a_{N-1});
// in the subgroup form the tuple has N-1 entries and the inequality reads
// f(-(a_1+...+a_{N-1})) <= f(a_1)+...+f(a_{N-1}).
struct AdmissibilityWitness {
  std::vector<Elem> tuple;
  Rat lhs, rhs;
  bool subgroup_form = false;
};

// Scans tuples from the domain (up to permutation of the first N-1 entries)
// and returns the lexicographically least violating tuple, if any. Uses the
// subgroup form when the domain is closed under the group operations.
std::optional<AdmissibilityWitness> admissibility_violation(const ValuedGroup& base,
                                                            const KatetovMap& f, std::uint64_t n,
                                                            Exec exec = Exec::parallel);

// One-generator extension: G~ = G x <b> with the value realized as the metric
// completion of the atom costs p on G, f on (+-a, +-b), and M on (0, h).
struct OneGenExtension {
  ValuedGroup source;
  ValuedGroup result;
  GroupHom embedding;            // isometric, g -> (g, 0)
  Elem witness;                  // the adjoined generator b
  std::uint64_t adjoined_order;  // m
  Rat bound_m;                   // M = max(sup p, sup f)
  Rat min_f;                     // c = min f(A) > 0
};

OneGenExtension extend_onegen(const ValuedGroup& g, const KatetovMap& f, std::uint64_t n, Cap r,
                              Exec exec = Exec::parallel);

// Some b in G with p(a-b) = f(a) for all a in the domain (lexicographically
// first), or a definite negative.
std::optional<Elem> find_realizer(const ValuedGroup& g, const KatetovMap& f);

// Adjoins a midpoint witness z with p(x-z) = p(z-y) = p(x-y)/2.
OneGenExtension midpoint_extend(const ValuedGroup& g, Elem x, Elem y, Exec exec = Exec::parallel);

// Rounds the value up to the dyadic grid off the subgroup and re-closes by
// metric completion; the result extends the restriction to d0, is
// grid-valued, and moves no value by more than eps.
ValuedGroup extend_value_grid(const ValuedGroup& d, const Subgroup& d0, int grid_log2,
                              const Rat& eps, Cap r, Exec exec = Exec::parallel);

// lambda_bar(x) = min over h in d0 of omega(lambda(x-h)) + lambda0(h), capped
// at r when lambda0 is bounded by r. lambda0 is aligned with d0.elements.
struct ModulusExtensionResult {
  Semivalue result;
  bool capped;
};
ModulusExtensionResult extend_semivalue_modulus(const ValuedGroup& d, const Subgroup& d0,
                                                const std::vector<Rat>& lambda0,
                                                const Modulus& omega,
                                                const std::optional<OrtTriple>& ort,
                                                Exec exec = Exec::parallel);

}  // namespace valg
