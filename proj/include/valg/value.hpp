#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valg/group.hpp"
#include "valg/rational.hpp"

namespace valg {

enum class Cap { one, infinite };

inline std::string cap_to_string(Cap c) { return c == Cap::one ? "1" : "inf"; }

// A finite Abelian group with an exact value table: (V1) p(x)=0 iff x=0,
// (V2) p(-x)=p(x), (V3) p(x+y) <= p(x)+p(y). cap=one additionally bounds p
// by 1 and exponent != 0 requires N*x = 0 for all x.
struct ValuedGroup {
  FiniteAbelianGroup group;
  std::vector<Rat> value;
  Cap cap = Cap::infinite;
  std::uint64_t exponent = 0;

  const Rat& p(Elem x) const { return value[x]; }
  Rat diameter() const;
  Rat min_nonzero() const;  // min p over nonzero elements (0 for the trivial group)
};

// As ValuedGroup, but (V1) relaxed to p(0)=0.
struct Semivalue {
  FiniteAbelianGroup group;
  std::vector<Rat> value;
  Cap cap = Cap::infinite;
  std::uint64_t exponent = 0;

  const Rat& p(Elem x) const { return value[x]; }
  std::vector<Elem> zero_set() const;
  bool is_value() const;
};

// Symmetric cost with cost(0)=0; entries may be infinite (nullopt).
struct CostFunction {
  FiniteAbelianGroup group;
  std::vector<ExtRat> cost;
};

struct AxiomViolation {
  std::string axiom;            // "V1", "V2", "V3", "cap", "exponent", ...
  std::vector<Elem> witness;
  std::string detail;
};

std::vector<AxiomViolation> validate_value_table(const FiniteAbelianGroup& g,
                                                 const std::vector<Rat>& table, Cap cap,
                                                 std::uint64_t exponent, bool require_v1);

// Throws with the first violation's witness if the axioms fail.
ValuedGroup make_valued_group(FiniteAbelianGroup g, std::vector<Rat> table, Cap cap,
                              std::uint64_t exponent);
Semivalue make_semivalue(FiniteAbelianGroup g, std::vector<Rat> table, Cap cap,
                         std::uint64_t exponent);
ValuedGroup semivalue_to_value(const Semivalue& s);  // throws if (V1) fails

// The pointwise-largest semivalue dominated by the cost: single-source
// shortest path from 0 on the complete Cayley graph with edge weights
// cost(h). Elements not reachable through finite-cost steps are reported.
struct CompletionResult {
  std::vector<ExtRat> value;
  std::vector<Elem> unreachable;
};
CompletionResult complete_cost(const CostFunction& c, Exec exec = Exec::parallel);
// Convenience: all-finite completion as a semivalue (throws on unreachable).
Semivalue complete_cost_semivalue(const CostFunction& c, Cap cap, std::uint64_t exponent,
                                  Exec exec = Exec::parallel);

std::vector<AxiomViolation> validate_cost(const CostFunction& c);

// q(y) = min { s(x) : pi(x) = y }; value iff s^-1(0) = ker pi.
struct PushedValue {
  Semivalue result;
  bool is_value;
};
PushedValue push_value(const Semivalue& s, const GroupHom& pi);

ValuedGroup cap_value(const ValuedGroup& v, Cap r);
ValuedGroup cap_value_at(const ValuedGroup& v, const Rat& bound);  // pointwise min with bound
Semivalue cap_semivalue_at(const Semivalue& v, const Rat& bound);

// Isometry-preserving group isomorphism search (backtracking over basis
// images pruned by value and order profiles). Definite negative -> nullopt.
std::optional<GroupHom> isometric_isomorphic(const ValuedGroup& a, const ValuedGroup& b);

// Isometric embedding a -> b (value-preserving homomorphism; injectivity is
// automatic since values vanish only at 0).
std::optional<GroupHom> isometric_embedding(const ValuedGroup& a, const ValuedGroup& b);

// Precomputed lookup structure for a search target; avoids rescanning large
// groups when many searches run against the same target.
struct TargetIndex {
  std::vector<std::uint64_t> order_of;
  std::map<Rat, std::vector<Elem>> by_value;
};
TargetIndex build_target_index(const ValuedGroup& g);

// Extension search: an isometric hom h -> g agreeing with phi on the subgroup
// k (phi given as images aligned with k.elements). Used by the chain builder.
std::optional<GroupHom> isometric_extension(const ValuedGroup& h, const Subgroup& k,
                                            const std::vector<Elem>& phi_images,
                                            const ValuedGroup& g, Exec exec = Exec::serial,
                                            const TargetIndex* index = nullptr);

bool hom_is_isometric(const GroupHom& f, const std::vector<Rat>& source_value,
                      const std::vector<Rat>& target_value);

// Lexicographically minimal value table over the automorphism group;
// canonical representative for isomorphism-class dedup.
std::vector<Rat> canonical_value_table(const ValuedGroup& v);

}  // namespace valg
