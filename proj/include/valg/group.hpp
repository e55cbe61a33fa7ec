#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "valg/common.hpp"

namespace valg {

// Rank of an element in the mixed-radix order induced by the factor list
// (first coordinate most significant, so rank order == lexicographic order
// on coordinates).
using Elem = std::uint64_t;

inline constexpr std::uint64_t kDefaultOrderBound = 1'000'000;

// A finite Abelian group presented as a direct product of cyclic groups.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;  // trivial group
  explicit FiniteAbelianGroup(std::vector<std::uint64_t> factors,
                              std::uint64_t order_bound = kDefaultOrderBound);

  std::uint64_t order() const { return order_; }
  std::size_t num_factors() const { return factors_.size(); }
  const std::vector<std::uint64_t>& factors() const { return factors_; }
  bool trivial() const { return order_ == 1; }

  Elem zero() const { return 0; }
  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(std::int64_t k, Elem a) const;

  std::uint64_t element_order(Elem a) const;
  // lcm of the factor orders (1 for the trivial group).
  std::uint64_t exponent() const;
  // True when N*x = 0 for all x (every factor divides n). n = 0 means no
  // exponent constraint.
  bool has_exponent(std::uint64_t n) const;

  std::vector<std::int64_t> coords(Elem a) const;
  Elem from_coords(const std::vector<std::int64_t>& c) const;
  Elem basis(std::size_t i) const;

  bool operator==(const FiniteAbelianGroup& other) const { return factors_ == other.factors_; }
  bool operator!=(const FiniteAbelianGroup& other) const { return factors_ != other.factors_; }

 private:
  std::vector<std::uint64_t> factors_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
};

struct Subgroup {
  FiniteAbelianGroup parent;
  std::vector<Elem> elements;  // sorted, closed under + and -, contains 0
  std::vector<Elem> generators;

  std::uint64_t order() const { return elements.size(); }
  bool contains(Elem x) const;
};

// A total group homomorphism given by its value on every source element.
struct GroupHom {
  FiniteAbelianGroup source;
  FiniteAbelianGroup target;
  std::vector<Elem> table;

  Elem operator()(Elem x) const { return table[x]; }
  std::vector<Elem> basis_images() const;
};

Subgroup subgroup_generated(const FiniteAbelianGroup& g, const std::vector<Elem>& gens);
Subgroup trivial_subgroup(const FiniteAbelianGroup& g);
Subgroup full_subgroup(const FiniteAbelianGroup& g);
// Validates closure; throws invalid-subgroup otherwise.
Subgroup subgroup_from_elements(const FiniteAbelianGroup& g, std::vector<Elem> elements);
bool is_subgroup_closed(const FiniteAbelianGroup& g, const std::vector<Elem>& sorted_elements);

// A small generating set of a subgroup (greedy, deterministic).
std::vector<Elem> reduced_generators(const Subgroup& k);

GroupHom hom_identity(const FiniteAbelianGroup& g);
GroupHom hom_zero(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target);
// Builds the homomorphism sending basis(i) to images[i]; requires that the
// image orders divide the factor orders.
GroupHom hom_from_basis_images(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
                               const std::vector<Elem>& images);
GroupHom hom_compose(const GroupHom& outer, const GroupHom& inner);  // outer o inner
bool hom_is_additive(const GroupHom& f);

struct QuotientResult {
  FiniteAbelianGroup quotient;  // canonical cyclic-factor form (invariant factors)
  GroupHom projection;
};
QuotientResult quotient(const FiniteAbelianGroup& g, const Subgroup& k);

// Calls fn with each basis-image tuple defining a homomorphism source->target,
// in lexicographic order. fn returning false stops the enumeration.
void for_each_hom(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
                  const std::function<bool(const std::vector<Elem>&)>& fn);
std::uint64_t count_homs(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target);
std::vector<GroupHom> enumerate_homs(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
                                     std::uint64_t budget = kDefaultOrderBound);

// All automorphisms of g as full tables, sorted lexicographically.
std::vector<std::vector<Elem>> automorphism_tables(const FiniteAbelianGroup& g);

// Every subgroup of g (element sets sorted, result sorted by (order, elements)).
std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g);

// A canonical cyclic-factor group isomorphic to the subgroup k, with explicit
// coordinate maps in both directions.
struct AbstractSubgroup {
  FiniteAbelianGroup group;
  std::vector<Elem> from_abstract;  // indexed by abstract rank -> parent element
  std::vector<Elem> to_abstract;    // aligned with k.elements
};
AbstractSubgroup abstract_subgroup(const Subgroup& k);

}  // namespace valg
