#include "valg/katetov.hpp"

#include <omp.h>

#include <algorithm>

namespace valg {

std::optional<Rat> KatetovMap::at(const FiniteAbelianGroup&, Elem x) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), x);
  if (it == domain.end() || *it != x) return std::nullopt;
  return values[it - domain.begin()];
}

Rat KatetovMap::min_value() const {
  Rat m = values[0];
  for (const Rat& v : values)
    if (v < m) m = v;
  return m;
}

Rat KatetovMap::max_value() const {
  Rat m = values[0];
  for (const Rat& v : values)
    if (v > m) m = v;
  return m;
}

std::vector<AxiomViolation> validate_katetov(const ValuedGroup& base, const KatetovMap& f) {
  std::vector<AxiomViolation> out;
  if (f.domain.empty()) {
    out.push_back({"domain", {}, "domain must be nonempty"});
    return out;
  }
  if (!std::is_sorted(f.domain.begin(), f.domain.end()) || f.values.size() != f.domain.size()) {
    out.push_back({"domain", {}, "domain must be sorted and aligned with the value list"});
    return out;
  }
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    if (f.domain[i] >= base.group.order()) {
      out.push_back({"domain", {f.domain[i]}, "domain element out of range"});
      return out;
    }
    if (f.values[i] < 0) out.push_back({"katetov", {f.domain[i]}, "negative value"});
    if (f.cap == Cap::one && f.values[i] > 1)
      out.push_back({"cap", {f.domain[i]}, "f(x) > 1 with cap 1"});
  }
  for (std::size_t i = 0; i < f.domain.size(); ++i)
    for (std::size_t j = i; j < f.domain.size(); ++j) {
      Rat dist = base.p(base.group.sub(f.domain[i], f.domain[j]));
      Rat diff = f.values[i] - f.values[j];
      if (diff < 0) diff = -diff;
      if (diff > dist || dist > f.values[i] + f.values[j])
        out.push_back({"katetov", {f.domain[i], f.domain[j]}, "Katetov inequality fails"});
    }
  return out;
}

KatetovMap make_katetov(const ValuedGroup& base, std::vector<Elem> domain, std::vector<Rat> values,
                        Cap cap) {
  KatetovMap f{std::move(domain), std::move(values), cap};
  auto violations = validate_katetov(base, f);
  if (!violations.empty()) fail("invalid-katetov", violations.front().detail);
  return f;
}

namespace {

// Lexicographically least admissibility violation with first index fixed;
// nullopt when the subtree is clean.
std::optional<AdmissibilityWitness> violation_in_subtree(const ValuedGroup& base,
                                                         const KatetovMap& f, std::uint64_t n,
                                                         bool subgroup_form, std::size_t first) {
  const FiniteAbelianGroup& g = base.group;
  const std::size_t m = f.domain.size();
  const std::size_t depth = static_cast<std::size_t>(n) - 1;
  std::vector<std::size_t> idx(depth);
  idx[0] = first;
  std::optional<AdmissibilityWitness> found;

  // Iterates nondecreasing index tuples idx[0..depth) with idx[0] fixed.
  std::function<bool(std::size_t, Elem, Rat)> rec = [&](std::size_t pos, Elem sum, Rat rhs) {
    if (pos == depth) {
      if (subgroup_form) {
        Rat lhs = *f.at(g, g.neg(sum));
        if (lhs > rhs) {
          std::vector<Elem> tuple(depth);
          for (std::size_t t = 0; t < depth; ++t) tuple[t] = f.domain[idx[t]];
          found = AdmissibilityWitness{tuple, lhs, rhs, true};
          return false;
        }
        return true;
      }
      for (std::size_t last = 0; last < m; ++last) {
        Rat lhs = base.p(g.add(sum, f.domain[last])) - f.values[last];
        if (lhs < 0) lhs = -lhs;
        if (lhs > rhs) {
          std::vector<Elem> tuple(depth + 1);
          for (std::size_t t = 0; t < depth; ++t) tuple[t] = f.domain[idx[t]];
          tuple[depth] = f.domain[last];
          found = AdmissibilityWitness{tuple, lhs, rhs, false};
          return false;
        }
      }
      return true;
    }
    for (std::size_t i = pos == 0 ? first : idx[pos - 1]; i < m; ++i) {
      if (pos == 0 && i != first) break;
      idx[pos] = i;
      if (!rec(pos + 1, g.add(sum, f.domain[i]), rhs + f.values[i])) return false;
    }
    return true;
  };
  rec(0, g.zero(), Rat(0));
  return found;
}

}  // namespace

std::optional<AdmissibilityWitness> admissibility_violation(const ValuedGroup& base,
                                                            const KatetovMap& f, std::uint64_t n,
                                                            Exec exec) {
  if (n < 2) fail("precondition", "the admissibility inequality needs N >= 2");
  const bool subgroup_form = is_subgroup_closed(base.group, f.domain);
  const std::int64_t m = static_cast<std::int64_t>(f.domain.size());

  if (exec == Exec::serial) {
    for (std::int64_t first = 0; first < m; ++first)
      if (auto w = violation_in_subtree(base, f, n, subgroup_form, first)) return w;
    return std::nullopt;
  }

  std::vector<std::optional<AdmissibilityWitness>> per_first(m);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t first = 0; first < m; ++first)
    per_first[first] = violation_in_subtree(base, f, n, subgroup_form, first);
  for (std::int64_t first = 0; first < m; ++first)
    if (per_first[first]) return per_first[first];
  return std::nullopt;
}

OneGenExtension extend_onegen(const ValuedGroup& g, const KatetovMap& f, std::uint64_t n, Cap r,
                              Exec exec) {
  if (n == 1) fail("precondition", "exponent class N must be 0 or >= 2");
  auto violations = validate_katetov(g, f);
  if (!violations.empty()) fail("invalid-katetov", violations.front().detail);
  if (n != 0 && !g.group.has_exponent(n)) fail("precondition", "group is not of exponent N");
  if (r == Cap::one) {
    if (g.diameter() > 1) fail("precondition", "cap 1 requires p <= 1");
    if (f.max_value() > 1) fail("precondition", "cap 1 requires f <= 1");
  }

  Rat c = f.min_value();
  if (c == 0)
    fail("zero-infimum",
         "min f = 0: the map is realized inside the group; call find_realizer instead");
  if (n > 2) {
    if (auto w = admissibility_violation(g, f, n, exec)) {
      std::string tuple;
      for (std::size_t i = 0; i < w->tuple.size(); ++i)
        tuple += (i ? "," : "") + std::to_string(w->tuple[i]);
      fail("admissibility", "exponent-" + std::to_string(n) + " inequality fails at (" + tuple +
                                "): " + rat_to_string(w->lhs) + " > " + rat_to_string(w->rhs));
    }
  }

  Rat m_bound = f.max_value();
  Rat diam = g.diameter();
  if (diam > m_bound) m_bound = diam;

  std::uint64_t m;
  if (n != 0) {
    m = n;
  } else {
    // smallest m >= 2 with m - 1 >= M / c
    Rat ratio = m_bound / c;
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
    std::uint64_t ceil_ratio = mpz_class(q).get_ui();
    m = std::max<std::uint64_t>(2, ceil_ratio + 1);
  }

  auto factors = g.group.factors();
  factors.push_back(m);
  FiniteAbelianGroup product(factors);
  const Elem bgen = product.basis(product.num_factors() - 1);
  // The atoms put cost f(a) on (a, bgen), so the map is realized at the
  // negative of the adjoined generator: p~(a - witness) = p~((a, bgen)).
  const Elem witness = product.neg(bgen);

  auto lift = [&](Elem x, std::uint64_t h) -> Elem {
    return x * m + h;  // the new factor is least significant
  };

  CostFunction cost{product, std::vector<ExtRat>(product.order())};
  for (Elem x = 0; x < g.group.order(); ++x) cost.cost[lift(x, 0)] = g.value[x];
  for (std::uint64_t h = 1; h < m; ++h) {
    Elem e = lift(g.group.zero(), h);
    if (!cost.cost[e] || m_bound < *cost.cost[e]) cost.cost[e] = m_bound;
  }
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    Elem plus = lift(f.domain[i], 1);
    if (!cost.cost[plus] || f.values[i] < *cost.cost[plus]) cost.cost[plus] = f.values[i];
    Elem minus = lift(g.group.neg(f.domain[i]), m - 1);
    if (!cost.cost[minus] || f.values[i] < *cost.cost[minus]) cost.cost[minus] = f.values[i];
  }

  Semivalue completed = complete_cost_semivalue(cost, Cap::infinite, n, exec);
  if (r == Cap::one) completed = cap_semivalue_at(completed, m_bound);
  completed.cap = r;

  ValuedGroup result = semivalue_to_value(completed);

  GroupHom embedding{g.group, product, std::vector<Elem>(g.group.order())};
  for (Elem x = 0; x < g.group.order(); ++x) embedding.table[x] = lift(x, 0);

  for (Elem x = 0; x < g.group.order(); ++x)
    if (result.value[embedding.table[x]] != g.value[x])
      fail("internal", "extension does not restrict to the original value");
  for (std::size_t i = 0; i < f.domain.size(); ++i)
    if (result.value[product.sub(embedding.table[f.domain[i]], witness)] != f.values[i])
      fail("internal", "extension does not realize the Katetov map");

  return OneGenExtension{g, std::move(result), std::move(embedding), witness, m, m_bound, c};
}

std::optional<Elem> find_realizer(const ValuedGroup& g, const KatetovMap& f) {
  auto violations = validate_katetov(g, f);
  if (!violations.empty()) fail("invalid-katetov", violations.front().detail);
  for (Elem b = 0; b < g.group.order(); ++b) {
    bool ok = true;
    for (std::size_t i = 0; i < f.domain.size() && ok; ++i)
      ok = g.p(g.group.sub(f.domain[i], b)) == f.values[i];
    if (ok) return b;
  }
  return std::nullopt;
}

OneGenExtension midpoint_extend(const ValuedGroup& g, Elem x, Elem y, Exec exec) {
  if (x == y) fail("degenerate-input", "midpoint extension needs two distinct points");
  if (x >= g.group.order() || y >= g.group.order()) fail("malformed-element", "rank out of range");
  Rat half = g.p(g.group.sub(x, y)) / 2;
  std::vector<Elem> domain{std::min(x, y), std::max(x, y)};
  KatetovMap f = make_katetov(g, domain, {half, half}, g.cap);
  if (g.exponent > 2)
    if (auto w = admissibility_violation(g, f, g.exponent, exec))
      fail("internal", "two-point map unexpectedly fails the admissibility inequality");
  OneGenExtension ext = extend_onegen(g, f, g.exponent, g.cap, exec);
  const FiniteAbelianGroup& gp = ext.result.group;
  Elem ex = ext.embedding.table[x], ey = ext.embedding.table[y];
  Rat dx = ext.result.p(gp.sub(ex, ext.witness));
  Rat dy = ext.result.p(gp.sub(ext.witness, ey));
  if (dx != half || dy != half || dx + dy != g.p(g.group.sub(x, y)))
    fail("internal", "midpoint distances are not exact halves");
  return ext;
}

ValuedGroup extend_value_grid(const ValuedGroup& d, const Subgroup& d0, int grid_log2,
                              const Rat& eps, Cap r, Exec exec) {
  if (d0.parent != d.group) fail("invalid-subgroup", "subgroup belongs to a different group");
  if (!is_subgroup_closed(d.group, d0.elements)) fail("invalid-subgroup", "element set is not closed");
  if (grid_step(grid_log2) > eps) fail("precondition", "grid step must be at most eps");
  if (r == Cap::one && d.diameter() > 1) fail("precondition", "cap 1 requires lambda <= 1");
  for (Elem h : d0.elements)
    if (!on_grid(d.value[h], grid_log2))
      fail("precondition", "lambda is off-grid on the subgroup at " + std::to_string(h));

  CostFunction cost{d.group, std::vector<ExtRat>(d.group.order())};
  for (Elem x = 0; x < d.group.order(); ++x)
    cost.cost[x] = d0.contains(x) ? d.value[x] : grid_round_up(d.value[x], grid_log2);

  Semivalue completed = complete_cost_semivalue(cost, Cap::infinite, d.exponent, exec);
  if (r == Cap::one) completed = cap_semivalue_at(completed, Rat(1));
  completed.cap = r;
  ValuedGroup out = semivalue_to_value(completed);

  for (Elem h : d0.elements)
    if (out.value[h] != d.value[h]) fail("internal", "grid extension does not extend lambda|D0");
  for (Elem x = 0; x < d.group.order(); ++x) {
    if (!on_grid(out.value[x], grid_log2)) fail("internal", "grid extension left the grid");
    Rat diff = out.value[x] - d.value[x];
    if (diff < 0) diff = -diff;
    if (diff > eps) fail("internal", "grid extension moved a value by more than eps");
  }
  return out;
}

ModulusExtensionResult extend_semivalue_modulus(const ValuedGroup& d, const Subgroup& d0,
                                                const std::vector<Rat>& lambda0,
                                                const Modulus& omega,
                                                const std::optional<OrtTriple>& ort, Exec exec) {
  if (d0.parent != d.group) fail("invalid-subgroup", "subgroup belongs to a different group");
  if (lambda0.size() != d0.elements.size()) fail("precondition", "one lambda0 entry per subgroup element");
  if (omega.zero()) fail("precondition", "omega must be a nonzero modulus");

  auto index_of = [&](Elem x) -> std::size_t {
    return std::lower_bound(d0.elements.begin(), d0.elements.end(), x) - d0.elements.begin();
  };
  // lambda0 must be a semivalue on the subgroup.
  if (lambda0[index_of(d.group.zero())] != 0) fail("precondition", "lambda0(0) != 0");
  for (std::size_t i = 0; i < d0.elements.size(); ++i) {
    if (lambda0[i] < 0) fail("precondition", "lambda0 must be nonnegative");
    if (lambda0[index_of(d.group.neg(d0.elements[i]))] != lambda0[i])
      fail("precondition", "lambda0 must be symmetric");
    for (std::size_t j = i; j < d0.elements.size(); ++j)
      if (lambda0[index_of(d.group.add(d0.elements[i], d0.elements[j]))] > lambda0[i] + lambda0[j])
        fail("precondition", "lambda0 violates the triangle inequality");
  }
  for (std::size_t i = 0; i < d0.elements.size(); ++i)
    if (lambda0[i] > omega(d.value[d0.elements[i]]))
      fail("domination", "lambda0 > omega o lambda at subgroup element " +
                             std::to_string(d0.elements[i]));

  // Zero set of lambda0 and the distance to it under lambda.
  std::vector<Elem> zero_set;
  for (std::size_t i = 0; i < d0.elements.size(); ++i)
    if (lambda0[i] == 0) zero_set.push_back(d0.elements[i]);
  auto dist_to_zero = [&](Elem x) {
    Rat best = d.value[d.group.sub(x, zero_set[0])];
    for (Elem z : zero_set) {
      Rat cand = d.value[d.group.sub(x, z)];
      if (cand < best) best = cand;
    }
    return best;
  };

  if (ort) {
    if (auto w = check_ort(ort->omega, ort->rho, ort->tau, d.cap))
      fail("precondition", "the omega-rho-tau inequality fails at t=" + rat_to_string(w->t) +
                               " s=" + rat_to_string(w->s));
    for (std::size_t i = 0; i < d0.elements.size(); ++i)
      if (ort->tau(dist_to_zero(d0.elements[i])) > ort->rho(lambda0[i]))
        fail("precondition", "tau(dist) > rho(lambda0) at subgroup element " +
                                 std::to_string(d0.elements[i]));
  }

  const bool bounded = d.cap == Cap::one;
  bool lambda0_capped = true;
  for (const Rat& v : lambda0)
    if (v > 1) lambda0_capped = false;
  const bool apply_cap = bounded && lambda0_capped;

  const std::int64_t order = static_cast<std::int64_t>(d.group.order());
  // omega o lambda evaluated once per element; the minimization below then
  // only adds and compares rationals.
  std::vector<Rat> omega_of(order);
  std::vector<Rat> table(order);
  auto compute = [&](Elem x) {
    Rat best = omega_of[d.group.sub(x, d0.elements[0])] + lambda0[0];
    for (std::size_t i = 1; i < d0.elements.size(); ++i) {
      Rat cand = omega_of[d.group.sub(x, d0.elements[i])] + lambda0[i];
      if (cand < best) best = cand;
    }
    if (apply_cap && best > 1) best = 1;
    return best;
  };
  if (exec == Exec::serial) {
    for (std::int64_t x = 0; x < order; ++x) omega_of[x] = omega(d.value[x]);
    for (std::int64_t x = 0; x < order; ++x) table[x] = compute(static_cast<Elem>(x));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < order; ++x) omega_of[x] = omega(d.value[x]);
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < order; ++x) table[x] = compute(static_cast<Elem>(x));
  }

  Semivalue out = make_semivalue(d.group, std::move(table), apply_cap ? Cap::one : Cap::infinite,
                                 d.exponent);

  // Conclusions, asserted exactly.
  for (std::size_t i = 0; i < d0.elements.size(); ++i)
    if (out.value[d0.elements[i]] != lambda0[i]) fail("internal", "extension does not extend lambda0");
  for (Elem x = 0; x < d.group.order(); ++x) {
    if (out.value[x] > omega_of[x]) fail("internal", "extension exceeds omega o lambda");
    bool zero_here = out.value[x] == 0;
    bool in_zero_set = std::binary_search(zero_set.begin(), zero_set.end(), x);
    if (zero_here != in_zero_set) fail("internal", "zero set mismatch");
    if (ort && ort->tau(dist_to_zero(x)) > ort->rho(out.value[x]))
      fail("internal", "tau/rho conclusion fails on the extension");
  }
  return ModulusExtensionResult{std::move(out), apply_cap};
}

}  // namespace valg
