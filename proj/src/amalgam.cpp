#include "valg/amalgam.hpp"

#include <omp.h>

#include <algorithm>

namespace valg {

namespace {

struct Product {
  FiniteAbelianGroup group;
  const FiniteAbelianGroup* left;
  const FiniteAbelianGroup* right;

  Elem pair(Elem x, Elem y) const { return x * right->order() + y; }
};

Product make_product(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
  auto factors = a.factors();
  const auto& bf = b.factors();
  factors.insert(factors.end(), bf.begin(), bf.end());
  return Product{FiniteAbelianGroup(factors), &a, &b};
}

void check_isometric_hom(const GroupHom& f, const ValuedGroup& source, const ValuedGroup& target,
                         const char* what, bool deep_checks = true) {
  if (f.source != source.group || f.target != target.group) fail("malformed-hom", "group mismatch");
  if (deep_checks && !hom_is_additive(f))
    fail("malformed-hom", std::string(what) + " is not a homomorphism");
  for (Elem x = 0; x < source.group.order(); ++x)
    if (target.value[f.table[x]] != source.value[x])
      fail("not-isometric", std::string(what) + " is not isometric at element " + std::to_string(x));
}

void check_class(const ValuedGroup& v, Cap cap, std::uint64_t exponent, const char* what) {
  if (v.cap != cap) fail("precondition", std::string(what) + ": cap class mismatch");
  if (exponent != 0 && !v.group.has_exponent(exponent))
    fail("precondition", std::string(what) + ": exponent class mismatch");
}

// Representative of each quotient class, chosen as the first product element
// hitting the class in rank order.
std::vector<Elem> class_representatives(const GroupHom& pi) {
  std::vector<Elem> rep(pi.target.order(), pi.source.order());
  for (Elem z = 0; z < pi.source.order(); ++z)
    if (rep[pi.table[z]] == pi.source.order()) rep[pi.table[z]] = z;
  return rep;
}

ValuedGroup finish_value(const FiniteAbelianGroup& g, std::vector<Rat> table, Cap cap,
                         std::uint64_t exponent, bool deep_checks) {
  if (cap == Cap::one)
    for (auto& v : table)
      if (v > 1) v = 1;
  if (deep_checks) return make_valued_group(g, std::move(table), cap, exponent);
  // (V2) and (V3) hold by construction (fiber minima of a semivalue); only
  // the linear conditions need a scan.
  if (table[g.zero()] != 0) fail("axiom-V1", "value nonzero at 0");
  for (Elem x = 1; x < g.order(); ++x)
    if (table[x] <= 0) fail("axiom-V1", "value vanishes off zero at " + std::to_string(x));
  return ValuedGroup{g, std::move(table), cap, exponent};
}

}  // namespace

AmalgamResult amalgamate(const ValuedGroup& d0, const ValuedGroup& d1, const ValuedGroup& d2,
                         const GroupHom& phi1, const GroupHom& phi2, Exec exec, bool deep_checks) {
  const Cap cap = d1.cap;
  const std::uint64_t exponent = d1.exponent;
  check_class(d0, cap, exponent, "D0");
  check_class(d2, cap, exponent, "D2");
  check_isometric_hom(phi1, d0, d1, "phi1");
  check_isometric_hom(phi2, d0, d2, "phi2");

  Product prod = make_product(d1.group, d2.group);
  std::vector<Elem> glue(d0.group.order());
  for (Elem x = 0; x < d0.group.order(); ++x)
    glue[x] = prod.pair(phi1.table[x], d2.group.neg(phi2.table[x]));
  Subgroup glue_sub = subgroup_from_elements(prod.group, glue);
  QuotientResult pre = quotient(prod.group, glue_sub);

  // Fiber minimization of lambda1(x1) + lambda2(x2) over each class.
  auto reps = class_representatives(pre.projection);
  const std::int64_t nclasses = static_cast<std::int64_t>(pre.quotient.order());
  std::vector<Rat> fiber_min(nclasses);
  auto fiber_value = [&](Elem z) {
    Elem rep = reps[z];
    Rat best;
    bool first = true;
    for (Elem k : glue_sub.elements) {
      Elem e = prod.group.add(rep, k);
      Elem x1 = e / d2.group.order();
      Elem x2 = e % d2.group.order();
      Rat cand = d1.value[x1] + d2.value[x2];
      if (first || cand < best) {
        best = cand;
        first = false;
      }
    }
    return best;
  };
  if (exec == Exec::serial) {
    for (std::int64_t z = 0; z < nclasses; ++z) fiber_min[z] = fiber_value(static_cast<Elem>(z));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < nclasses; ++z) fiber_min[z] = fiber_value(static_cast<Elem>(z));
  }

  // Quotient out the null classes, then cap.
  std::vector<Elem> nulls;
  for (Elem z = 0; z < pre.quotient.order(); ++z)
    if (fiber_min[z] == 0) nulls.push_back(z);
  Subgroup null_sub = subgroup_from_elements(pre.quotient, nulls);
  QuotientResult fin = quotient(pre.quotient, null_sub);

  std::vector<Rat> table(fin.quotient.order());
  std::vector<bool> seen(fin.quotient.order(), false);
  for (Elem z = 0; z < pre.quotient.order(); ++z) {
    Elem w = fin.projection.table[z];
    if (!seen[w]) {
      table[w] = fiber_min[z];
      seen[w] = true;
    } else if (table[w] != fiber_min[z]) {
      fail("internal", "semivalue is not constant on null cosets");
    }
  }
  ValuedGroup result = finish_value(fin.quotient, std::move(table), cap, exponent, deep_checks);

  GroupHom to_result = hom_compose(fin.projection, pre.projection);
  GroupHom psi1{d1.group, fin.quotient, std::vector<Elem>(d1.group.order())};
  for (Elem x = 0; x < d1.group.order(); ++x) psi1.table[x] = to_result.table[prod.pair(x, 0)];
  GroupHom psi2{d2.group, fin.quotient, std::vector<Elem>(d2.group.order())};
  for (Elem y = 0; y < d2.group.order(); ++y) psi2.table[y] = to_result.table[prod.pair(0, y)];

  check_isometric_hom(psi1, d1, result, "psi1", deep_checks);
  check_isometric_hom(psi2, d2, result, "psi2", deep_checks);
  for (Elem x = 0; x < d0.group.order(); ++x)
    if (psi1.table[phi1.table[x]] != psi2.table[phi2.table[x]])
      fail("internal", "amalgamation square does not commute");

  return AmalgamResult{std::move(result), std::move(psi1), std::move(psi2), Rat(0)};
}

AmalgamResult amalgamate_approx(const ValuedGroup& d1, const Subgroup& d0, const ValuedGroup& d2,
                                const std::vector<Elem>& u, const GroupHom& v, const Rat& eps,
                                Exec exec) {
  const Cap cap = d1.cap;
  const std::uint64_t exponent = d1.exponent;
  check_class(d2, cap, exponent, "D2");
  if (d0.parent != d1.group) fail("invalid-subgroup", "D0 must be a subgroup of D1");
  if (!is_subgroup_closed(d1.group, d0.elements)) fail("invalid-subgroup", "element set is not closed");
  if (u.size() != d0.elements.size()) fail("malformed-hom", "one u-image per subgroup element");
  if (eps <= 0 || eps >= 1) fail("precondition", "eps must lie in (0,1)");
  if (v.source != d1.group || v.target != d2.group) fail("malformed-hom", "v group mismatch");
  if (!hom_is_additive(v)) fail("malformed-hom", "v is not a homomorphism");

  auto u_at = [&](Elem x) {
    auto it = std::lower_bound(d0.elements.begin(), d0.elements.end(), x);
    return u[it - d0.elements.begin()];
  };
  // u isometric and additive on D0.
  for (std::size_t i = 0; i < d0.elements.size(); ++i) {
    if (d2.value[u[i]] != d1.value[d0.elements[i]])
      fail("not-isometric", "u is not isometric at element " + std::to_string(d0.elements[i]));
    for (std::size_t j = 0; j < d0.elements.size(); ++j) {
      Elem sum = d1.group.add(d0.elements[i], d0.elements[j]);
      if (u_at(sum) != d2.group.add(u[i], u[j])) fail("malformed-hom", "u is not a homomorphism");
    }
  }
  // v eps-almost isometric: (1-eps) lambda1 <= lambda2 o v <= (1+eps) lambda1.
  for (Elem x = 0; x < d1.group.order(); ++x) {
    const Rat& lx = d1.value[x];
    const Rat& vx = d2.value[v.table[x]];
    if (vx < (1 - eps) * lx || vx > (1 + eps) * lx)
      fail("precondition", "v is not eps-almost isometric at element " + std::to_string(x));
  }
  // ||u - v|D0|| <= eps.
  for (std::size_t i = 0; i < d0.elements.size(); ++i)
    if (d2.value[d2.group.sub(u[i], v.table[d0.elements[i]])] > eps)
      fail("precondition", "||u - v|D0|| > eps at element " + std::to_string(d0.elements[i]));

  Rat big_a = 1 + d1.diameter();
  Rat gate = big_a * eps;

  Product prod = make_product(d1.group, d2.group);
  std::vector<Elem> glue(d0.elements.size());
  for (std::size_t i = 0; i < d0.elements.size(); ++i)
    glue[i] = prod.pair(d0.elements[i], d2.group.neg(u[i]));
  Subgroup glue_sub = subgroup_from_elements(prod.group, glue);
  QuotientResult pre = quotient(prod.group, glue_sub);
  const FiniteAbelianGroup& dq = pre.quotient;

  GroupHom w1{d1.group, dq, std::vector<Elem>(d1.group.order())};
  for (Elem x = 0; x < d1.group.order(); ++x) w1.table[x] = pre.projection.table[prod.pair(x, 0)];
  GroupHom w2{d2.group, dq, std::vector<Elem>(d2.group.order())};
  for (Elem y = 0; y < d2.group.order(); ++y) w2.table[y] = pre.projection.table[prod.pair(0, y)];

  // Gate flags per x0: whether w1(x0) differs from w2(v(x0)).
  std::vector<bool> gated(d1.group.order());
  for (Elem x0 = 0; x0 < d1.group.order(); ++x0)
    gated[x0] = w1.table[x0] != w2.table[v.table[x0]];

  auto reps = class_representatives(pre.projection);
  const std::int64_t nclasses = static_cast<std::int64_t>(dq.order());
  std::vector<Rat> table(nclasses);
  auto class_value = [&](Elem z) {
    Rat best;
    bool first = true;
    for (Elem k : glue_sub.elements) {
      Elem e = prod.group.add(reps[z], k);
      Elem x1 = e / d2.group.order();
      Elem x2 = e % d2.group.order();
      for (Elem x0 = 0; x0 < d1.group.order(); ++x0) {
        Rat cand = d1.value[d1.group.sub(x1, x0)] + d2.value[d2.group.add(x2, v.table[x0])];
        if (gated[x0]) cand += gate;
        if (first || cand < best) {
          best = cand;
          first = false;
        }
      }
    }
    return best;
  };
  if (exec == Exec::serial) {
    for (std::int64_t z = 0; z < nclasses; ++z) table[z] = class_value(static_cast<Elem>(z));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < nclasses; ++z) table[z] = class_value(static_cast<Elem>(z));
  }

  ValuedGroup result = finish_value(dq, std::move(table), cap, exponent, true);

  check_isometric_hom(w1, d1, result, "w1");
  check_isometric_hom(w2, d2, result, "w2");
  for (std::size_t i = 0; i < d0.elements.size(); ++i)
    if (w1.table[d0.elements[i]] != w2.table[u[i]]) fail("internal", "w1|D0 != w2 o u");

  Rat achieved = 0;
  for (Elem x = 0; x < d1.group.order(); ++x) {
    Rat dist = result.value[dq.sub(w1.table[x], w2.table[v.table[x]])];
    if (dist > achieved) achieved = dist;
  }
  if (achieved > gate) fail("internal", "sup distance exceeds (1+diam)*eps");
  return AmalgamResult{std::move(result), std::move(w1), std::move(w2), std::move(achieved)};
}

AmalgamResult amalgamate_mixed(const ValuedGroup& d1, const Subgroup& e1, const Subgroup& e2,
                               const ValuedGroup& d2, const std::vector<Elem>& phi1,
                               const std::vector<Elem>& phi2, const Rat& eps, Exec exec) {
  const Cap cap = d1.cap;
  const std::uint64_t exponent = d1.exponent;
  check_class(d2, cap, exponent, "D2");
  if (e1.parent != d1.group || e2.parent != d1.group)
    fail("invalid-subgroup", "E1 and E2 must be subgroups of D1");
  if (phi1.size() != e1.elements.size() || phi2.size() != e2.elements.size())
    fail("malformed-hom", "one image per subgroup element");
  if (eps <= 0) fail("precondition", "eps must be positive");

  auto check_partial_isometric = [&](const Subgroup& e, const std::vector<Elem>& phi,
                                     const char* what) {
    auto at = [&](Elem x) {
      auto it = std::lower_bound(e.elements.begin(), e.elements.end(), x);
      return phi[it - e.elements.begin()];
    };
    for (std::size_t i = 0; i < e.elements.size(); ++i) {
      if (d2.value[phi[i]] != d1.value[e.elements[i]])
        fail("not-isometric", std::string(what) + " is not isometric");
      for (std::size_t j = 0; j < e.elements.size(); ++j)
        if (at(d1.group.add(e.elements[i], e.elements[j])) != d2.group.add(phi[i], phi[j]))
          fail("malformed-hom", std::string(what) + " is not a homomorphism");
    }
  };
  check_partial_isometric(e1, phi1, "phi1");
  check_partial_isometric(e2, phi2, "phi2");

  // Compatibility of the two identifications on pair distances.
  for (std::size_t i = 0; i < e1.elements.size(); ++i)
    for (std::size_t j = 0; j < e2.elements.size(); ++j) {
      Rat lhs = d2.value[d2.group.sub(phi1[i], phi2[j])];
      Rat rhs = d1.value[d1.group.sub(e1.elements[i], e2.elements[j])];
      Rat diff = lhs > rhs ? lhs - rhs : rhs - lhs;
      if (diff > eps)
        fail("precondition", "pair-distance compatibility fails at (" +
                                 std::to_string(e1.elements[i]) + "," +
                                 std::to_string(e2.elements[j]) + ")");
    }

  Product prod = make_product(d1.group, d2.group);
  std::vector<Elem> glue(e1.elements.size());
  for (std::size_t i = 0; i < e1.elements.size(); ++i)
    glue[i] = prod.pair(e1.elements[i], d2.group.neg(phi1[i]));
  Subgroup glue_sub = subgroup_from_elements(prod.group, glue);
  QuotientResult pre = quotient(prod.group, glue_sub);
  const FiniteAbelianGroup& dq = pre.quotient;

  GroupHom t1{d1.group, dq, std::vector<Elem>(d1.group.order())};
  for (Elem x = 0; x < d1.group.order(); ++x) t1.table[x] = pre.projection.table[prod.pair(x, 0)];
  GroupHom t2{d2.group, dq, std::vector<Elem>(d2.group.order())};
  for (Elem y = 0; y < d2.group.order(); ++y) t2.table[y] = pre.projection.table[prod.pair(0, y)];

  std::vector<bool> gated(e2.elements.size());
  for (std::size_t i = 0; i < e2.elements.size(); ++i)
    gated[i] = t1.table[e2.elements[i]] != t2.table[phi2[i]];

  auto reps = class_representatives(pre.projection);
  const std::int64_t nclasses = static_cast<std::int64_t>(dq.order());
  std::vector<Rat> fiber_min(nclasses);
  auto class_value = [&](Elem z) {
    Rat best;
    bool first = true;
    for (Elem k : glue_sub.elements) {
      Elem e = prod.group.add(reps[z], k);
      Elem x1 = e / d2.group.order();
      Elem y = e % d2.group.order();
      for (std::size_t i = 0; i < e2.elements.size(); ++i) {
        Rat cand = d1.value[d1.group.sub(x1, e2.elements[i])] +
                   d2.value[d2.group.add(y, phi2[i])];
        if (gated[i]) cand += eps;
        if (first || cand < best) {
          best = cand;
          first = false;
        }
      }
    }
    return best;
  };
  if (exec == Exec::serial) {
    for (std::int64_t z = 0; z < nclasses; ++z) fiber_min[z] = class_value(static_cast<Elem>(z));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < nclasses; ++z) fiber_min[z] = class_value(static_cast<Elem>(z));
  }

  std::vector<Elem> nulls;
  for (Elem z = 0; z < dq.order(); ++z)
    if (fiber_min[z] == 0) nulls.push_back(z);
  Subgroup null_sub = subgroup_from_elements(dq, nulls);
  QuotientResult fin = quotient(dq, null_sub);

  std::vector<Rat> table(fin.quotient.order());
  std::vector<bool> seen(fin.quotient.order(), false);
  for (Elem z = 0; z < dq.order(); ++z) {
    Elem w = fin.projection.table[z];
    if (!seen[w]) {
      table[w] = fiber_min[z];
      seen[w] = true;
    } else if (table[w] != fiber_min[z]) {
      fail("internal", "semivalue is not constant on null cosets");
    }
  }
  ValuedGroup result = finish_value(fin.quotient, std::move(table), cap, exponent, true);

  GroupHom psi1 = hom_compose(fin.projection, t1);
  GroupHom psi2 = hom_compose(fin.projection, t2);
  check_isometric_hom(psi1, d1, result, "psi1");
  check_isometric_hom(psi2, d2, result, "psi2");
  for (std::size_t i = 0; i < e1.elements.size(); ++i)
    if (psi2.table[phi1[i]] != psi1.table[e1.elements[i]]) fail("internal", "psi2 o phi1 != psi1|E1");

  Rat achieved = 0;
  for (std::size_t i = 0; i < e2.elements.size(); ++i) {
    Rat dist = result.value[result.group.sub(psi1.table[e2.elements[i]], psi2.table[phi2[i]])];
    if (dist > achieved) achieved = dist;
  }
  if (achieved > eps) fail("internal", "sup distance exceeds eps");
  return AmalgamResult{std::move(result), std::move(psi1), std::move(psi2), std::move(achieved)};
}

}  // namespace valg
