#include "valg/group.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace valg {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::uint64_t> factors, std::uint64_t order_bound)
    : factors_(std::move(factors)) {
  order_ = 1;
  for (auto n : factors_) {
    if (n < 1) fail("malformed-group", "factor must be >= 1");
    if (order_ > order_bound / n) fail("budget", "group order exceeds bound");
    order_ *= n;
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * factors_[i];
}

Elem FiniteAbelianGroup::add(Elem a, Elem b) const {
  Elem r = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::uint64_t n = factors_[i], s = strides_[i];
    std::uint64_t ci = (a / s) % n + (b / s) % n;
    if (ci >= n) ci -= n;
    r += ci * s;
  }
  return r;
}

Elem FiniteAbelianGroup::neg(Elem a) const {
  Elem r = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::uint64_t n = factors_[i], s = strides_[i];
    std::uint64_t ai = (a / s) % n;
    r += (ai == 0 ? 0 : n - ai) * s;
  }
  return r;
}

Elem FiniteAbelianGroup::mul(std::int64_t k, Elem a) const {
  Elem r = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::uint64_t n = factors_[i], s = strides_[i];
    std::int64_t kk = k % static_cast<std::int64_t>(n);
    if (kk < 0) kk += static_cast<std::int64_t>(n);
    std::uint64_t ai = (a / s) % n;
    r += (static_cast<std::uint64_t>(kk) * ai) % n * s;
  }
  return r;
}

std::uint64_t FiniteAbelianGroup::element_order(Elem a) const {
  std::uint64_t ord = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::uint64_t n = factors_[i], s = strides_[i];
    std::uint64_t ai = (a / s) % n;
    std::uint64_t oi = n / std::gcd(n, ai == 0 ? n : ai);
    ord = std::lcm(ord, oi);
  }
  return ord;
}

std::uint64_t FiniteAbelianGroup::exponent() const {
  std::uint64_t e = 1;
  for (auto n : factors_) e = std::lcm(e, n);
  return e;
}

bool FiniteAbelianGroup::has_exponent(std::uint64_t n) const {
  if (n == 0) return true;
  for (auto f : factors_)
    if (n % f != 0) return false;
  return true;
}

std::vector<std::int64_t> FiniteAbelianGroup::coords(Elem a) const {
  std::vector<std::int64_t> c(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i)
    c[i] = static_cast<std::int64_t>((a / strides_[i]) % factors_[i]);
  return c;
}

Elem FiniteAbelianGroup::from_coords(const std::vector<std::int64_t>& c) const {
  if (c.size() != factors_.size()) fail("malformed-element", "wrong number of coordinates");
  Elem r = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (c[i] < 0 || static_cast<std::uint64_t>(c[i]) >= factors_[i])
      fail("malformed-element", "coordinate out of range");
    r += static_cast<std::uint64_t>(c[i]) * strides_[i];
  }
  return r;
}

Elem FiniteAbelianGroup::basis(std::size_t i) const { return strides_[i]; }

bool Subgroup::contains(Elem x) const {
  return std::binary_search(elements.begin(), elements.end(), x);
}

std::vector<Elem> GroupHom::basis_images() const {
  std::vector<Elem> images(source.num_factors());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = table[source.basis(i)];
  return images;
}

Subgroup subgroup_generated(const FiniteAbelianGroup& g, const std::vector<Elem>& gens) {
  for (Elem x : gens)
    if (x >= g.order()) fail("malformed-element", "generator rank out of range");
  std::set<Elem> closure{g.zero()};
  std::vector<Elem> frontier{g.zero()};
  while (!frontier.empty()) {
    std::vector<Elem> next;
    for (Elem x : frontier)
      for (Elem a : gens) {
        Elem y = g.add(x, a);
        if (closure.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  Subgroup s{g, std::vector<Elem>(closure.begin(), closure.end()), gens};
  return s;
}

Subgroup trivial_subgroup(const FiniteAbelianGroup& g) { return Subgroup{g, {g.zero()}, {}}; }

Subgroup full_subgroup(const FiniteAbelianGroup& g) {
  std::vector<Elem> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  Subgroup s{g, all, {}};
  s.generators = reduced_generators(s);
  return s;
}

bool is_subgroup_closed(const FiniteAbelianGroup& g, const std::vector<Elem>& sorted_elements) {
  if (!std::binary_search(sorted_elements.begin(), sorted_elements.end(), g.zero())) return false;
  for (Elem x : sorted_elements)
    for (Elem y : sorted_elements)
      if (!std::binary_search(sorted_elements.begin(), sorted_elements.end(), g.add(x, y)))
        return false;
  return true;
}

Subgroup subgroup_from_elements(const FiniteAbelianGroup& g, std::vector<Elem> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!is_subgroup_closed(g, elements)) fail("invalid-subgroup", "element set is not closed");
  Subgroup s{g, std::move(elements), {}};
  s.generators = reduced_generators(s);
  return s;
}

std::vector<Elem> reduced_generators(const Subgroup& k) {
  std::vector<Elem> gens;
  std::set<Elem> span{k.parent.zero()};
  while (span.size() < k.elements.size()) {
    // Pick the element of largest order not yet in the span (ties by rank).
    Elem best = 0;
    std::uint64_t best_ord = 0;
    for (Elem x : k.elements) {
      if (span.count(x)) continue;
      std::uint64_t o = k.parent.element_order(x);
      if (o > best_ord) {
        best_ord = o;
        best = x;
      }
    }
    gens.push_back(best);
    std::vector<Elem> base(span.begin(), span.end());
    for (Elem s : base) {
      Elem cur = s;
      for (std::uint64_t j = 1; j < best_ord; ++j) {
        cur = k.parent.add(cur, best);
        span.insert(cur);
      }
    }
  }
  return gens;
}

GroupHom hom_identity(const FiniteAbelianGroup& g) {
  GroupHom f{g, g, std::vector<Elem>(g.order())};
  std::iota(f.table.begin(), f.table.end(), 0);
  return f;
}

GroupHom hom_zero(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target) {
  return GroupHom{source, target, std::vector<Elem>(source.order(), target.zero())};
}

GroupHom hom_from_basis_images(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
                               const std::vector<Elem>& images) {
  if (images.size() != source.num_factors()) fail("malformed-hom", "one image per cyclic factor required");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i] >= target.order()) fail("malformed-element", "image rank out of range");
    if (source.factors()[i] % target.element_order(images[i]) != 0)
      fail("malformed-hom", "image order does not divide the factor order");
  }
  GroupHom f{source, target, std::vector<Elem>(source.order(), target.zero())};
  // Fill by mixed-radix expansion, least significant coordinate first.
  std::vector<Elem> partial{target.zero()};
  for (std::size_t i = source.num_factors(); i-- > 0;) {
    std::uint64_t n = source.factors()[i];
    std::vector<Elem> next(partial.size() * n);
    Elem step = target.zero();
    for (std::uint64_t j = 0; j < n; ++j) {
      for (std::size_t t = 0; t < partial.size(); ++t) next[j * partial.size() + t] = target.add(step, partial[t]);
      step = target.add(step, images[i]);
    }
    partial = std::move(next);
  }
  f.table = std::move(partial);
  return f;
}

GroupHom hom_compose(const GroupHom& outer, const GroupHom& inner) {
  if (inner.target != outer.source) fail("malformed-hom", "composition mismatch");
  GroupHom f{inner.source, outer.target, std::vector<Elem>(inner.table.size())};
  for (std::size_t x = 0; x < inner.table.size(); ++x) f.table[x] = outer.table[inner.table[x]];
  return f;
}

bool hom_is_additive(const GroupHom& f) {
  if (f.table.size() != f.source.order()) return false;
  if (f.table[f.source.zero()] != f.target.zero()) return false;
  for (Elem x = 0; x < f.source.order(); ++x)
    for (Elem y = x; y < f.source.order(); ++y)
      if (f.table[f.source.add(x, y)] != f.target.add(f.table[x], f.table[y])) return false;
  return true;
}

namespace {

// Smith normal form of an integer matrix. Returns the diagonal and the left
// transform U (unimodular, rows x rows) with U*A*V = D.
struct Snf {
  std::vector<mpz_class> diag;
  std::vector<std::vector<mpz_class>> u;
};

Snf smith_normal_form(std::vector<std::vector<mpz_class>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::vector<mpz_class>> u(rows, std::vector<mpz_class>(rows, 0));
  for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
  };
  auto addmul_row = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
    for (std::size_t c = 0; c < cols; ++c) a[dst][c] += q * a[src][c];
    for (std::size_t c = 0; c < rows; ++c) u[dst][c] += q * u[src][c];
  };
  auto addmul_col = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
    for (std::size_t r = 0; r < rows; ++r) a[r][dst] += q * a[r][src];
  };
  auto negate_row = [&](std::size_t i) {
    for (auto& v : a[i]) v = -v;
    for (auto& v : u[i]) v = -v;
  };

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Find a nonzero pivot of least absolute value in the remaining block.
    std::size_t pi = t, pj = t;
    mpz_class best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || abs(a[i][j]) < abs(best))) {
          best = a[i][j];
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    if (pi != t) swap_rows(t, pi);
    if (pj != t) swap_cols(t, pj);
    if (a[t][t] < 0) negate_row(t);

    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i)
      if (a[i][t] != 0) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        addmul_row(i, t, -q);
        if (a[i][t] != 0) clean = false;
      }
    for (std::size_t j = t + 1; j < cols; ++j)
      if (a[t][j] != 0) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        addmul_col(j, t, -q);
        if (a[t][j] != 0) clean = false;
      }
    if (!clean) continue;  // smaller remainders appeared; redo the pivot hunt

    // Enforce that the pivot divides the rest of the block.
    bool divides_all = true;
    for (std::size_t i = t + 1; i < rows && divides_all; ++i)
      for (std::size_t j = t + 1; j < cols && divides_all; ++j)
        if (a[i][j] % a[t][t] != 0) {
          addmul_row(t, i, 1);
          divides_all = false;
        }
    if (!divides_all) continue;
    ++t;
  }

  Snf out;
  out.diag.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) out.diag[i] = i < cols ? a[i][i] : 0;
  out.u = std::move(u);
  return out;
}

}  // namespace

QuotientResult quotient(const FiniteAbelianGroup& g, const Subgroup& k) {
  if (k.parent != g) fail("invalid-subgroup", "subgroup belongs to a different group");
  if (!is_subgroup_closed(g, k.elements)) fail("invalid-subgroup", "element set is not closed");

  const std::size_t rank = g.num_factors();
  if (rank == 0) {
    return QuotientResult{FiniteAbelianGroup{}, hom_identity(g)};
  }

  // Relation lattice of G/K in Z^rank: the factor relations plus lifts of K.
  std::vector<std::vector<mpz_class>> a(rank);
  const std::size_t cols = rank + k.elements.size();
  for (std::size_t i = 0; i < rank; ++i) a[i].assign(cols, 0);
  for (std::size_t i = 0; i < rank; ++i) a[i][i] = g.factors()[i];
  for (std::size_t j = 0; j < k.elements.size(); ++j) {
    auto c = g.coords(k.elements[j]);
    for (std::size_t i = 0; i < rank; ++i) a[i][rank + j] = c[i];
  }
  Snf snf = smith_normal_form(std::move(a));

  std::vector<std::uint64_t> qfactors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rank; ++i) {
    if (snf.diag[i] == 0) fail("internal", "quotient lattice not full rank");
    if (snf.diag[i] > 1) {
      qfactors.push_back(snf.diag[i].get_ui());
      kept.push_back(i);
    }
  }
  FiniteAbelianGroup q(qfactors);

  GroupHom proj{g, q, std::vector<Elem>(g.order())};
  for (Elem x = 0; x < g.order(); ++x) {
    auto c = g.coords(x);
    std::vector<std::int64_t> y(kept.size());
    for (std::size_t t = 0; t < kept.size(); ++t) {
      mpz_class acc = 0;
      for (std::size_t i = 0; i < rank; ++i) acc += snf.u[kept[t]][i] * c[i];
      mpz_class m;
      mpz_fdiv_r(m.get_mpz_t(), acc.get_mpz_t(), snf.diag[kept[t]].get_mpz_t());
      y[t] = m.get_si();
    }
    proj.table[x] = q.from_coords(y);
  }

  if (g.order() != q.order() * k.order()) fail("internal", "quotient order mismatch");
  for (Elem x : k.elements)
    if (proj.table[x] != q.zero()) fail("internal", "subgroup not inside projection kernel");
  return QuotientResult{std::move(q), std::move(proj)};
}

void for_each_hom(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
                  const std::function<bool(const std::vector<Elem>&)>& fn) {
  const std::size_t rank = source.num_factors();
  std::vector<std::vector<Elem>> candidates(rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (Elem y = 0; y < target.order(); ++y)
      if (source.factors()[i] % target.element_order(y) == 0) candidates[i].push_back(y);

  std::vector<Elem> images(rank);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == rank) return fn(images);
    for (Elem y : candidates[i]) {
      images[i] = y;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  rec(0);
}

std::uint64_t count_homs(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < source.num_factors(); ++i) {
    std::uint64_t c = 0;
    for (Elem y = 0; y < target.order(); ++y)
      if (source.factors()[i] % target.element_order(y) == 0) ++c;
    count *= c;
  }
  return count;
}

std::vector<GroupHom> enumerate_homs(const FiniteAbelianGroup& source, const FiniteAbelianGroup& target,
                                     std::uint64_t budget) {
  if (count_homs(source, target) > budget) fail("budget", "homomorphism enumeration exceeds budget");
  std::vector<GroupHom> out;
  for_each_hom(source, target, [&](const std::vector<Elem>& images) {
    out.push_back(hom_from_basis_images(source, target, images));
    return true;
  });
  return out;
}

std::vector<std::vector<Elem>> automorphism_tables(const FiniteAbelianGroup& g) {
  std::vector<std::vector<Elem>> tables;
  for_each_hom(g, g, [&](const std::vector<Elem>& images) {
    GroupHom f = hom_from_basis_images(g, g, images);
    std::vector<bool> hit(g.order(), false);
    bool bijective = true;
    for (Elem x = 0; x < g.order() && bijective; ++x) {
      if (hit[f.table[x]]) bijective = false;
      hit[f.table[x]] = true;
    }
    if (bijective) tables.push_back(f.table);
    return true;
  });
  std::sort(tables.begin(), tables.end());
  return tables;
}

std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g) {
  std::set<std::vector<Elem>> seen;
  std::vector<std::vector<Elem>> frontier{{g.zero()}};
  seen.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<std::vector<Elem>> next;
    for (const auto& s : frontier) {
      for (Elem x = 0; x < g.order(); ++x) {
        if (std::binary_search(s.begin(), s.end(), x)) continue;
        std::vector<Elem> gens(s.begin(), s.end());
        gens.push_back(x);
        Subgroup bigger = subgroup_generated(g, gens);
        if (seen.insert(bigger.elements).second) next.push_back(bigger.elements);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out;
  for (const auto& elems : seen) {
    Subgroup s{g, elems, {}};
    s.generators = reduced_generators(s);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  });
  return out;
}

AbstractSubgroup abstract_subgroup(const Subgroup& k) {
  const FiniteAbelianGroup& g = k.parent;
  std::vector<Elem> gens = k.generators.empty() ? reduced_generators(k) : k.generators;
  if (gens.empty()) {
    AbstractSubgroup out;
    out.group = FiniteAbelianGroup{};
    out.from_abstract = {g.zero()};
    out.to_abstract.assign(k.elements.size(), 0);
    return out;
  }

  std::vector<std::uint64_t> orders(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) orders[i] = g.element_order(gens[i]);
  FiniteAbelianGroup tuple_group(orders);

  // Tuples c with sum c_i * gens_i == 0, plus one witness tuple per element.
  std::map<Elem, std::vector<std::int64_t>> witness;
  std::vector<std::vector<std::int64_t>> kernel_tuples;
  for (Elem t = 0; t < tuple_group.order(); ++t) {
    auto c = tuple_group.coords(t);
    Elem sum = g.zero();
    for (std::size_t i = 0; i < gens.size(); ++i) sum = g.add(sum, g.mul(c[i], gens[i]));
    witness.emplace(sum, c);
    if (sum == g.zero()) kernel_tuples.push_back(c);
  }
  if (witness.size() != k.elements.size()) fail("internal", "generators do not span the subgroup");

  const std::size_t rank = gens.size();
  std::vector<std::vector<mpz_class>> a(rank);
  for (std::size_t i = 0; i < rank; ++i) a[i].assign(rank + kernel_tuples.size(), 0);
  for (std::size_t i = 0; i < rank; ++i) a[i][i] = orders[i];
  for (std::size_t j = 0; j < kernel_tuples.size(); ++j)
    for (std::size_t i = 0; i < rank; ++i) a[i][rank + j] = kernel_tuples[j][i];
  Snf snf = smith_normal_form(std::move(a));

  std::vector<std::uint64_t> bfactors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rank; ++i)
    if (snf.diag[i] > 1) {
      bfactors.push_back(snf.diag[i].get_ui());
      kept.push_back(i);
    }
  FiniteAbelianGroup b(bfactors);
  if (b.order() != k.elements.size()) fail("internal", "abstract decomposition order mismatch");

  AbstractSubgroup out;
  out.group = b;
  out.to_abstract.resize(k.elements.size());
  out.from_abstract.assign(b.order(), g.zero());
  for (std::size_t idx = 0; idx < k.elements.size(); ++idx) {
    const auto& c = witness.at(k.elements[idx]);
    std::vector<std::int64_t> y(kept.size());
    for (std::size_t t = 0; t < kept.size(); ++t) {
      mpz_class acc = 0;
      for (std::size_t i = 0; i < rank; ++i) acc += snf.u[kept[t]][i] * c[i];
      mpz_class m;
      mpz_fdiv_r(m.get_mpz_t(), acc.get_mpz_t(), snf.diag[kept[t]].get_mpz_t());
      y[t] = m.get_si();
    }
    out.to_abstract[idx] = b.from_coords(y);
    out.from_abstract[out.to_abstract[idx]] = k.elements[idx];
  }
  return out;
}

}  // namespace valg
