#include "valg/suites.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "valg/amalgam.hpp"
#include "valg/fraisse.hpp"
#include "valg/free_group.hpp"
#include "valg/gen.hpp"
#include "valg/json_io.hpp"
#include "valg/katetov.hpp"
#include "valg/stepfn.hpp"

namespace valg {

namespace {

using Clock = std::chrono::steady_clock;

CriterionResult finish(const std::string& name, bool pass, const std::string& detail,
                       Clock::time_point start) {
  double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return CriterionResult{name, pass, detail, seconds};
}

struct ZnFixture {
  FiniteAbelianGroup group;
  std::vector<Elem> basis;
  ValuedGroup metric;
};

// Z_N^N with the generating set {+-e_j} u {e_j - e_k} and its word metric.
ZnFixture zn_fixture(std::uint64_t n) {
  FiniteAbelianGroup g(std::vector<std::uint64_t>(n, n));
  std::vector<Elem> basis(n);
  for (std::size_t j = 0; j < n; ++j) basis[j] = g.basis(j);
  std::set<Elem> gens;
  for (std::size_t j = 0; j < n; ++j) {
    gens.insert(basis[j]);
    gens.insert(g.neg(basis[j]));
    for (std::size_t k = 0; k < n; ++k)
      if (j != k) gens.insert(g.sub(basis[j], basis[k]));
  }
  GeneratingSet f{g, {gens.begin(), gens.end()}, std::nullopt};
  ValuedGroup metric = word_metric(f);
  return ZnFixture{std::move(g), std::move(basis), std::move(metric)};
}

// A single-cone Katetov map q(x - b) + t; always admissible for the group
// exponent and grid-valued for grid offsets.
KatetovMap cone_katetov(Rng& rng, const ValuedGroup& base, std::size_t domain_size,
                        int grid_log2) {
  const FiniteAbelianGroup& g = base.group;
  std::vector<Elem> domain;
  while (domain.size() < std::min<std::size_t>(domain_size, g.order())) {
    Elem x = rng.below(g.order());
    if (!std::binary_search(domain.begin(), domain.end(), x))
      domain.insert(std::upper_bound(domain.begin(), domain.end(), x), x);
  }
  Elem b = rng.below(g.order());
  Rat t = grid_step(grid_log2) * Rat(1 + rng.below(3));
  std::vector<Rat> values(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) values[i] = base.p(g.sub(domain[i], b)) + t;
  if (base.cap == Cap::one)
    for (Rat& v : values)
      if (v > 1) v = 1;
  KatetovMap f{std::move(domain), std::move(values), base.cap};
  if (!validate_katetov(base, f).empty()) fail("internal", "cone map is not Katetov");
  return f;
}

bool all_on_grid(const std::vector<Rat>& table, int grid_log2) {
  for (const Rat& v : table)
    if (!on_grid(v, grid_log2)) return false;
  return true;
}

// Grid value on the same carrier, equal to lambda on `keep`, perturbed
// upward elsewhere within (1+eps)*lambda when sandwich is set.
ValuedGroup perturbed_value(Rng& rng, const ValuedGroup& v, const std::vector<Elem>& keep,
                            int grid_log2, const Rat* sandwich_eps) {
  const Rat step = grid_step(grid_log2);
  CostFunction cost{v.group, std::vector<ExtRat>(v.group.order())};
  for (Elem x = 0; x < v.group.order(); ++x) {
    Rat base = v.value[x];
    if (x == 0 || std::binary_search(keep.begin(), keep.end(), x)) {
      cost.cost[x] = base;
      continue;
    }
    Elem nx = v.group.neg(x);
    if (nx < x) {
      cost.cost[x] = cost.cost[nx];
      continue;
    }
    Rat bump = step * Rat(rng.below(3));
    if (sandwich_eps && bump > *sandwich_eps * base) bump = 0;
    cost.cost[x] = base + bump;
  }
  Semivalue s = complete_cost_semivalue(cost, Cap::infinite, v.exponent, Exec::serial);
  if (v.cap == Cap::one) s = cap_semivalue_at(s, Rat(1));
  s.cap = v.cap;
  ValuedGroup out = semivalue_to_value(s);
  out.exponent = v.exponent;
  return out;
}

std::vector<std::vector<std::uint64_t>> shapes_up_to_order(std::uint64_t bound) {
  std::vector<std::vector<std::uint64_t>> shapes{{}};
  std::vector<std::uint64_t> current;
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t start,
                                                              std::uint64_t left) {
    for (std::uint64_t f = start; f <= left; ++f) {
      current.push_back(f);
      shapes.push_back(current);
      rec(f, left / f);
      current.pop_back();
    }
  };
  rec(2, bound);
  return shapes;
}

// Independent oracle: minimum cost over multisets of finite atoms of size at
// most max_len summing to each element.
std::vector<ExtRat> brute_force_completion(const CostFunction& c, std::uint64_t max_len) {
  const FiniteAbelianGroup& g = c.group;
  std::vector<std::pair<Elem, Rat>> atoms;
  for (Elem a = 1; a < g.order(); ++a)
    if (c.cost[a]) atoms.emplace_back(a, *c.cost[a]);
  std::vector<ExtRat> best(g.order());
  best[0] = Rat(0);
  std::function<void(std::size_t, std::uint64_t, Elem, const Rat&)> rec =
      [&](std::size_t start, std::uint64_t used, Elem sum, const Rat& total) {
        if (used > 0 && (!best[sum] || total < *best[sum])) best[sum] = total;
        if (used == max_len) return;
        for (std::size_t i = start; i < atoms.size(); ++i)
          rec(i, used + 1, g.add(sum, atoms[i].first), total + atoms[i].second);
      };
  rec(0, 0, g.zero(), Rat(0));
  return best;
}

}  // namespace

CriterionResult suite_zn_numbers() {
  auto start = Clock::now();
  std::string detail;
  for (std::uint64_t n : {3, 4, 5}) {
    ZnFixture fx = zn_fixture(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (j == k) continue;
        if (fx.metric.p(fx.group.sub(fx.basis[j], fx.basis[k])) != 1)
          return finish("zn-numbers", false, "pair distance != 1 at N=" + std::to_string(n),
                        start);
      }
    Elem diag = fx.group.zero();
    for (std::size_t j = 0; j < n; ++j) diag = fx.group.add(diag, fx.basis[j]);
    if (fx.metric.p(diag) != Rat(static_cast<long>(n - 1)))
      return finish("zn-numbers", false, "diagonal norm != N-1 at N=" + std::to_string(n), start);

    // All compositions n_1 + ... + n_N = N.
    std::vector<std::uint64_t> comp(n, 0);
    std::function<bool(std::size_t, std::uint64_t)> rec = [&](std::size_t pos,
                                                              std::uint64_t left) {
      if (pos + 1 == n) {
        comp[pos] = left;
        Elem sum = fx.group.zero();
        std::uint64_t top = 0;
        for (std::size_t j = 0; j < n; ++j) {
          sum = fx.group.add(sum, fx.group.mul(static_cast<std::int64_t>(comp[j]), fx.basis[j]));
          top = std::max(top, comp[j]);
        }
        return fx.metric.p(sum) <= Rat(static_cast<long>(n - top));
      }
      for (std::uint64_t v = 0; v <= left; ++v) {
        comp[pos] = v;
        if (!rec(pos + 1, left - v)) return false;
      }
      return true;
    };
    if (!rec(0, n))
      return finish("zn-numbers", false, "composition bound fails at N=" + std::to_string(n),
                    start);
    detail += (detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(n) + " ok";
  }
  return finish("zn-numbers", true, detail, start);
}

CriterionResult suite_katetov_counterexamples() {
  auto start = Clock::now();
  std::string detail;
  for (std::uint64_t n : {3, 4, 5}) {
    ZnFixture fx = zn_fixture(n);
    Rat c = std::max(Rat(1, 2), Rat(Rat(1) - rat_of(2, static_cast<long>(n))));
    std::vector<Elem> domain = fx.basis;
    std::sort(domain.begin(), domain.end());
    KatetovMap f = make_katetov(fx.metric, domain, std::vector<Rat>(n, c), Cap::infinite);
    auto witness = admissibility_violation(fx.metric, f, n);
    if (!witness)
      return finish("katetov-counterexamples", false,
                    "constant map unexpectedly admissible at N=" + std::to_string(n), start);
    detail += "N=" + std::to_string(n) + " witness (" + rat_to_string(witness->lhs) + ">" +
              rat_to_string(witness->rhs) + "); ";
  }
  // The exponent-3 subgroup-form counterexample on Z_3.
  FiniteAbelianGroup z3({3});
  ValuedGroup q = make_valued_group(z3, {Rat(0), Rat(1), Rat(1)}, Cap::infinite, 3);
  KatetovMap f = make_katetov(q, {0, 1, 2}, {Rat(3, 2), Rat(1, 2), Rat(1, 2)}, Cap::infinite);
  auto witness = admissibility_violation(q, f, 3);
  if (!witness || !witness->subgroup_form)
    return finish("katetov-counterexamples", false, "subgroup-form witness missing on Z_3", start);
  if (find_realizer(q, f))
    return finish("katetov-counterexamples", false, "the Z_3 map is unexpectedly realized", start);
  detail += "Z_3 subgroup witness " + rat_to_string(witness->lhs) + ">" +
            rat_to_string(witness->rhs);
  return finish("katetov-counterexamples", true, detail, start);
}

CriterionResult suite_onegen(std::uint64_t seed) {
  auto start = Clock::now();
  const int grid = 3;  // dyadic 1/8
  const std::uint64_t exponents[] = {2, 3, 4, 0};
  Rng root(seed);
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng = root.child(i);
    std::uint64_t n = exponents[i % 4];
    Cap cap = i % 2 == 0 ? Cap::infinite : Cap::one;
    FiniteAbelianGroup g = random_group(rng, n, 16);
    ValuedGroup v = random_grid_value(rng, g, grid, cap, n);

    KatetovMap f{{}, {}, cap};
    bool found = false;
    for (std::uint64_t attempt = 0; attempt < 8 && !found; ++attempt) {
      Rng sub = rng.child(attempt);
      KatetovMap candidate = random_katetov(sub, v, 1 + sub.below(4), grid, cap);
      if (candidate.min_value() == 0) continue;
      if (n > 2 && admissibility_violation(v, candidate, n)) continue;
      f = std::move(candidate);
      found = true;
    }
    if (!found) {
      // Cone maps q(x-b)+t with t > 0 are always admissible with positive
      // infimum, so this branch cannot fail.
      Rng sub = rng.child(99);
      f = cone_katetov(sub, v, 1 + sub.below(4), grid);
    }

    OneGenExtension ext = extend_onegen(v, f, n, cap);
    const ValuedGroup& res = ext.result;
    if (!validate_value_table(res.group, res.value, cap, n, true).empty())
      return finish("onegen", false, "result fails the value axioms at instance " +
                                         std::to_string(i), start);
    for (Elem x = 0; x < g.order(); ++x)
      if (res.value[ext.embedding.table[x]] != v.value[x])
        return finish("onegen", false, "restriction mismatch at instance " + std::to_string(i),
                      start);
    for (std::size_t t = 0; t < f.domain.size(); ++t)
      if (res.p(res.group.sub(ext.embedding.table[f.domain[t]], ext.witness)) != f.values[t])
        return finish("onegen", false, "realization mismatch at instance " + std::to_string(i),
                      start);
    if (!all_on_grid(res.value, grid))
      return finish("onegen", false, "grid not preserved at instance " + std::to_string(i), start);
    if (n != 0 && !res.group.has_exponent(n))
      return finish("onegen", false, "exponent not preserved at instance " + std::to_string(i),
                    start);
  }
  return finish("onegen", true, "200 extensions exact", start);
}

CriterionResult suite_matching(std::uint64_t seed) {
  auto start = Clock::now();
  Rng root(seed);
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = root.child(i);
    FiniteMetricSpace x = random_metric_space(rng, 2 + rng.below(5), 2);
    FreeValuedGroup fvg = free_group(x, 2, Cap::infinite);
    for (Elem f = 1; f < fvg.carrier.order(); ++f)
      if (pd_matching(fvg, f) != fvg.value[f])
        return finish("matching", false, "mismatch at instance " + std::to_string(i), start);
  }
  return finish("matching", true, "100 spaces, matching == completion on every element", start);
}

CriterionResult suite_pd_isometry(std::uint64_t seed) {
  auto start = Clock::now();
  Rng root(seed);
  for (std::uint64_t n : {2, 3, 4}) {
    for (std::size_t i = 0; i < 50; ++i) {
      Rng rng = root.child(n * 1000 + i);
      FiniteMetricSpace x = random_metric_space(rng, 2 + rng.below(3), 2);
      FreeValuedGroup fvg = free_group(x, n, Cap::infinite);
      for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = 0; b < x.size(); ++b) {
          if (a == b) continue;
          if (fvg.value[fvg.pair_difference(a, b)] != x.d(a, b))
            return finish("pd-isometry", false,
                          "embedding not isometric at N=" + std::to_string(n) + " instance " +
                              std::to_string(i),
                          start);
        }
    }
  }
  return finish("pd-isometry", true, "150 spaces, difference embedding exact", start);
}

CriterionResult suite_odd_example() {
  auto start = Clock::now();
  // X = {0,1,2,3}, d(0,j) = 1/2, d(j,k) = 1; A = {1,2,3}.
  std::vector<Rat> dx(16, Rat(0));
  auto set = [&](std::size_t i, std::size_t j, const Rat& v) {
    dx[i * 4 + j] = v;
    dx[j * 4 + i] = v;
  };
  for (std::size_t j = 1; j < 4; ++j) set(0, j, Rat(1, 2));
  set(1, 2, Rat(1));
  set(1, 3, Rat(1));
  set(2, 3, Rat(1));
  FiniteMetricSpace x = make_metric_space({"0", "1", "2", "3"}, dx);
  FiniteMetricSpace a = make_metric_space(
      {"1", "2", "3"}, {Rat(0), Rat(1), Rat(1), Rat(1), Rat(0), Rat(1), Rat(1), Rat(1), Rat(0)});

  FreeValuedGroup fx = free_group(x, 3, Cap::infinite);
  FreeValuedGroup fa = free_group(a, 3, Cap::infinite);

  // f = 1^ + 2^ + 3^ in each carrier (last point eliminated).
  Elem f_in_a = fa.carrier.add(fa.carrier.basis(0), fa.carrier.basis(1));
  Elem f_in_x = fx.carrier.add(fx.carrier.basis(1), fx.carrier.basis(2));
  if (fa.value[f_in_a] != 2)
    return finish("odd-example", false, "restricted value != 2", start);
  if (fx.value[f_in_x] != Rat(3, 2))
    return finish("odd-example", false, "ambient value != 3/2", start);

  // The inclusion-induced homomorphism: nonexpansive but not isometric.
  std::vector<Elem> u(3);
  for (std::size_t j = 0; j < 3; ++j) u[j] = fx.pair_difference(j + 1, 0);
  InducedHom inc = induced_hom(u, fa, fx.as_valued_group());
  if (inc.lipschitz_constant != 1 || !inc.transfer_verified)
    return finish("odd-example", false, "inclusion is not 1-Lipschitz", start);
  if (inc.hom.table[f_in_a] != f_in_x)
    return finish("odd-example", false, "inclusion maps f incorrectly", start);
  return finish("odd-example", true, "p drops 2 -> 3/2 across the inclusion", start);
}

CriterionResult suite_amalgam(std::uint64_t seed) {
  auto start = Clock::now();
  const int grid = 3;
  const std::uint64_t exponents[] = {2, 3, 4, 0};
  Rng root(seed);

  // Exact amalgamation.
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng = root.child(i);
    std::uint64_t n = exponents[i % 4];
    Cap cap = i % 2 == 0 ? Cap::infinite : Cap::one;
    FiniteAbelianGroup g1 = random_group(rng, n, 16);
    ValuedGroup d1 = random_grid_value(rng, g1, grid, cap, n);
    Subgroup k = random_subgroup(rng, g1);
    AbstractSubgroup ab = abstract_subgroup(k);
    std::vector<Rat> pulled(ab.group.order());
    for (Elem b = 0; b < ab.group.order(); ++b) pulled[b] = d1.value[ab.from_abstract[b]];
    ValuedGroup d0{ab.group, std::move(pulled), cap, n};
    GroupHom phi1{ab.group, g1, ab.from_abstract};

    ValuedGroup d2 = d1;
    GroupHom phi2 = phi1;
    if (i % 3 == 0) {
      // A genuinely new carrier through a one-generator extension of D0.
      Rng sub = rng.child(7);
      KatetovMap f = cone_katetov(sub, d0, 1 + sub.below(2), grid);
      if (f.min_value() > 0) {
        OneGenExtension ext = extend_onegen(d0, f, n, cap);
        d2 = ext.result;
        phi2 = ext.embedding;
      }
    } else {
      d2 = perturbed_value(rng, d1, k.elements, grid, nullptr);
      phi2 = phi1;
    }

    AmalgamResult res = amalgamate(d0, d1, d2, phi1, phi2);
    if (!all_on_grid(res.result.value, grid))
      return finish("amalgam", false, "grid not preserved at A1 instance " + std::to_string(i),
                    start);
    if (!validate_value_table(res.result.group, res.result.value, cap, n, true).empty())
      return finish("amalgam", false, "class violated at A1 instance " + std::to_string(i), start);
    for (Elem b = 0; b < ab.group.order(); ++b)
      if (res.psi1.table[phi1.table[b]] != res.psi2.table[phi2.table[b]])
        return finish("amalgam", false, "square broken at A1 instance " + std::to_string(i),
                      start);
  }

  // Almost-isometric correction.
  Rat worst_ratio(0);
  for (std::size_t i = 0; i < 50; ++i) {
    Rng rng = root.child(10000 + i);
    std::uint64_t n = exponents[i % 4];
    Cap cap = i % 2 == 0 ? Cap::infinite : Cap::one;
    FiniteAbelianGroup g1 = random_group(rng, n, 12);
    ValuedGroup d1 = random_grid_value(rng, g1, grid, cap, n);
    Rat eps = grid_step(grid) * Rat(1 + rng.below(6));  // in (0,1)
    bool family_a = i % 2 == 0;
    Subgroup d0 = family_a ? random_subgroup(rng, g1) : trivial_subgroup(g1);
    ValuedGroup d2 = perturbed_value(rng, d1, d0.elements, grid, &eps);
    GroupHom v = hom_identity(g1);
    v.target = d2.group;
    std::vector<Elem> u(d0.elements.begin(), d0.elements.end());

    AmalgamResult res = amalgamate_approx(d1, d0, d2, u, v, eps);
    Rat gate = (Rat(1) + d1.diameter()) * eps;
    if (res.sup_distance > gate)
      return finish("amalgam", false, "A2 bound exceeded at instance " + std::to_string(i), start);
    if (gate > 0 && res.sup_distance / gate > worst_ratio)
      worst_ratio = res.sup_distance / gate;
  }

  // Mixed identifications.
  for (std::size_t i = 0; i < 50; ++i) {
    Rng rng = root.child(20000 + i);
    std::uint64_t n = exponents[i % 4];
    Cap cap = i % 2 == 0 ? Cap::infinite : Cap::one;
    FiniteAbelianGroup g1 = random_group(rng, n, 12);
    ValuedGroup d1 = random_grid_value(rng, g1, grid, cap, n);
    Subgroup e1 = random_subgroup(rng, g1);
    Subgroup e2 = random_subgroup(rng, g1);
    std::vector<Elem> both;
    both.insert(both.end(), e1.elements.begin(), e1.elements.end());
    both.insert(both.end(), e2.elements.begin(), e2.elements.end());
    std::sort(both.begin(), both.end());
    both.erase(std::unique(both.begin(), both.end()), both.end());
    ValuedGroup d2 = perturbed_value(rng, d1, both, grid, nullptr);

    std::vector<Elem> phi1(e1.elements.begin(), e1.elements.end());
    std::vector<Elem> phi2(e2.elements.begin(), e2.elements.end());
    if (i % 3 == 0) {
      // Replace phi2 by some other isometric embedding of E2 when one exists.
      AbstractSubgroup ab2 = abstract_subgroup(e2);
      std::vector<Rat> pulled(ab2.group.order());
      for (Elem b = 0; b < ab2.group.order(); ++b) pulled[b] = d1.value[ab2.from_abstract[b]];
      ValuedGroup e2v{ab2.group, std::move(pulled), cap, n};
      if (auto emb = isometric_embedding(e2v, d2))
        for (std::size_t t = 0; t < e2.elements.size(); ++t)
          phi2[t] = emb->table[ab2.to_abstract[t]];
    }

    // eps covering the actual pair-distance deviation.
    Rat eps = grid_step(grid);
    for (std::size_t s = 0; s < e1.elements.size(); ++s)
      for (std::size_t t = 0; t < e2.elements.size(); ++t) {
        Rat lhs = d2.value[d2.group.sub(phi1[s], phi2[t])];
        Rat rhs = d1.value[d1.group.sub(e1.elements[s], e2.elements[t])];
        Rat dev = lhs > rhs ? lhs - rhs : rhs - lhs;
        if (dev > eps) eps = dev;
      }

    AmalgamResult res = amalgamate_mixed(d1, e1, e2, d2, phi1, phi2, eps);
    if (res.sup_distance > eps)
      return finish("amalgam", false, "A3 bound exceeded at instance " + std::to_string(i), start);
  }
  return finish("amalgam", true,
                "A1 x200, A2 x50 (worst achieved/gate " + rat_to_string(worst_ratio) +
                    "), A3 x50",
                start);
}

CriterionResult suite_completion_oracle(std::uint64_t seed) {
  auto start = Clock::now();
  Rng root(seed);
  std::uint64_t shape_index = 0;
  for (const auto& shape : shapes_up_to_order(8)) {
    FiniteAbelianGroup g(shape);
    for (std::size_t i = 0; i < 100; ++i) {
      Rng rng = root.child(shape_index * 1000 + i);
      CostFunction cost = random_cost(rng, g, 3, true);
      CompletionResult serial = complete_cost(cost, Exec::serial);
      CompletionResult parallel = complete_cost(cost, Exec::parallel);
      std::vector<ExtRat> oracle = brute_force_completion(cost, g.order());
      for (Elem x = 0; x < g.order(); ++x) {
        bool same = serial.value[x].has_value() == oracle[x].has_value() &&
                    parallel.value[x].has_value() == oracle[x].has_value() &&
                    (!oracle[x] || (*serial.value[x] == *oracle[x] &&
                                    *parallel.value[x] == *oracle[x]));
        if (!same)
          return finish("completion-oracle", false,
                        "mismatch on shape " + std::to_string(shape_index) + " instance " +
                            std::to_string(i),
                        start);
      }
    }
    ++shape_index;
  }
  return finish("completion-oracle", true,
                std::to_string(shape_index) + " group shapes x100 costs, all exact", start);
}

CriterionResult suite_fraisse(const std::string& golden_path) {
  auto start = Clock::now();
  ChainConfig config;
  config.grid_log2 = 2;
  config.cap = Cap::one;
  config.exponent = 2;
  config.max_order = 4;
  config.rounds = 2;
  config.task_cap = 1;

  Catalog catalog = enumerate_catalog(config);
  if (catalog.entries.size() != 22)
    return finish("fraisse", false,
                  "catalog size " + std::to_string(catalog.entries.size()) + ", expected 22",
                  start);

  Chain chain = build_chain(catalog);
  if (!chain.drained) return finish("fraisse", false, "order budget exhausted", start);
  std::string dump = chain_to_json(chain).dump();

  Chain again = build_chain(catalog);
  if (chain_to_json(again).dump() != dump)
    return finish("fraisse", false, "two builds differ byte-wise", start);

  if (!golden_path.empty()) {
    std::ifstream in(golden_path, std::ios::binary);
    if (in) {
      std::stringstream buffer;
      buffer << in.rdbuf();
      if (buffer.str() != dump)
        return finish("fraisse", false, "output differs from the golden file", start);
    } else {
      std::ofstream out(golden_path, std::ios::binary);
      out << dump;
    }
  }

  for (const ValuedGroup& stage : chain.stages)
    if (!all_on_grid(stage.value, config.grid_log2))
      return finish("fraisse", false, "a stage left the dyadic grid", start);

  LedgerCheck ledger = verify_ledger(chain);
  if (ledger.sound != ledger.entries)
    return finish("fraisse", false,
                  "ledger re-verification failed: " + std::to_string(ledger.sound) + "/" +
                      std::to_string(ledger.entries),
                  start);

  EmbeddingReport report = verify_embeddings(chain.final_stage(), catalog);
  if (report.embedded != report.tasks)
    return finish("fraisse", false, "some catalog entries do not embed", start);

  return finish("fraisse", true,
                "final order " + std::to_string(chain.final_stage().group.order()) + ", " +
                    std::to_string(ledger.entries) + " ledger tasks sound, " +
                    std::to_string(report.embedded) + "/" + std::to_string(report.tasks) +
                    " embeddings",
                start);
}

CriterionResult suite_modulus_extension(std::uint64_t seed) {
  auto start = Clock::now();
  Rng root(seed);
  const std::uint64_t exponents[] = {2, 3, 4, 0};
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = root.child(i);
    Cap cap = i % 2 == 0 ? Cap::infinite : Cap::one;
    Modulus omega0 = random_concave_modulus(rng, 1 + rng.below(3), 2);
    Modulus rho0 = random_concave_modulus(rng, 1 + rng.below(3), 2);
    Modulus tau0 = random_concave_modulus(rng, 1 + rng.below(3), 2);
    OrtTriple triple = build_ort_triple(omega0, rho0, tau0, cap);
    if (check_ort(triple.omega, triple.rho, triple.tau, cap))
      return finish("modulus-extension", false,
                    "built triple fails its own inequality at instance " + std::to_string(i),
                    start);

    std::uint64_t n = exponents[i % 4];
    FiniteAbelianGroup g = random_group(rng, n, 12);
    ValuedGroup d = random_grid_value(rng, g, 3, cap, n);
    Subgroup d0 = random_subgroup(rng, g);
    std::vector<Elem> kgens;
    for (std::size_t t = 0; t < 2 && !d0.elements.empty(); ++t)
      kgens.push_back(d0.elements[rng.below(d0.elements.size())]);
    Subgroup kernel = subgroup_generated(g, kgens);

    auto dist_to_kernel = [&](Elem x) {
      Rat best = d.value[g.sub(x, kernel.elements[0])];
      for (Elem z : kernel.elements) {
        Rat cand = d.value[g.sub(x, z)];
        if (cand < best) best = cand;
      }
      return best;
    };
    std::vector<Rat> lambda0(d0.elements.size());
    for (std::size_t t = 0; t < d0.elements.size(); ++t) {
      lambda0[t] = triple.omega(dist_to_kernel(d0.elements[t]));
      if (cap == Cap::one && lambda0[t] > 1) lambda0[t] = 1;
    }

    ModulusExtensionResult ext =
        extend_semivalue_modulus(d, d0, lambda0, triple.omega, triple, Exec::parallel);
    const Semivalue& bar = ext.result;
    for (std::size_t t = 0; t < d0.elements.size(); ++t)
      if (bar.value[d0.elements[t]] != lambda0[t])
        return finish("modulus-extension", false, "not an extension at instance " +
                                                      std::to_string(i), start);
    for (Elem x = 0; x < g.order(); ++x) {
      if (bar.value[x] > triple.omega(d.value[x]))
        return finish("modulus-extension", false,
                      "domination fails at instance " + std::to_string(i), start);
      if (cap == Cap::one && bar.value[x] > 1)
        return finish("modulus-extension", false, "cap fails at instance " + std::to_string(i),
                      start);
      bool zero_here = bar.value[x] == 0;
      if (zero_here != kernel.contains(x))
        return finish("modulus-extension", false,
                      "zero set mismatch at instance " + std::to_string(i), start);
      if (triple.tau(dist_to_kernel(x)) > triple.rho(bar.value[x]))
        return finish("modulus-extension", false,
                      "tau/rho conclusion fails at instance " + std::to_string(i), start);
    }
  }
  return finish("modulus-extension", true, "100 extensions, conclusions exact", start);
}

CriterionResult suite_pv(std::uint64_t seed) {
  auto start = Clock::now();
  Rng root(seed);
  std::vector<Rat> ts{Rat(0), Rat(1, 2), Rat(1), Rat(2), Rat(10), Rat(7, 4)};
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = root.child(i);
    FiniteAbelianGroup g = random_group(rng, 0, 16);
    ValuedGroup q = random_grid_value(rng, g, 3, Cap::infinite, 0);
    StepFunction u = random_stepfn(rng, g, 4, 3);
    Rat base = step_norm(u, q);
    for (const Rat& t : ts)
      if (step_norm(step_act(t, u), q) != t * base)
        return finish("pv", false, "homogeneity fails at instance " + std::to_string(i), start);

    Elem h = 1 + rng.below(g.order() - 1);
    Rat s = grid_step(3) * Rat(rng.below(32));
    Rat t = grid_step(3) * Rat(rng.below(32));
    StepFunction diff = step_add(step_act(t, step_hat(g, h)), step_neg(step_act(s, step_hat(g, h))));
    Rat gap = t > s ? t - s : s - t;
    if (step_norm(diff, q) != gap * q.value[h])
      return finish("pv", false, "Lipschitz generator identity fails at instance " +
                                     std::to_string(i), start);
  }

  // Norming certificates.
  NormingReport nabla_report = norming_validate(norming_nabla(), Rat(1));
  NormingReport id_report = norming_validate(pl_identity(), Rat(1));
  if (!nabla_report.violations.empty() || nabla_report.zero_at_zero ||
      !nabla_report.classification_verified)
    return finish("pv", false, "nabla fails its certificate", start);
  if (!id_report.violations.empty() || !id_report.zero_at_zero ||
      !id_report.classification_verified)
    return finish("pv", false, "id fails its certificate", start);

  // A quadratic ramp with an understated Lipschitz constant: rejected by the
  // slope comparison at the largest breakpoint.
  PL ramp;
  ramp.points = {{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(4)}, {Rat(3), Rat(9)}};
  ramp.tail_slope = 7;
  NormingReport ramp_report = norming_validate(ramp, Rat(2));
  bool nf4_hit = false;
  for (const std::string& violation : ramp_report.violations)
    if (violation.find("NF4") != std::string::npos) nf4_hit = true;
  if (!nf4_hit) return finish("pv", false, "quadratic ramp not rejected by NF4", start);

  // Corrupted-table negative control: the norm of t=2 pieces of one marked
  // element is doubled, breaking the kappa bound.
  FiniteAbelianGroup z2({2});
  ValuedGroup q2 = make_valued_group(z2, {Rat(0), Rat(1)}, Cap::infinite, 2);
  NormingFunction nabla = make_norming(norming_nabla(), Rat(1));
  auto corrupted = [&](const StepFunction& u) {
    Rat total = 0;
    Rat prev = 0;
    for (std::size_t j = 0; j < u.ends.size(); ++j) {
      Rat weight = q2.value[u.vals[j]];
      if (u.vals[j] == 1 && u.ends[j] == 2) weight *= 2;
      total += (u.ends[j] - prev) * weight;
      prev = u.ends[j];
    }
    return total;
  };
  std::vector<StepFunction> samples{step_hat(z2, 1)};
  KappaNormReport clean = check_kappa_norm(samples, ts, nabla, q2);
  if (!clean.violations.empty() || !clean.homogeneous)
    return finish("pv", false, "clean table flagged", start);
  KappaNormReport dirty = check_kappa_norm(samples, ts, nabla, q2, corrupted);
  if (dirty.violations.empty())
    return finish("pv", false, "corrupted table not caught", start);

  return finish("pv", true, "100 step-function instances exact; certificates and control ok",
                start);
}

CriterionResult suite_spheres(std::uint64_t seed) {
  auto start = Clock::now();
  Rng root(seed);
  std::size_t failures = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < 500; ++i) {
    Rng rng = root.child(i);
    FiniteAbelianGroup g = random_group(rng, 4, 16);
    for (std::uint64_t attempt = 0; g.order() < 4; ++attempt) {
      Rng sub = rng.child(1000 + attempt);
      g = random_group(sub, 4, 16);
    }
    ValuedGroup v = random_grid_value(rng, g, 3, Cap::infinite, 4);
    KatetovMap f = random_katetov(rng, v, 3, 3, Cap::infinite);
    // Inner: clamp at the diameter (still a Katetov map).
    Rat diam = v.diameter();
    for (Rat& value : f.values)
      if (value > diam) value = diam;
    if (!validate_katetov(v, f).empty()) continue;
    if (auto w = admissibility_violation(v, f, 4)) {
      ++failures;
      if (first_failure.empty())
        first_failure = "instance " + std::to_string(i) + ": " + rat_to_string(w->lhs) + " > " +
                        rat_to_string(w->rhs);
    }
  }
  if (failures > 0)
    return finish("spheres", false,
                  std::to_string(failures) + " three-point maps violate the exponent-4 " +
                      "inequality (surfaced for review; first: " + first_failure + ")",
                  start);
  return finish("spheres", true, "500 three-point inner maps all admissible at N=4", start);
}

std::vector<std::string> suite_names() {
  return {"zn-numbers", "katetov-counterexamples", "onegen",
          "matching",   "pd-isometry",             "odd-example",
          "amalgam",    "completion-oracle",       "fraisse",
          "modulus-extension",                     "pv",
          "spheres"};
}

CriterionResult run_suite(const std::string& name, std::uint64_t seed,
                          const std::string& golden_path) {
  if (name == "zn-numbers") return suite_zn_numbers();
  if (name == "katetov-counterexamples") return suite_katetov_counterexamples();
  if (name == "onegen") return suite_onegen(seed);
  if (name == "matching") return suite_matching(seed);
  if (name == "pd-isometry") return suite_pd_isometry(seed);
  if (name == "odd-example") return suite_odd_example();
  if (name == "amalgam") return suite_amalgam(seed);
  if (name == "completion-oracle") return suite_completion_oracle(seed);
  if (name == "fraisse") return suite_fraisse(golden_path);
  if (name == "modulus-extension") return suite_modulus_extension(seed);
  if (name == "pv") return suite_pv(seed);
  if (name == "spheres") return suite_spheres(seed);
  fail("usage", "unknown suite '" + name + "'");
}

std::vector<CriterionResult> run_all_suites(std::uint64_t seed, const std::string& golden_path) {
  std::vector<CriterionResult> out;
  for (const std::string& name : suite_names()) out.push_back(run_suite(name, seed, golden_path));
  return out;
}

}  // namespace valg
