#include "valg/value.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <queue>

namespace valg {

Rat ValuedGroup::diameter() const {
  Rat d = 0;
  for (const Rat& x : value)
    if (x > d) d = x;
  return d;
}

Rat ValuedGroup::min_nonzero() const {
  Rat m = 0;
  bool seen = false;
  for (Elem x = 1; x < group.order(); ++x)
    if (!seen || value[x] < m) {
      m = value[x];
      seen = true;
    }
  return m;
}

std::vector<Elem> Semivalue::zero_set() const {
  std::vector<Elem> z;
  for (Elem x = 0; x < group.order(); ++x)
    if (value[x] == 0) z.push_back(x);
  return z;
}

bool Semivalue::is_value() const {
  for (Elem x = 1; x < group.order(); ++x)
    if (value[x] == 0) return false;
  return true;
}

std::vector<AxiomViolation> validate_value_table(const FiniteAbelianGroup& g,
                                                 const std::vector<Rat>& table, Cap cap,
                                                 std::uint64_t exponent, bool require_v1) {
  std::vector<AxiomViolation> out;
  if (table.size() != g.order()) {
    out.push_back({"total", {}, "value table must cover every element"});
    return out;
  }
  if (table[g.zero()] != 0) out.push_back({"V1", {g.zero()}, "p(0) != 0"});
  for (Elem x = 1; x < g.order(); ++x) {
    if (table[x] < 0) out.push_back({"V1", {x}, "negative value"});
    if (require_v1 && table[x] == 0) out.push_back({"V1", {x}, "p(x) = 0 for x != 0"});
  }
  for (Elem x = 1; x < g.order(); ++x) {
    Elem nx = g.neg(x);
    if (nx > x) continue;
    if (table[x] != table[nx])
      out.push_back({"V2", {nx, x}, "p(-x) != p(x)"});
  }
  // The quadratic triangle scan fans out over rows; witnesses are merged in
  // (x, y) order so the report is schedule-independent.
  const std::int64_t order = static_cast<std::int64_t>(g.order());
  std::vector<std::pair<Elem, Elem>> bad;
#pragma omp parallel
  {
    std::vector<std::pair<Elem, Elem>> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t xi = 0; xi < order; ++xi) {
      if (local.size() > 16) continue;
      Elem x = static_cast<Elem>(xi);
      for (Elem y = x; y < g.order(); ++y)
        if (table[g.add(x, y)] > table[x] + table[y]) {
          local.emplace_back(x, y);
          if (local.size() > 16) break;
        }
    }
#pragma omp critical
    bad.insert(bad.end(), local.begin(), local.end());
  }
  std::sort(bad.begin(), bad.end());
  if (bad.size() > 17) bad.resize(17);
  for (const auto& [x, y] : bad) out.push_back({"V3", {x, y}, "p(x+y) > p(x)+p(y)"});
  if (cap == Cap::one)
    for (Elem x = 0; x < g.order(); ++x)
      if (table[x] > 1) {
        out.push_back({"cap", {x}, "p(x) > 1 with cap 1"});
        break;
      }
  if (exponent != 0 && !g.has_exponent(exponent))
    out.push_back({"exponent", {}, "group does not have the requested exponent"});
  return out;
}

namespace {

[[noreturn]] void fail_violation(const AxiomViolation& v) {
  std::string w = "(";
  for (std::size_t i = 0; i < v.witness.size(); ++i) w += (i ? "," : "") + std::to_string(v.witness[i]);
  w += ")";
  fail("axiom-" + v.axiom, v.detail + " witness " + w);
}

}  // namespace

ValuedGroup make_valued_group(FiniteAbelianGroup g, std::vector<Rat> table, Cap cap,
                              std::uint64_t exponent) {
  auto violations = validate_value_table(g, table, cap, exponent, true);
  if (!violations.empty()) fail_violation(violations.front());
  return ValuedGroup{std::move(g), std::move(table), cap, exponent};
}

Semivalue make_semivalue(FiniteAbelianGroup g, std::vector<Rat> table, Cap cap,
                         std::uint64_t exponent) {
  auto violations = validate_value_table(g, table, cap, exponent, false);
  if (!violations.empty()) fail_violation(violations.front());
  return Semivalue{std::move(g), std::move(table), cap, exponent};
}

ValuedGroup semivalue_to_value(const Semivalue& s) {
  for (Elem x = 1; x < s.group.order(); ++x)
    if (s.value[x] == 0) fail("axiom-V1", "semivalue vanishes off zero at " + std::to_string(x));
  return ValuedGroup{s.group, s.value, s.cap, s.exponent};
}

std::vector<AxiomViolation> validate_cost(const CostFunction& c) {
  std::vector<AxiomViolation> out;
  if (c.cost.size() != c.group.order()) {
    out.push_back({"total", {}, "cost table must cover every element"});
    return out;
  }
  if (!c.cost[0] || *c.cost[0] != 0) out.push_back({"cost-zero", {0}, "cost(0) != 0"});
  for (Elem x = 1; x < c.group.order(); ++x) {
    Elem nx = c.group.neg(x);
    if (nx > x) continue;
    if (c.cost[x].has_value() != c.cost[nx].has_value() ||
        (c.cost[x] && *c.cost[x] != *c.cost[nx]))
      out.push_back({"cost-symmetry", {nx, x}, "cost(-x) != cost(x)"});
    if (c.cost[x] && *c.cost[x] < 0) out.push_back({"cost-sign", {x}, "negative cost"});
  }
  return out;
}

namespace {

CompletionResult complete_cost_serial(const CostFunction& c) {
  const FiniteAbelianGroup& g = c.group;
  const std::uint64_t n = g.order();
  std::vector<std::pair<Elem, Rat>> atoms;
  for (Elem a = 1; a < n; ++a)
    if (c.cost[a]) atoms.emplace_back(a, *c.cost[a]);

  std::vector<ExtRat> dist(n);
  dist[0] = Rat(0);
  using Node = std::pair<Rat, Elem>;
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> queue;
  queue.emplace(Rat(0), g.zero());
  while (!queue.empty()) {
    auto [d, x] = queue.top();
    queue.pop();
    if (!dist[x] || d > *dist[x]) continue;
    for (const auto& [a, ca] : atoms) {
      Elem y = g.add(x, a);
      Rat nd = d + ca;
      if (!dist[y] || nd < *dist[y]) {
        dist[y] = nd;
        queue.emplace(std::move(nd), y);
      }
    }
  }
  CompletionResult out{std::move(dist), {}};
  for (Elem x = 0; x < n; ++x)
    if (!out.value[x]) out.unreachable.push_back(x);
  return out;
}

CompletionResult complete_cost_parallel(const CostFunction& c) {
  const FiniteAbelianGroup& g = c.group;
  const std::int64_t n = static_cast<std::int64_t>(g.order());
  std::vector<std::pair<Elem, Rat>> atoms;
  for (Elem a = 1; a < g.order(); ++a)
    if (c.cost[a]) atoms.emplace_back(a, *c.cost[a]);

  // Jacobi label correction: round t holds the best cost over decompositions
  // of length <= t+1; reads go to the previous round's table only, so the
  // result is independent of the thread schedule. Sources whose label did not
  // improve last round cannot improve anyone this round and are skipped.
  std::vector<ExtRat> dist = c.cost;
  dist[0] = Rat(0);
  std::vector<ExtRat> next(dist.size());
  std::vector<char> touched(dist.size(), 1), touched_next(dist.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
#pragma omp parallel for schedule(static) reduction(|| : changed)
    for (std::int64_t xi = 0; xi < n; ++xi) {
      Elem x = static_cast<Elem>(xi);
      ExtRat best = dist[x];
      for (const auto& [a, ca] : atoms) {
        Elem y = g.sub(x, a);
        if (!touched[y]) continue;
        const ExtRat& base = dist[y];
        if (!base) continue;
        if (!best || *base + ca < *best) best = *base + ca;
      }
      if (ext_less(best, dist[x])) {
        next[x] = std::move(best);
        touched_next[x] = 1;
        changed = true;
      } else {
        next[x] = dist[x];
        touched_next[x] = 0;
      }
    }
    std::swap(dist, next);
    std::swap(touched, touched_next);
  }
  CompletionResult out{std::move(dist), {}};
  for (Elem x = 0; x < g.order(); ++x)
    if (!out.value[x]) out.unreachable.push_back(x);
  return out;
}

}  // namespace

CompletionResult complete_cost(const CostFunction& c, Exec exec) {
  auto violations = validate_cost(c);
  if (!violations.empty()) fail_violation(violations.front());
  return exec == Exec::serial ? complete_cost_serial(c) : complete_cost_parallel(c);
}

Semivalue complete_cost_semivalue(const CostFunction& c, Cap cap, std::uint64_t exponent, Exec exec) {
  CompletionResult r = complete_cost(c, exec);
  if (!r.unreachable.empty())
    fail("unreachable-elements", std::to_string(r.unreachable.size()) +
                                     " elements outside the subgroup generated by the support");
  std::vector<Rat> table(r.value.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = *r.value[i];
  return make_semivalue(c.group, std::move(table), cap, exponent);
}

PushedValue push_value(const Semivalue& s, const GroupHom& pi) {
  if (pi.source != s.group) fail("malformed-hom", "projection source mismatch");
  const std::uint64_t m = pi.target.order();
  std::vector<ExtRat> best(m);
  for (Elem x = 0; x < s.group.order(); ++x) {
    Elem y = pi.table[x];
    if (!best[y] || s.value[x] < *best[y]) best[y] = s.value[x];
  }
  std::vector<Rat> table(m);
  for (Elem y = 0; y < m; ++y) {
    if (!best[y]) fail("non-surjective", "projection misses element " + std::to_string(y));
    table[y] = *best[y];
  }
  Semivalue out = make_semivalue(pi.target, std::move(table), s.cap, s.exponent);
  bool is_value = out.is_value();
  return PushedValue{std::move(out), is_value};
}

ValuedGroup cap_value(const ValuedGroup& v, Cap r) {
  if (r == Cap::infinite) return v;
  ValuedGroup out = cap_value_at(v, Rat(1));
  out.cap = Cap::one;
  return out;
}

ValuedGroup cap_value_at(const ValuedGroup& v, const Rat& bound) {
  if (bound <= 0) fail("precondition", "cap bound must be positive");
  ValuedGroup out = v;
  for (auto& x : out.value)
    if (x > bound) x = bound;
  return out;
}

Semivalue cap_semivalue_at(const Semivalue& v, const Rat& bound) {
  if (bound <= 0) fail("precondition", "cap bound must be positive");
  Semivalue out = v;
  for (auto& x : out.value)
    if (x > bound) x = bound;
  return out;
}

bool hom_is_isometric(const GroupHom& f, const std::vector<Rat>& source_value,
                      const std::vector<Rat>& target_value) {
  for (Elem x = 0; x < f.table.size(); ++x)
    if (source_value[x] != target_value[f.table[x]]) return false;
  return true;
}

namespace {

// Backtracking search for a value-preserving homomorphism h -> g subject to
// forced images on a subgroup. Basis images are assigned from the least
// significant factor upward so that the defined part of the table is always
// the contiguous rank prefix [0, block).
std::vector<std::vector<Elem>> basis_candidates(const ValuedGroup& h, const ValuedGroup& g,
                                                const TargetIndex* index) {
  const std::size_t rank = h.group.num_factors();
  std::vector<std::vector<Elem>> candidates(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const Rat& want = h.value[h.group.basis(i)];
    if (index) {
      auto it = index->by_value.find(want);
      if (it == index->by_value.end()) continue;
      for (Elem y : it->second)
        if (h.group.factors()[i] % index->order_of[y] == 0) candidates[i].push_back(y);
    } else {
      for (Elem y = 0; y < g.group.order(); ++y)
        if (h.group.factors()[i] % g.group.element_order(y) == 0 && g.value[y] == want)
          candidates[i].push_back(y);
    }
  }
  return candidates;
}

struct IsoSearch {
  const ValuedGroup& h;
  const ValuedGroup& g;
  const std::vector<std::pair<Elem, Elem>>& forced;  // (h element, g element), h-ranks ascending
  const std::vector<std::vector<Elem>>& candidates;  // per factor index
  std::vector<Elem> img;                             // partial table

  IsoSearch(const ValuedGroup& h_, const ValuedGroup& g_,
            const std::vector<std::pair<Elem, Elem>>& forced_,
            const std::vector<std::vector<Elem>>& candidates_)
      : h(h_), g(g_), forced(forced_), candidates(candidates_) {
    img.assign(h.group.order(), g.group.zero());
  }

  // Extends the table over the new slice [block, block*n) given the image of
  // basis(i); verifies values and forced pairs on the slice.
  bool extend_slice(std::size_t i, Elem image, std::uint64_t block) {
    std::uint64_t n = h.group.factors()[i];
    Elem step = image;
    std::size_t forced_lo =
        std::lower_bound(forced.begin(), forced.end(), std::make_pair(block, Elem(0))) -
        forced.begin();
    std::size_t forced_hi =
        std::lower_bound(forced.begin(), forced.end(), std::make_pair(block * n, Elem(0))) -
        forced.begin();
    for (std::uint64_t j = 1; j < n; ++j) {
      for (Elem r = 0; r < block; ++r) {
        Elem x = j * block + r;
        Elem y = g.group.add(step, img[r]);
        if (h.value[x] != g.value[y]) return false;
        img[x] = y;
      }
      step = g.group.add(step, image);
    }
    for (std::size_t t = forced_lo; t < forced_hi; ++t)
      if (img[forced[t].first] != forced[t].second) return false;
    return true;
  }

  // A forced pair with a +-1 coefficient at this level determines the image
  // outright; returns false when two pins conflict.
  bool pin_for_level(std::size_t i, std::uint64_t block, Elem* pinned, bool* has_pin) const {
    std::uint64_t n = h.group.factors()[i];
    auto lo = std::lower_bound(forced.begin(), forced.end(), std::make_pair(block, Elem(0)));
    auto hi = std::lower_bound(forced.begin(), forced.end(), std::make_pair(block * n, Elem(0)));
    for (auto it = lo; it != hi; ++it) {
      std::uint64_t c = it->first / block;
      Elem suffix = img[it->first % block];
      Elem want;
      if (c == 1)
        want = g.group.sub(it->second, suffix);
      else if (c == n - 1)
        want = g.group.sub(suffix, it->second);
      else
        continue;
      if (*has_pin && *pinned != want) return false;
      *pinned = want;
      *has_pin = true;
    }
    return true;
  }

  bool run(std::size_t i, std::uint64_t block) {
    if (i == static_cast<std::size_t>(-1)) return true;
    Elem pinned = 0;
    bool has_pin = false;
    if (!pin_for_level(i, block, &pinned, &has_pin)) return false;
    if (has_pin) {
      if (h.group.factors()[i] % g.group.element_order(pinned) != 0) return false;
      if (!extend_slice(i, pinned, block)) return false;
      return run(i - 1, block * h.group.factors()[i]);
    }
    for (Elem y : candidates[i]) {
      if (extend_slice(i, y, block)) {
        if (run(i - 1, block * h.group.factors()[i])) return true;
      }
    }
    return false;
  }

  std::optional<GroupHom> search() {
    for (const auto& [hx, gx] : forced)
      if (hx == h.group.zero() && gx != g.group.zero()) return std::nullopt;
    const std::size_t rank = h.group.num_factors();
    if (rank == 0) return GroupHom{h.group, g.group, {g.group.zero()}};
    if (run(rank - 1, 1)) return GroupHom{h.group, g.group, img};
    return std::nullopt;
  }
};

std::vector<std::pair<Elem, Elem>> forced_pairs(const Subgroup& k,
                                                const std::vector<Elem>& phi_images) {
  std::vector<std::pair<Elem, Elem>> forced(k.elements.size());
  for (std::size_t i = 0; i < k.elements.size(); ++i) forced[i] = {k.elements[i], phi_images[i]};
  std::sort(forced.begin(), forced.end());
  return forced;
}

bool value_histograms_match(const ValuedGroup& a, const ValuedGroup& b) {
  std::map<std::pair<std::uint64_t, Rat>, std::int64_t> hist;
  for (Elem x = 0; x < a.group.order(); ++x) ++hist[{a.group.element_order(x), a.value[x]}];
  for (Elem x = 0; x < b.group.order(); ++x) --hist[{b.group.element_order(x), b.value[x]}];
  for (const auto& [key, count] : hist)
    if (count != 0) return false;
  return true;
}

}  // namespace

TargetIndex build_target_index(const ValuedGroup& g) {
  TargetIndex index;
  index.order_of.resize(g.group.order());
  for (Elem y = 0; y < g.group.order(); ++y) {
    index.order_of[y] = g.group.element_order(y);
    index.by_value[g.value[y]].push_back(y);
  }
  return index;
}

std::optional<GroupHom> isometric_isomorphic(const ValuedGroup& a, const ValuedGroup& b) {
  if (a.group.order() != b.group.order()) return std::nullopt;
  if (!value_histograms_match(a, b)) return std::nullopt;
  static const std::vector<std::pair<Elem, Elem>> kNoForced;
  auto candidates = basis_candidates(a, b, nullptr);
  return IsoSearch(a, b, kNoForced, candidates).search();
}

std::optional<GroupHom> isometric_embedding(const ValuedGroup& a, const ValuedGroup& b) {
  static const std::vector<std::pair<Elem, Elem>> kNoForced;
  auto candidates = basis_candidates(a, b, nullptr);
  return IsoSearch(a, b, kNoForced, candidates).search();
}

std::optional<GroupHom> isometric_extension(const ValuedGroup& h, const Subgroup& k,
                                            const std::vector<Elem>& phi_images,
                                            const ValuedGroup& g, Exec exec,
                                            const TargetIndex* index) {
  if (k.parent != h.group) fail("invalid-subgroup", "subgroup not inside the extension source");
  if (phi_images.size() != k.elements.size()) fail("malformed-hom", "one image per subgroup element");
  auto forced = forced_pairs(k, phi_images);
  auto candidates = basis_candidates(h, g, index);

  if (exec == Exec::serial || h.group.num_factors() == 0)
    return IsoSearch(h, g, forced, candidates).search();

  // Parallel over the first assigned basis image; the surviving witness is
  // the one with the smallest candidate index, matching the serial order.
  const std::size_t last = h.group.num_factors() - 1;
  const auto& first_candidates = candidates[last];
  const std::int64_t m = static_cast<std::int64_t>(first_candidates.size());
  std::vector<std::optional<GroupHom>> results(m);
  std::atomic<std::int64_t> best{m};
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t idx = 0; idx < m; ++idx) {
    if (idx > best.load()) continue;
    IsoSearch local(h, g, forced, candidates);
    if (!local.extend_slice(last, first_candidates[idx], 1)) continue;
    if (last == 0 || local.run(last - 1, h.group.factors()[last])) {
      results[idx] = GroupHom{h.group, g.group, local.img};
      std::int64_t cur = best.load();
      while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
      }
    }
  }
  std::int64_t found = best.load();
  if (found < m) return results[found];
  return std::nullopt;
}

std::vector<Rat> canonical_value_table(const ValuedGroup& v) {
  auto auts = automorphism_tables(v.group);
  std::vector<Rat> best = v.value;
  std::vector<Rat> candidate(v.value.size());
  for (const auto& sigma : auts) {
    for (Elem x = 0; x < v.group.order(); ++x) candidate[x] = v.value[sigma[x]];
    if (std::lexicographical_compare(candidate.begin(), candidate.end(), best.begin(), best.end()))
      std::swap(best, candidate);
  }
  return best;
}

}  // namespace valg
