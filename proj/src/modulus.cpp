#include "valg/modulus.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "valg/common.hpp"
#include "valg/value.hpp"

namespace valg {

Rat PL::operator()(const Rat& x) const {
  if (x < 0) fail("precondition", "piecewise-linear functions live on [0,inf)");
  std::size_t hi = points.size();
  if (x >= points.back().first)
    return points.back().second + tail_slope * (x - points.back().first);
  std::size_t lo = 0;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (points[mid].first <= x)
      lo = mid;
    else
      hi = mid;
  }
  if (points[lo].first == x) return points[lo].second;
  const auto& [x1, y1] = points[lo];
  const auto& [x2, y2] = points[lo + 1];
  return y1 + (y2 - y1) * (x - x1) / (x2 - x1);
}

Rat PL::sup() const {
  Rat m = points[0].second;
  for (const auto& [x, y] : points)
    if (y > m) m = y;
  return m;
}

void PL::normalize() {
  std::vector<std::pair<Rat, Rat>> out;
  out.push_back(points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    // Slope on [out.back(), points[i]] vs slope continuing after points[i].
    while (out.size() >= 2) {
      const auto& a = out[out.size() - 2];
      const auto& b = out.back();
      const auto& c = points[i];
      if ((b.second - a.second) * (c.first - b.first) == (c.second - b.second) * (b.first - a.first))
        out.pop_back();
      else
        break;
    }
    out.push_back(points[i]);
  }
  // The last interior point is redundant when its incoming slope equals the tail slope.
  while (out.size() >= 2) {
    const auto& a = out[out.size() - 2];
    const auto& b = out.back();
    if (b.second - a.second == tail_slope * (b.first - a.first))
      out.pop_back();
    else
      break;
  }
  points = std::move(out);
}

bool Modulus::zero() const {
  if (pl.tail_slope != 0) return false;
  for (const auto& [x, y] : pl.points)
    if (y != 0) return false;
  return true;
}

PL pl_identity() { return PL{{{Rat(0), Rat(0)}}, Rat(1)}; }

PL pl_constant(const Rat& c) { return PL{{{Rat(0), c}}, Rat(0)}; }

namespace {

std::vector<Rat> merged_xs(const PL& a, const PL& b) {
  std::set<Rat> xs;
  for (const auto& [x, y] : a.points) xs.insert(x);
  for (const auto& [x, y] : b.points) xs.insert(x);
  return {xs.begin(), xs.end()};
}

enum class CombineOp { add, min, max };

PL pl_combine(const PL& a, const PL& b, CombineOp op) {
  std::vector<Rat> xs = merged_xs(a, b);
  if (op != CombineOp::add) {
    // Insert crossing points of the two graphs inside segments and in the tail.
    std::vector<Rat> extra;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      Rat d1 = a(xs[i]) - b(xs[i]);
      Rat d2 = a(xs[i + 1]) - b(xs[i + 1]);
      if ((d1 < 0 && d2 > 0) || (d1 > 0 && d2 < 0)) {
        // Linear on this segment for both: solve d1 + t*(d2-d1) = 0.
        Rat t = d1 / (d1 - d2);
        extra.push_back(xs[i] + t * (xs[i + 1] - xs[i]));
      }
    }
    Rat xl = xs.back();
    Rat diff = a(xl) - b(xl);
    Rat dslope = a.tail_slope - b.tail_slope;
    if (diff != 0 && dslope != 0) {
      Rat cross = xl - diff / dslope;
      if (cross > xl) extra.push_back(cross);
    }
    xs.insert(xs.end(), extra.begin(), extra.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }

  PL out;
  out.points.clear();
  for (const Rat& x : xs) {
    Rat va = a(x), vb = b(x);
    Rat v = op == CombineOp::add ? va + vb : (op == CombineOp::min ? std::min(va, vb) : std::max(va, vb));
    out.points.emplace_back(x, v);
  }
  Rat xl = xs.back();
  switch (op) {
    case CombineOp::add:
      out.tail_slope = a.tail_slope + b.tail_slope;
      break;
    case CombineOp::min:
    case CombineOp::max: {
      // Beyond the last point there are no further crossings, so the winner
      // is decided by the values there and then by the slopes.
      Rat va = a(xl), vb = b(xl);
      bool pick_a;
      if (va != vb)
        pick_a = (op == CombineOp::min) == (va < vb);
      else
        pick_a = (op == CombineOp::min) == (a.tail_slope < b.tail_slope) || a.tail_slope == b.tail_slope;
      out.tail_slope = pick_a ? a.tail_slope : b.tail_slope;
      break;
    }
  }
  out.normalize();
  return out;
}

}  // namespace

PL pl_add(const PL& a, const PL& b) { return pl_combine(a, b, CombineOp::add); }
PL pl_min(const PL& a, const PL& b) { return pl_combine(a, b, CombineOp::min); }
PL pl_max(const PL& a, const PL& b) { return pl_combine(a, b, CombineOp::max); }

PL pl_scale(const Rat& c, const PL& a) {
  if (c < 0) fail("precondition", "scale factor must be nonnegative");
  PL out = a;
  for (auto& [x, y] : out.points) y *= c;
  out.tail_slope *= c;
  out.normalize();
  return out;
}

PL pl_compose(const PL& outer, const PL& inner) {
  std::set<Rat> xs;
  for (const auto& [x, y] : inner.points) xs.insert(x);
  // Points where inner crosses an outer breakpoint level.
  for (const auto& [b, unused] : outer.points) {
    for (std::size_t i = 0; i + 1 < inner.points.size(); ++i) {
      const auto& [x1, y1] = inner.points[i];
      const auto& [x2, y2] = inner.points[i + 1];
      if (y1 == y2) continue;
      Rat lo = std::min(y1, y2), hi = std::max(y1, y2);
      if (b < lo || b > hi) continue;
      xs.insert(x1 + (b - y1) * (x2 - x1) / (y2 - y1));
    }
    if (inner.tail_slope > 0 && b > inner.last_y())
      xs.insert(inner.last_x() + (b - inner.last_y()) / inner.tail_slope);
  }
  PL out;
  out.points.clear();
  for (const Rat& x : xs) out.points.emplace_back(x, outer(inner(x)));
  out.tail_slope = inner.tail_slope == 0 ? Rat(0) : outer.tail_slope * inner.tail_slope;
  out.normalize();
  return out;
}

std::optional<SubadditivityWitness> subadditivity_witness(const PL& pl) {
  // Candidate coordinates: breakpoints and their pairwise differences.
  std::set<Rat> cand;
  for (const auto& [x, y] : pl.points) cand.insert(x);
  std::vector<Rat> b(cand.begin(), cand.end());
  for (const Rat& u : b)
    for (const Rat& v : b)
      if (u > v) cand.insert(u - v);
  std::vector<Rat> xs(cand.begin(), cand.end());

  for (const Rat& x : xs)
    for (const Rat& y : xs) {
      if (y < x) continue;  // defect is symmetric
      if (pl(x + y) > pl(x) + pl(y)) return SubadditivityWitness{x, y};
    }
  // Tail: for y beyond the last breakpoint the defect at (x, y) tends to
  // pl(x) - tail_slope * x, so this must be nonnegative at every breakpoint.
  for (const Rat& x : xs)
    if (pl(x) < pl.tail_slope * x) {
      Rat y = pl.last_x() + 1;
      return SubadditivityWitness{x, y};
    }
  return std::nullopt;
}

std::vector<std::string> validate_modulus_pl(const PL& pl) {
  std::vector<std::string> out;
  if (pl.points.empty() || pl.points[0].first != 0) {
    out.push_back("breakpoints must start at x=0");
    return out;
  }
  if (pl.points[0].second != 0) out.push_back("w(0) != 0");
  for (std::size_t i = 0; i + 1 < pl.points.size(); ++i) {
    if (pl.points[i + 1].first <= pl.points[i].first) {
      out.push_back("breakpoint x-coordinates must increase strictly");
      return out;
    }
    if (pl.points[i + 1].second < pl.points[i].second) out.push_back("not nondecreasing");
  }
  if (pl.tail_slope < 0) out.push_back("negative tail slope");
  if (out.empty()) {
    if (auto w = subadditivity_witness(pl))
      out.push_back("not subadditive at x=" + rat_to_string(w->x) + " y=" + rat_to_string(w->y));
  }
  return out;
}

Modulus make_modulus(PL pl) {
  pl.normalize();
  auto violations = validate_modulus_pl(pl);
  if (!violations.empty()) fail("invalid-modulus", violations.front());
  return Modulus{std::move(pl)};
}

Modulus mod_max(const Modulus& a, const Modulus& b) { return make_modulus(pl_max(a.pl, b.pl)); }
Modulus mod_min(const Modulus& a, const Modulus& b) { return make_modulus(pl_min(a.pl, b.pl)); }
Modulus mod_sum(const Modulus& a, const Modulus& b) { return make_modulus(pl_add(a.pl, b.pl)); }
Modulus mod_compose(const Modulus& outer, const Modulus& inner) {
  return make_modulus(pl_compose(outer.pl, inner.pl));
}

Rat tail_slope(const Modulus& m) { return m.pl.tail_slope; }

OrtTriple build_ort_triple(const Modulus& omega0, const Modulus& rho0, const Modulus& tau0, Cap r) {
  if (omega0.zero() || rho0.zero()) fail("precondition", "omega0 and rho0 must be nonzero moduli");
  OrtTriple t;
  t.omega = mod_max(omega0, tau0);
  t.rho = mod_sum(rho0, Modulus{pl_identity()});
  if (r == Cap::one) {
    t.tau = make_modulus(pl_min(tau0.pl, pl_constant(t.rho(Rat(1)))));
  } else if (t.rho.pl.bounded()) {
    t.tau = make_modulus(pl_min(tau0.pl, pl_constant(t.rho.pl.sup())));
  } else {
    t.tau = tau0;  // rho(inf) = inf; the cap is a no-op
  }
  return t;
}

std::optional<OrtWitness> check_ort(const Modulus& omega, const Modulus& rho, const Modulus& tau,
                                    Cap r) {
  if (r == Cap::one && tau(Rat(1)) > rho(Rat(1))) return OrtWitness{Rat(1), Rat(1), true};

  // G(t,s) = rho(omega(t)+s) - tau(t) - rho(s) is piecewise linear on cells
  // cut by t-breakpoints of tau and omega, s-breakpoints of rho, and the
  // lines omega(t)+s = c over the rho-breakpoints c. Vertices of that
  // subdivision all lie on the candidate grid below.
  std::set<Rat> tset, sset;
  for (const auto& [x, y] : tau.pl.points) tset.insert(x);
  for (const auto& [x, y] : omega.pl.points) tset.insert(x);
  for (const auto& [x, y] : rho.pl.points) sset.insert(x);
  // (c) type vertices: s = b (rho break), omega(t) = c - b.
  std::vector<Rat> rho_breaks(sset.begin(), sset.end());
  for (const Rat& c : rho_breaks)
    for (const Rat& bb : rho_breaks) {
      if (c < bb) continue;
      Rat level = c - bb;
      for (std::size_t i = 0; i + 1 < omega.pl.points.size(); ++i) {
        const auto& [x1, y1] = omega.pl.points[i];
        const auto& [x2, y2] = omega.pl.points[i + 1];
        if (y1 == y2 || level < std::min(y1, y2) || level > std::max(y1, y2)) continue;
        tset.insert(x1 + (level - y1) * (x2 - x1) / (y2 - y1));
      }
      if (omega.pl.tail_slope > 0 && level > omega.pl.last_y())
        tset.insert(omega.pl.last_x() + (level - omega.pl.last_y()) / omega.pl.tail_slope);
    }
  // (b) type vertices: t = a, s = c - omega(a).
  for (const Rat& a : tset)
    for (const Rat& c : rho_breaks) {
      Rat s = c - omega(a);
      if (s >= 0) sset.insert(s);
    }

  // Far cut-offs: beyond tstar/sstar every remaining piece is affine.
  Rat tstar = *tset.rbegin() + 1;
  if (omega.pl.tail_slope > 0) {
    Rat need = rho_breaks.back();
    if (omega(tstar) <= need)
      tstar = omega.pl.last_x() + (need - omega.pl.last_y()) / omega.pl.tail_slope + 1;
  }
  tset.insert(tstar);
  Rat sstar = *sset.rbegin() + 1;
  sset.insert(sstar);

  auto defect = [&](const Rat& t, const Rat& s) -> Rat { return rho(omega(t) + s) - tau(t) - rho(s); };

  for (const Rat& t : tset)
    for (const Rat& s : sset)
      if (defect(t, s) < 0) return OrtWitness{t, s};

  // t-tail: for t >= tstar the defect is affine in t with the slope below
  // (omega(tstar) + s is already past the last rho breakpoint for any s).
  Rat tslope = rho.pl.tail_slope * omega.pl.tail_slope - tau.pl.tail_slope;
  if (tslope < 0) {
    for (const Rat& s : sset) {
      Rat g = defect(tstar, s);
      // g + k * tslope < 0 for large k; produce an explicit witness.
      Rat k = g / (-tslope) + 1;
      return OrtWitness{tstar + k, s};
    }
  }
  // s-tail: for s >= sstar both rho arguments are in the tail, so the defect
  // is constant in s at fixed t; the grid already covers it via sstar.
  return std::nullopt;
}

}  // namespace valg
