#include "valg/stepfn.hpp"

#include <algorithm>
#include <set>

namespace valg {

Elem StepFunction::at(const Rat& t) const {
  if (t < 0) fail("precondition", "step functions live on [0,inf)");
  for (std::size_t j = 0; j < ends.size(); ++j)
    if (t < ends[j]) return vals[j];
  return host.zero();
}

void StepFunction::canonicalize() {
  std::vector<Rat> out_ends;
  std::vector<Elem> out_vals;
  for (std::size_t j = 0; j < ends.size(); ++j) {
    if (!out_ends.empty() && out_vals.back() == vals[j]) {
      out_ends.back() = ends[j];  // merge equal adjacent pieces
    } else {
      out_ends.push_back(ends[j]);
      out_vals.push_back(vals[j]);
    }
  }
  while (!out_vals.empty() && out_vals.back() == host.zero()) {
    out_vals.pop_back();
    out_ends.pop_back();
  }
  ends = std::move(out_ends);
  vals = std::move(out_vals);
}

StepFunction step_zero(const FiniteAbelianGroup& host) { return StepFunction{host, {}, {}}; }

StepFunction step_hat(const FiniteAbelianGroup& host, Elem h) {
  if (h == host.zero()) return step_zero(host);
  return StepFunction{host, {Rat(1)}, {h}};
}

StepFunction step_add(const StepFunction& u, const StepFunction& v) {
  if (u.host != v.host) fail("host-mismatch", "step functions live over different groups");
  std::set<Rat> cuts(u.ends.begin(), u.ends.end());
  cuts.insert(v.ends.begin(), v.ends.end());
  StepFunction out{u.host, {}, {}};
  Rat prev = 0;
  for (const Rat& e : cuts) {
    out.ends.push_back(e);
    out.vals.push_back(u.host.add(u.at(prev), v.at(prev)));
    prev = e;
  }
  out.canonicalize();
  return out;
}

StepFunction step_neg(const StepFunction& u) {
  StepFunction out = u;
  for (Elem& x : out.vals) x = u.host.neg(x);
  return out;
}

StepFunction step_act(const Rat& t, const StepFunction& u) {
  if (t < 0) fail("precondition", "the action is defined for t >= 0");
  if (t == 0) return step_zero(u.host);
  StepFunction out = u;
  for (Rat& e : out.ends) e *= t;
  return out;
}

Rat step_norm(const StepFunction& u, const ValuedGroup& host_value) {
  if (u.host != host_value.group) fail("host-mismatch", "value table over a different group");
  Rat total = 0;
  Rat prev = 0;
  for (std::size_t j = 0; j < u.ends.size(); ++j) {
    total += (u.ends[j] - prev) * host_value.value[u.vals[j]];
    prev = u.ends[j];
  }
  return total;
}

std::vector<std::pair<Rat, Elem>> step_decomposition(const StepFunction& u) {
  std::vector<std::pair<Rat, Elem>> out;
  for (std::size_t j = 0; j < u.ends.size(); ++j) {
    Elem next = j + 1 < u.vals.size() ? u.vals[j + 1] : u.host.zero();
    Elem h = u.host.sub(u.vals[j], next);
    if (h == u.host.zero()) fail("internal", "non-canonical step function");
    out.emplace_back(u.ends[j], h);
  }
  return out;
}

namespace {

// Exact check of f <= g on [0,inf) for piecewise-linear f, g: the difference
// is affine between merged breakpoints, so breakpoint values plus the tail
// slopes decide.
bool pl_leq(const PL& f, const PL& g) {
  std::set<Rat> xs;
  for (const auto& [x, y] : f.points) xs.insert(x);
  for (const auto& [x, y] : g.points) xs.insert(x);
  for (const Rat& x : xs)
    if (f(x) > g(x)) return false;
  return f.tail_slope <= g.tail_slope;
}

struct Affine {
  Rat a, b;  // a + b*x
  Rat operator()(const Rat& x) const { return a + b * x; }
};

Affine cell_coeffs(const PL& pl, const Rat& probe) {
  // Affine coefficients of pl on the cell containing probe (probe interior).
  std::size_t i = 0;
  while (i + 1 < pl.points.size() && pl.points[i + 1].first < probe) ++i;
  if (i + 1 == pl.points.size())
    return Affine{pl.last_y() - pl.tail_slope * pl.last_x(), pl.tail_slope};
  const auto& [x1, y1] = pl.points[i];
  const auto& [x2, y2] = pl.points[i + 1];
  Rat slope = (y2 - y1) / (x2 - x1);
  return Affine{y1 - slope * x1, slope};
}

struct SubmultWitness {
  Rat x, y;
};

// Exact submultiplicativity check kappa(x)kappa(y) <= kappa(x)*kappa(y)...
// H(x,y) = kappa(x)kappa(y) - kappa(xy) is bilinear on each cell of the
// subdivision by x-, y- and xy-breakpoints; interior critical points are
// saddles, straight edges are linear, and hyperbolic edges xy = c reduce to
// a rational quadratic sign test. Requires kappa nondecreasing with
// kappa >= id (NF1/NF3), which makes all unbounded directions monotone.
std::optional<SubmultWitness> submultiplicativity_witness(const PL& kappa) {
  const Rat k0 = kappa(Rat(0));
  if (k0 != 0 && k0 < 1) return SubmultWitness{Rat(0), Rat(0)};  // kappa(0) < kappa(0)^2

  std::set<Rat> bset;
  for (const auto& [x, y] : kappa.points) bset.insert(x);
  bset.insert(kappa.last_x() + 1);
  std::vector<Rat> grid(bset.begin(), bset.end());
  std::vector<Rat> cs;
  for (const Rat& b : grid)
    if (b > 0) cs.push_back(b);

  auto h = [&](const Rat& x, const Rat& y) -> Rat { return kappa(x) * kappa(y) - kappa(x * y); };

  for (const Rat& x : grid)
    for (const Rat& y : grid) {
      if (y < x) continue;
      if (h(x, y) < 0) return SubmultWitness{x, y};
    }
  for (const Rat& c : cs)
    for (const Rat& x : grid)
      if (x > 0 && h(x, c / x) < 0) return SubmultWitness{x, c / x};

  // Hyperbolic edges xy = c, one rational quadratic per linear piece.
  for (const Rat& c : cs) {
    std::set<Rat> exset;
    for (const Rat& b : cs) {
      exset.insert(b);
      exset.insert(c / b);
    }
    std::vector<Rat> exs(exset.begin(), exset.end());
    const Rat kc = kappa(c);
    for (std::size_t s = 0; s <= exs.size(); ++s) {
      Rat lo = s == 0 ? Rat(0) : exs[s - 1];
      bool infinite = s == exs.size();
      Rat hi = infinite ? Rat(0) : exs[s];
      Rat probe = infinite ? Rat(exs.back() + 1) : Rat((lo + hi) / 2);
      if (!infinite && lo == hi) continue;
      Affine fx = cell_coeffs(kappa, probe);
      Affine fy = cell_coeffs(kappa, c / probe);
      // Q(x) = x * H(x, c/x) = A x^2 + B x + C >= 0 required on the piece.
      Rat qa = fx.b * fy.a;
      Rat qb = fx.a * fy.a + fx.b * fy.b * c - kc;
      Rat qc = fx.a * fy.b * c;
      auto q = [&](const Rat& x) -> Rat { return qa * x * x + qb * x + qc; };
      auto witness_at = [&](const Rat& x) { return SubmultWitness{x, c / x}; };
      if (lo > 0 && q(lo) < 0) return witness_at(lo);
      if (!infinite) {
        if (q(hi) < 0) return witness_at(hi);
        if (qa > 0) {
          Rat vx = -qb / (2 * qa);
          if (vx > lo && vx < hi && q(vx) < 0) return witness_at(vx);
        }
        if (qa < 0) {
          // Concave: minimum at the endpoints, already checked (lo=0 end has
          // Q(0) = C = fx.a * fy.b * c with fy the near-zero cell; C < 0 only
          // with a negative coefficient, impossible for nondecreasing kappa).
        }
      } else {
        if (qa < 0) {
          Rat x = probe;
          while (q(x) >= 0) x *= 2;
          return witness_at(x);
        }
        if (qa > 0) {
          Rat vx = -qb / (2 * qa);
          if (vx > lo && q(vx) < 0) return witness_at(vx);
        }
        if (qa == 0 && qb < 0) {
          Rat x = probe;
          while (q(x) >= 0) x *= 2;
          return witness_at(x);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

PL norming_nabla() {
  PL nabla;
  nabla.points = {{Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  nabla.tail_slope = 1;
  return nabla;
}

NormingReport norming_validate(const PL& candidate, const Rat& claimed_lipschitz) {
  NormingReport report;
  auto& out = report.violations;
  if (candidate.points.empty() || candidate.points[0].first != 0) {
    out.push_back("NF: breakpoints must start at x=0");
    return report;
  }
  if (candidate(Rat(1)) != 1) out.push_back("NF1: kappa(1) != 1");
  if (!pl_leq(pl_identity(), candidate)) out.push_back("NF1: kappa(x) < x somewhere");

  bool monotone = candidate.tail_slope >= 0;
  for (std::size_t i = 0; i + 1 < candidate.points.size(); ++i)
    if (candidate.points[i + 1].second < candidate.points[i].second) monotone = false;
  if (!monotone) out.push_back("NF3: not nondecreasing");

  // NF4 against the claimed constant, slopes per segment and the tail.
  if (claimed_lipschitz <= 0) out.push_back("NF4: nonpositive Lipschitz constant");
  Rat max_slope = candidate.tail_slope < 0 ? -candidate.tail_slope : candidate.tail_slope;
  Rat max_slope_at = candidate.last_x();
  for (std::size_t i = 0; i + 1 < candidate.points.size(); ++i) {
    Rat slope = (candidate.points[i + 1].second - candidate.points[i].second) /
                (candidate.points[i + 1].first - candidate.points[i].first);
    if (slope < 0) slope = -slope;
    if (slope > max_slope) {
      max_slope = slope;
      max_slope_at = candidate.points[i + 1].first;
    }
  }
  if (max_slope > claimed_lipschitz)
    out.push_back("NF4: slope " + rat_to_string(max_slope) + " at breakpoint " +
                  rat_to_string(max_slope_at) + " exceeds the constant " +
                  rat_to_string(claimed_lipschitz));

  if (out.empty()) {
    if (auto w = submultiplicativity_witness(candidate))
      out.push_back("NF2: kappa(xy) > kappa(x)kappa(y) at x=" + rat_to_string(w->x) +
                    " y=" + rat_to_string(w->y));
  }

  if (out.empty()) {
    report.zero_at_zero = candidate(Rat(0)) == 0;
    const Rat& lc = claimed_lipschitz;
    if (report.zero_at_zero) {
      PL upper = pl_scale(lc, pl_identity());
      report.classification_verified =
          pl_leq(pl_identity(), candidate) && pl_leq(candidate, upper);
    } else {
      PL nabla = norming_nabla();
      report.classification_verified =
          pl_leq(nabla, candidate) && pl_leq(candidate, pl_scale(lc + 1, nabla));
    }
    if (!report.classification_verified)
      out.push_back("classification: the P-bounds fail for the stored constant");
  }
  return report;
}

NormingFunction make_norming(PL candidate, const Rat& claimed_lipschitz) {
  candidate.normalize();
  NormingReport report = norming_validate(candidate, claimed_lipschitz);
  if (!report.violations.empty()) fail("invalid-norming", report.violations.front());
  return NormingFunction{std::move(candidate), claimed_lipschitz};
}

Rat subnorm_estimate(const StepFunction& u, const ValuedGroup& host_value,
                     const std::vector<Rat>& alphas) {
  Rat best = 0;
  for (const Rat& alpha : alphas) {
    if (alpha < 0) fail("precondition", "sample scalars must be nonnegative");
    Rat denom = alpha > 1 ? alpha : Rat(1);
    Rat cand = step_norm(step_act(alpha, u), host_value) / denom;
    if (cand > best) best = cand;
  }
  return best;
}

KappaNormReport check_kappa_norm(const std::vector<StepFunction>& samples,
                                 const std::vector<Rat>& ts, const NormingFunction& kappa,
                                 const ValuedGroup& host_value,
                                 const std::function<Rat(const StepFunction&)>& norm) {
  auto eval = norm ? norm : std::function<Rat(const StepFunction&)>([&](const StepFunction& u) {
    return step_norm(u, host_value);
  });
  KappaNormReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Rat base = eval(samples[i]);
    for (const Rat& t : ts) {
      if (t < 0) fail("precondition", "sample scalars must be nonnegative");
      Rat lhs = eval(step_act(t, samples[i]));
      Rat rhs = kappa(t) * base;
      if (lhs > rhs) report.violations.push_back({i, t, lhs, rhs});
      if (lhs != t * base) report.homogeneous = false;
    }
  }
  return report;
}

}  // namespace valg
