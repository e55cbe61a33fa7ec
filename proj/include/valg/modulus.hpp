#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "valg/rational.hpp"

namespace valg {

enum class Cap;  // defined in value.hpp

// Piecewise-linear function on [0, infinity): breakpoints with strictly
// increasing x starting at x=0, linear interpolation in between, and a linear
// tail of slope tail_slope after the last breakpoint.
struct PL {
  std::vector<std::pair<Rat, Rat>> points{{Rat(0), Rat(0)}};
  Rat tail_slope = 0;

  Rat operator()(const Rat& x) const;
  const Rat& last_x() const { return points.back().first; }
  const Rat& last_y() const { return points.back().second; }
  bool bounded() const { return tail_slope == 0; }
  // Least upper bound when bounded() (max of breakpoint values).
  Rat sup() const;

  void normalize();  // drops interior points that do not change the graph
  bool operator==(const PL& other) const { return points == other.points && tail_slope == other.tail_slope; }
};

PL pl_identity();
PL pl_constant(const Rat& c);
PL pl_add(const PL& a, const PL& b);
PL pl_min(const PL& a, const PL& b);
PL pl_max(const PL& a, const PL& b);
PL pl_compose(const PL& outer, const PL& inner);  // outer(inner(x))
PL pl_scale(const Rat& c, const PL& a);           // c * a(x), c >= 0

// A modulus of continuity: piecewise-linear, nondecreasing, subadditive,
// with value 0 at 0.
struct Modulus {
  PL pl;
  Rat operator()(const Rat& x) const { return pl(x); }
  bool zero() const;  // identically zero
};

struct SubadditivityWitness {
  Rat x, y;  // omega(x+y) > omega(x) + omega(y)
};

// Exact certificate: the defect (x,y) -> w(x)+w(y)-w(x+y) is piecewise linear
// on cells cut by the breakpoints of x, y and x+y, so its minimum is attained
// at a cell vertex; vertices and tail directions are enumerated exhaustively.
std::optional<SubadditivityWitness> subadditivity_witness(const PL& pl);

std::vector<std::string> validate_modulus_pl(const PL& pl);
Modulus make_modulus(PL pl);  // throws on violation

Modulus mod_max(const Modulus& a, const Modulus& b);
Modulus mod_min(const Modulus& a, const Modulus& b);  // re-verified; may reject
Modulus mod_sum(const Modulus& a, const Modulus& b);
Modulus mod_compose(const Modulus& outer, const Modulus& inner);
Rat tail_slope(const Modulus& m);

struct OrtTriple {
  Modulus omega, rho, tau;
};

// omega = omega0 v tau0, rho = rho0 + id, tau = tau0 ^ rho(r) with rho(inf)
// read as the tail limit (no-op when rho is unbounded).
OrtTriple build_ort_triple(const Modulus& omega0, const Modulus& rho0, const Modulus& tau0, Cap r);

struct OrtWitness {
  Rat t, s;  // tau(t) + rho(s) > rho(omega(t) + s), or the cap inequality
  bool cap_case = false;
};

// Exact verification of: tau(t) + rho(s) <= rho(omega(t) + s) for all
// t, s >= 0, and tau(1) <= rho(1) when r = 1.
std::optional<OrtWitness> check_ort(const Modulus& omega, const Modulus& rho, const Modulus& tau,
                                    Cap r);

}  // namespace valg
