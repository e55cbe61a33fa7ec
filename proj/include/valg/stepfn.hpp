#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "valg/modulus.hpp"
#include "valg/value.hpp"

namespace valg {

// A right-open step function [0,inf) -> H with rational breakpoints and
// finite support: value vals[j] on [ends[j-1], ends[j]) (ends[-1] = 0) and 0
// from ends.back() on. Canonical form: ends strictly increasing and positive,
// adjacent values distinct, no trailing zero piece. The zero function has no
// pieces.
struct StepFunction {
  FiniteAbelianGroup host;
  std::vector<Rat> ends;
  std::vector<Elem> vals;

  bool zero() const { return ends.empty(); }
  Elem at(const Rat& t) const;
  void canonicalize();
  bool operator==(const StepFunction& other) const {
    return host == other.host && ends == other.ends && vals == other.vals;
  }
};

StepFunction step_zero(const FiniteAbelianGroup& host);
StepFunction step_hat(const FiniteAbelianGroup& host, Elem h);  // h on [0,1)
StepFunction step_add(const StepFunction& u, const StepFunction& v);
StepFunction step_neg(const StepFunction& u);
StepFunction step_act(const Rat& t, const StepFunction& u);  // (t*u)(s) = u(s/t); 0*u = 0

// ||u||_q = integral of q(u(t)) dt, an exact finite sum.
Rat step_norm(const StepFunction& u, const ValuedGroup& host_value);

// The unique decomposition u = sum_j t_j * hat(h_j) with t strictly
// increasing and h_j nonzero.
std::vector<std::pair<Rat, Elem>> step_decomposition(const StepFunction& u);

// A norming function: kappa(1)=1, kappa >= id, submultiplicative,
// nondecreasing, Lipschitz with the stored constant.
struct NormingFunction {
  PL pl;
  Rat lipschitz;
  Rat operator()(const Rat& x) const { return pl(x); }
};

struct NormingReport {
  std::vector<std::string> violations;  // empty when valid
  bool zero_at_zero = false;            // kappa(0) == 0 (the norm-like case)
  // (P1)/(P2) classification bounds, verified exactly when valid:
  // zero_at_zero: id <= kappa <= L*id; otherwise max(id,1) <= kappa <= (L+1)*max(id,1).
  bool classification_verified = false;
};

NormingReport norming_validate(const PL& candidate, const Rat& claimed_lipschitz);
NormingFunction make_norming(PL candidate, const Rat& claimed_lipschitz);

PL norming_nabla();  // max(id, 1)

// Checks ||t*u|| <= kappa(t) ||u|| over a sample grid; norm defaults to
// ||.||_q. Also reports whether exact homogeneity ||t*u|| = t ||u|| held.
struct KappaNormReport {
  struct Violation {
    std::size_t sample;
    Rat t, lhs, rhs;
  };
  std::vector<Violation> violations;
  bool homogeneous = true;
};
KappaNormReport check_kappa_norm(const std::vector<StepFunction>& samples,
                                 const std::vector<Rat>& ts, const NormingFunction& kappa,
                                 const ValuedGroup& host_value,
                                 const std::function<Rat(const StepFunction&)>& norm = {});

// Lower estimate of sup over alpha >= 0 of ||alpha * u|| / max(alpha, 1),
// sampled over the given grid (the full supremum is not finitely computable
// for arbitrary inputs).
Rat subnorm_estimate(const StepFunction& u, const ValuedGroup& host_value,
                     const std::vector<Rat>& alphas);

}  // namespace valg
