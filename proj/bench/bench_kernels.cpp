// Timing comparison of the OpenMP kernels against their serial references.
// Results are checked for equality while timing, so a run doubles as a smoke
// test of kernel agreement on larger instances than the unit tests use.

#include <omp.h>

#include <chrono>
#include <iostream>

#include "valg/amalgam.hpp"
#include "valg/free_group.hpp"
#include "valg/gen.hpp"
#include "valg/katetov.hpp"

namespace {

using valg::Exec;

template <typename F>
double time_best(F&& f, int repeats = 3) {
  double best = 0;
  for (int i = 0; i < repeats; ++i) {
    auto start = std::chrono::steady_clock::now();
    f();
    double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (i == 0 || t < best) best = t;
  }
  return best;
}

void report(const std::string& name, double serial, double parallel, bool equal) {
  std::cout << name << ": serial " << serial << "s, parallel " << parallel << "s, speedup "
            << (parallel > 0 ? serial / parallel : 0) << (equal ? "" : "  [MISMATCH]") << "\n";
}

}  // namespace

int main() {
  std::cout << "threads: " << omp_get_max_threads() << "\n";
  valg::Rng rng(0x42);

  {
    // Metric completion on the diagonal word-metric instance over Z_5^5.
    valg::FiniteAbelianGroup g(std::vector<std::uint64_t>(5, 5));
    valg::CostFunction cost{g, std::vector<valg::ExtRat>(g.order())};
    cost.cost[0] = valg::Rat(0);
    for (std::size_t a = 0; a < 5; ++a) {
      cost.cost[g.basis(a)] = valg::Rat(1);
      cost.cost[g.neg(g.basis(a))] = valg::Rat(1);
      for (std::size_t b = 0; b < 5; ++b)
        if (a != b) cost.cost[g.sub(g.basis(a), g.basis(b))] = valg::Rat(1);
    }
    valg::CompletionResult rs, rp;
    double ts = time_best([&] { rs = valg::complete_cost(cost, Exec::serial); });
    double tp = time_best([&] { rp = valg::complete_cost(cost, Exec::parallel); });
    report("complete_cost (Z_5^5 word metric, 3125 elements)", ts, tp, rs.value == rp.value);
  }

  {
    // Dense random completion.
    valg::FiniteAbelianGroup g({4, 4, 4, 4});
    valg::CostFunction cost = valg::random_cost(rng, g, 3, false);
    valg::CompletionResult rs, rp;
    double ts = time_best([&] { rs = valg::complete_cost(cost, Exec::serial); });
    double tp = time_best([&] { rp = valg::complete_cost(cost, Exec::parallel); });
    report("complete_cost (dense cost on Z_4^4, 256 elements)", ts, tp, rs.value == rp.value);
  }

  {
    // Admissibility tuple scan on a larger domain.
    valg::FiniteAbelianGroup g(std::vector<std::uint64_t>(4, 4));
    valg::ValuedGroup v = valg::random_grid_value(rng, g, 3, valg::Cap::infinite, 4);
    valg::KatetovMap f = valg::random_katetov(rng, v, 12, 3, valg::Cap::infinite);
    std::optional<valg::AdmissibilityWitness> ws, wp;
    double ts = time_best([&] { ws = valg::admissibility_violation(v, f, 4, Exec::serial); });
    double tp = time_best([&] { wp = valg::admissibility_violation(v, f, 4, Exec::parallel); });
    bool equal = ws.has_value() == wp.has_value() && (!ws || ws->tuple == wp->tuple);
    report("admissibility scan (12-point domain, N=4)", ts, tp, equal);
  }

  {
    // Amalgam fiber minimization on a 4096-element product.
    valg::FiniteAbelianGroup g1({2, 2, 2, 2, 2, 2, 2});
    valg::ValuedGroup d1 = valg::random_grid_value(rng, g1, 3, valg::Cap::one, 2);
    valg::Subgroup k = valg::subgroup_generated(g1, {g1.basis(0), g1.basis(1)});
    valg::AbstractSubgroup ab = valg::abstract_subgroup(k);
    std::vector<valg::Rat> pulled(ab.group.order());
    for (valg::Elem b = 0; b < ab.group.order(); ++b) pulled[b] = d1.value[ab.from_abstract[b]];
    valg::ValuedGroup d0{ab.group, pulled, valg::Cap::one, 2};
    valg::GroupHom phi{ab.group, g1, ab.from_abstract};
    valg::AmalgamResult rs = valg::amalgamate(d0, d1, d1, phi, phi, Exec::serial, false);
    double ts =
        time_best([&] { rs = valg::amalgamate(d0, d1, d1, phi, phi, Exec::serial, false); });
    valg::AmalgamResult rp = rs;
    double tp =
        time_best([&] { rp = valg::amalgamate(d0, d1, d1, phi, phi, Exec::parallel, false); });
    report("amalgamate (|D1 x D2| = 16384)", ts, tp, rs.result.value == rp.result.value);
  }

  {
    // Modulus-dominated extension: one piecewise-linear evaluation per
    // (element, subgroup element) pair.
    valg::FiniteAbelianGroup g(std::vector<std::uint64_t>(12, 2));
    valg::ValuedGroup d = valg::random_grid_value(rng, g, 3, valg::Cap::infinite, 2);
    std::vector<valg::Elem> gens;
    for (std::size_t i = 0; i < 6; ++i) gens.push_back(g.basis(i));
    valg::Subgroup d0 = valg::subgroup_generated(g, gens);
    valg::Modulus omega = valg::random_concave_modulus(rng, 3, 3);
    std::vector<valg::Rat> lambda0(d0.elements.size());
    for (std::size_t t = 0; t < d0.elements.size(); ++t)
      lambda0[t] = omega(d.value[d0.elements[t]]);
    valg::ModulusExtensionResult rs =
        valg::extend_semivalue_modulus(d, d0, lambda0, omega, std::nullopt, Exec::serial);
    double ts = time_best([&] {
      rs = valg::extend_semivalue_modulus(d, d0, lambda0, omega, std::nullopt, Exec::serial);
    });
    valg::ModulusExtensionResult rp = rs;
    double tp = time_best([&] {
      rp = valg::extend_semivalue_modulus(d, d0, lambda0, omega, std::nullopt, Exec::parallel);
    });
    report("modulus extension (4096 elements x 64 subgroup terms)", ts, tp,
           rs.result.value == rp.result.value);
  }

  return 0;
}
