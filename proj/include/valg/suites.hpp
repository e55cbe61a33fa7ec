#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "valg/common.hpp"

namespace valg {

inline constexpr std::uint64_t kDefaultSuiteSeed = 0x76616c67u;

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// The named verification suites; each checks one acceptance-grade property
// family end to end and reports pass/fail with a short summary.
CriterionResult suite_zn_numbers();
CriterionResult suite_katetov_counterexamples();
CriterionResult suite_onegen(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_matching(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_pd_isometry(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_odd_example();
CriterionResult suite_amalgam(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_completion_oracle(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_fraisse(const std::string& golden_path = "");
CriterionResult suite_modulus_extension(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_pv(std::uint64_t seed = kDefaultSuiteSeed);
CriterionResult suite_spheres(std::uint64_t seed = kDefaultSuiteSeed);

std::vector<std::string> suite_names();
CriterionResult run_suite(const std::string& name, std::uint64_t seed = kDefaultSuiteSeed,
                          const std::string& golden_path = "");
std::vector<CriterionResult> run_all_suites(std::uint64_t seed = kDefaultSuiteSeed,
                                            const std::string& golden_path = "");

}  // namespace valg
