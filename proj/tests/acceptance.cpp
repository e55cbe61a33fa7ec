// Runs every verification suite and prints one pass/fail line per criterion.

#include <cstring>
#include <iostream>

#include "valg/suites.hpp"

int main(int argc, char** argv) {
  std::string golden;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--golden") == 0) golden = argv[i + 1];

  bool all_pass = true;
  for (const auto& result : valg::run_all_suites(valg::kDefaultSuiteSeed, golden)) {
    std::cout << (result.pass ? "PASS" : "FAIL") << "  " << result.name << "  ("
              << result.seconds << "s)  " << result.detail << std::endl;
    all_pass = all_pass && result.pass;
  }
  return all_pass ? 0 : 1;
}
