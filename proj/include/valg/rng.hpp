#pragma once

#include <cstdint>

namespace valg {

// SplitMix64: deterministic, cheap to split into independent child streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  // Independent stream for the index-th sub-task.
  Rng child(std::uint64_t index) const {
    Rng fork(state_ ^ (0xd1342543de82ef95ull * (index + 1)));
    fork.next();
    return fork;
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

}  // namespace valg
