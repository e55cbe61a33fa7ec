#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "valg/common.hpp"

namespace valg {

using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
  if (den == 0) fail("malformed-rational", "zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p/q" or "p" (base 10). Throws on malformed input or zero denominator.
inline Rat rat_from_string(const std::string& text) {
  Rat r;
  if (text.empty() || mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0)
    fail("malformed-rational", "cannot parse '" + text + "'");
  if (r.get_den() == 0) fail("malformed-rational", "zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

// Canonical textual form: "p/q", or "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& value) { return value.get_str(); }

// Extended rationals: nullopt encodes +infinity (used by cost tables).
using ExtRat = std::optional<Rat>;

inline bool ext_less(const ExtRat& a, const ExtRat& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

inline ExtRat ext_add(const ExtRat& a, const ExtRat& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

// Dyadic grid of step 2^-log2_den. 0 is always on the grid.
inline Rat grid_step(int log2_den) {
  Rat r(1, 1l << log2_den);
  r.canonicalize();
  return r;
}

inline bool on_grid(const Rat& x, int log2_den) {
  Rat scaled = x * rat_of(1l << log2_den);
  return scaled.get_den() == 1;
}

inline Rat grid_round_up(const Rat& x, int log2_den) {
  mpz_class scale = mpz_class(1) << log2_den;
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), mpz_class(x.get_num() * scale).get_mpz_t(), x.get_den().get_mpz_t());
  Rat r(q, scale);
  r.canonicalize();
  return r;
}

}  // namespace valg
