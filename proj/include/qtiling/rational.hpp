#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace qt {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Smallest integer >= q.
inline Int rat_ceil(const Rat& q) {
  Int n = numerator(q), d = denominator(q);
  Int quot = n / d;
  if (quot * d < n) ++quot;
  return quot;
}

inline Rat dyadic(int k) {
  Rat r(1);
  r /= (Int(1) << k);
  return r;
}

// Largest 2^-k with k in [0, max_k] satisfying `ok`, scanning from the
// largest value down.  nullopt when nothing qualifies.
template <typename Pred>
std::optional<Rat> largest_dyadic(int max_k, Pred ok) {
  for (int k = 0; k <= max_k; ++k) {
    Rat d = dyadic(k);
    if (ok(d)) return d;
  }
  return std::nullopt;
}

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

}  // namespace qt
