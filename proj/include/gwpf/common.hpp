#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwpf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Error taxonomy.  input_error: caller handed us bad data.  precondition_error:
// an operation was applied outside its stated domain.  resource_error: a
// configured cap was exceeded.  determination_error: the elimination machinery
// could not isolate a target (reported, never silently papered over).
// internal_error: an invariant of the engine itself failed.
struct gwpf_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct input_error : gwpf_error {
  using gwpf_error::gwpf_error;
};
struct precondition_error : gwpf_error {
  using gwpf_error::gwpf_error;
};
struct resource_error : gwpf_error {
  using gwpf_error::gwpf_error;
};
struct determination_error : gwpf_error {
  using gwpf_error::gwpf_error;
};
struct internal_error : gwpf_error {
  using gwpf_error::gwpf_error;
};

inline Int factorial(long n) {
  if (n < 0) throw input_error("factorial of negative argument");
  Int r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e < 0) {
    if (base == 0) throw input_error("0 to a negative power");
    return 1 / rat_pow(base, -e);
  }
  Rat r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Canonical "p/q" form (q >= 1, gcd-reduced by cpp_rational itself).
inline std::string rat_to_pq(const Rat& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

// Human-friendly: integers without the "/1".
inline std::string rat_to_string(const Rat& r) {
  if (boost::multiprecision::denominator(r) == 1)
    return boost::multiprecision::numerator(r).str();
  return rat_to_pq(r);
}

// Accepts "p", "p/q", optional leading sign.  Throws input_error on junk.
Rat rat_from_string(const std::string& s);

}  // namespace gwpf
