#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>

namespace lamqsd {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace lamqsd
