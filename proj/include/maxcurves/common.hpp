#pragma once

// Shared error types and exact-integer utilities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxcurves {

inline constexpr const char* kToolName = "maxcurves";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Invalid mathematical input (e.g. a non-square q for the Hermitian family).
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// API misuse (mixed-field operands, unregistered subfield, bad chunk index).
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Refusal to start a computation that exceeds the configured size limits.
struct guardrail_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant; indicates a bug, not bad input.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("u64 addition overflow");
  return r;
}

inline u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("u64 multiplication overflow");
  return r;
}

/// base^exp with overflow detection.
inline u64 ipow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline u64 isqrt(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_perfect_square(u64 n) {
  u64 r = isqrt(n);
  return r * r == n;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Trial-division factorization, as (prime, multiplicity) pairs in ascending order.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      unsigned e = 0;
      while (n % d == 0) n /= d, ++e;
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int mobius(u64 n) {
  int sign = 1;
  for (auto [p, e] : factorize(n)) {
    (void)p;
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t sz = out.size();
    u64 pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline i128 gcd_i128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_string_i128(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 x = neg ? static_cast<u128>(-v) : static_cast<u128>(v);
  std::string s;
  while (x > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

/// Reduced fraction over __int128; enough for the ramification-balance audits.
struct Rat {
  i128 num = 0;
  i128 den = 1;

  static Rat of(i128 n, i128 d) {
    if (d == 0) throw domain_error("rational with zero denominator");
    if (d < 0) n = -n, d = -d;
    i128 g = gcd_i128(n, d);
    if (g > 1) n /= g, d /= g;
    return Rat{n, d};
  }
  static Rat of_int(i128 n) { return Rat{n, 1}; }

  Rat operator+(const Rat& o) const { return of(num * o.den + o.num * den, den * o.den); }
  Rat operator-(const Rat& o) const { return of(num * o.den - o.num * den, den * o.den); }
  Rat operator*(const Rat& o) const { return of(num * o.num, den * o.den); }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }

  bool is_integer() const { return den == 1; }
  std::string str() const {
    return den == 1 ? to_string_i128(num) : to_string_i128(num) + "/" + to_string_i128(den);
  }
};

}  // namespace maxcurves
