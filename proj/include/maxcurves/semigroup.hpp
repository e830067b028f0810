#pragma once

// Numerical semigroup invariants (genus = gap count, Frobenius number,
// conductor) by dynamic programming over a membership bitset. Used to check
// that the pole orders at infinity generate a semigroup of the right genus.

#include <vector>

#include "maxcurves/common.hpp"

namespace maxcurves::semigroup {

struct NumericalSemigroup {
  std::vector<u64> generators;  // sorted, deduplicated
  u64 genus = 0;                // number of gaps
  i64 frobenius = -1;           // largest non-member (-1 when 1 is a generator)
  u64 conductor = 0;            // least c with [c, inf) all members
  u64 dp_limit = 0;             // membership array length actually allocated
  u64 dp_bytes = 0;             // memory used by the membership array
};

/// Compute gap count, Frobenius number, and conductor of the semigroup
/// generated by `gens`. Requires gcd(gens) = 1; the membership DP runs up to
/// min(gens) * max(gens), with early exit once min(gens) consecutive members
/// appear.
inline NumericalSemigroup semigroup_invariants(std::vector<u64> gens) {
  if (gens.empty()) throw usage_error("generator set must be nonempty");
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  if (gens.front() == 0) throw usage_error("generators must be positive");
  u64 g = 0;
  for (u64 v : gens) g = std::gcd(g, v);
  if (g != 1) throw domain_error("gcd of generators exceeds 1; genus is infinite");

  NumericalSemigroup out;
  out.generators = gens;
  const u64 amin = gens.front();
  if (amin == 1) {
    out.genus = 0;
    out.frobenius = -1;
    out.conductor = 0;
    out.dp_limit = 1;
    out.dp_bytes = 1;
    return out;
  }
  // The scan stops once min(gens) consecutive members appear: from there on
  // every integer is reachable by adding the smallest generator. The
  // membership array grows on demand; gcd 1 guarantees termination.
  constexpr u64 kHardCap = u64(1) << 34;  // 2 GiB of bits
  u64 cap = std::min<u64>(checked_add(checked_mul(amin, gens.back()), 1), u64(1) << 22);
  std::vector<bool> member;
  member.reserve(cap);
  member.push_back(true);
  u64 gaps = 0;
  u64 run = 0;  // consecutive members ending at current n
  i64 last_gap = -1;
  for (u64 n = 1;; ++n) {
    if (n >= cap) {
      cap = cap * 2;
      if (cap > kHardCap) throw guardrail_error("semigroup conductor search exceeds memory budget");
    }
    bool m = false;
    for (u64 v : gens) {
      if (v > n) break;
      if (member[n - v]) {
        m = true;
        break;
      }
    }
    member.push_back(m);
    if (m) {
      if (++run == amin) {
        out.dp_limit = n + 1;
        break;
      }
    } else {
      run = 0;
      ++gaps;
      last_gap = static_cast<i64>(n);
    }
  }
  out.genus = gaps;
  out.frobenius = last_gap;
  out.conductor = static_cast<u64>(last_gap + 1);
  out.dp_bytes = (member.size() + 7) / 8;
  return out;
}

}  // namespace maxcurves::semigroup
