#include "maxcurves/curves.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "maxcurves/semigroup.hpp"

using namespace maxcurves;
using curves::CurveSpec;
using curves::Family;

TEST(MakeSpec, DerivedConstants) {
  CurveSpec s = curves::make_spec(Family::suzuki, 8);
  EXPECT_EQ(s.q0, 2u);
  EXPECT_EQ(s.m, 5u);
  EXPECT_EQ(s.d, 4u);

  CurveSpec h = curves::make_spec(Family::hermitian, 4);
  EXPECT_EQ(h.q0, 2u);
  EXPECT_EQ(h.m, 3u);
  EXPECT_EQ(h.d, 3u);

  CurveSpec r = curves::make_spec(Family::ree, 27);
  EXPECT_EQ(r.q0, 3u);
  EXPECT_EQ(r.m, 19u);
  EXPECT_EQ(r.d, 6u);
}

TEST(MakeSpec, InvalidParametersRejected) {
  EXPECT_THROW(curves::make_spec(Family::hermitian, 8), domain_error);  // not a square
  EXPECT_THROW(curves::make_spec(Family::suzuki, 16), domain_error);    // even exponent
  EXPECT_THROW(curves::make_spec(Family::suzuki, 2), domain_error);     // s = 0
  EXPECT_THROW(curves::make_spec(Family::ree, 9), domain_error);
  EXPECT_THROW(curves::make_spec(Family::suzuki, 27), domain_error);    // wrong characteristic
  EXPECT_THROW(curves::make_spec(Family::hermitian, 6), domain_error);  // not a prime power
}

TEST(MakeSpec, CoverExponentDivisibility) {
  EXPECT_NO_THROW(curves::make_cyclic_cover(Family::suzuki, 8, 65));  // 65 | q^2+1
  EXPECT_NO_THROW(curves::make_cyclic_cover(Family::suzuki, 8, 5));
  EXPECT_THROW(curves::make_cyclic_cover(Family::suzuki, 8, 7), domain_error);
  EXPECT_THROW(curves::make_cyclic_cover(Family::hermitian, 4, 2), domain_error);  // 2 does not divide 9
}

TEST(Genus, BaseClosedForms) {
  EXPECT_EQ(curves::genus(curves::make_spec(Family::hermitian, 4)), 1u);
  EXPECT_EQ(curves::genus(curves::make_spec(Family::suzuki, 8)), 14u);
  EXPECT_EQ(curves::genus(curves::make_spec(Family::ree, 27)), 3627u);
}

TEST(Genus, CoversViaHurwitz) {
  // Suzuki cover agrees with (q^3 - 2q^2 + q)/2
  EXPECT_EQ(curves::genus(curves::make_cyclic_cover(Family::suzuki, 8, 5)), 196u);
  // Hermitian cover: Hurwitz gives 10 (the alternative closed form gives 6)
  EXPECT_EQ(curves::genus(curves::make_cyclic_cover(Family::hermitian, 4, 3)), 10u);
  // Ree cover: Hurwitz gives 246051 (the alternative closed form gives 461539)
  EXPECT_EQ(curves::genus(curves::make_cyclic_cover(Family::ree, 27, 19)), 246051u);
  // Degenerate exponent-1 cover has the genus of the base
  for (auto fam : {Family::hermitian, Family::suzuki, Family::ree}) {
    u64 q = fam == Family::hermitian ? 4 : fam == Family::suzuki ? 8 : 27;
    EXPECT_EQ(curves::genus(curves::make_cyclic_cover(fam, q, 1)), curves::genus(curves::make_spec(fam, q)));
  }
}

TEST(Genus, AuditFlagsOnlyForDiscrepantCovers) {
  EXPECT_TRUE(curves::genus_audit_flags(curves::make_spec(Family::suzuki, 8)).empty());
  EXPECT_TRUE(curves::genus_audit_flags(curves::make_cyclic_cover(Family::suzuki, 8, 5)).empty());
  EXPECT_EQ(curves::genus_audit_flags(curves::make_cyclic_cover(Family::hermitian, 4, 3)).size(), 1u);
  EXPECT_EQ(curves::genus_audit_flags(curves::make_cyclic_cover(Family::ree, 27, 19)).size(), 1u);
}

TEST(HasseWeil, ExpectedBounds) {
  EXPECT_EQ(curves::hasse_weil_expected(curves::make_spec(Family::suzuki, 8), 4), 5889u);
  EXPECT_EQ(curves::hasse_weil_expected(curves::make_cyclic_cover(Family::suzuki, 8, 5), 4), 29185u);
  EXPECT_EQ(curves::hasse_weil_expected(curves::make_cyclic_cover(Family::hermitian, 4, 3), 3), 225u);
  EXPECT_THROW(curves::hasse_weil_expected(curves::make_spec(Family::suzuki, 8), 3), domain_error);
}

TEST(ShortOrbits, KnownSizes) {
  auto h = curves::short_orbit_sizes(curves::make_spec(Family::hermitian, 4));
  EXPECT_EQ(h.rational_orbit, 9u);
  EXPECT_EQ(h.tame_orbit, 24u);
  EXPECT_EQ(h.tame_degree, 3u);

  auto s = curves::short_orbit_sizes(curves::make_spec(Family::suzuki, 8));
  EXPECT_EQ(s.rational_orbit, 65u);
  EXPECT_EQ(s.tame_orbit, 1456u);
  EXPECT_EQ(s.tame_degree, 4u);

  auto r = curves::short_orbit_sizes(curves::make_spec(Family::ree, 27));
  EXPECT_EQ(r.rational_orbit, 19684u);
  EXPECT_EQ(r.tame_orbit, 88363548u);
  EXPECT_EQ(r.tame_degree, 6u);

  EXPECT_THROW(curves::short_orbit_sizes(curves::make_cyclic_cover(Family::suzuki, 8, 5)), usage_error);
}

TEST(Ramification, SuzukiQ8) {
  auto r = curves::ramification_audit(curves::make_spec(Family::suzuki, 8));
  EXPECT_EQ(r.different_exponent, 538u);
  EXPECT_EQ(r.residue, Rat::of(4, 5));
  EXPECT_EQ(r.e_infinity, 448u);
  EXPECT_TRUE(r.balanced);
  EXPECT_EQ(r.two_g_minus_2, 26);
}

TEST(Ramification, ReeQ27) {
  auto r = curves::ramification_audit(curves::make_spec(Family::ree, 27));
  EXPECT_EQ(r.different_exponent, 538693u);
  EXPECT_EQ(r.residue, Rat::of(18, 19));
  EXPECT_TRUE(r.balanced);
  EXPECT_EQ(r.two_g_minus_2, 7252);
}

TEST(Ramification, BalanceHoldsForAllSmallParameters) {
  for (u64 q = 8; q <= 8192; q *= 4) {
    auto r = curves::ramification_audit(curves::make_spec(Family::suzuki, q));
    EXPECT_TRUE(r.balanced) << "suzuki q=" << q;
  }
  for (u64 q = 27; q <= 2187; q *= 9) {
    auto r = curves::ramification_audit(curves::make_spec(Family::ree, q));
    EXPECT_TRUE(r.balanced) << "ree q=" << q;
  }
  EXPECT_THROW(curves::ramification_audit(curves::make_spec(Family::hermitian, 4)), usage_error);
}

TEST(Ramification, FiltrationWeaklyDecreasingAndTameIndexMatchesM) {
  for (auto [fam, q] : {std::pair<Family, u64>{Family::suzuki, 8}, {Family::suzuki, 32}, {Family::ree, 27}}) {
    CurveSpec s = curves::make_spec(fam, q);
    auto r = curves::ramification_audit(s);
    u64 prev = ~u64(0);
    for (auto [size, count] : r.filtration) {
      EXPECT_LE(size, prev);
      EXPECT_GE(count, 1u);
      prev = size;
    }
    // The tame place has ramification index m = residue denominator.
    EXPECT_EQ(static_cast<u64>(r.residue.den), s.m);
  }
}

TEST(PoleOrders, SuzukiCoverQ8) {
  auto t = curves::pole_orders(curves::make_cyclic_cover(Family::suzuki, 8, 5));
  std::map<std::string, u64> got(t.entries.begin(), t.entries.end());
  EXPECT_EQ(got["x"], 40u);
  EXPECT_EQ(got["y"], 50u);
  EXPECT_EQ(got["z"], 60u);
  EXPECT_EQ(got["t"], 64u);
  EXPECT_EQ(got["w"], 65u);
}

TEST(PoleOrders, ReeCoverQ27) {
  auto t = curves::pole_orders(curves::make_cyclic_cover(Family::ree, 27, 19));
  std::map<std::string, u64> got(t.entries.begin(), t.entries.end());
  EXPECT_EQ(got["x"], 13851u);
  EXPECT_EQ(got["w1"], 18468u);
  EXPECT_EQ(got["w2"], 18981u);
  EXPECT_EQ(got["w3"], 19494u);
  EXPECT_EQ(got["w6"], 19665u);
  EXPECT_EQ(got["t"], 19683u);
  EXPECT_EQ(got["w8"], 19684u);
}

TEST(PoleOrders, MaxEntryIsHalfPowerPlusOne) {
  for (u64 q : {8u, 32u, 128u}) {
    auto s = curves::make_cyclic_cover(Family::suzuki, q, curves::make_spec(Family::suzuki, q).m);
    auto t = curves::pole_orders(s);
    u64 mx = 0;
    for (auto& [k, v] : t.entries) mx = std::max(mx, v);
    EXPECT_EQ(mx, q * q + 1);
  }
  EXPECT_THROW(curves::pole_orders(curves::make_cyclic_cover(Family::hermitian, 4, 3)), usage_error);
  EXPECT_THROW(curves::pole_orders(curves::make_spec(Family::suzuki, 8)), usage_error);
}

TEST(Divisibility, CoverDegreeIdentities) {
  // (q^{d/2}+1) = m(q0+1) / m(q+2q0+1) / m(q^2+3qq0+2q+3q0+1)
  for (unsigned k = 2; k <= 13; k += 2) {
    u64 q = ipow(2, k);
    auto s = curves::make_spec(Family::hermitian, q);
    EXPECT_EQ(curves::sqrt_power(s) + 1, s.m * (s.q0 + 1));
  }
  for (unsigned k = 3; k <= 13; k += 2) {
    u64 q = ipow(2, k);
    auto s = curves::make_spec(Family::suzuki, q);
    EXPECT_EQ(curves::sqrt_power(s) + 1, s.m * (q + 2 * s.q0 + 1));
  }
  for (unsigned k = 3; k <= 7; k += 2) {
    u64 q = ipow(3, k);
    auto s = curves::make_spec(Family::ree, q);
    EXPECT_EQ(curves::sqrt_power(s) + 1, s.m * (q * q + 3 * q * s.q0 + 2 * q + 3 * s.q0 + 1));
  }
}

// --- semigroup module ------------------------------------------------------

TEST(Semigroup, ClassicSmallCases) {
  auto s23 = semigroup::semigroup_invariants({2, 3});
  EXPECT_EQ(s23.genus, 1u);
  EXPECT_EQ(s23.frobenius, 1);

  auto s345 = semigroup::semigroup_invariants({3, 4, 5});
  EXPECT_EQ(s345.genus, 2u);
  EXPECT_EQ(s345.frobenius, 2);
  EXPECT_EQ(s345.conductor, 3u);
}

TEST(Semigroup, SuzukiCoverPoleOrdersGiveCurveGenus) {
  auto s = semigroup::semigroup_invariants({40, 50, 60, 64, 65});
  EXPECT_EQ(s.genus, 196u);
}

TEST(Semigroup, RejectsBadInput) {
  EXPECT_THROW(semigroup::semigroup_invariants({}), usage_error);
  EXPECT_THROW(semigroup::semigroup_invariants({4, 6}), domain_error);
  EXPECT_THROW(semigroup::semigroup_invariants({0, 3}), usage_error);
}

TEST(Semigroup, IntervalClosedForm) {
  // <a, a+1, ..., 2a-1> has genus a-1
  for (u64 a = 2; a <= 20; ++a) {
    std::vector<u64> gens;
    for (u64 v = a; v < 2 * a; ++v) gens.push_back(v);
    EXPECT_EQ(semigroup::semigroup_invariants(gens).genus, a - 1) << a;
  }
}

// Independent membership oracle: breadth-first closure up to a limit.
static std::vector<bool> closure_membership(const std::vector<u64>& gens, u64 limit) {
  std::vector<bool> in(limit + 1, false);
  in[0] = true;
  for (u64 n = 1; n <= limit; ++n)
    for (u64 g : gens)
      if (g <= n && in[n - g]) {
        in[n] = true;
        break;
      }
  return in;
}

TEST(Semigroup, DPAgreesWithClosureOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<u64> gens;
    u64 g = 0;
    for (int i = 0; i < 4; ++i) {
      u64 v = 2 + rng() % 48;
      gens.push_back(v);
      g = std::gcd(g, v);
    }
    if (g != 1) continue;
    auto inv = semigroup::semigroup_invariants(gens);
    u64 limit = inv.conductor + 60;
    auto in = closure_membership(gens, limit);
    u64 gaps = 0;
    i64 frob = -1;
    for (u64 n = 1; n <= limit; ++n)
      if (!in[n]) {
        ++gaps;
        frob = static_cast<i64>(n);
      }
    EXPECT_EQ(inv.genus, gaps);
    EXPECT_EQ(inv.frobenius, frob);
  }
}
