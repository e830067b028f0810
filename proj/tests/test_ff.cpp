#include "maxcurves/ff.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace maxcurves;
using ff::Element;
using ff::Field;

TEST(FindIrreducible, SmallestDegreesAreKnown) {
  // (2,1) -> T, i.e. no low coefficients beyond c0 = 0
  EXPECT_EQ(ff::find_irreducible(2, 1), (std::vector<u8>{0}));
  // (2,2) -> T^2 + T + 1, the unique irreducible quadratic over F_2
  EXPECT_EQ(ff::find_irreducible(2, 2), (std::vector<u8>{1, 1}));
  // (2,3) -> T^3 + T + 1
  EXPECT_EQ(ff::find_irreducible(2, 3), (std::vector<u8>{1, 1, 0}));
  // (2,4) -> T^4 + T + 1
  EXPECT_EQ(ff::find_irreducible(2, 4), (std::vector<u8>{1, 1, 0, 0}));
}

TEST(FindIrreducible, LexLeastQuadraticOverF3) {
  // Independent oracle: scan the 9 monic quadratics over F_3 in lex order
  // (c1, c0) and accept the first without a root in F_3. Degree 2 means
  // root-free is equivalent to irreducible.
  std::vector<u8> expected;
  for (unsigned c1 = 0; c1 < 3 && expected.empty(); ++c1) {
    for (unsigned c0 = 0; c0 < 3 && expected.empty(); ++c0) {
      bool has_root = false;
      for (unsigned t = 0; t < 3; ++t)
        if ((t * t + c1 * t + c0) % 3 == 0) has_root = true;
      if (!has_root) expected = {static_cast<u8>(c0), static_cast<u8>(c1)};
    }
  }
  EXPECT_EQ(expected, (std::vector<u8>{1, 0}));  // T^2 + 1
  EXPECT_EQ(ff::find_irreducible(3, 2), expected);
}

TEST(FieldArithmetic, F4MultiplicationAndInverse) {
  Field f4(2, 2);  // F_2[T]/(T^2+T+1)
  Element t = f4.from_coeffs({0, 1});
  Element t1 = f4.from_coeffs({1, 1});
  EXPECT_EQ(t * t1, f4.one());
  EXPECT_EQ(f4.inv(t), t1);
  EXPECT_THROW(f4.inv(f4.zero()), domain_error);
}

TEST(FieldArithmetic, MixedFieldOperandsRejected) {
  Field a(2, 2), b(2, 3);
  EXPECT_THROW(a.add(a.one(), b.one()), usage_error);
  EXPECT_THROW((void)(a.one() == b.one()), usage_error);
}

TEST(FieldArithmetic, FrobeniusFixesFullFieldSampled) {
  Field f(2, 12);
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 50; ++i) {
    Element a = f.element_at(rng() % f.order());
    EXPECT_EQ(f.pow(a, f.order()), a);
  }
}

// Field axioms, exhaustive on small fields.
static void check_axioms_exhaustive(const Field& f) {
  const u64 q = f.order();
  for (u64 i = 0; i < q; ++i) {
    Element a = f.element_at(i);
    EXPECT_EQ(f.add(a, f.zero()), a);
    EXPECT_EQ(f.mul(a, f.one()), a);
    EXPECT_EQ(f.add(a, f.neg(a)), f.zero());
    if (!a.is_zero()) {
      EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
      EXPECT_EQ(f.pow(a, q - 1), f.one());
    }
  }
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    Element a = f.element_at(rng() % q);
    Element b = f.element_at(rng() % q);
    Element c = f.element_at(rng() % q);
    EXPECT_EQ(f.mul(a, b), f.mul(b, a));
    EXPECT_EQ(f.add(a, b), f.add(b, a));
    EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
  }
}

TEST(FieldAxioms, ExhaustiveSmallFields) {
  check_axioms_exhaustive(Field(2, 8));
  check_axioms_exhaustive(Field(3, 5));
  check_axioms_exhaustive(Field(5, 3));
}

TEST(FieldAxioms, SampledLargeFields) {
  Field f2(2, 20);
  Field f3(3, 18);
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    for (const Field* f : {&f2, &f3}) {
      Element a = f->element_at(rng() % f->order());
      Element b = f->element_at(rng() % f->order());
      Element c = f->element_at(rng() % f->order());
      EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
      if (!a.is_zero()) {
        EXPECT_EQ(f->mul(a, f->inv(a)), f->one());
      }
    }
  }
}

TEST(Frobenius, DefinitionOnF9Exhaustive) {
  Field f9(3, 2);
  for (u64 i = 0; i < 9; ++i) {
    Element a = f9.element_at(i);
    EXPECT_EQ(f9.frobenius(a, 3, 1), f9.pow(a, 3));
  }
}

TEST(Frobenius, AdditiveOnRandomPairs) {
  Field f(2, 20);
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    Element a = f.element_at(rng() % f.order());
    Element b = f.element_at(rng() % f.order());
    Element lhs = f.frobenius(f.add(a, b), 2, 1);
    EXPECT_EQ(lhs, f.add(f.frobenius(a, 2, 1), f.frobenius(b, 2, 1)));
  }
}

TEST(Frobenius, TableMatchesSquareAndMultiply) {
  Field f(3, 18);
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 100; ++t) {
    Element a = f.element_at(rng() % f.order());
    // q' = 27 = 3^3, one application
    EXPECT_EQ(f.frobenius(a, 27, 1), f.pow(a, 27));
    EXPECT_EQ(f.frobenius(a, 27, 2), f.pow(f.pow(a, 27), 27));
  }
}

TEST(Frobenius, FullCycleIsIdentityExhaustive) {
  for (auto [p, n] : {std::pair<unsigned, unsigned>{2, 12}, {3, 7}, {2, 6}}) {
    Field f(p, n);
    for (auto [sp, sn] : std::vector<std::pair<u64, unsigned>>{{p, 1}}) {
      (void)sp;
      (void)sn;
    }
    for (unsigned k = 1; k <= n; ++k) {
      if (n % k) continue;
      u64 qp = ipow(p, k);
      unsigned e = n / k;
      for (u64 i = 0; i < f.order(); ++i) {
        Element a = f.element_at(i);
        if (f.frobenius(a, qp, e) != a) {
          ADD_FAILURE() << "frobenius cycle broken p=" << p << " n=" << n << " k=" << k;
          return;
        }
      }
    }
  }
}

TEST(Frobenius, BadSubfieldOrderRejected) {
  Field f(2, 12);
  EXPECT_THROW(f.frobenius(f.one(), 32, 1), usage_error);  // 2^5, 5 does not divide 12
  EXPECT_THROW(f.frobenius(f.one(), 9, 1), usage_error);   // wrong characteristic
}

TEST(Trace, F4OverF2Values) {
  Field f4(2, 2);
  Field f2(2, 1);
  f4.register_subfield(f2);
  EXPECT_TRUE(f4.trace_to_order(f4.zero(), 2).is_zero());
  // Tr(T) = T + T^2 = 1 with T^2 = T + 1
  Element t = f4.from_coeffs({0, 1});
  EXPECT_EQ(f4.trace_to_order(t, 2), f4.one());
  EXPECT_EQ(f4.relative_trace(t, f2), f2.one());
}

TEST(Trace, KernelSizeF64OverF4) {
  Field f64(2, 6);
  unsigned zeros = 0;
  for (u64 i = 0; i < 64; ++i)
    if (f64.trace_to_order(f64.element_at(i), 4).is_zero()) ++zeros;
  EXPECT_EQ(zeros, 16u);
}

TEST(Trace, SurjectiveAndLinearF64OverF8) {
  Field f64(2, 6);
  Field f8(2, 3);
  f64.register_subfield(f8);
  std::set<u64> images;
  for (u64 i = 0; i < 64; ++i) {
    Element tr = f64.relative_trace(f64.element_at(i), f8);
    images.insert(f8.index_of(tr));
  }
  EXPECT_EQ(images.size(), 8u);
  // F_8-linearity over scalars from the embedded subfield
  for (u64 s = 0; s < 8; ++s) {
    Element lam = f64.embed(f8, f8.element_at(s));
    for (u64 i = 0; i < 64; i += 7) {
      Element a = f64.element_at(i);
      Element lhs = f64.trace_to_order(f64.mul(lam, a), 8);
      Element rhs = f64.mul(lam, f64.trace_to_order(a, 8));
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Trace, TransitivityTowerExhaustive) {
  // Tr_{F/F_2} = Tr_{F'/F_2} o Tr_{F/F'} on F_{2^12} > F_{2^4} > F_2
  Field f12(2, 12);
  Field f4(2, 4);
  Field f2(2, 1);
  f12.register_subfield(f4);
  f4.register_subfield(f2);
  for (u64 i = 0; i < f12.order(); ++i) {
    Element a = f12.element_at(i);
    Element direct = f12.trace_to_order(a, 2);
    Element step = f12.relative_trace(a, f4);
    Element composed = f4.trace_to_order(step, 2);
    // compare within F_2: both are scalars
    EXPECT_EQ(direct.is_zero(), composed.is_zero());
  }
}

TEST(Trace, UnregisteredSubfieldIsUsageError) {
  Field f(2, 6);
  Field sub(2, 3);
  EXPECT_THROW(f.relative_trace(f.one(), sub), usage_error);
}

TEST(Embedding, RingHomomorphismSmallTowers) {
  struct Tow {
    unsigned p, nsub, nbig;
  };
  for (Tow t : {Tow{2, 2, 12}, Tow{2, 4, 12}, Tow{3, 3, 6}}) {
    Field big(t.p, t.nbig);
    Field sub(t.p, t.nsub);
    big.register_subfield(sub);
    for (u64 i = 0; i < sub.order(); ++i) {
      for (u64 j = 0; j < sub.order(); ++j) {
        Element a = sub.element_at(i), b = sub.element_at(j);
        EXPECT_EQ(big.embed(sub, sub.mul(a, b)), big.mul(big.embed(sub, a), big.embed(sub, b)));
        EXPECT_EQ(big.embed(sub, sub.add(a, b)), big.add(big.embed(sub, a), big.embed(sub, b)));
      }
      // Frobenius commutes with the embedding
      Element a = sub.element_at(i);
      EXPECT_EQ(big.embed(sub, sub.pow(a, t.p)), big.pow(big.embed(sub, a), t.p));
    }
    // fixes F_p
    for (unsigned v = 0; v < t.p; ++v) EXPECT_EQ(big.embed(sub, sub.scalar(v)), big.scalar(v));
  }
}

TEST(PowerResidues, BasicValues) {
  Field f64(2, 6);
  EXPECT_TRUE(f64.is_rth_power(f64.one(), 3));
  EXPECT_TRUE(f64.is_rth_power(f64.one(), 7));
  // find a generator
  Element g = f64.zero();
  for (u64 i = 1; i < 64; ++i) {
    Element cand = f64.element_at(i);
    bool ok = true;
    for (u64 d : {21, 9, 7, 3})
      if (f64.pow(cand, d) == f64.one()) ok = false;
    if (ok) {
      g = cand;
      break;
    }
  }
  ASSERT_FALSE(g.is_zero());
  EXPECT_TRUE(f64.is_rth_power(f64.pow(g, 3), 3));
  EXPECT_FALSE(f64.is_rth_power(g, 3));
  EXPECT_EQ(f64.rth_root_count(f64.pow(g, 3), 3), 3u);
  EXPECT_EQ(f64.rth_root_count(g, 3), 0u);
  EXPECT_EQ(f64.rth_root_count(f64.zero(), 3), 1u);
}

TEST(PowerResidues, RootCountsSumToFieldSize) {
  Field f64(2, 6);
  u64 sum = 0;
  for (u64 i = 0; i < 64; ++i) sum += f64.rth_root_count(f64.element_at(i), 3);
  EXPECT_EQ(sum, 64u);
}

TEST(PowerResidues, ResidueClassPartition) {
  // r | |F|-1 implies exactly (|F|-1)/r nonzero residues.
  for (auto [p, n] : {std::pair<unsigned, unsigned>{2, 12}, {3, 6}}) {
    Field f(p, n);
    for (u64 r : divisors(f.order() - 1)) {
      if (r == 1 || r > 20) continue;
      u64 residues = 0;
      for (u64 i = 1; i < f.order(); ++i)
        if (f.is_rth_power(f.element_at(i), r)) ++residues;
      EXPECT_EQ(residues, (f.order() - 1) / r) << "p=" << p << " n=" << n << " r=" << r;
    }
  }
}

TEST(Enumeration, SingleChunkCoversF8) {
  Field f8(2, 3);
  auto [b, e] = f8.partition_range(0, 1);
  EXPECT_EQ(b, 0u);
  EXPECT_EQ(e, 8u);
  std::set<u64> seen;
  Element x = f8.element_at(b);
  for (u64 k = b; k < e; ++k) {
    seen.insert(f8.index_of(x));
    f8.increment(x);
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(Enumeration, FourChunksPartitionF4096) {
  Field f(2, 12);
  std::set<u64> seen;
  u64 total = 0;
  for (unsigned c = 0; c < 4; ++c) {
    auto [b, e] = f.partition_range(c, 4);
    total += e - b;
    Element x = f.element_at(b);
    for (u64 k = b; k < e; ++k) {
      EXPECT_TRUE(seen.insert(f.index_of(x)).second);
      f.increment(x);
    }
  }
  EXPECT_EQ(total, 4096u);
  EXPECT_EQ(seen.size(), 4096u);
}

TEST(Enumeration, OutOfRangeChunkRejected) {
  Field f(2, 3);
  EXPECT_THROW(f.partition_range(4, 4), usage_error);
  EXPECT_THROW(f.partition_range(0, 0), usage_error);
}

TEST(Field, ModulusValidation) {
  EXPECT_THROW(Field(2, 2, {0, 0}), domain_error);  // T^2 reducible
  EXPECT_THROW(Field(4, 2), domain_error);          // 4 not prime
  EXPECT_NO_THROW(Field(2, 2, {1, 1}));
}
