#pragma once

// The reproduction driver: every acceptance criterion as an executable check.
// Used by the `repro` CLI subcommand and by the acceptance test binary. Each
// criterion reports pass/fail with the list of failed comparisons and its
// wall time; criteria 7 and 8 run the large F_{27^6} enumerations and are
// gated behind the `extended` flag.

#include <chrono>
#include <fstream>
#include <sstream>

#include "maxcurves/count.hpp"
#include "maxcurves/curves.hpp"
#include "maxcurves/ff.hpp"
#include "maxcurves/identity.hpp"
#include "maxcurves/rcf.hpp"
#include "maxcurves/report.hpp"
#include "maxcurves/semigroup.hpp"

namespace maxcurves::repro {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool ran = true;
  std::vector<std::string> failures;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

namespace detail {

struct Checker {
  std::vector<std::string>* failures;

  void is_true(bool cond, const std::string& what) {
    if (!cond) failures->push_back(what);
  }
  template <class A, class B>
  void eq(const A& got, const B& want, const std::string& what) {
    if (!(got == A(want))) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want;
      failures->push_back(os.str());
    }
  }
};

inline count::CountOptions workers_opt(unsigned workers) {
  count::CountOptions o;
  o.workers = workers;
  return o;
}

}  // namespace detail

struct AcceptanceOptions {
  bool extended = false;
  unsigned workers = 0;
  std::string schema_path;               // validated in criterion 9 when nonempty
  std::function<void(u64, u64)> progress;  // forwarded to the long counts
};

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& aopts) {
  using curves::Family;
  std::vector<CriterionResult> out;
  const unsigned W = count::resolve_workers(aopts.workers);

  auto run = [&](int id, const std::string& name, double budget, bool enabled, auto&& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.budget_seconds = budget;
    if (!enabled) {
      r.ran = false;
      r.pass = false;
      out.push_back(std::move(r));
      return;
    }
    auto t0 = std::chrono::steady_clock::now();
    detail::Checker ck{&r.failures};
    try {
      body(ck);
    } catch (const std::exception& e) {
      r.failures.push_back(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > budget) {
      std::ostringstream os;
      os << "runtime " << r.seconds << " s exceeds budget " << budget << " s";
      r.failures.push_back(os.str());
    }
    r.pass = r.failures.empty();
    out.push_back(std::move(r));
  };

  // 1. Hermitian base counts and degree-3 points.
  run(1, "hermitian q=4 counts and degree-3 orbit", 1.0, true, [&](detail::Checker& ck) {
    auto h = curves::make_spec(Family::hermitian, 4);
    auto n1 = count::count_points(h, 1, detail::workers_opt(W));
    ck.eq(n1.total, 9u, "N_1(H)");
    ck.is_true(n1.maximal, "H maximal over F_4");
    auto n3 = count::count_points(h, 3, detail::workers_opt(W));
    ck.eq(n3.total, 81u, "N_3(H)");
    ck.is_true(n3.maximal, "H maximal over F_64");
    ck.eq(count::points_of_degree(h, 3, detail::workers_opt(W)).a_r, 24u, "degree-3 points");
    ck.eq(curves::short_orbit_sizes(h).tame_orbit, 24u, "degree-3 orbit formula");
  });

  // 2. The exponent-3 Hermitian cover at q=4.
  run(2, "hermitian cover q=4: genus 10, N(F_64) = 225, split audit", 1.0, true, [&](detail::Checker& ck) {
    auto gk = curves::make_cyclic_cover(Family::hermitian, 4, 3);
    ck.eq(curves::genus(gk), 10u, "Hurwitz genus");
    count::CountOptions o = detail::workers_opt(W);
    o.audit_split = true;
    auto rep = count::count_points(gk, 3, o);
    ck.eq(rep.total, 225u, "N(F_64)");
    ck.eq(rep.hasse_weil, 225u, "Hasse-Weil bound");
    ck.is_true(rep.maximal, "maximal");
    ck.eq(rep.split_violations, 0u, "split violations");
    // a genus-6 curve meeting the bound would have N = 161; the measured
    // count adjudicates the competing closed form
    ck.is_true(rep.total != 161u, "closed-form genus 6 refuted by count");
  });

  // 3. Suzuki q=8: base counts, cover, ramification, semigroup, chain.
  run(3, "suzuki q=8: counts, cover, ramification, semigroup, identity chain", 10.0, true,
      [&](detail::Checker& ck) {
        auto s = curves::make_spec(Family::suzuki, 8);
        ck.eq(count::count_points(s, 1, detail::workers_opt(W)).total, 65u, "N_1(S)");
        ck.eq(count::count_points(s, 2, detail::workers_opt(W)).total, 65u, "N_2(S)");
        auto n4 = count::count_points(s, 4, detail::workers_opt(W));
        ck.eq(n4.total, 5889u, "N_4(S)");
        ck.is_true(n4.maximal, "S maximal over F_{q^4}");
        ck.eq(count::points_of_degree(s, 4, detail::workers_opt(W)).a_r, 1456u, "degree-4 points");

        auto st = curves::make_cyclic_cover(Family::suzuki, 8, 5);
        ck.eq(curves::genus(st), 196u, "cover genus");
        count::CountOptions o = detail::workers_opt(W);
        o.audit_split = true;
        auto rep = count::count_points(st, 4, o);
        ck.eq(rep.total, 29185u, "N(F_4096)");
        ck.is_true(rep.maximal, "cover maximal");
        ck.eq(rep.split_violations, 0u, "split violations");

        auto ram = curves::ramification_audit(s);
        ck.eq(ram.different_exponent, 538u, "different exponent");
        ck.is_true(ram.residue == Rat::of(4, 5), "tame residue 4/5");
        ck.is_true(ram.balanced, "Hurwitz balance");
        ck.is_true(ram.two_g_minus_2 == 26, "2g-2");

        ck.eq(semigroup::semigroup_invariants({40, 50, 60, 64, 65}).genus, 196u, "semigroup genus");

        for (const auto& idr : identity::verify_suzuki_chain(8))
          ck.is_true(idr.pass, "suzuki identity " + idr.id);
      });

  // 4. Suzuki ray-class-field check and the Kummer scan at q=8.
  run(4, "suzuki q=8 rcf: bound prunes l=13; Kummer scan finds r=65 maximal", 5.0, true,
      [&](detail::Checker& ck) {
        auto s = curves::make_spec(Family::suzuki, 8);
        auto v = rcf::rcf_check(s, detail::workers_opt(W));
        ck.eq(v.candidates.degree_bound, 10u, "degree bound");
        ck.is_true(v.candidates.pruned == std::vector<u64>{13}, "pruned primes");
        ck.is_true(v.prime_reports.empty(), "no counting needed");
        ck.is_true(v.outcome == rcf::RcfOutcome::equal, "verdict equal");
        auto rows = rcf::kummer_scan(8, 4, 5, detail::workers_opt(W));
        bool found65 = false;
        for (const auto& row : rows)
          if (row.r == 65 && row.maximal) found65 = true;
        ck.is_true(found65, "Kummer line r=65 maximal over F_{8^4}");
      });

  // 5. Hermitian Kummer analysis at q=4 and q=9.
  run(5, "hermitian Kummer lines and trace-zero structure (q=4, q=9)", 2.0, true, [&](detail::Checker& ck) {
    auto rows4 = rcf::kummer_scan(4, 3, 3, detail::workers_opt(W));
    ck.eq(rows4.size(), std::size_t(2), "q=4 scan rows");
    ck.eq(rows4[0].direct_count, 113u, "C_3 count");
    ck.is_true(rows4[0].maximal, "C_3 maximal");
    ck.eq(rows4[1].direct_count, 113u, "C_9 count");
    ck.eq(rows4[1].bound, 257u, "C_9 bound");
    ck.is_true(!rows4[1].maximal, "C_9 not maximal");
    ck.eq(rcf::trace_kernel_power_count(4, 3, 3), 9u, "kernel count r=3");
    ck.eq(rcf::trace_kernel_power_count(4, 3, 9), 3u, "kernel count r=9");
    auto tz4 = rcf::hermitian_tracezero_analysis(4);
    ck.is_true(tz4.rootset_matches, "root set = trace-zero m-th powers");
    ck.is_true(tz4.factorization_matches, "factorization identity");
    ck.is_true(tz4.per_coset_roots == std::vector<u64>{3, 3, 3}, "coset distribution 3x3");
    ck.is_true(tz4.coset_factors_match, "coset factor membership");

    ck.eq(rcf::trace_kernel_power_count(9, 3, 7), 32u, "kernel count q=9 r=7");
    auto rows9 = rcf::kummer_scan(9, 3, 7, detail::workers_opt(W));
    ck.eq(rows9.size(), std::size_t(3), "q=9 scan rows");
    ck.is_true(rows9[0].r == 7 && rows9[0].maximal, "C_7 maximal");
    ck.is_true(rows9[1].r == 14 && !rows9[1].maximal, "C_14 not maximal");
    ck.is_true(rows9[2].r == 28 && !rows9[2].maximal, "C_28 not maximal");
    auto tz9 = rcf::hermitian_tracezero_analysis(9);
    ck.is_true(tz9.per_coset_roots == std::vector<u64>{8, 8, 8, 8}, "coset distribution 4x8");
    ck.is_true(tz9.rootset_matches && tz9.factorization_matches && tz9.coset_factors_match,
               "q=9 trace-zero structure");
  });

  // 6. Ree q=27, moderate part: counts, ramification, identity chain.
  run(6, "ree q=27: small-extension counts, ramification, identity chain", 610.0, true,
      [&](detail::Checker& ck) {
        auto r = curves::make_spec(Family::ree, 27);
        auto tc0 = std::chrono::steady_clock::now();
        ck.eq(count::count_points(r, 1, detail::workers_opt(W)).total, 19684u, "N_1(R)");
        ck.eq(count::count_points(r, 2, detail::workers_opt(W)).total, 19684u, "N_2(R)");
        ck.eq(count::count_points(r, 3, detail::workers_opt(W)).total, 19684u, "N_3(R)");
        double count_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - tc0).count();
        ck.is_true(count_secs < 10.0, "small-extension counts within 10 s");

        auto ram = curves::ramification_audit(r);
        ck.eq(ram.different_exponent, 538693u, "different exponent");
        ck.is_true(ram.residue == Rat::of(18, 19), "tame residue 18/19");
        ck.is_true(ram.two_g_minus_2 == 7252, "2g-2");
        ck.is_true(ram.balanced, "Hurwitz balance");

        auto chain = identity::verify_ree_chain(27);
        ck.eq(chain.size(), std::size_t(16), "chain length");
        for (const auto& idr : chain) ck.is_true(idr.pass, "ree identity " + idr.id);
      });

  // 7. extended: the exponent-19 Ree cover over F_{27^6} and degree-6 points.
  run(7, "ree q=27 extended: cover count over F_{27^6} and degree-6 points", 1800.0, aopts.extended,
      [&](detail::Checker& ck) {
        auto cover = curves::make_cyclic_cover(Family::ree, 27, 19);
        ck.eq(curves::genus(cover), 246051u, "Hurwitz genus");
        count::CountOptions o = detail::workers_opt(W);
        o.progress = aopts.progress;
        auto rep = count::count_points(cover, 6, o);
        ck.eq(rep.total, 10073464156ull, "N(F_{27^6})");
        ck.is_true(rep.maximal, "cover maximal over F_{27^6}");
        ck.eq(rep.deficiency, 0u, "deficiency");
        // the measured count independently determines the genus
        ck.eq((rep.total - 387420490u) / (2 * 19683u), 246051u, "genus from count");
        auto deg = count::points_of_degree(curves::make_spec(Family::ree, 27), 6, o);
        ck.eq(deg.a_r, 88363548u, "degree-6 points of R");
        ck.eq(curves::short_orbit_sizes(curves::make_spec(Family::ree, 27)).tame_orbit, 88363548u,
              "orbit formula agreement");
      });

  // 8. extended: Ree ray-class-field verdict via the three prime covers.
  run(8, "ree q=27 extended rcf: exponents 38, 133, 703 all non-maximal", 5400.0, aopts.extended,
      [&](detail::Checker& ck) {
        auto r = curves::make_spec(Family::ree, 27);
        count::CountOptions o = detail::workers_opt(W);
        o.progress = aopts.progress;
        auto v = rcf::rcf_check(r, o);
        ck.eq(v.candidates.surviving.size(), std::size_t(3), "surviving primes");
        ck.eq(v.prime_reports.size(), std::size_t(3), "prime cover counts");
        for (const auto& rep : v.prime_reports) {
          ck.is_true(!rep.maximal,
                     "cover exponent " + std::to_string(rep.spec.exponent) + " non-maximal");
          ck.is_true(rep.deficiency > 0, "positive deficiency");
        }
        ck.is_true(v.outcome == rcf::RcfOutcome::equal, "verdict equal");
      });

  // 9. always-on property suites.
  run(9, "property suites: field laws, solver oracle, Moebius, counting identity, workers, schema", 30.0,
      true, [&](detail::Checker& ck) {
        // field axioms: binary laws exhaustive on F_64 and F_243, unary laws
        // exhaustive on F_{2^12}
        {
          ff::Field f64(2, 6), f243(3, 5);
          for (const ff::Field* f : {&f64, &f243}) {
            for (u64 i = 0; i < f->order(); ++i) {
              ff::Element a = f->element_at(i);
              for (u64 j = i; j < f->order(); ++j) {
                ff::Element b = f->element_at(j);
                if (!(f->mul(a, b) == f->mul(b, a))) ck.is_true(false, "commutativity");
              }
              if (!a.is_zero() && !(f->mul(a, f->inv(a)) == f->one())) ck.is_true(false, "inverses");
            }
          }
          ff::Field f12(2, 12);
          ff::Field f4(2, 4);
          ff::Field f2(2, 1);
          f12.register_subfield(f4);
          f4.register_subfield(f2);
          bool frob_ok = true, trace_ok = true, pow_ok = true;
          for (u64 i = 0; i < f12.order(); ++i) {
            ff::Element a = f12.element_at(i);
            if (!(f12.frobenius(a, 2, 12) == a)) frob_ok = false;
            if (!(f12.pow(a, f12.order()) == a)) pow_ok = false;
            ff::Element direct = f12.trace_to_order(a, 2);
            ff::Element staged = f4.trace_to_order(f12.relative_trace(a, f4), 2);
            if (direct.is_zero() != staged.is_zero()) trace_ok = false;
          }
          ck.is_true(frob_ok, "Frobenius cycle is identity on F_{2^12}");
          ck.is_true(pow_ok, "a^{|F|} = a on F_{2^12}");
          ck.is_true(trace_ok, "trace transitivity on F_{2^12} > F_{2^4} > F_2");
        }
        // additive fast path vs matrix oracle, exhaustive
        {
          ff::Field f12(2, 12);
          count::AdditiveSolver s(f12, 8, +1);
          bool ok = true;
          for (u64 i = 0; i < f12.order(); ++i) {
            ff::Element c = f12.element_at(i);
            if (s.count(c) != s.count_matrix(c)) ok = false;
          }
          ck.is_true(ok, "suzuki solver fast path == matrix on F_{2^12}");
          ff::Field f64(2, 6);
          count::AdditiveSolver h(f64, 2, +1);
          bool ok2 = true;
          for (u64 i = 0; i < 64; ++i) {
            ff::Element c = f64.element_at(i);
            if (h.count(c) != h.count_matrix(c)) ok2 = false;
          }
          ck.is_true(ok2, "hermitian solver fast path == matrix on F_64");
        }
        // Moebius consistency on computed degrees
        {
          auto s = curves::make_spec(Family::suzuki, 8);
          for (unsigned r : {1u, 2u, 4u}) {
            u64 lhs = 0;
            for (u64 e : divisors(r))
              lhs += e * count::points_of_degree(s, static_cast<unsigned>(e), detail::workers_opt(W)).a_r;
            ck.eq(lhs, count::count_points(s, r, detail::workers_opt(W)).total,
                  "Moebius consistency suzuki r=" + std::to_string(r));
          }
          auto h = curves::make_spec(Family::hermitian, 4);
          u64 lhs3 = count::points_of_degree(h, 1, detail::workers_opt(W)).a_r +
                     3 * count::points_of_degree(h, 3, detail::workers_opt(W)).a_r;
          ck.eq(lhs3, count::count_points(h, 3, detail::workers_opt(W)).total, "Moebius consistency hermitian");
        }
        // the Kummer-line counting identity at q = 4 and q = 9
        for (u64 q : {4u, 9u}) {
          u64 m = q == 4 ? 3 : 7;
          for (const auto& row : rcf::kummer_scan(q, 3, m, detail::workers_opt(W)))
            ck.eq(row.direct_count, q + 1 + row.r * q * row.kernel_power_count,
                  "counting identity q=" + std::to_string(q) + " r=" + std::to_string(row.r));
        }
        // worker-count invariance on the suzuki cover count
        {
          auto st = curves::make_cyclic_cover(Family::suzuki, 8, 5);
          auto r1 = count::count_points(st, 4, detail::workers_opt(1));
          auto r2 = count::count_points(st, 4, detail::workers_opt(2));
          auto r8 = count::count_points(st, 4, detail::workers_opt(8));
          ck.is_true(r1.total == r2.total && r2.total == r8.total, "worker-count invariance");
        }
        // schema validation of a representative report envelope
        if (!aopts.schema_path.empty()) {
          std::ifstream in(aopts.schema_path);
          ck.is_true(in.good(), "schema document readable: " + aopts.schema_path);
          if (in.good()) {
            report::json schema = report::json::parse(in);
            auto st = curves::make_cyclic_cover(Family::suzuki, 8, 5);
            auto rep = count::count_points(st, 4, detail::workers_opt(W));
            report::EnvelopeOptions eo;
            eo.workers = rep.workers_used;
            report::json doc =
                report::envelope("count", st, report::moduli_json(rep.moduli),
                                 report::count_result_json(rep), curves::genus_audit_flags(st), eo);
            std::string err;
            ck.is_true(report::validate(doc, schema, &err), "report validates against schema: " + err);
          }
        }
      });

  return out;
}

}  // namespace maxcurves::repro
