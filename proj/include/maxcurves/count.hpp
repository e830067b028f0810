#pragma once

// Point-counting engines. The affine count over F_{q^e} is a sum over x of
// the product of local solution counts: one factor per Artin-Schreier
// component (y^{q'} +- y = g(x), counted by kernel size and image membership)
// and one Kummer factor (t^r = f(x), counted by power-residue class). Every
// right-hand side depends on x alone, which is what makes the per-x product
// valid. The unique place over x = infinity is rational for every family in
// the catalog (the Artin-Schreier components are totally ramified there with
// index a power of p, and the Kummer exponent is coprime to p), so the total
// is always affine + 1.
//
// Two interchangeable engines produce identical counts: a generic one built
// on ff::Field, and a packed characteristic-3 engine used for the large Ree
// enumerations (bit-sliced F_3 vectors, incremental Frobenius updates along
// the enumeration odometer, and Gram-matrix trace tests that avoid full
// products in the inner loop).

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <memory>
#include <thread>
#include <unordered_map>

#include "maxcurves/curves.hpp"
#include "maxcurves/ff.hpp"

namespace maxcurves::count {

/// Solution counter for one additive polynomial L(y) = y^{q'} + sign*y on a
/// fixed ambient field. When L is Frobenius minus identity (sign = -1, or
/// characteristic 2 where the signs coincide) the count is by the trace
/// criterion; otherwise a row-reduced F_p matrix of L decides image
/// membership. Both routes are kept; they are cross-checked in tests.
class AdditiveSolver {
 public:
  AdditiveSolver(const ff::Field& field, u64 subfield_order, int sign)
      : f_(&field), qprime_(subfield_order), sign_(sign) {
    if (sign != 1 && sign != -1) throw usage_error("solver sign must be +1 or -1");
    const unsigned p = f_->characteristic();
    const unsigned n = f_->degree();
    // validate q' = p^k with k | n
    u64 t = qprime_;
    unsigned k = 0;
    while (t > 1 && t % p == 0) t /= p, ++k;
    if (t != 1 || k == 0 || n % k != 0) throw usage_error("solver subfield order invalid for this field");
    k_ = k;
    fast_ = (p == 2) || (sign_ == -1);
    if (fast_) trace_mat_ = &f_->trace_map(qprime_);
    build_matrix();
  }

  const ff::Field& field() const { return *f_; }
  u64 subfield_order() const { return qprime_; }
  bool has_fast_path() const { return fast_; }
  u64 kernel_size() const { return kernel_; }

  /// Exact number of y with y^{q'} + sign*y = c.
  u64 count(const ff::Element& c) const {
    if (fast_) return f_->apply(*trace_mat_, c).is_zero() ? qprime_ : 0;
    return count_matrix(c);
  }

  /// Matrix route, available independently of the fast path.
  u64 count_matrix(const ff::Element& c) const {
    const unsigned n = f_->degree();
    const unsigned p = f_->characteristic();
    u8 v[ff::kMaxDegree] = {0};
    for (unsigned r = 0; r < n; ++r) {
      u32 acc = 0;
      for (unsigned j = 0; j < n; ++j) acc += static_cast<u32>(transform_[static_cast<std::size_t>(r) * n + j]) * c.coeff(j);
      v[r] = static_cast<u8>(acc % p);
    }
    for (unsigned r = rank_; r < n; ++r)
      if (v[r]) return 0;
    return kernel_;
  }

 private:
  void build_matrix() {
    const unsigned n = f_->degree();
    const unsigned p = f_->characteristic();
    const ff::LinearMap& fr = f_->p_power_map(k_ % n);
    // Row-major matrix of L with identity transform appended.
    std::vector<u8> m(static_cast<std::size_t>(n) * n, 0);
    for (unsigned col = 0; col < n; ++col)
      for (unsigned row = 0; row < n; ++row) {
        u32 val = fr.m[static_cast<std::size_t>(col) * n + row];
        if (row == col) val += sign_ == 1 ? 1 : p - 1;
        m[static_cast<std::size_t>(row) * n + col] = static_cast<u8>(val % p);
      }
    transform_.assign(static_cast<std::size_t>(n) * n, 0);
    for (unsigned i = 0; i < n; ++i) transform_[static_cast<std::size_t>(i) * n + i] = 1;
    auto inv_fp = [p](unsigned x) {
      for (unsigned i = 1; i < p; ++i)
        if (i * x % p == 1) return i;
      throw internal_error("no inverse mod p");
    };
    rank_ = 0;
    for (unsigned col = 0; col < n && rank_ < n; ++col) {
      unsigned sel = rank_;
      while (sel < n && m[static_cast<std::size_t>(sel) * n + col] == 0) ++sel;
      if (sel == n) continue;
      for (unsigned j = 0; j < n; ++j) {
        std::swap(m[static_cast<std::size_t>(sel) * n + j], m[static_cast<std::size_t>(rank_) * n + j]);
        std::swap(transform_[static_cast<std::size_t>(sel) * n + j], transform_[static_cast<std::size_t>(rank_) * n + j]);
      }
      unsigned f = inv_fp(m[static_cast<std::size_t>(rank_) * n + col]);
      for (unsigned j = 0; j < n; ++j) {
        m[static_cast<std::size_t>(rank_) * n + j] = static_cast<u8>(m[static_cast<std::size_t>(rank_) * n + j] * f % p);
        transform_[static_cast<std::size_t>(rank_) * n + j] = static_cast<u8>(transform_[static_cast<std::size_t>(rank_) * n + j] * f % p);
      }
      for (unsigned r = 0; r < n; ++r) {
        if (r == rank_) continue;
        u8 c = m[static_cast<std::size_t>(r) * n + col];
        if (!c) continue;
        for (unsigned j = 0; j < n; ++j) {
          m[static_cast<std::size_t>(r) * n + j] =
              static_cast<u8>((m[static_cast<std::size_t>(r) * n + j] + (p - 1) * c * m[static_cast<std::size_t>(rank_) * n + j]) % p);
          transform_[static_cast<std::size_t>(r) * n + j] =
              static_cast<u8>((transform_[static_cast<std::size_t>(r) * n + j] + (p - 1) * c * transform_[static_cast<std::size_t>(rank_) * n + j]) % p);
        }
      }
      ++rank_;
    }
    kernel_ = ipow(p, n - rank_);
    if (fast_ && kernel_ != qprime_) throw internal_error("fast-path kernel mismatch");
  }

  const ff::Field* f_;
  u64 qprime_;
  int sign_;
  unsigned k_ = 0;
  bool fast_ = false;
  const ff::LinearMap* trace_mat_ = nullptr;
  std::vector<u8> transform_;
  unsigned rank_ = 0;
  u64 kernel_ = 0;
};

/// Solutions of t^r = fval: 1 for fval = 0, else gcd(r, |F|-1) for a residue
/// and 0 for a non-residue.
inline u64 kummer_count(const ff::Field& field, const ff::Element& fval, u64 r) {
  return field.rth_root_count(fval, r);
}

enum class Engine { automatic, generic, packed3 };

struct CountOptions {
  unsigned workers = 0;  // 0: MAXCURVES_WORKERS env or hardware concurrency
  bool audit_split = false;
  bool force = false;  // override the enumeration guard rail
  Engine engine = Engine::automatic;
  std::function<void(u64, u64)> progress;  // (blocks done, blocks total); must be thread-safe
};

struct ModulusInfo {
  unsigned p = 0;
  unsigned n = 0;
  std::vector<u8> coeffs;
};

struct CountReport {
  curves::CurveSpec spec;
  unsigned ext = 1;
  u64 field_order = 0;
  u64 affine = 0;
  u64 infinite = 1;
  u64 total = 0;
  u64 genus = 0;
  bool bound_valid = false;  // q^{e/2} integral
  u64 hasse_weil = 0;
  bool maximal = false;
  u64 deficiency = 0;
  bool audited = false;
  u64 split_violations = 0;
  std::vector<ModulusInfo> moduli;
  unsigned workers_used = 1;
  double wall_ms = 0.0;
  std::string engine_name;
};

inline unsigned resolve_workers(unsigned requested) {
  if (requested) return requested;
  if (const char* env = std::getenv("MAXCURVES_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

inline constexpr u64 kEnumerationGuard = u64(1) << 33;

namespace detail {

// ---- bit-sliced F_3 vectors: one trit per 2-bit lane of a u64 -------------

inline constexpr u64 kTriLo = 0x5555555555555555ull;

inline u64 tri_add(u64 a, u64 b) {
  u64 al = a & kTriLo, ah = (a >> 1) & kTriLo;
  u64 bl = b & kTriLo, bh = (b >> 1) & kTriLo;
  u64 t = ~(bl | bh);
  u64 u = ~(al | ah);
  u64 s0 = (al & t) | (bl & u) | (ah & bh);
  u64 s1 = (ah & t) | (bh & u) | (al & bl);
  return s0 | (s1 << 1);
}

inline unsigned tri_dot(u64 a, u64 b) {
  u64 al = a & kTriLo, ah = (a >> 1) & kTriLo;
  u64 bl = b & kTriLo, bh = (b >> 1) & kTriLo;
  u64 ones = (al & bl) | (ah & bh);
  u64 twos = (al & bh) | (ah & bl);
  return (std::popcount(ones) + 2 * std::popcount(twos)) % 3;
}

struct WorkerResult {
  u64 affine = 0;
  u64 violations = 0;
};

struct FamilyJob {
  const ff::Field* amb;
  curves::Family base;
  unsigned p;
  u64 q;
  u64 q0;
  u64 r;           // Kummer exponent (1 when absent)
  bool has_kummer; // cover families and kummer lines
  bool audit;
  const ff::LinearMap* map_q = nullptr;
  const ff::LinearMap* map_q0 = nullptr;
  std::unique_ptr<AdditiveSolver> solver;
  // residue test constants
  u64 res_g = 1;
  u64 res_exp = 0;
};

inline u64 kummer_fast(const FamilyJob& job, const ff::Element& f, std::unordered_map<u64, u32>* cache) {
  if (f.is_zero()) return 1;
  if (job.res_g == 1) return 1;
  if (cache) {
    u64 key = job.amb->index_of(f);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    u64 cnt = job.amb->pow(f, job.res_exp) == job.amb->one() ? job.res_g : 0;
    cache->emplace(key, static_cast<u32>(cnt));
    return cnt;
  }
  return job.amb->pow(f, job.res_exp) == job.amb->one() ? job.res_g : 0;
}

inline void generic_worker(const FamilyJob& job, u64 begin, u64 end, WorkerResult& out,
                           const std::function<void()>& block_tick) {
  const ff::Field& F = *job.amb;
  constexpr u64 kBlock = u64(1) << 20;
  std::unordered_map<u64, u32> cache;
  ff::Element x = F.element_at(begin);
  u64 next_tick = begin + kBlock;
  for (u64 k = begin; k < end; ++k) {
    ff::Element xq = F.apply(*job.map_q, x);
    ff::Element f = F.sub(xq, x);
    u64 fiber = 1;
    u64 additive = 1;
    switch (job.base) {
      case curves::Family::hermitian: {
        ff::Element rhs = F.mul(F.apply(*job.map_q0, x), x);  // x^{q0+1}
        additive = job.solver->count(rhs);
        break;
      }
      case curves::Family::suzuki: {
        ff::Element rhs = F.mul(F.apply(*job.map_q0, x), f);  // x^{q0} (x^q + x)
        additive = job.solver->count(rhs);
        break;
      }
      case curves::Family::ree: {
        ff::Element xq0 = F.apply(*job.map_q0, x);
        ff::Element rhs1 = F.mul(xq0, f);
        u64 c1 = job.solver->count(rhs1);
        if (c1 == 0) {
          additive = 0;
        } else {
          ff::Element rhs2 = F.mul(xq0, rhs1);  // x^{2 q0} (x^q - x)
          additive = c1 * job.solver->count(rhs2);
        }
        break;
      }
      case curves::Family::kummer_line:
        additive = 1;
        break;
      default:
        throw internal_error("generic_worker: unexpected family");
    }
    fiber = additive;
    if (fiber && job.has_kummer) {
      u64 km = kummer_fast(job, f, &cache);
      if (job.audit && !f.is_zero() && additive > 0 && km != job.r) ++out.violations;
      fiber *= km;
    }
    out.affine += fiber;
    F.increment(x);
    if (k + 1 == next_tick) {
      if (block_tick) block_tick();
      next_tick += kBlock;
    }
  }
}

// Packed characteristic-3 engine for the Ree family and its covers. The
// enumeration is the same index odometer as ff::Field::element_at; x^3 and
// x^q - x are maintained incrementally (both are additive in x), and the two
// trace conditions Tr(x^{q0} f) = 0, Tr(x^{2 q0} f) = 0 are evaluated through
// Gram matrices of the bilinear forms (a, b) -> row_u(a * b), so the common
// case costs a handful of bit-sliced vector operations per x.
struct PackedRee {
  const ff::Field* F;
  unsigned n;
  u64 q;
  u64 q0;
  std::vector<u64> DF;    // packed e_i^q - e_i
  std::vector<u64> DQ0;   // packed e_i^{q0}
  u64 rows[3];            // packed independent rows of the trace matrix
  std::vector<u64> DH[3]; // packed M_u * DF[i]
  std::vector<u64> MU[3]; // packed columns of M_u, for initialization

  PackedRee(const ff::Field& field, u64 q_, u64 q0_) : F(&field), n(field.degree()), q(q_), q0(q0_) {
    if (field.characteristic() != 3) throw internal_error("packed engine requires characteristic 3");
    if (n > 31) throw guardrail_error("packed engine supports degree <= 31");
    auto pack = [&](const ff::Element& e) {
      u64 v = 0;
      for (unsigned i = 0; i < n; ++i) v |= static_cast<u64>(e.coeff(i)) << (2 * i);
      return v;
    };
    const ff::LinearMap& tmat = field.trace_map(q);
    // pick independent rows of the trace matrix by Gaussian elimination
    {
      std::vector<std::vector<u8>> picked;
      unsigned found = 0;
      for (unsigned r = 0; r < n && found < 3; ++r) {
        std::vector<u8> row(n);
        for (unsigned c = 0; c < n; ++c) row[c] = tmat.m[static_cast<std::size_t>(c) * n + r];
        // reduce against picked rows
        std::vector<std::vector<u8>> trial = picked;
        trial.push_back(row);
        // rank via elimination
        unsigned rank = 0;
        std::vector<std::vector<u8>> work = trial;
        for (unsigned col = 0; col < n && rank < work.size(); ++col) {
          unsigned sel = rank;
          while (sel < work.size() && work[sel][col] == 0) ++sel;
          if (sel == work.size()) continue;
          std::swap(work[sel], work[rank]);
          unsigned inv = work[rank][col] == 1 ? 1 : 2;
          for (unsigned c2 = 0; c2 < n; ++c2) work[rank][c2] = static_cast<u8>(work[rank][c2] * inv % 3);
          for (unsigned r2 = 0; r2 < work.size(); ++r2) {
            if (r2 == rank || !work[r2][col]) continue;
            u8 f = work[r2][col];
            for (unsigned c2 = 0; c2 < n; ++c2)
              work[r2][c2] = static_cast<u8>((work[r2][c2] + (3 - f) * work[rank][c2]) % 3);
          }
          ++rank;
        }
        if (rank == trial.size()) {
          picked = trial;
          ++found;
        }
      }
      if (picked.size() != 3) throw internal_error("trace matrix rank is not 3");
      for (unsigned u = 0; u < 3; ++u) {
        u64 v = 0;
        for (unsigned i = 0; i < n; ++i) v |= static_cast<u64>(picked[u][i]) << (2 * i);
        rows[u] = v;
      }
    }
    // basis deltas
    DF.resize(n);
    DQ0.resize(n);
    std::vector<std::vector<ff::Element>> prod(n);
    for (unsigned i = 0; i < n; ++i) {
      ff::Element ei = basis(i);
      DF[i] = pack(field.sub(field.pow(ei, q), ei));
      DQ0[i] = pack(field.pow(ei, q0));
      prod[i].resize(n);
      for (unsigned j = 0; j <= i; ++j) prod[i][j] = field.mul(ei, basis(j));
    }
    // Gram matrices M_u[i][j] = row_u(e_i e_j)
    for (unsigned u = 0; u < 3; ++u) {
      MU[u].assign(n, 0);
      std::vector<std::vector<u8>> M(n, std::vector<u8>(n, 0));
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) {
          const ff::Element& pe = j <= i ? prod[i][j] : prod[j][i];
          u64 pv = pack(pe);
          M[i][j] = static_cast<u8>(tri_dot(rows[u], pv));
        }
      for (unsigned j = 0; j < n; ++j) {
        u64 col = 0;
        for (unsigned i = 0; i < n; ++i) col |= static_cast<u64>(M[i][j]) << (2 * i);
        MU[u][j] = col;
      }
      DH[u].assign(n, 0);
      for (unsigned i = 0; i < n; ++i) {
        // M_u * DF[i]
        u64 h = 0;
        for (unsigned j = 0; j < n; ++j) {
          unsigned d = (DF[i] >> (2 * j)) & 3;
          if (d == 1) h = tri_add(h, MU[u][j]);
          else if (d == 2) h = tri_add(h, tri_add(MU[u][j], MU[u][j]));
        }
        DH[u][i] = h;
      }
    }
  }

  ff::Element basis(unsigned i) const {
    std::vector<u8> c(i + 1, 0);
    c[i] = 1;
    return F->from_coeffs(std::span<const u8>(c.data(), c.size()));
  }

  u64 matvec(unsigned u, u64 vec) const {
    u64 h = 0;
    for (unsigned j = 0; j < n; ++j) {
      unsigned d = (vec >> (2 * j)) & 3;
      if (d == 1) h = tri_add(h, MU[u][j]);
      else if (d == 2) h = tri_add(h, tri_add(MU[u][j], MU[u][j]));
    }
    return h;
  }
};

inline void packed_worker(const FamilyJob& job, const PackedRee& pk, u64 begin, u64 end, WorkerResult& out,
                          const std::function<void()>& block_tick) {
  const ff::Field& F = *job.amb;
  const unsigned n = pk.n;
  constexpr u64 kBlock = u64(1) << 22;
  std::unordered_map<u64, u32> cache;
  auto pack = [&](const ff::Element& e) {
    u64 v = 0;
    for (unsigned i = 0; i < n; ++i) v |= static_cast<u64>(e.coeff(i)) << (2 * i);
    return v;
  };
  auto unpack = [&](u64 v) {
    std::vector<u8> c(n);
    for (unsigned i = 0; i < n; ++i) c[i] = static_cast<u8>((v >> (2 * i)) & 3);
    return F.from_coeffs(std::span<const u8>(c.data(), c.size()));
  };
  ff::Element x0 = F.element_at(begin);
  u64 f = pack(F.sub(F.pow(x0, pk.q), x0));
  u64 xq0 = pack(F.pow(x0, pk.q0));
  u64 h0 = pk.matvec(0, f), h1 = pk.matvec(1, f), h2 = pk.matvec(2, f);
  std::vector<u8> digits(n);
  {
    u64 t = begin;
    for (unsigned i = 0; i < n; ++i) {
      digits[i] = static_cast<u8>(t % 3);
      t /= 3;
    }
  }
  const u64 kernel2 = job.q * job.q;  // two Artin-Schreier components, kernels of size q each
  u64 next_tick = begin + kBlock;
  for (u64 k = begin; k < end; ++k) {
    // first component: Tr(x^{q0} f) = 0, via the maintained Gram vectors
    if (tri_dot(xq0, h0) == 0 && tri_dot(xq0, h1) == 0 && tri_dot(xq0, h2) == 0) {
      // second component: Tr(x^{2 q0} f) = 0, via two products (rare path)
      ff::Element xel = unpack(xq0);
      ff::Element c2 = F.mul(xel, F.mul(xel, unpack(f)));
      u64 c2p = pack(c2);
      if (tri_dot(pk.rows[0], c2p) == 0 && tri_dot(pk.rows[1], c2p) == 0 && tri_dot(pk.rows[2], c2p) == 0) {
        u64 km = 1;
        if (job.has_kummer && f != 0) {
          auto it = cache.find(f);
          if (it != cache.end()) {
            km = it->second;
          } else {
            ff::Element fe = unpack(f);
            km = job.res_g == 1 ? 1 : (F.pow(fe, job.res_exp) == F.one() ? job.res_g : 0);
            cache.emplace(f, static_cast<u32>(km));
          }
          if (job.audit && km != job.r) ++out.violations;
        }
        out.affine += kernel2 * km;
      }
    }
    if (k + 1 < end) {
      for (unsigned j = 0;; ++j) {
        xq0 = tri_add(xq0, pk.DQ0[j]);
        f = tri_add(f, pk.DF[j]);
        h0 = tri_add(h0, pk.DH[0][j]);
        h1 = tri_add(h1, pk.DH[1][j]);
        h2 = tri_add(h2, pk.DH[2][j]);
        if (++digits[j] < 3) break;
        digits[j] = 0;
      }
    }
    if (k + 1 == next_tick) {
      if (block_tick) block_tick();
      next_tick += kBlock;
    }
  }
}

}  // namespace detail

/// Count the rational points of `spec` over F_{q^ext}. Deterministic for any
/// worker count; refuses enumerations beyond 2^33 elements unless forced.
inline CountReport count_points(const curves::CurveSpec& spec, unsigned ext, const CountOptions& opts = {}) {
  using curves::Family;
  if (ext < 1) throw usage_error("extension degree must be >= 1");
  u64 order = ipow(spec.q, ext);
  if (order > kEnumerationGuard && !opts.force)
    throw guardrail_error("enumeration of " + std::to_string(order) +
                          " field elements exceeds the guard rail (2^33); pass force to override");
  unsigned amb_deg = spec.base_deg * ext;
  if (amb_deg > ff::kMaxDegree)
    throw guardrail_error("ambient field degree " + std::to_string(amb_deg) + " unsupported");

  auto t0 = std::chrono::steady_clock::now();
  detail::FamilyJob job;
  auto amb = std::make_unique<ff::Field>(spec.p, amb_deg);
  job.amb = amb.get();
  job.base = spec.family == Family::cyclic_cover ? spec.base : spec.family;
  job.p = spec.p;
  job.q = spec.q;
  job.q0 = spec.q0;
  job.r = spec.exponent;
  job.has_kummer = spec.family == Family::cyclic_cover || spec.family == Family::kummer_line;
  job.audit = opts.audit_split && job.has_kummer;
  if (opts.audit_split && !job.has_kummer) throw usage_error("split audit applies to cover families only");

  // precompute maps and solvers
  job.map_q = &job.amb->p_power_map(spec.base_deg % amb_deg);
  switch (job.base) {
    case Family::hermitian: {
      unsigned t = 0;
      for (u64 v = spec.q0; v > 1; v /= spec.p) ++t;
      job.map_q0 = &job.amb->p_power_map(t % amb_deg);
      job.solver = std::make_unique<AdditiveSolver>(*job.amb, spec.q0, +1);
      break;
    }
    case Family::suzuki: {
      unsigned t = 0;
      for (u64 v = spec.q0; v > 1; v /= spec.p) ++t;
      job.map_q0 = &job.amb->p_power_map(t % amb_deg);
      job.solver = std::make_unique<AdditiveSolver>(*job.amb, spec.q, +1);
      break;
    }
    case Family::ree: {
      unsigned t = 0;
      for (u64 v = spec.q0; v > 1; v /= spec.p) ++t;
      job.map_q0 = &job.amb->p_power_map(t % amb_deg);
      job.solver = std::make_unique<AdditiveSolver>(*job.amb, spec.q, -1);
      break;
    }
    case Family::kummer_line:
      break;
    default:
      throw internal_error("count_points: unexpected family");
  }
  if (job.has_kummer) {
    job.res_g = std::gcd(job.r, order - 1);
    job.res_exp = job.res_g > 1 ? (order - 1) / job.res_g : 0;
  }

  bool use_packed = false;
  switch (opts.engine) {
    case Engine::packed3:
      use_packed = true;
      break;
    case Engine::generic:
      use_packed = false;
      break;
    case Engine::automatic:
      use_packed = spec.p == 3 && job.base == Family::ree && amb_deg <= 31 && order > (u64(1) << 24);
      break;
  }
  if (use_packed && (spec.p != 3 || job.base != Family::ree || amb_deg > 31))
    throw usage_error("packed engine supports the Ree family in characteristic 3 only");

  std::unique_ptr<detail::PackedRee> packed;
  if (use_packed) packed = std::make_unique<detail::PackedRee>(*job.amb, spec.q, spec.q0);

  unsigned workers = resolve_workers(opts.workers);
  if (static_cast<u64>(workers) > order) workers = static_cast<unsigned>(order);
  std::vector<detail::WorkerResult> results(workers);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<u64> blocks_done{0};
  const u64 block = use_packed ? (u64(1) << 22) : (u64(1) << 20);
  const u64 blocks_total = (order + block - 1) / block;
  auto tick = [&]() {
    u64 d = blocks_done.fetch_add(1) + 1;
    if (opts.progress) opts.progress(d, blocks_total);
  };
  std::function<void()> tick_fn = opts.progress ? std::function<void()>(tick) : std::function<void()>();

  auto run_chunk = [&](unsigned w) {
    try {
      auto [b, e] = job.amb->partition_range(w, workers);
      if (use_packed)
        detail::packed_worker(job, *packed, b, e, results[w], tick_fn);
      else
        detail::generic_worker(job, b, e, results[w], tick_fn);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run_chunk(0);
  } else {
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run_chunk, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  CountReport rep;
  rep.spec = spec;
  rep.ext = ext;
  rep.field_order = order;
  for (const auto& r : results) {
    rep.affine = checked_add(rep.affine, r.affine);
    rep.split_violations += r.violations;
  }
  rep.total = checked_add(rep.affine, 1);
  rep.genus = curves::genus(spec);
  rep.audited = job.audit;
  try {
    rep.hasse_weil = curves::hasse_weil_expected(spec, ext);
    rep.bound_valid = true;
    rep.maximal = rep.total == rep.hasse_weil;
    rep.deficiency = rep.hasse_weil - rep.total;
  } catch (const domain_error&) {
    rep.bound_valid = false;
  }
  // Hasse-Weil inequality, squared integer form (valid whether or not
  // q^{e/2} is integral): (N - q^e - 1)^2 <= 4 g^2 q^e.
  {
    i128 diff = static_cast<i128>(rep.total) - static_cast<i128>(order) - 1;
    u128 lhs = static_cast<u128>(diff < 0 ? -diff : diff);
    lhs = lhs * lhs;
    u128 rhs = static_cast<u128>(4) * rep.genus * rep.genus * order;
    if (lhs > rhs) throw internal_error("count violates the Hasse-Weil inequality");
  }
  rep.moduli.push_back({spec.p, amb_deg, job.amb->modulus()});
  rep.workers_used = workers;
  rep.engine_name = use_packed ? "packed3" : "generic";
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline std::pair<bool, u64> maximality_verdict(const curves::CurveSpec& spec, unsigned ext,
                                               const CountOptions& opts = {}) {
  CountReport r = count_points(spec, ext, opts);
  if (!r.bound_valid) throw domain_error("maximality requires q^(e/2) integral");
  return {r.maximal, r.deficiency};
}

/// Lemma-style fiber splitting audit for a cover over F_{q^d}: counts the x
/// with f(x) != 0 whose additive system is solvable but whose Kummer fiber
/// does not split into `exponent` distinct points.
inline u64 fiber_split_audit(const curves::CurveSpec& spec, const CountOptions& opts = {}) {
  if (spec.family != curves::Family::cyclic_cover) throw usage_error("split audit applies to cyclic covers");
  CountOptions o = opts;
  o.audit_split = true;
  return count_points(spec, spec.d, o).split_violations;
}

struct DegreeReport {
  unsigned r = 0;
  u64 a_r = 0;                                  // number of closed points of degree r
  std::vector<std::pair<unsigned, u64>> counts; // (e, N_e) for e | r
};

/// Closed points of degree r via Moebius inversion over the N_e, e | r.
inline DegreeReport points_of_degree(const curves::CurveSpec& spec, unsigned r, const CountOptions& opts = {}) {
  if (r < 1) throw usage_error("degree must be >= 1");
  DegreeReport out;
  out.r = r;
  i128 sum = 0;
  for (u64 e : divisors(r)) {
    CountReport rep = count_points(spec, static_cast<unsigned>(e), opts);
    out.counts.emplace_back(static_cast<unsigned>(e), rep.total);
    sum += static_cast<i128>(mobius(r / e)) * static_cast<i128>(rep.total);
  }
  if (sum < 0 || sum % r != 0) throw internal_error("Moebius sum not divisible by degree");
  out.a_r = static_cast<u64>(sum / r);
  return out;
}

}  // namespace maxcurves::count
