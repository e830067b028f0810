#pragma once

// Exact arithmetic in finite fields F_{p^n}: deterministic field construction
// (lexicographically least modulus), element arithmetic, Frobenius maps as
// precomputed F_p-linear maps, subfield embeddings, traces, power-residue
// tests, and deterministic enumeration slices for parallel counting.

#include <array>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "maxcurves/common.hpp"

namespace maxcurves::ff {

inline constexpr unsigned kMaxDegree = 36;

class Field;

/// One element of a fixed field: a coefficient vector over F_p plus the
/// identity of its owning field. Plain value type; cheap to copy.
class Element {
 public:
  Element() = default;

  const Field* field() const { return f_; }

  bool is_zero() const {
    for (unsigned i = 0; i < n_; ++i)
      if (c_[i]) return false;
    return true;
  }

  u8 coeff(unsigned i) const { return i < n_ ? c_[i] : 0; }

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

 private:
  friend class Field;
  std::array<u8, kMaxDegree> c_{};
  const Field* f_ = nullptr;
  unsigned n_ = 0;
};

namespace detail {

// Dense polynomial arithmetic over F_p used only for modulus selection
// (irreducibility testing). Coefficient vectors are low-to-high, trimmed.

inline void poly_trim(std::vector<u8>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u8> poly_mulmod(const std::vector<u8>& a, const std::vector<u8>& b,
                                   const std::vector<u8>& mod, unsigned p) {
  // mod is monic of degree n, stored with its leading 1.
  const std::size_t n = mod.size() - 1;
  std::vector<u32> buf(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) buf[i + j] += static_cast<u32>(a[i]) * b[j];
  }
  for (auto& v : buf) v %= p;
  for (std::size_t d = buf.size(); d-- > n;) {
    u32 c = buf[d];
    if (!c) continue;
    buf[d] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      u32 sub = c * mod[j] % p;
      buf[d - n + j] = (buf[d - n + j] + p - sub) % p;
    }
  }
  std::vector<u8> out(std::min(buf.size(), n));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<u8>(buf[i]);
  poly_trim(out);
  return out;
}

inline std::vector<u8> poly_powmod_x(u64 e, const std::vector<u8>& mod, unsigned p) {
  // x^e mod (mod), binary exponentiation
  std::vector<u8> result{1};
  std::vector<u8> base{0, 1};
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, mod, p);
    base = poly_mulmod(base, base, mod, p);
    e >>= 1;
  }
  return result;
}

inline std::vector<u8> poly_gcd(std::vector<u8> a, std::vector<u8> b, unsigned p) {
  poly_trim(a);
  poly_trim(b);
  // modular inverse in F_p by exhaustive search (p is tiny)
  auto inv_fp = [p](unsigned v) {
    for (unsigned i = 1; i < p; ++i)
      if (i * v % p == 1) return i;
    throw internal_error("no inverse mod p");
  };
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size() && !a.empty()) {
      unsigned shift = static_cast<unsigned>(a.size() - b.size());
      unsigned factor = a.back() * inv_fp(b.back()) % p;
      for (std::size_t j = 0; j < b.size(); ++j) {
        unsigned sub = factor * b[j] % p;
        a[shift + j] = static_cast<u8>((a[shift + j] + p - sub) % p);
      }
      poly_trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

inline bool poly_is_irreducible(const std::vector<u8>& mod, unsigned p) {
  const unsigned n = static_cast<unsigned>(mod.size() - 1);
  // Rabin test: x^{p^n} == x mod f, and gcd(x^{p^{n/l}} - x, f) == 1 for primes l | n.
  std::vector<u8> xp = poly_powmod_x(ipow(p, n), mod, p);
  std::vector<u8> x = poly_mulmod({0, 1}, {1}, mod, p);
  if (xp != x) return false;
  for (auto [l, e] : factorize(n)) {
    (void)e;
    std::vector<u8> g = poly_powmod_x(ipow(p, n / static_cast<unsigned>(l)), mod, p);
    // g - x
    if (g.size() < 2) g.resize(2, 0);
    g[1] = static_cast<u8>((g[1] + p - 1) % p);
    poly_trim(g);
    std::vector<u8> d = poly_gcd(mod, g, p);
    if (d.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

/// Lexicographically least monic irreducible polynomial of degree n over F_p,
/// ordered by the coefficient tuple (c_{n-1}, ..., c_0). Returned as the n
/// low-order coefficients (the monic leading 1 is implied).
inline std::vector<u8> find_irreducible(unsigned p, unsigned n) {
  if (!is_prime(p)) throw domain_error("characteristic must be prime");
  if (n < 1 || n > kMaxDegree) throw domain_error("unsupported extension degree");
  u64 total = ipow(p, n);
  for (u64 k = 0; k < total; ++k) {
    std::vector<u8> mod(n + 1, 0);
    mod[n] = 1;
    u64 t = k;
    for (unsigned i = 0; i < n; ++i) {
      mod[i] = static_cast<u8>(t % p);
      t /= p;
    }
    if (detail::poly_is_irreducible(mod, p)) {
      mod.pop_back();
      return mod;
    }
  }
  throw internal_error("no irreducible polynomial found");  // unreachable
}

/// An n x n matrix over F_p representing an F_p-linear map on a field,
/// stored column-major: column i is the image of the basis monomial T^i.
struct LinearMap {
  unsigned n = 0;
  std::vector<u8> m;  // n*n, m[i*n + j] = coefficient j of image of T^i
};

/// Immutable descriptor of F_{p^n} with a fixed modulus. Field objects are
/// identity-compared; elements remember their owning field. Frobenius maps
/// and subfield embeddings are cached on demand under a lock, so a fully
/// warmed descriptor is safe to share across threads.
class Field {
 public:
  Field(unsigned p, unsigned n) : Field(p, n, find_irreducible(p, n)) {}

  Field(unsigned p, unsigned n, std::vector<u8> modulus_low) : p_(p), n_(n), mod_(std::move(modulus_low)) {
    if (!is_prime(p_)) throw domain_error("characteristic must be prime");
    if (n_ < 1 || n_ > kMaxDegree) throw domain_error("unsupported extension degree");
    if (mod_.size() != n_) throw domain_error("modulus must have degree n");
    for (u8 c : mod_)
      if (c >= p_) throw domain_error("modulus coefficient out of range");
    {
      std::vector<u8> full = mod_;
      full.push_back(1);
      if (!detail::poly_is_irreducible(full, p_)) throw domain_error("modulus is reducible");
    }
    order_ = ipow(p_, n_);
    build_reduction_rows();
  }

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  unsigned characteristic() const { return p_; }
  unsigned degree() const { return n_; }
  u64 order() const { return order_; }
  const std::vector<u8>& modulus() const { return mod_; }

  Element zero() const { return make(); }

  Element one() const {
    Element e = make();
    e.c_[0] = 1;
    return e;
  }

  Element from_coeffs(std::span<const u8> coeffs) const {
    if (coeffs.size() > n_) throw usage_error("too many coefficients");
    Element e = make();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] >= p_) throw usage_error("coefficient out of range");
      e.c_[i] = coeffs[i];
    }
    return e;
  }

  Element from_coeffs(std::initializer_list<u8> coeffs) const {
    return from_coeffs(std::span<const u8>(coeffs.begin(), coeffs.size()));
  }

  /// Scalar embedding of 0..p-1.
  Element scalar(unsigned v) const {
    Element e = make();
    e.c_[0] = static_cast<u8>(v % p_);
    return e;
  }

  // --- deterministic enumeration -----------------------------------------

  /// Element with index k, where index = sum c_i p^i. Index order is the
  /// canonical enumeration order everywhere in this library.
  Element element_at(u64 k) const {
    if (k >= order_) throw usage_error("element index out of range");
    Element e = make();
    for (unsigned i = 0; i < n_ && k; ++i) {
      e.c_[i] = static_cast<u8>(k % p_);
      k /= p_;
    }
    return e;
  }

  u64 index_of(const Element& a) const {
    own(a);
    u64 k = 0;
    for (unsigned i = n_; i-- > 0;) k = k * p_ + a.c_[i];
    return k;
  }

  /// Odometer step in index order (wraps past the last element).
  void increment(Element& a) const {
    own(a);
    for (unsigned i = 0; i < n_; ++i) {
      if (++a.c_[i] < p_) return;
      a.c_[i] = 0;
    }
  }

  /// Half-open index range of chunk `index` out of `count`; the chunks
  /// partition [0, order) into contiguous slices differing in size by at
  /// most one.
  std::pair<u64, u64> partition_range(unsigned index, unsigned count) const {
    if (count == 0 || index >= count) throw usage_error("chunk index out of range");
    u64 begin = static_cast<u64>((static_cast<u128>(order_) * index) / count);
    u64 end = static_cast<u64>((static_cast<u128>(order_) * (index + 1)) / count);
    return {begin, end};
  }

  // --- arithmetic ----------------------------------------------------------

  Element add(const Element& a, const Element& b) const {
    own(a), own(b);
    Element r = make();
    for (unsigned i = 0; i < n_; ++i) {
      u8 s = static_cast<u8>(a.c_[i] + b.c_[i]);
      r.c_[i] = s >= p_ ? static_cast<u8>(s - p_) : s;
    }
    return r;
  }

  Element sub(const Element& a, const Element& b) const {
    own(a), own(b);
    Element r = make();
    for (unsigned i = 0; i < n_; ++i) {
      int s = a.c_[i] - b.c_[i];
      r.c_[i] = static_cast<u8>(s < 0 ? s + static_cast<int>(p_) : s);
    }
    return r;
  }

  Element neg(const Element& a) const { return sub(zero(), a); }

  Element mul(const Element& a, const Element& b) const {
    own(a), own(b);
    u32 buf[2 * kMaxDegree] = {0};
    for (unsigned i = 0; i < n_; ++i) {
      if (!a.c_[i]) continue;
      for (unsigned j = 0; j < n_; ++j) buf[i + j] += static_cast<u32>(a.c_[i]) * b.c_[j];
    }
    return reduce(buf);
  }

  Element pow(Element a, u64 e) const {
    own(a);
    Element r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Element inv(const Element& a) const {
    own(a);
    if (a.is_zero()) throw domain_error("inverse of zero");
    return pow(a, order_ - 2);
  }

  Element div(const Element& a, const Element& b) const { return mul(a, inv(b)); }

  // --- Frobenius -----------------------------------------------------------

  /// Cached matrix of the F_p-linear map a -> a^{p^t}, 0 <= t < n.
  const LinearMap& p_power_map(unsigned t) const {
    t %= n_;
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = frob_cache_.find(t);
    if (it != frob_cache_.end()) return it->second;
    LinearMap lm;
    lm.n = n_;
    lm.m.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (unsigned i = 0; i < n_; ++i) {
      Element base = make();
      base.c_[i] = 1;
      Element img = pow(base, ipow(p_, t));
      for (unsigned j = 0; j < n_; ++j) lm.m[static_cast<std::size_t>(i) * n_ + j] = img.c_[j];
    }
    return frob_cache_.emplace(t, std::move(lm)).first->second;
  }

  /// Lock-free application of a precomputed linear map.
  Element apply(const LinearMap& lm, const Element& a) const {
    own(a);
    u32 acc[kMaxDegree] = {0};
    for (unsigned i = 0; i < n_; ++i) {
      u8 v = a.c_[i];
      if (!v) continue;
      const u8* col = &lm.m[static_cast<std::size_t>(i) * n_];
      for (unsigned j = 0; j < n_; ++j) acc[j] += static_cast<u32>(v) * col[j];
    }
    Element r = make();
    for (unsigned j = 0; j < n_; ++j) r.c_[j] = static_cast<u8>(acc[j] % p_);
    return r;
  }

  /// a^{q'^j} for q' = p^k a subfield order (k | n required).
  Element frobenius(const Element& a, u64 qprime, unsigned j = 1) const {
    unsigned k = subfield_log(qprime);
    return apply(p_power_map(static_cast<unsigned>((static_cast<u64>(k) * j) % n_)), a);
  }

  /// Matrix of the relative trace a -> sum a^{q'^i} as an F_p-linear map.
  const LinearMap& trace_map(u64 qprime) const {
    unsigned k = subfield_log(qprime);
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = trace_cache_.find(k);
    if (it != trace_cache_.end()) return it->second;
    LinearMap lm;
    lm.n = n_;
    lm.m.assign(static_cast<std::size_t>(n_) * n_, 0);
    unsigned steps = n_ / k;
    for (unsigned i = 0; i < n_; ++i) {
      Element base = make();
      base.c_[i] = 1;
      Element acc = zero();
      Element cur = base;
      for (unsigned s = 0; s < steps; ++s) {
        acc = add(acc, cur);
        cur = pow(cur, ipow(p_, k));
      }
      for (unsigned j = 0; j < n_; ++j) lm.m[static_cast<std::size_t>(i) * n_ + j] = acc.c_[j];
    }
    return trace_cache_.emplace(k, std::move(lm)).first->second;
  }

  /// Relative trace into F_{q'}, returned as an element of this field
  /// (it lies in the subfield image).
  Element trace_to_order(const Element& a, u64 qprime) const { return apply(trace_map(qprime), a); }

  // --- subfield embeddings ---------------------------------------------------

  /// Register the canonical embedding of `sub` into this field: the subfield
  /// generator maps to the lexicographically least root of sub's modulus here.
  void register_subfield(const Field& sub) {
    if (sub.p_ != p_) throw usage_error("subfield has different characteristic");
    if (n_ % sub.n_ != 0) throw usage_error("subfield degree does not divide field degree");
    if (sub.order_ > (1u << 22)) throw usage_error("subfield too large to embed by enumeration");
    {
      std::lock_guard<std::mutex> lk(cache_mu_);
      if (embeddings_.count(&sub)) return;
    }
    Embedding em = build_embedding(sub);
    std::lock_guard<std::mutex> lk(cache_mu_);
    embeddings_.emplace(&sub, std::move(em));
  }

  bool has_subfield(const Field& sub) const {
    std::lock_guard<std::mutex> lk(cache_mu_);
    return embeddings_.count(&sub) != 0;
  }

  Element embed(const Field& sub, const Element& a) const {
    sub.own(a);
    const Embedding& em = find_embedding(sub);
    Element r = make();
    u32 acc[kMaxDegree] = {0};
    for (unsigned i = 0; i < sub.n_; ++i) {
      u8 v = a.c_[i];
      if (!v) continue;
      for (unsigned j = 0; j < n_; ++j) acc[j] += static_cast<u32>(v) * em.fwd[static_cast<std::size_t>(i) * n_ + j];
    }
    for (unsigned j = 0; j < n_; ++j) r.c_[j] = static_cast<u8>(acc[j] % p_);
    return r;
  }

  /// Inverse of embed on the subfield image; usage error off the image.
  Element project(const Field& sub, const Element& a) const {
    own(a);
    const Embedding& em = find_embedding(sub);
    // Solve fwd * x = a with the precomputed row-reduced system.
    std::array<u8, kMaxDegree> rhs{};
    for (unsigned r = 0; r < n_; ++r) {
      u16 acc = 0;
      for (unsigned c = 0; c < n_; ++c) acc = static_cast<u16>(acc + em.row_ops[static_cast<std::size_t>(r) * n_ + c] * a.c_[c]);
      rhs[r] = static_cast<u8>(acc % p_);
    }
    Element out = sub.make();
    for (unsigned r = 0; r < n_; ++r) {
      if (r < em.pivot_of_row.size() && em.pivot_of_row[r] >= 0)
        out.c_[em.pivot_of_row[r]] = rhs[r];
      else if (rhs[r] != 0)
        throw usage_error("element does not lie in the requested subfield");
    }
    return out;
  }

  /// Tr_{F/sub}(a) as an element of the registered subfield.
  Element relative_trace(const Element& a, const Field& sub) const {
    const Embedding& em = find_embedding(sub);
    (void)em;
    Element t = trace_to_order(a, sub.order_);
    return project(sub, t);
  }

  // --- power residues --------------------------------------------------------

  /// Number of solutions of t^r = a in this field (gcd-adjusted when r does
  /// not divide |F|-1): 0 for a non-residue, gcd(r, |F|-1) for a nonzero
  /// residue, 1 for a = 0.
  u64 rth_root_count(const Element& a, u64 r) const {
    own(a);
    if (r == 0) throw usage_error("r must be positive");
    if (a.is_zero()) return 1;
    u64 g = std::gcd(r, order_ - 1);
    if (g == 1) return 1;
    return pow(a, (order_ - 1) / g) == one() ? g : 0;
  }

  bool is_rth_power(const Element& a, u64 r) const { return rth_root_count(a, r) != 0; }

 private:
  struct Embedding {
    const Field* sub;
    std::vector<u8> fwd;              // sub.n columns of length n: images of sub basis
    std::vector<u8> row_ops;          // n x n transform bringing fwd to reduced form
    std::vector<int> pivot_of_row;    // per reduced row: which subfield coordinate it determines
    u64 root_index;                   // index of the chosen root (lex-least)
  };

  Element make() const {
    Element e;
    e.f_ = this;
    e.n_ = n_;
    return e;
  }

  void own(const Element& a) const {
    if (a.f_ != this) throw usage_error("element does not belong to this field");
  }

  unsigned subfield_log(u64 qprime) const {
    u64 q = qprime;
    unsigned k = 0;
    while (q > 1 && q % p_ == 0) q /= p_, ++k;
    if (q != 1 || k == 0 || n_ % k != 0) throw usage_error("not a subfield order of this field");
    return k;
  }

  void build_reduction_rows() {
    // red_ row d = normal form of T^{n+d}, for 0 <= d <= n-2.
    unsigned rows = n_ > 1 ? n_ - 1 : 0;
    red_.assign(static_cast<std::size_t>(rows) * n_, 0);
    if (!rows) return;
    std::vector<u8> cur(n_, 0);
    for (unsigned j = 0; j < n_; ++j) cur[j] = static_cast<u8>((p_ - mod_[j]) % p_);  // T^n
    for (unsigned d = 0; d < rows; ++d) {
      std::copy(cur.begin(), cur.end(), red_.begin() + static_cast<std::size_t>(d) * n_);
      u8 top = cur[n_ - 1];
      for (unsigned j = n_; j-- > 1;) cur[j] = cur[j - 1];
      cur[0] = 0;
      if (top) {
        for (unsigned j = 0; j < n_; ++j) {
          unsigned v = cur[j] + top * ((p_ - mod_[j]) % p_);
          cur[j] = static_cast<u8>(v % p_);
        }
      }
    }
  }

  Element reduce(u32 buf[2 * kMaxDegree]) const {
    for (unsigned d = 2 * n_ - 1; d-- > n_;) {
      u32 v = buf[d] % p_;
      if (!v) continue;
      const u8* row = &red_[static_cast<std::size_t>(d - n_) * n_];
      for (unsigned j = 0; j < n_; ++j) buf[j] += v * row[j];
      buf[d] = 0;
    }
    Element r = make();
    for (unsigned j = 0; j < n_; ++j) r.c_[j] = static_cast<u8>(buf[j] % p_);
    return r;
  }

  Embedding build_embedding(const Field& sub) const {
    // Subfield elements = kernel of (p^k-power map - identity).
    unsigned k = sub.n_;
    const LinearMap& fr = p_power_map(k % n_);
    // Build (fr - I) row-major and row reduce to find the kernel basis.
    std::vector<u8> m(static_cast<std::size_t>(n_) * n_, 0);
    for (unsigned col = 0; col < n_; ++col)
      for (unsigned row = 0; row < n_; ++row) {
        u8 v = fr.m[static_cast<std::size_t>(col) * n_ + row];
        if (row == col) v = static_cast<u8>((v + p_ - 1) % p_);
        m[static_cast<std::size_t>(row) * n_ + col] = v;
      }
    std::vector<int> pivot_col(n_, -1);
    unsigned rank = 0;
    auto inv_fp = [this](unsigned v) {
      for (unsigned i = 1; i < p_; ++i)
        if (i * v % p_ == 1) return i;
      throw internal_error("no inverse mod p");
    };
    for (unsigned col = 0; col < n_ && rank < n_; ++col) {
      unsigned sel = rank;
      while (sel < n_ && m[static_cast<std::size_t>(sel) * n_ + col] == 0) ++sel;
      if (sel == n_) continue;
      for (unsigned j = 0; j < n_; ++j) std::swap(m[static_cast<std::size_t>(sel) * n_ + j], m[static_cast<std::size_t>(rank) * n_ + j]);
      unsigned f = inv_fp(m[static_cast<std::size_t>(rank) * n_ + col]);
      for (unsigned j = 0; j < n_; ++j) m[static_cast<std::size_t>(rank) * n_ + j] = static_cast<u8>(m[static_cast<std::size_t>(rank) * n_ + j] * f % p_);
      for (unsigned r2 = 0; r2 < n_; ++r2) {
        if (r2 == rank) continue;
        u8 c = m[static_cast<std::size_t>(r2) * n_ + col];
        if (!c) continue;
        for (unsigned j = 0; j < n_; ++j) {
          unsigned v = m[static_cast<std::size_t>(r2) * n_ + j] + (p_ - 1) * c * m[static_cast<std::size_t>(rank) * n_ + j];
          m[static_cast<std::size_t>(r2) * n_ + j] = static_cast<u8>(v % p_);
        }
      }
      pivot_col[rank] = static_cast<int>(col);
      ++rank;
    }
    // kernel dimension must be k
    if (n_ - rank != k) throw internal_error("unexpected subfield dimension");
    std::vector<Element> basis;
    std::vector<bool> is_pivot(n_, false);
    for (unsigned r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
    for (unsigned col = 0; col < n_; ++col) {
      if (is_pivot[col]) continue;
      Element b = make();
      b.c_[col] = 1;
      for (unsigned r = 0; r < rank; ++r) {
        u8 v = m[static_cast<std::size_t>(r) * n_ + col];
        if (v) b.c_[pivot_col[r]] = static_cast<u8>((p_ - v) % p_);
      }
      basis.push_back(b);
    }
    // Enumerate the subfield, evaluate sub's modulus, keep roots.
    std::vector<u8> submod = sub.mod_;
    submod.push_back(1);
    u64 best = ~0ull;
    Element best_root = zero();
    std::vector<u8> digits(k, 0);
    u64 count = sub.order_;
    for (u64 idx = 0; idx < count; ++idx) {
      Element cand = zero();
      u64 t = idx;
      for (unsigned i = 0; i < k; ++i) {
        u8 d = static_cast<u8>(t % p_);
        t /= p_;
        if (d) {
          Element scaled = basis[i];
          for (unsigned j = 0; j < n_; ++j) scaled.c_[j] = static_cast<u8>(scaled.c_[j] * d % p_);
          cand = add(cand, scaled);
        }
      }
      // evaluate submod at cand
      Element acc = scalar(submod.back());
      for (unsigned i = static_cast<unsigned>(submod.size() - 1); i-- > 0;) {
        acc = mul(acc, cand);
        acc = add(acc, scalar(submod[i]));
      }
      if (acc.is_zero()) {
        u64 ix = index_of(cand);
        if (ix < best) {
          best = ix;
          best_root = cand;
        }
      }
    }
    if (best == ~0ull) throw internal_error("subfield modulus has no root");
    Embedding em;
    em.sub = &sub;
    em.root_index = best;
    em.fwd.assign(static_cast<std::size_t>(sub.n_) * n_, 0);
    Element pw = one();
    for (unsigned i = 0; i < sub.n_; ++i) {
      for (unsigned j = 0; j < n_; ++j) em.fwd[static_cast<std::size_t>(i) * n_ + j] = pw.c_[j];
      pw = mul(pw, best_root);
    }
    // Row reduce fwd^T (n rows, sub.n cols) with a transform for projection.
    std::vector<u8> a(static_cast<std::size_t>(n_) * sub.n_, 0);
    for (unsigned i = 0; i < sub.n_; ++i)
      for (unsigned j = 0; j < n_; ++j) a[static_cast<std::size_t>(j) * sub.n_ + i] = em.fwd[static_cast<std::size_t>(i) * n_ + j];
    std::vector<u8> t(static_cast<std::size_t>(n_) * n_, 0);
    for (unsigned j = 0; j < n_; ++j) t[static_cast<std::size_t>(j) * n_ + j] = 1;
    unsigned rank2 = 0;
    em.pivot_of_row.assign(n_, -1);
    for (unsigned col = 0; col < sub.n_; ++col) {
      unsigned sel = rank2;
      while (sel < n_ && a[static_cast<std::size_t>(sel) * sub.n_ + col] == 0) ++sel;
      if (sel == n_) continue;
      for (unsigned j = 0; j < sub.n_; ++j) std::swap(a[static_cast<std::size_t>(sel) * sub.n_ + j], a[static_cast<std::size_t>(rank2) * sub.n_ + j]);
      for (unsigned j = 0; j < n_; ++j) std::swap(t[static_cast<std::size_t>(sel) * n_ + j], t[static_cast<std::size_t>(rank2) * n_ + j]);
      unsigned f = inv_fp(a[static_cast<std::size_t>(rank2) * sub.n_ + col]);
      for (unsigned j = 0; j < sub.n_; ++j) a[static_cast<std::size_t>(rank2) * sub.n_ + j] = static_cast<u8>(a[static_cast<std::size_t>(rank2) * sub.n_ + j] * f % p_);
      for (unsigned j = 0; j < n_; ++j) t[static_cast<std::size_t>(rank2) * n_ + j] = static_cast<u8>(t[static_cast<std::size_t>(rank2) * n_ + j] * f % p_);
      for (unsigned r2 = 0; r2 < n_; ++r2) {
        if (r2 == rank2) continue;
        u8 c = a[static_cast<std::size_t>(r2) * sub.n_ + col];
        if (!c) continue;
        for (unsigned j = 0; j < sub.n_; ++j) {
          unsigned v = a[static_cast<std::size_t>(r2) * sub.n_ + j] + (p_ - 1) * c * a[static_cast<std::size_t>(rank2) * sub.n_ + j];
          a[static_cast<std::size_t>(r2) * sub.n_ + j] = static_cast<u8>(v % p_);
        }
        for (unsigned j = 0; j < n_; ++j) {
          unsigned v = t[static_cast<std::size_t>(r2) * n_ + j] + (p_ - 1) * c * t[static_cast<std::size_t>(rank2) * n_ + j];
          t[static_cast<std::size_t>(r2) * n_ + j] = static_cast<u8>(v % p_);
        }
      }
      em.pivot_of_row[rank2] = static_cast<int>(col);
      ++rank2;
    }
    if (rank2 != sub.n_) throw internal_error("embedding matrix is rank deficient");
    em.row_ops = std::move(t);
    return em;
  }

  const Embedding& find_embedding(const Field& sub) const {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = embeddings_.find(&sub);
    if (it == embeddings_.end()) throw usage_error("subfield is not registered");
    return it->second;
  }

  unsigned p_;
  unsigned n_;
  std::vector<u8> mod_;
  u64 order_;
  std::vector<u8> red_;

  mutable std::mutex cache_mu_;
  mutable std::map<unsigned, LinearMap> frob_cache_;
  mutable std::map<unsigned, LinearMap> trace_cache_;
  mutable std::map<const Field*, Embedding> embeddings_;
};

inline bool Element::operator==(const Element& o) const {
  if (f_ != o.f_) throw usage_error("comparing elements of different fields");
  return c_ == o.c_;
}

inline Element operator+(const Element& a, const Element& b) {
  if (!a.field()) throw usage_error("null element");
  return a.field()->add(a, b);
}
inline Element operator-(const Element& a, const Element& b) {
  if (!a.field()) throw usage_error("null element");
  return a.field()->sub(a, b);
}
inline Element operator*(const Element& a, const Element& b) {
  if (!a.field()) throw usage_error("null element");
  return a.field()->mul(a, b);
}
inline Element operator/(const Element& a, const Element& b) {
  if (!a.field()) throw usage_error("null element");
  return a.field()->div(a, b);
}

}  // namespace maxcurves::ff
