#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fglab/rings.hpp"

namespace fglab {

/// x-adic valuation result. At precision N a zero series can only be
/// certified as v_x >= N+1, never as infinite; `finite == false` carries that
/// sentinel and `bound` holds N+1.
struct Valn {
  long v = 0;
  bool finite = true;
  long bound = 0;  // meaningful when !finite: v_x >= bound

  bool operator==(const Valn& o) const = default;
  static Valn at(long v) { return Valn{v, true, 0}; }
  static Valn at_least(long b) { return Valn{0, false, b}; }
};

enum class ComposeStrategy { kHorner, kBlocked };

/// Univariate truncated series: coefficients of x^0..x^N are stored and
/// trusted ("precision N"). Series in this library almost always have zero
/// constant term; the slot is stored explicitly so that derivatives and unit
/// series (needed by reversion) fit the same type.
template <CoeffRing R>
class TruncSeries {
public:
  using Elem = typename R::Elem;

  TruncSeries() : prec_(-1) {}
  TruncSeries(R ring, int prec)
      : ring_(ring), prec_(prec), c_(static_cast<size_t>(prec + 1), ring.zero()) {
    if (prec < 0) throw std::invalid_argument("TruncSeries: negative precision");
  }

  const R& ring() const { return ring_; }
  int prec() const { return prec_; }

  const Elem& operator[](int d) const { return c_[static_cast<size_t>(d)]; }
  void set(int d, Elem v) {
    if (d < 0 || d > prec_) throw std::out_of_range("TruncSeries::set");
    c_[static_cast<size_t>(d)] = std::move(v);
  }
  /// Coefficient read that treats indices beyond the window as zero.
  Elem coeff_or_zero(int d) const {
    return (d >= 0 && d <= prec_) ? c_[static_cast<size_t>(d)] : ring_.zero();
  }

  /// Copy with precision M: truncates or zero-extends.
  TruncSeries with_prec(int M) const {
    TruncSeries r(ring_, M);
    for (int d = 0; d <= std::min(M, prec_); ++d) r.c_[static_cast<size_t>(d)] = c_[static_cast<size_t>(d)];
    return r;
  }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!ring_.is_zero(v)) return false;
    return true;
  }

  bool operator==(const TruncSeries& o) const {
    if (!ring_.same(o.ring_) || prec_ != o.prec_) return false;
    for (int d = 0; d <= prec_; ++d)
      if (!ring_.eq(c_[static_cast<size_t>(d)], o.c_[static_cast<size_t>(d)])) return false;
    return true;
  }

private:
  R ring_;
  int prec_;
  std::vector<Elem> c_;
};

/// Bivariate truncated series: coefficients c_{i,j} for all total degrees
/// i+j <= N, stored in a dense triangle.
template <CoeffRing R>
class BivSeries {
public:
  using Elem = typename R::Elem;

  BivSeries() : prec_(-1) {}
  BivSeries(R ring, int prec)
      : ring_(ring), prec_(prec), c_(slots(prec), ring.zero()) {
    if (prec < 0) throw std::invalid_argument("BivSeries: negative precision");
  }

  static size_t slots(int N) {
    return static_cast<size_t>(N + 1) * static_cast<size_t>(N + 2) / 2;
  }
  static size_t idx(int i, int j) {
    int d = i + j;
    return static_cast<size_t>(d) * static_cast<size_t>(d + 1) / 2 + static_cast<size_t>(i);
  }

  const R& ring() const { return ring_; }
  int prec() const { return prec_; }

  const Elem& get(int i, int j) const { return c_[idx(i, j)]; }
  Elem coeff_or_zero(int i, int j) const {
    return (i >= 0 && j >= 0 && i + j <= prec_) ? c_[idx(i, j)] : ring_.zero();
  }
  void set(int i, int j, Elem v) {
    if (i < 0 || j < 0 || i + j > prec_) throw std::out_of_range("BivSeries::set");
    c_[idx(i, j)] = std::move(v);
  }
  void add_at(int i, int j, const Elem& v) { c_[idx(i, j)] = ring_.add(c_[idx(i, j)], v); }

  BivSeries with_prec(int M) const {
    BivSeries r(ring_, M);
    int lim = std::min(M, prec_);
    for (int d = 0; d <= lim; ++d)
      for (int i = 0; i <= d; ++i) r.c_[idx(i, d - i)] = c_[idx(i, d - i)];
    return r;
  }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!ring_.is_zero(v)) return false;
    return true;
  }

  bool operator==(const BivSeries& o) const {
    if (!ring_.same(o.ring_) || prec_ != o.prec_) return false;
    for (size_t k = 0; k < c_.size(); ++k)
      if (!ring_.eq(c_[k], o.c_[k])) return false;
    return true;
  }

private:
  R ring_;
  int prec_;
  std::vector<Elem> c_;
};

namespace detail {

template <CoeffRing R>
void require_same_ring(const R& a, const R& b) {
  if (!a.same(b)) throw std::invalid_argument("series: coefficient domains differ");
}

template <CoeffRing R>
void require_no_constant(const TruncSeries<R>& f, const char* who) {
  if (!f.ring().is_zero(f.coeff_or_zero(0)))
    throw std::invalid_argument(std::string(who) + ": series has a nonzero constant term");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// univariate arithmetic

template <CoeffRing R>
TruncSeries<R> add(const TruncSeries<R>& f, const TruncSeries<R>& g) {
  detail::require_same_ring(f.ring(), g.ring());
  int N = std::min(f.prec(), g.prec());
  TruncSeries<R> r(f.ring(), N);
  for (int d = 0; d <= N; ++d) r.set(d, f.ring().add(f[d], g[d]));
  return r;
}

template <CoeffRing R>
TruncSeries<R> sub(const TruncSeries<R>& f, const TruncSeries<R>& g) {
  detail::require_same_ring(f.ring(), g.ring());
  int N = std::min(f.prec(), g.prec());
  TruncSeries<R> r(f.ring(), N);
  for (int d = 0; d <= N; ++d) r.set(d, f.ring().sub(f[d], g[d]));
  return r;
}

template <CoeffRing R>
TruncSeries<R> neg(const TruncSeries<R>& f) {
  TruncSeries<R> r(f.ring(), f.prec());
  for (int d = 0; d <= f.prec(); ++d) r.set(d, f.ring().neg(f[d]));
  return r;
}

template <CoeffRing R>
TruncSeries<R> scale(const typename R::Elem& a, const TruncSeries<R>& f) {
  TruncSeries<R> r(f.ring(), f.prec());
  for (int d = 0; d <= f.prec(); ++d) r.set(d, f.ring().mul(a, f[d]));
  return r;
}

/// Cauchy product truncated at `bound`.
template <CoeffRing R>
TruncSeries<R> mul_to(const TruncSeries<R>& f, const TruncSeries<R>& g, int bound) {
  detail::require_same_ring(f.ring(), g.ring());
  const R& ring = f.ring();
  TruncSeries<R> r(ring, bound);
  int fmax = std::min(f.prec(), bound);
  for (int i = 0; i <= fmax; ++i) {
    if (ring.is_zero(f[i])) continue;
    int jmax = std::min(g.prec(), bound - i);
    for (int j = 0; j <= jmax; ++j) {
      if (ring.is_zero(g[j])) continue;
      r.set(i + j, ring.add(r[i + j], ring.mul(f[i], g[j])));
    }
  }
  return r;
}

template <CoeffRing R>
TruncSeries<R> mul(const TruncSeries<R>& f, const TruncSeries<R>& g) {
  return mul_to(f, g, std::min(f.prec(), g.prec()));
}

template <CoeffRing R>
Valn valuation(const TruncSeries<R>& f) {
  for (int d = 0; d <= f.prec(); ++d)
    if (!f.ring().is_zero(f[d])) return Valn::at(d);
  return Valn::at_least(f.prec() + 1);
}

template <CoeffRing R>
TruncSeries<R> identity_series(R ring, int N) {
  TruncSeries<R> r(ring, N);
  if (N >= 1) r.set(1, ring.one());
  return r;
}

template <CoeffRing R>
TruncSeries<R> monomial_series(R ring, int N, int d, typename R::Elem coeff) {
  TruncSeries<R> r(ring, N);
  if (d <= N) r.set(d, std::move(coeff));
  return r;
}

inline TruncSeries<GfRing> frobenius_series(GfRing ring, int N) {
  return monomial_series(ring, N, ring.characteristic(), ring.one());
}

template <CoeffRing R>
TruncSeries<R> derivative(const TruncSeries<R>& f) {
  int N = std::max(f.prec() - 1, 0);
  TruncSeries<R> r(f.ring(), N);
  for (int d = 0; d + 1 <= f.prec() && d <= N; ++d)
    r.set(d, f.ring().mul(f.ring().from_int(d + 1), f[d + 1]));
  return r;
}

// ---------------------------------------------------------------------------
// composition

namespace detail {

/// g^e truncated at `bound`, using a shared square chain.
template <CoeffRing R>
TruncSeries<R> power_from_chain(const std::vector<TruncSeries<R>>& squares,
                                const TruncSeries<R>& /*g*/, long e, int bound, R ring) {
  TruncSeries<R> acc(ring, bound);
  acc.set(0, ring.one());
  for (size_t k = 0; k < squares.size() && e; ++k, e >>= 1)
    if (e & 1) acc = mul_to(acc, squares[k], bound);
  return acc;
}

template <CoeffRing R>
TruncSeries<R> compose_dense(const TruncSeries<R>& f, const TruncSeries<R>& g, int N) {
  const R& ring = f.ring();
  int d0 = std::min(f.prec(), N);
  TruncSeries<R> acc(ring, std::max(N - d0, 0));
  acc.set(0, f[d0]);
  for (int d = d0 - 1; d >= 0; --d) {
    acc = mul_to(acc, g, N - d);
    acc.set(0, ring.add(acc[0], f[d]));
  }
  return acc.with_prec(N);
}

template <CoeffRing R>
TruncSeries<R> compose_sparse(const TruncSeries<R>& f, const TruncSeries<R>& g, int N) {
  const R& ring = f.ring();
  // square chain g^{2^k}
  std::vector<TruncSeries<R>> squares;
  squares.push_back(g.with_prec(N));
  while ((1L << squares.size()) <= N)
    squares.push_back(mul_to(squares.back(), squares.back(), N));
  TruncSeries<R> r(ring, N);
  r.set(0, f.coeff_or_zero(0));
  for (int e = 1; e <= std::min(f.prec(), N); ++e) {
    if (ring.is_zero(f[e])) continue;
    TruncSeries<R> ge = power_from_chain(squares, g, e, N, ring);
    for (int d = e; d <= N; ++d) r.set(d, ring.add(r[d], ring.mul(f[e], ge[d])));
  }
  return r;
}

template <CoeffRing R>
TruncSeries<R> compose_blocked(const TruncSeries<R>& f, const TruncSeries<R>& g, int N) {
  const R& ring = f.ring();
  int m = 1;
  while (m * m < N + 1) ++m;
  std::vector<TruncSeries<R>> baby;
  baby.reserve(static_cast<size_t>(m));
  TruncSeries<R> one(ring, N);
  one.set(0, ring.one());
  baby.push_back(one);
  for (int i = 1; i < m; ++i) baby.push_back(mul_to(baby.back(), g, N));
  TruncSeries<R> giant = mul_to(baby.back(), g, N);
  int jmax = N / m;
  TruncSeries<R> acc(ring, 0);
  for (int j = jmax; j >= 0; --j) {
    int bound = N - j * m;
    TruncSeries<R> qj(ring, bound);
    for (int i = 0; i < m; ++i) {
      int e = j * m + i;
      if (e > std::min(f.prec(), N)) break;
      if (ring.is_zero(f[e])) continue;
      for (int d = 0; d <= std::min(bound, baby[static_cast<size_t>(i)].prec()); ++d)
        qj.set(d, ring.add(qj[d], ring.mul(f[e], baby[static_cast<size_t>(i)][d])));
    }
    if (j == jmax)
      acc = qj;
    else {
      acc = mul_to(acc, giant, bound);
      for (int d = 0; d <= bound; ++d) acc.set(d, ring.add(acc[d], qj[d]));
    }
  }
  return acc.with_prec(N);
}

}  // namespace detail

/// f(g(x)) truncated to min(N_f, N_g). Requires v_x(g) >= 1. The constant
/// slot of f is carried through. Very sparse f is evaluated by shared
/// binary powering; otherwise Horner, or the blocked baby-step/giant-step
/// scheme when requested.
template <CoeffRing R>
TruncSeries<R> compose(const TruncSeries<R>& f, const TruncSeries<R>& g,
                       ComposeStrategy strategy = ComposeStrategy::kHorner) {
  detail::require_same_ring(f.ring(), g.ring());
  detail::require_no_constant(g, "compose");
  int N = std::min(f.prec(), g.prec());
  int nnz = 0;
  for (int d = 1; d <= std::min(f.prec(), N); ++d)
    if (!f.ring().is_zero(f[d])) ++nnz;
  int lg = 0;
  while ((1 << lg) < N + 1) ++lg;
  if (nnz <= std::max(2 * lg, 4)) return detail::compose_sparse(f, g, N);
  if (strategy == ComposeStrategy::kBlocked) return detail::compose_blocked(f, g, N);
  return detail::compose_dense(f, g, N);
}

/// Multiplicative inverse of a unit series (nonzero constant term).
template <CoeffRing R>
TruncSeries<R> inverse_unit(const TruncSeries<R>& u, int N) {
  const R& ring = u.ring();
  if (ring.is_zero(u.coeff_or_zero(0)))
    throw std::invalid_argument("inverse_unit: constant term is zero");
  TruncSeries<R> v(ring, 0);
  v.set(0, ring.inv(u[0]));
  int D = 0;
  while (D < N) {
    int D2 = std::min(2 * D + 1, N);
    TruncSeries<R> uv = mul_to(u.with_prec(std::min(u.prec(), D2)), v, D2);
    TruncSeries<R> two_minus(ring, D2);
    for (int d = 0; d <= D2; ++d) two_minus.set(d, ring.neg(uv[d]));
    two_minus.set(0, ring.add(two_minus[0], ring.from_int(2)));
    v = mul_to(v, two_minus, D2);
    D = D2;
  }
  return v;
}

/// Compositional inverse: g with f(g) = g(f) = x to precision N.
/// Requires v_x(f) = 1 with invertible linear coefficient. Newton iteration;
/// each step verifies nothing silently — the caller can compose to check.
template <CoeffRing R>
TruncSeries<R> reverse(const TruncSeries<R>& f) {
  const R& ring = f.ring();
  detail::require_no_constant(f, "reverse");
  if (f.prec() < 1 || ring.is_zero(f[1]))
    throw std::invalid_argument("reverse: linear coefficient must be invertible");
  int N = f.prec();
  typename R::Elem c1inv = ring.inv(f[1]);
  TruncSeries<R> g(ring, N);
  g.set(1, c1inv);
  int D = 1;
  TruncSeries<R> fp = derivative(f);
  while (D < N) {
    int D2 = std::min(2 * D + 1, N);
    TruncSeries<R> err = compose(f.with_prec(D2), g.with_prec(D2));
    err.set(1, ring.sub(err[1], ring.one()));
    if (!err.is_zero()) {
      TruncSeries<R> den = compose(fp.with_prec(D2), g.with_prec(D2));
      TruncSeries<R> corr = mul_to(err, inverse_unit(den, D2), D2);
      for (int d = 0; d <= D2; ++d) g.set(d, ring.sub(g[d], corr[d]));
    }
    D = D2;
  }
  return g;
}

/// n-fold composition iterate; n = 0 gives x, negative n uses the
/// compositional inverse. Iterates of f commute, so binary powering applies.
template <CoeffRing R>
TruncSeries<R> iterate(const TruncSeries<R>& f, long n) {
  const R& ring = f.ring();
  detail::require_no_constant(f, "iterate");
  TruncSeries<R> base = f;
  if (n < 0) {
    base = reverse(f);
    n = -n;
  }
  TruncSeries<R> r = identity_series(ring, f.prec());
  while (n) {
    if (n & 1) r = compose(r, base);
    base = n > 1 ? compose(base, base) : base;
    n >>= 1;
  }
  return r;
}

/// Coefficientwise Frobenius twist rho^{(p^r)} (exponents unchanged).
inline TruncSeries<GfRing> coeff_twist(const TruncSeries<GfRing>& f, int r) {
  TruncSeries<GfRing> out(f.ring(), f.prec());
  for (int d = 0; d <= f.prec(); ++d) out.set(d, f[d].frobenius(r));
  return out;
}

/// x -> x^{p^r} substitution; same precision window, degrees beyond it drop.
inline TruncSeries<GfRing> subst_ppower(const TruncSeries<GfRing>& f, int r) {
  long pe = 1;
  for (int i = 0; i < r; ++i) pe *= f.ring().characteristic();
  TruncSeries<GfRing> out(f.ring(), f.prec());
  for (int d = 0; d <= f.prec(); ++d) {
    if (f.ring().is_zero(f[d])) continue;
    long e = d * pe;
    if (e <= f.prec()) out.set(static_cast<int>(e), f[d]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// bivariate arithmetic

template <CoeffRing R>
BivSeries<R> badd(const BivSeries<R>& A, const BivSeries<R>& B) {
  detail::require_same_ring(A.ring(), B.ring());
  int N = std::min(A.prec(), B.prec());
  BivSeries<R> r(A.ring(), N);
  for (int d = 0; d <= N; ++d)
    for (int i = 0; i <= d; ++i) r.set(i, d - i, A.ring().add(A.get(i, d - i), B.get(i, d - i)));
  return r;
}

template <CoeffRing R>
BivSeries<R> bsub(const BivSeries<R>& A, const BivSeries<R>& B) {
  detail::require_same_ring(A.ring(), B.ring());
  int N = std::min(A.prec(), B.prec());
  BivSeries<R> r(A.ring(), N);
  for (int d = 0; d <= N; ++d)
    for (int i = 0; i <= d; ++i) r.set(i, d - i, A.ring().sub(A.get(i, d - i), B.get(i, d - i)));
  return r;
}

template <CoeffRing R>
BivSeries<R> bmul_to(const BivSeries<R>& A, const BivSeries<R>& B, int bound) {
  detail::require_same_ring(A.ring(), B.ring());
  const R& ring = A.ring();
  BivSeries<R> r(ring, bound);
  for (int d1 = 0; d1 <= std::min(A.prec(), bound); ++d1)
    for (int i1 = 0; i1 <= d1; ++i1) {
      const auto& a = A.get(i1, d1 - i1);
      if (ring.is_zero(a)) continue;
      int d2max = std::min(B.prec(), bound - d1);
      for (int d2 = 0; d2 <= d2max; ++d2)
        for (int i2 = 0; i2 <= d2; ++i2) {
          const auto& b = B.get(i2, d2 - i2);
          if (ring.is_zero(b)) continue;
          r.add_at(i1 + i2, d1 + d2 - i1 - i2, ring.mul(a, b));
        }
    }
  return r;
}

template <CoeffRing R>
BivSeries<R> bmul(const BivSeries<R>& A, const BivSeries<R>& B) {
  return bmul_to(A, B, std::min(A.prec(), B.prec()));
}

template <CoeffRing R>
Valn bvaluation(const BivSeries<R>& B) {
  for (int d = 0; d <= B.prec(); ++d)
    for (int i = 0; i <= d; ++i)
      if (!B.ring().is_zero(B.get(i, d - i))) return Valn::at(d);
  return Valn::at_least(B.prec() + 1);
}

/// B(f(x), g(x)) as a univariate series. Requires v_x(f), v_x(g) >= 1.
template <CoeffRing R>
TruncSeries<R> b_substitute(const BivSeries<R>& B, const TruncSeries<R>& f,
                            const TruncSeries<R>& g) {
  detail::require_same_ring(B.ring(), f.ring());
  detail::require_same_ring(B.ring(), g.ring());
  detail::require_no_constant(f, "b_substitute");
  detail::require_no_constant(g, "b_substitute");
  const R& ring = B.ring();
  int N = std::min({B.prec(), f.prec(), g.prec()});
  // powers of f
  std::vector<TruncSeries<R>> fp;
  fp.reserve(static_cast<size_t>(N + 1));
  TruncSeries<R> one(ring, N);
  one.set(0, ring.one());
  fp.push_back(one);
  for (int i = 1; i <= N; ++i) fp.push_back(mul_to(fp.back(), f, N));
  // Q_j = sum_i B(i,j) f^i, then Horner over g
  TruncSeries<R> acc(ring, 0);
  for (int j = N; j >= 0; --j) {
    int bound = N - j;
    TruncSeries<R> qj(ring, bound);
    for (int i = 0; i + j <= B.prec() && i <= bound; ++i) {
      const auto& c = B.get(i, j);
      if (ring.is_zero(c)) continue;
      for (int d = i; d <= bound; ++d) qj.set(d, ring.add(qj[d], ring.mul(c, fp[static_cast<size_t>(i)][d])));
    }
    if (j == N)
      acc = qj;
    else {
      acc = mul_to(acc, g, bound);
      for (int d = 0; d <= bound; ++d) acc.set(d, ring.add(acc[d], qj[d]));
    }
  }
  return acc;
}

/// B(U(x,y), V(x,y)) as a bivariate series; both substituted series must
/// have no constant term.
template <CoeffRing R>
BivSeries<R> b_substitute2(const BivSeries<R>& B, const BivSeries<R>& U,
                           const BivSeries<R>& V) {
  detail::require_same_ring(B.ring(), U.ring());
  detail::require_same_ring(B.ring(), V.ring());
  const R& ring = B.ring();
  if (!ring.is_zero(U.coeff_or_zero(0, 0)) || !ring.is_zero(V.coeff_or_zero(0, 0)))
    throw std::invalid_argument("b_substitute2: substituted series has a constant term");
  int N = std::min({B.prec(), U.prec(), V.prec()});
  std::vector<BivSeries<R>> up;
  up.reserve(static_cast<size_t>(N + 1));
  BivSeries<R> one(ring, N);
  one.set(0, 0, ring.one());
  up.push_back(one);
  for (int i = 1; i <= N; ++i) up.push_back(bmul_to(up.back(), U, N));
  BivSeries<R> acc(ring, 0);
  for (int j = N; j >= 0; --j) {
    int bound = N - j;
    BivSeries<R> rj(ring, bound);
    for (int i = 0; i + j <= B.prec() && i <= bound; ++i) {
      const auto& c = B.get(i, j);
      if (ring.is_zero(c)) continue;
      const auto& pw = up[static_cast<size_t>(i)];
      for (int d = i; d <= bound; ++d)
        for (int a = 0; a <= d; ++a) {
          const auto& v = pw.get(a, d - a);
          if (!ring.is_zero(v)) rj.add_at(a, d - a, ring.mul(c, v));
        }
    }
    if (j == N)
      acc = rj;
    else {
      acc = bmul_to(acc, V, bound);
      for (int d = 0; d <= bound; ++d)
        for (int a = 0; a <= d; ++a) acc.add_at(a, d - a, rj.get(a, d - a));
    }
  }
  return acc;
}

/// f(W(x,y)) for univariate f and bivariate W with v(W) >= 1.
template <CoeffRing R>
BivSeries<R> compose_uni_biv(const TruncSeries<R>& f, const BivSeries<R>& W) {
  detail::require_same_ring(f.ring(), W.ring());
  const R& ring = f.ring();
  if (!ring.is_zero(W.coeff_or_zero(0, 0)))
    throw std::invalid_argument("compose_uni_biv: W has a constant term");
  int N = std::min(f.prec(), W.prec());
  int d0 = std::min(f.prec(), N);
  BivSeries<R> acc(ring, std::max(N - d0, 0));
  acc.set(0, 0, f[d0]);
  for (int d = d0 - 1; d >= 0; --d) {
    acc = bmul_to(acc, W, N - d);
    acc.add_at(0, 0, f[d]);
  }
  return acc.with_prec(N);
}

template <CoeffRing R>
BivSeries<R> partial_x(const BivSeries<R>& B) {
  int N = std::max(B.prec() - 1, 0);
  BivSeries<R> r(B.ring(), N);
  for (int d = 0; d <= N; ++d)
    for (int i = 0; i <= d; ++i)
      r.set(i, d - i, B.ring().mul(B.ring().from_int(i + 1), B.get(i + 1, d - i)));
  return r;
}

template <CoeffRing R>
BivSeries<R> partial_y(const BivSeries<R>& B) {
  int N = std::max(B.prec() - 1, 0);
  BivSeries<R> r(B.ring(), N);
  for (int d = 0; d <= N; ++d)
    for (int i = 0; i <= d; ++i)
      r.set(i, d - i, B.ring().mul(B.ring().from_int(d - i + 1), B.get(i, d - i + 1)));
  return r;
}

template <CoeffRing R>
BivSeries<R> swap_xy(const BivSeries<R>& B) {
  BivSeries<R> r(B.ring(), B.prec());
  for (int d = 0; d <= B.prec(); ++d)
    for (int i = 0; i <= d; ++i) r.set(d - i, i, B.get(i, d - i));
  return r;
}

/// First total degree <= D at which f and g differ, if any.
template <CoeffRing R>
std::optional<int> first_difference(const TruncSeries<R>& f, const TruncSeries<R>& g, int D) {
  for (int d = 0; d <= D; ++d)
    if (!f.ring().eq(f.coeff_or_zero(d), g.coeff_or_zero(d))) return d;
  return std::nullopt;
}

}  // namespace fglab
