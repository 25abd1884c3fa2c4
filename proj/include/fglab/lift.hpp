#pragma once

#include <optional>

#include "fglab/series.hpp"

namespace fglab::lift {

/// The p-typical logarithm l(x) = x + sum_{m>0, p^{mh}<=N} p^{-m} x^{p^{mh}}
/// at precision N, over exact rationals.
struct HondaLog {
  int p = 0;
  int h = 0;
  TruncSeries<RatRing> series;
};

HondaLog honda_logarithm(int p, int h, int N);

/// G(x,y) = l^{-1}(l(x) + l(y)) over exact rationals, precision N = l's.
/// Degree-1 part is x + y; coefficients are p-integral (in fact integers).
BivSeries<RatRing> group_law_char0(const HondaLog& log);

/// l^{-1}(a * l(x)): the multiplication-by-a series of the char-0 law.
TruncSeries<RatRing> multiplication_char0(const HondaLog& log, long a);

struct IntegralityResult {
  bool ok = true;
  int i = -1, j = -1;  // witness monomial (j = -1 univariate)
  mpq_class coeff;
};

/// True iff every coefficient's denominator is coprime to p; otherwise the
/// offending monomial and coefficient.
IntegralityResult integrality_check(const BivSeries<RatRing>& B, int p);
IntegralityResult integrality_check(const TruncSeries<RatRing>& f, int p);

/// Coefficientwise reduction into the prime subfield of `target`
/// (numerator times inverse denominator mod p). Throws with the witness
/// monomial when a coefficient is not p-integral.
BivSeries<GfRing> reduce_mod_p(const BivSeries<RatRing>& B, const FieldSpec* target);
TruncSeries<GfRing> reduce_mod_p(const TruncSeries<RatRing>& f, const FieldSpec* target);

/// u(x) = G(x, x^M) over F_p at x-precision Nx, where G is the reduced
/// standardized law for (p, h). Evaluated on the weighted strip
/// {(i,j) : i + M*j <= Nx}, which the construction never leaves, so Nx can
/// exceed any feasible full-triangle precision. Used to serialize
/// automorphisms id +_G [monomial endomorphism] for height detection.
TruncSeries<GfRing> translate_by_monomial(int p, int h, int M, int Nx);

/// Witness monomial x^i y^j z^k at which B(B(x,y),z) != B(x,B(y,z)),
/// checked exactly through total degree M; nullopt when associative to M.
struct AssocWitness {
  int i = 0, j = 0, k = 0;
};

template <CoeffRing R>
std::optional<AssocWitness> associativity_witness(const BivSeries<R>& B, int M) {
  const R& ring = B.ring();
  BivSeries<R> W = B.with_prec(M);
  // powers of W in (x,y)
  std::vector<BivSeries<R>> P;
  P.reserve(static_cast<size_t>(M + 1));
  BivSeries<R> one(ring, M);
  one.set(0, 0, ring.one());
  P.push_back(one);
  for (int i = 1; i <= M; ++i) P.push_back(bmul_to(P.back(), W, M));

  // left side B(W(x,y), z), z-graded: L_k = sum_i B_{i,k} W^i
  std::vector<BivSeries<R>> L;
  for (int k = 0; k <= M; ++k) {
    BivSeries<R> Lk(ring, M - k);
    for (int i = 0; i + k <= B.prec() && i <= M - k; ++i) {
      const auto& c = B.get(i, k);
      if (ring.is_zero(c)) continue;
      const auto& pw = P[static_cast<size_t>(i)];
      for (int d = i; d <= M - k; ++d)
        for (int a = 0; a <= d; ++a) {
          const auto& v = pw.get(a, d - a);
          if (!ring.is_zero(v)) Lk.add_at(a, d - a, ring.mul(c, v));
        }
    }
    L.push_back(std::move(Lk));
  }

  // right side B(x, V(y,z)) with V = W read in variables (y,z)
  std::vector<BivSeries<R>> Rk;
  for (int k = 0; k <= M; ++k) Rk.emplace_back(ring, M - k);
  BivSeries<R> Vpow = one;
  for (int j = 0; j <= M; ++j) {
    if (j > 0) Vpow = bmul_to(Vpow, W, M);
    for (int i = 0; i + j <= B.prec() && i <= M; ++i) {
      const auto& c = B.get(i, j);
      if (ring.is_zero(c)) continue;
      for (int d = 0; d <= M - i; ++d)
        for (int b = 0; b <= d; ++b) {
          int k = d - b;
          const auto& v = Vpow.coeff_or_zero(b, k);
          if (ring.is_zero(v)) continue;
          if (i + b <= M - k) Rk[static_cast<size_t>(k)].add_at(i, b, ring.mul(c, v));
        }
    }
  }

  for (int k = 0; k <= M; ++k)
    for (int d = 0; d + k <= M; ++d)
      for (int a = 0; a <= d; ++a)
        if (!ring.eq(L[static_cast<size_t>(k)].get(a, d - a),
                     Rk[static_cast<size_t>(k)].get(a, d - a)))
          return AssocWitness{a, d - a, k};
  return std::nullopt;
}

}  // namespace fglab::lift
