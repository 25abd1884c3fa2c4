#include "fglab/lift.hpp"

#include <tuple>

namespace fglab::lift {

namespace {

// nonzero monomials of l(x) + l(y): (i, j, coeff)
std::vector<std::tuple<int, int, mpq_class>> sum_of_logs_terms(int p, int h, int N) {
  std::vector<std::tuple<int, int, mpq_class>> terms;
  terms.emplace_back(1, 0, mpq_class(1));
  terms.emplace_back(0, 1, mpq_class(1));
  mpq_class coeff(1);
  long e = 1;
  long q = 1;
  for (int i = 0; i < h; ++i) q *= p;
  for (int m = 1;; ++m) {
    if (e > N / q) break;
    e *= q;
    coeff /= p;
    terms.emplace_back(static_cast<int>(e), 0, coeff);
    terms.emplace_back(0, static_cast<int>(e), coeff);
  }
  return terms;
}

}  // namespace

HondaLog honda_logarithm(int p, int h, int N) {
  if (!is_small_prime(p)) throw std::invalid_argument("honda_logarithm: p must be prime");
  if (h < 1 || N < 1) throw std::invalid_argument("honda_logarithm: need h >= 1, N >= 1");
  RatRing Q;
  TruncSeries<RatRing> l(Q, N);
  l.set(1, Q.one());
  mpq_class coeff(1);
  long q = 1;
  for (int i = 0; i < h; ++i) q *= p;
  long e = 1;
  for (int m = 1;; ++m) {
    if (e > N / q) break;
    e *= q;
    coeff /= p;
    l.set(static_cast<int>(e), coeff);
  }
  return HondaLog{p, h, std::move(l)};
}

BivSeries<RatRing> group_law_char0(const HondaLog& log) {
  RatRing Q;
  const int N = log.series.prec();
  TruncSeries<RatRing> linv = reverse(log.series);
  auto terms = sum_of_logs_terms(log.p, log.h, N);

  // Horner over the sparse bivariate T = l(x) + l(y):
  //   acc_k = a_k + acc_{k+1} * T,  G = acc_1 * T
  // where acc_k only matters through total degree N - k.
  BivSeries<RatRing> acc(Q, N), tmp(Q, N);
  auto mul_sparse = [&](const BivSeries<RatRing>& src, BivSeries<RatRing>& dst, int bound) {
    for (int d = 0; d <= bound; ++d)
      for (int i = 0; i <= d; ++i) dst.set(i, d - i, mpq_class(0));
    for (const auto& [ti, tj, tc] : terms) {
      int tdeg = ti + tj;
      if (tdeg > bound) continue;
      for (int d = 0; d <= bound - tdeg; ++d)
        for (int i = 0; i <= d; ++i) {
          const mpq_class& v = src.get(i, d - i);
          if (sgn(v) == 0) continue;
          dst.add_at(i + ti, d - i + tj, v * tc);
        }
    }
  };

  acc.set(0, 0, linv[N]);
  for (int e = N - 1; e >= 1; --e) {
    mul_sparse(acc, tmp, N - e);
    tmp.add_at(0, 0, linv[e]);
    std::swap(acc, tmp);
  }
  mul_sparse(acc, tmp, N);
  return tmp;
}

TruncSeries<RatRing> multiplication_char0(const HondaLog& log, long a) {
  RatRing Q;
  const int N = log.series.prec();
  TruncSeries<RatRing> al = scale(mpq_class(a), log.series);
  TruncSeries<RatRing> linv = reverse(log.series);
  if (a == 0) return TruncSeries<RatRing>(Q, N);
  return compose(linv, al);
}

IntegralityResult integrality_check(const BivSeries<RatRing>& B, int p) {
  for (int d = 0; d <= B.prec(); ++d)
    for (int i = 0; i <= d; ++i) {
      const mpq_class& c = B.get(i, d - i);
      if (mpz_fdiv_ui(c.get_den().get_mpz_t(), static_cast<unsigned long>(p)) == 0)
        return IntegralityResult{false, i, d - i, c};
    }
  return IntegralityResult{};
}

IntegralityResult integrality_check(const TruncSeries<RatRing>& f, int p) {
  for (int d = 0; d <= f.prec(); ++d) {
    const mpq_class& c = f[d];
    if (mpz_fdiv_ui(c.get_den().get_mpz_t(), static_cast<unsigned long>(p)) == 0)
      return IntegralityResult{false, d, -1, c};
  }
  return IntegralityResult{};
}

namespace {

Fq reduce_coeff(const mpq_class& c, const FieldSpec* F, int i, int j) {
  unsigned long p = static_cast<unsigned long>(F->p());
  unsigned long den = mpz_fdiv_ui(c.get_den().get_mpz_t(), p);
  if (den == 0) {
    throw std::domain_error("reduce_mod_p: coefficient at x^" + std::to_string(i) +
                            (j >= 0 ? " y^" + std::to_string(j) : std::string()) +
                            " is not p-integral (" + c.get_str() + ")");
  }
  unsigned long num = mpz_fdiv_ui(c.get_num().get_mpz_t(), p);
  Fq numf = F->from_int(static_cast<long>(num));
  Fq denf = F->from_int(static_cast<long>(den));
  return numf * denf.inv();
}

}  // namespace

BivSeries<GfRing> reduce_mod_p(const BivSeries<RatRing>& B, const FieldSpec* target) {
  GfRing ring(target);
  BivSeries<GfRing> out(ring, B.prec());
  for (int d = 0; d <= B.prec(); ++d)
    for (int i = 0; i <= d; ++i) {
      const mpq_class& c = B.get(i, d - i);
      if (sgn(c) == 0) continue;
      out.set(i, d - i, reduce_coeff(c, target, i, d - i));
    }
  return out;
}

TruncSeries<GfRing> reduce_mod_p(const TruncSeries<RatRing>& f, const FieldSpec* target) {
  GfRing ring(target);
  TruncSeries<GfRing> out(ring, f.prec());
  for (int d = 0; d <= f.prec(); ++d) {
    const mpq_class& c = f[d];
    if (sgn(c) == 0) continue;
    out.set(d, reduce_coeff(c, target, d, -1));
  }
  return out;
}

TruncSeries<GfRing> translate_by_monomial(int p, int h, int M, int Nx) {
  if (M < 1 || Nx < 1) throw std::invalid_argument("translate_by_monomial: need M, Nx >= 1");
  RatRing Q;
  const int J = Nx / M;
  HondaLog log = honda_logarithm(p, h, Nx);
  TruncSeries<RatRing> linv = reverse(log.series);
  auto terms = sum_of_logs_terms(p, h, Nx);

  // strip rows j = 0..J, row j holds x-coefficients 0..(Nx - M*j);
  // entry (i,j) of G survives into u = G(x, x^M) at exponent i + M*j.
  auto make_rows = [&]() {
    std::vector<std::vector<mpq_class>> rows(static_cast<size_t>(J + 1));
    for (int j = 0; j <= J; ++j)
      rows[static_cast<size_t>(j)].assign(static_cast<size_t>(Nx - M * j + 1), mpq_class(0));
    return rows;
  };
  auto acc = make_rows();
  auto tmp = make_rows();

  auto mul_sparse = [&](const std::vector<std::vector<mpq_class>>& src,
                        std::vector<std::vector<mpq_class>>& dst, int bound) {
    for (int j = 0; j <= J; ++j) {
      auto& row = dst[static_cast<size_t>(j)];
      long lim = std::min<long>(static_cast<long>(row.size()) - 1, bound - static_cast<long>(M) * j);
      for (long i = 0; i <= lim; ++i) row[static_cast<size_t>(i)] = 0;
    }
    for (const auto& [ti, tj, tc] : terms) {
      if (tj > J) continue;
      for (int j = 0; j + tj <= J; ++j) {
        const auto& srow = src[static_cast<size_t>(j)];
        auto& drow = dst[static_cast<size_t>(j + tj)];
        long lim = std::min<long>(static_cast<long>(srow.size()) - 1,
                                  std::min<long>(bound - static_cast<long>(M) * (j + tj) - ti,
                                                 static_cast<long>(drow.size()) - 1 - ti));
        for (long i = 0; i <= lim; ++i) {
          const mpq_class& v = srow[static_cast<size_t>(i)];
          if (sgn(v) == 0) continue;
          drow[static_cast<size_t>(i + ti)] += v * tc;
        }
      }
    }
  };

  acc[0][0] = linv[Nx];
  for (int e = Nx - 1; e >= 1; --e) {
    mul_sparse(acc, tmp, Nx - e);
    tmp[0][0] += linv[e];
    std::swap(acc, tmp);
  }
  mul_sparse(acc, tmp, Nx);

  const FieldSpec* Fp = FieldSpec::get(p, 1);
  GfRing ring(Fp);
  TruncSeries<GfRing> u(ring, Nx);
  for (int j = 0; j <= J; ++j) {
    const auto& row = tmp[static_cast<size_t>(j)];
    for (size_t i = 0; i < row.size(); ++i) {
      if (sgn(row[i]) == 0) continue;
      long e = static_cast<long>(i) + static_cast<long>(M) * j;
      if (e > Nx) continue;
      Fq v = reduce_coeff(row[i], Fp, static_cast<int>(i), j);
      u.set(static_cast<int>(e), u[static_cast<int>(e)] + v);
    }
  }
  return u;
}

}  // namespace fglab::lift
