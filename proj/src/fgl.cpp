#include "fglab/fgl.hpp"

namespace fglab::fgl {

std::string AxiomFailure::describe() const {
  std::string s = axiom + " fails at x^" + std::to_string(i) + " y^" + std::to_string(j);
  if (k >= 0) s += " z^" + std::to_string(k);
  return s;
}

BivPowerTable::BivPowerTable(const GfBiv& B, int W) : W_(W) {
  const GfRing& ring = B.ring();
  rows_.resize(static_cast<size_t>(offset(W) + W));
  for (int d = 1; d <= W; ++d) {
    for (int j = 1; j <= d; ++j) {
      auto& row = rows_[static_cast<size_t>(offset(d) + (j - 1))];
      row.assign(static_cast<size_t>(d + 1), ring.zero());
      if (j == 1) {
        for (int a = 0; a <= d; ++a) row[static_cast<size_t>(a)] = B.coeff_or_zero(a, d - a);
        continue;
      }
      // [B^j]_d = sum_t [B^{j-1}]_t * [B]_{d-t}
      for (int t = j - 1; t <= d - 1; ++t) {
        const auto& u = at(j - 1, t);
        for (int a1 = 0; a1 <= t; ++a1) {
          if (ring.is_zero(u[static_cast<size_t>(a1)])) continue;
          int d2 = d - t;
          for (int a2 = 0; a2 <= d2; ++a2) {
            Fq b = B.coeff_or_zero(a2, d2 - a2);
            if (b.is_zero()) continue;
            row[static_cast<size_t>(a1 + a2)] =
                ring.add(row[static_cast<size_t>(a1 + a2)], ring.mul(u[static_cast<size_t>(a1)], b));
          }
        }
      }
    }
  }
}

namespace {

// G(x, s(x)) with all coefficients of s below degree `upto` already chosen;
// shared by the degree-by-degree inverse-series solve.
// Maintains online univariate powers of the partial series.
class RowEval {
public:
  RowEval(const GfBiv& G, int N) : G_(G), ring_(G.ring()), N_(N) {
    pow_.resize(static_cast<size_t>(N + 1));
    for (auto& v : pow_) v.assign(static_cast<size_t>(N + 1), ring_.zero());
    // pow_[0] is unused; pow_[k][d] = [s^k]_d
  }

  // fill [s^k]_d for k >= 2; these only involve s_{<d}, so they must be
  // computed before the degree-d coefficient is solved
  void prepare(int d) {
    s_.resize(static_cast<size_t>(d + 1), ring_.zero());
    for (int k = 2; k <= d; ++k) {
      Fq acc = ring_.zero();
      for (int a = 1; a + (k - 1) <= d; ++a) {
        const Fq& sa = s_[static_cast<size_t>(a)];
        if (sa.is_zero()) continue;
        acc = ring_.add(acc, ring_.mul(sa, pow_[static_cast<size_t>(k - 1)][static_cast<size_t>(d - a)]));
      }
      pow_[static_cast<size_t>(k)][static_cast<size_t>(d)] = acc;
    }
  }

  // value of sum_{i,j} G_{ij} x^i s(x)^j at degree d, with s_d treated as 0
  Fq partial_at(int d) const {
    Fq acc = ring_.zero();
    // j = 0 row: G(i, 0) x^i
    acc = ring_.add(acc, G_.coeff_or_zero(d, 0));
    for (int j = 1; j <= d; ++j)
      for (int b = j; b <= d; ++b) {
        int a = d - b;
        Fq g = G_.coeff_or_zero(a, j);
        if (g.is_zero()) continue;
        acc = ring_.add(acc, ring_.mul(g, pow_[static_cast<size_t>(j)][static_cast<size_t>(b)]));
      }
    return acc;
  }

  // record the solved s_d
  void commit(int d, const Fq& sd) {
    s_[static_cast<size_t>(d)] = sd;
    pow_[1][static_cast<size_t>(d)] = sd;
  }

private:
  const GfBiv& G_;
  GfRing ring_;
  int N_;
  std::vector<Fq> s_;
  std::vector<std::vector<Fq>> pow_;
};

GfSeries solve_inverse_series(const GfBiv& G) {
  const GfRing& ring = G.ring();
  const int N = G.prec();
  GfSeries iota(ring, N);
  RowEval ev(G, N);
  for (int d = 1; d <= N; ++d) {
    ev.prepare(d);
    // G(0,1) = 1 multiplies the unknown, so iota_d = -partial
    Fq val = ev.partial_at(d);
    Fq sd = ring.neg(val);
    iota.set(d, sd);
    ev.commit(d, sd);
  }
  return iota;
}

GfSeries raw_g_add(const GfBiv& G, const GfSeries& a, const GfSeries& b) {
  return b_substitute(G, a, b);
}

GfSeries raw_bracket(const GfBiv& G, long n, int N) {
  GfRing ring = G.ring();
  GfSeries x = identity_series(ring, N);
  if (n == 0) return GfSeries(ring, N);
  if (n == 1) return x;
  // double-and-add over the bits of n, most significant first
  int bits = 0;
  while ((n >> bits) > 1) ++bits;
  GfSeries acc = x;
  for (int i = bits - 1; i >= 0; --i) {
    acc = raw_g_add(G, acc, acc);
    if ((n >> i) & 1) acc = raw_g_add(G, acc, x);
  }
  return acc;
}

}  // namespace

std::optional<AxiomFailure> FormalGroupLaw::check_axioms(const GfBiv& B, int assoc_prec) {
  const GfRing& ring = B.ring();
  const int N = B.prec();
  if (!ring.is_zero(B.coeff_or_zero(0, 0))) return AxiomFailure{"identity", 0, 0};
  // G(x,0) = x and G(0,y) = y
  for (int d = 1; d <= N; ++d) {
    Fq want = (d == 1) ? ring.one() : ring.zero();
    if (!ring.eq(B.get(d, 0), want)) return AxiomFailure{"identity", d, 0};
    if (!ring.eq(B.get(0, d), want)) return AxiomFailure{"identity", 0, d};
  }
  for (int d = 2; d <= N; ++d)
    for (int i = 0; 2 * i <= d; ++i)
      if (!ring.eq(B.get(i, d - i), B.get(d - i, i)))
        return AxiomFailure{"commutativity", i, d - i};
  if (assoc_prec > 0) {
    auto w = lift::associativity_witness(B, std::min(assoc_prec, N));
    if (w) return AxiomFailure{"associativity", w->i, w->j, w->k};
  }
  return std::nullopt;
}

FormalGroupLaw FormalGroupLaw::validate(GfBiv B, ValidationOptions opts) {
  const int N = B.prec();
  int ap = opts.check_assoc ? (opts.assoc_prec > 0 ? std::min(opts.assoc_prec, N)
                                                   : std::min(N, 48))
                            : 0;
  if (auto fail = check_axioms(B, ap))
    throw std::domain_error("FormalGroupLaw::validate: " + fail->describe());
  FormalGroupLaw L;
  L.G_ = std::move(B);
  L.assoc_prec_ = ap;
  L.iota_ = solve_inverse_series(L.G_);
  L.mult_p_ = raw_bracket(L.G_, L.G_.ring().characteristic(), N);
  Valn v = valuation(L.mult_p_);
  if (!v.finite) {
    L.height_ = Height{false, 0, 0, v.bound};
  } else {
    long q = v.v;
    int h = 0;
    int p = L.G_.ring().characteristic();
    while (q > 1 && q % p == 0) {
      q /= p;
      ++h;
    }
    if (q != 1)
      throw std::domain_error("FormalGroupLaw::validate: v_x([p]) = " + std::to_string(v.v) +
                              " is not a power of p");
    L.height_ = Height{true, h, v.v, 0};
  }
  return L;
}

FormalGroupLaw FormalGroupLaw::truncated(int M, ValidationOptions opts) const {
  return validate(G_.with_prec(std::min(M, prec())), opts);
}

FormalGroupLaw FormalGroupLaw::over_field(const FieldSpec* bigger, ValidationOptions opts) const {
  if (bigger->p() != p())
    throw std::invalid_argument("over_field: characteristic mismatch");
  GfRing nr(bigger);
  GfBiv B2(nr, prec());
  for (int d = 0; d <= prec(); ++d)
    for (int i = 0; i <= d; ++i) {
      const Fq& c = G_.get(i, d - i);
      if (c.is_zero()) continue;
      if (!c.in_subfield(1))
        throw std::invalid_argument("over_field: coefficient outside the prime subfield");
      B2.set(i, d - i, nr.from_int(c.coord(0)));
    }
  return validate(std::move(B2), opts);
}

GfSeries g_add(const FormalGroupLaw& L, const GfSeries& a, const GfSeries& b) {
  return b_substitute(L.table(), a, b);
}

GfSeries g_neg(const FormalGroupLaw& L) { return L.neg_series(); }

GfSeries g_sub(const FormalGroupLaw& L, const GfSeries& a, const GfSeries& b) {
  int M = std::min(b.prec(), L.prec());
  return g_add(L, a, compose(L.neg_series().with_prec(M), b.with_prec(M)));
}

GfSeries bracket_int(const FormalGroupLaw& L, long n) {
  if (n < 0) {
    GfSeries pos = raw_bracket(L.table(), -n, L.prec());
    return compose(L.neg_series(), pos);
  }
  return raw_bracket(L.table(), n, L.prec());
}

BracketZp bracket_zp(const FormalGroupLaw& L, const std::vector<int>& digits) {
  if (!L.height().finite)
    throw std::domain_error("bracket_zp: the height must be finite within the window");
  const int p = L.p();
  const int h = L.height().h;
  const int N = L.prec();
  for (int d : digits)
    if (d < 0 || d >= p) throw std::invalid_argument("bracket_zp: digit out of range");
  // value: Horner over digits, [a] = [d_0] +_G [a'] o [p]
  GfRing ring = L.ring();
  GfSeries acc(ring, N);
  for (size_t i = digits.size(); i-- > 0;) {
    if (!acc.is_zero()) acc = compose(acc, L.mult_p());
    if (digits[i] != 0) acc = g_add(L, bracket_int(L, digits[i]), acc);
  }
  // guarantee window: agreement with the limit modulo x^{p^{Kh}}
  long window = 1;
  bool covered = false;
  for (size_t i = 0; i < digits.size() * static_cast<size_t>(h); ++i) {
    window *= p;
    if (window > N) {
      window = N + 1;
      covered = true;
      break;
    }
  }
  return BracketZp{std::move(acc), window, covered};
}

EndoCheck is_endomorphism(const FormalGroupLaw& L, const GfSeries& e, int window) {
  const GfRing& ring = L.ring();
  detail::require_no_constant(e, "is_endomorphism");
  int W = std::min(L.prec(), e.prec());
  if (window > 0) W = std::min(W, window);
  // univariate powers of e
  std::vector<GfSeries> ep;
  ep.reserve(static_cast<size_t>(W + 1));
  GfSeries one(ring, W);
  one.set(0, ring.one());
  ep.push_back(one);
  for (int i = 1; i <= W; ++i) ep.push_back(mul_to(ep.back(), e, W));

  BivPowerTable pow(L.table(), W);
  for (int d = 1; d <= W; ++d) {
    // lhs_d = [e o G]_d = sum_j e_j [G^j]_d
    std::vector<Fq> lhs(static_cast<size_t>(d + 1), ring.zero());
    for (int j = 1; j <= d; ++j) {
      const Fq& c = e[j];
      if (c.is_zero()) continue;
      const auto& row = pow.at(j, d);
      for (int a = 0; a <= d; ++a)
        if (!row[static_cast<size_t>(a)].is_zero())
          lhs[static_cast<size_t>(a)] = ring.add(lhs[static_cast<size_t>(a)],
                                                 ring.mul(c, row[static_cast<size_t>(a)]));
    }
    // rhs_d coefficient at x^a y^{d-a}: sum_{i,j} G_ij [e^i]_a [e^j]_{d-a}
    for (int a = 0; a <= d; ++a) {
      int b = d - a;
      Fq rhs = ring.zero();
      for (int i = (a > 0 ? 1 : 0); i <= a; ++i) {
        const Fq& ei = ep[static_cast<size_t>(i)][a];
        if (ei.is_zero()) continue;
        for (int j = (b > 0 ? 1 : 0); j <= b; ++j) {
          Fq g = L.table().coeff_or_zero(i, j);
          if (g.is_zero()) continue;
          const Fq& ej = ep[static_cast<size_t>(j)][b];
          if (ej.is_zero()) continue;
          rhs = ring.add(rhs, ring.mul(g, ring.mul(ei, ej)));
        }
      }
      if (!ring.eq(lhs[static_cast<size_t>(a)], rhs)) return EndoCheck{false, a, b, W};
    }
  }
  return EndoCheck{true, -1, -1, W};
}

GfSeries g_commutator(const FormalGroupLaw& L, const GfSeries& a, const GfSeries& b) {
  return g_sub(L, compose(a, b), compose(b, a));
}

GfBiv b_substitute_split(const GfBiv& B, const GfSeries& a, const GfSeries& b) {
  const GfRing& ring = B.ring();
  detail::require_no_constant(a, "b_substitute_split");
  detail::require_no_constant(b, "b_substitute_split");
  int W = std::min({B.prec(), a.prec(), b.prec()});
  std::vector<GfSeries> ap, bp;
  GfSeries one(ring, W);
  one.set(0, ring.one());
  ap.push_back(one);
  bp.push_back(one);
  for (int i = 1; i <= W; ++i) {
    ap.push_back(mul_to(ap.back(), a, W));
    bp.push_back(mul_to(bp.back(), b, W));
  }
  GfBiv out(ring, W);
  for (int i = 0; i <= W; ++i)
    for (int j = 0; i + j <= W; ++j) {
      Fq g = B.coeff_or_zero(i, j);
      if (g.is_zero()) continue;
      const GfSeries& fa = ap[static_cast<size_t>(i)];
      const GfSeries& fb = bp[static_cast<size_t>(j)];
      for (int u = i; u <= W; ++u) {
        if (fa[u].is_zero()) continue;
        Fq gu = ring.mul(g, fa[u]);
        for (int v = j; u + v <= W; ++v) {
          if (fb[v].is_zero()) continue;
          out.add_at(u, v, ring.mul(gu, fb[v]));
        }
      }
    }
  return out;
}

GfBiv conjugate_table(const FormalGroupLaw& L, const GfSeries& psi) {
  const GfRing& ring = L.ring();
  if (ring.is_zero(psi.coeff_or_zero(1)))
    throw std::invalid_argument("conjugate_table: psi'(0) must be nonzero");
  GfSeries inv = reverse(psi.with_prec(std::min(psi.prec(), L.prec())));
  GfBiv inner = b_substitute_split(L.table(), inv, inv);
  return compose_uni_biv(psi.with_prec(inner.prec()), inner);
}

FormalGroupLaw conjugate_law(const FormalGroupLaw& L, const GfSeries& psi,
                             ValidationOptions opts) {
  return FormalGroupLaw::validate(conjugate_table(L, psi), opts);
}

Valn w_proximity(const GfSeries& u) {
  GfSeries d = u;
  d.set(1, u.ring().sub(u[1], u.ring().one()));
  return valuation(d);
}

}  // namespace fglab::fgl
