#include "fglab/endo.hpp"

#include <sstream>

namespace fglab::endo {

namespace {

bool in_fph(const Fq& a, int h) { return a.frobenius(h) == a; }

// is d a power of p? returns the exponent, or -1
int ppower_exponent(long d, int p) {
  int r = 0;
  while (d % p == 0) {
    d /= p;
    ++r;
  }
  return d == 1 ? r : -1;
}

long binom_mod_p(long n, long k, int p) {
  // Lucas
  long r = 1;
  while (n || k) {
    long nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    // C(nd, kd) mod p by the small triangle
    long c = 1;
    for (long i = 0; i < kd; ++i) c = c * (nd - i) / (i + 1);
    r = r * (c % p) % p;
    n /= p;
    k /= p;
  }
  return r;
}

// Online univariate powers [s^k]_d of a series built degree by degree.
class OnlinePowers {
public:
  OnlinePowers(GfRing ring, int N) : ring_(ring), N_(N) {
    pow_.assign(static_cast<size_t>(N + 1),
                std::vector<Fq>(static_cast<size_t>(N + 1), ring.zero()));
    s_.assign(static_cast<size_t>(N + 1), ring.zero());
  }

  // [s^k]_d; valid for k >= 2 once prepare(d) ran, for k = 1 after commit(d)
  const Fq& at(int k, int d) const { return pow_[static_cast<size_t>(k)][static_cast<size_t>(d)]; }

  void prepare(int d) {
    for (int k = 2; k <= d; ++k) {
      Fq acc = ring_.zero();
      for (int a = 1; a + (k - 1) <= d; ++a) {
        if (s_[static_cast<size_t>(a)].is_zero()) continue;
        acc = ring_.add(acc, ring_.mul(s_[static_cast<size_t>(a)],
                                       pow_[static_cast<size_t>(k - 1)][static_cast<size_t>(d - a)]));
      }
      pow_[static_cast<size_t>(k)][static_cast<size_t>(d)] = acc;
    }
  }

  void commit(int d, const Fq& sd) {
    s_[static_cast<size_t>(d)] = sd;
    pow_[1][static_cast<size_t>(d)] = sd;
  }

private:
  GfRing ring_;
  int N_;
  std::vector<Fq> s_;
  std::vector<std::vector<Fq>> pow_;
};

}  // namespace

EndoSolution solve_endomorphism(const FormalGroupLaw& L, const Fq& alpha, int r,
                                const FreeChoicePolicy& policy, int window) {
  const GfRing& ring = L.ring();
  const int p = L.p();
  if (!L.height().finite)
    throw std::domain_error("solve_endomorphism: law has no finite height in the window");
  const int h = L.height().h;
  const int W = window > 0 ? std::min(window, L.prec()) : L.prec();

  EndoSolution sol;
  sol.window = W;
  sol.e = GfSeries(ring, W);
  if (alpha.is_zero()) return sol;
  if (!in_fph(alpha, h))
    throw std::invalid_argument("solve_endomorphism: alpha must lie in F_{p^h}");
  long lead = 1;
  for (int i = 0; i < r; ++i) {
    lead *= p;
    if (lead > W)
      throw std::invalid_argument("solve_endomorphism: p^r exceeds the window");
  }
  for (const auto& [deg, val] : policy.choices)
    if (!in_fph(val, h))
      throw std::invalid_argument("solve_endomorphism: policy value outside F_{p^h}");

  fgl::BivPowerTable gpow(L.table(), W);
  OnlinePowers epow(ring, W);
  const auto& G = L.table();

  for (int d = 1; d <= W; ++d) {
    epow.prepare(d);
    // rho[a] = [e o G]_d - [G(e(x), e(y))]_d at x^a y^{d-a}, with e_d = 0
    std::vector<Fq> rho(static_cast<size_t>(d + 1), ring.zero());
    for (int j = 1; j < d; ++j) {
      const Fq& c = sol.e[j];
      if (c.is_zero()) continue;
      const auto& row = gpow.at(j, d);
      for (int a = 0; a <= d; ++a)
        if (!row[static_cast<size_t>(a)].is_zero())
          rho[static_cast<size_t>(a)] =
              ring.add(rho[static_cast<size_t>(a)], ring.mul(c, row[static_cast<size_t>(a)]));
    }
    // [e^i]_deg with the unknown e_d treated as 0
    auto epart = [&](int i, int deg) -> Fq {
      if (i == 0) return deg == 0 ? ring.one() : ring.zero();
      if (i == 1) return deg < d ? sol.e[deg] : ring.zero();
      return epow.at(i, deg);
    };
    for (int a = 0; a <= d; ++a) {
      int b = d - a;
      Fq rhs = ring.zero();
      for (int i = (a > 0 ? 1 : 0); i <= a; ++i) {
        Fq ei = epart(i, a);
        if (ei.is_zero()) continue;
        for (int j = (b > 0 ? 1 : 0); j <= b; ++j) {
          Fq g = G.coeff_or_zero(i, j);
          if (g.is_zero()) continue;
          Fq ej = epart(j, b);
          if (ej.is_zero()) continue;
          rhs = ring.add(rhs, ring.mul(g, ring.mul(ei, ej)));
        }
      }
      rho[static_cast<size_t>(a)] = ring.sub(rho[static_cast<size_t>(a)], rhs);
    }

    // equation: rho + c_d ((x+y)^d - x^d - y^d) = 0
    int rr = ppower_exponent(d, p);
    Fq cd = ring.zero();
    if (rr < 0) {
      // pivot: smallest 0 < a < d with C(d, a) != 0 mod p
      int pivot = -1;
      for (int a = 1; a < d; ++a)
        if (binom_mod_p(d, a, p) != 0) {
          pivot = a;
          break;
        }
      // d is not a p-power, so a pivot exists by Lucas
      Fq coef = ring.from_int(binom_mod_p(d, pivot, p));
      cd = ring.neg(ring.mul(rho[static_cast<size_t>(pivot)], ring.inv(coef)));
      if (!in_fph(cd, h)) {
        sol.ok = false;
        sol.obstruction_degree = d;
        sol.obstruction = "forced coefficient lies outside F_{p^h}";
        sol.e = sol.e.with_prec(d - 1);
        sol.window = d - 1;
        return sol;
      }
      sol.ledger.push_back({d, LedgerEntry::kForced, cd});
    } else {
      if (d < lead)
        cd = ring.zero();
      else if (d == lead) {
        cd = alpha;
        sol.ledger.push_back({d, LedgerEntry::kSeed, cd});
      } else {
        auto it = policy.choices.find(d);
        cd = it == policy.choices.end() ? ring.zero() : it->second;
        sol.ledger.push_back({d, LedgerEntry::kFree, cd});
      }
    }
    // full homogeneous consistency at this degree
    for (int a = 0; a <= d; ++a) {
      Fq want = ring.zero();
      if (a > 0 && a < d && !cd.is_zero())
        want = ring.mul(cd, ring.from_int(binom_mod_p(d, a, p)));
      if (!ring.eq(rho[static_cast<size_t>(a)], ring.neg(want))) {
        sol.ok = false;
        sol.obstruction_degree = d;
        std::ostringstream os;
        os << "nonvanishing obstruction at degree " << d << ", monomial x^" << a << " y^"
           << (d - a);
        sol.obstruction = os.str();
        sol.e = sol.e.with_prec(d - 1);
        sol.window = d - 1;
        return sol;
      }
    }
    sol.e.set(d, cd);
    epow.commit(d, cd);
  }
  return sol;
}

GfSeries commutation_residual(const GfSeries& u, const GfSeries& psi) {
  return sub(compose(psi, u), compose(u, psi));
}

CommutantSolution solve_commutant(const FormalGroupLaw& L, const GfSeries& u,
                                  const std::map<int, Fq>& prescribed, int D,
                                  const FreeChoicePolicy& policy) {
  const GfRing& ring = L.ring();
  const int p = L.p();
  if (!L.height().finite)
    throw std::domain_error("solve_commutant: law has no finite height in the window");
  const int h = L.height().h;
  if (D > L.prec() || D > u.prec())
    throw std::invalid_argument("solve_commutant: window exceeds available precision");
  if (ring.is_zero(u.coeff_or_zero(1)))
    throw std::invalid_argument("solve_commutant: u must be invertible");

  CommutantSolution sol;
  sol.window = D;
  sol.psi = GfSeries(ring, D);

  auto best_effort_residual = [&](const GfSeries& base) {
    GfSeries trial = base;
    for (const auto& [deg, val] : prescribed)
      if (deg >= 1 && deg <= D) trial.set(deg, val);
    GfSeries res = commutation_residual(u.with_prec(D), trial);
    Valn v = valuation(res);
    return v.finite ? static_cast<int>(v.v) : -1;
  };

  for (int d = 1; d <= D; ++d) {
    Fq chi = sol.psi[d];
    int s = ppower_exponent(d, p);
    auto pres = prescribed.find(d);
    if (s >= 0) {
      Fq target;
      bool is_prescribed = pres != prescribed.end();
      if (is_prescribed)
        target = pres->second;
      else {
        auto pol = policy.choices.find(d);
        target = pol == policy.choices.end() ? chi : ring.add(chi, pol->second);
      }
      Fq delta = ring.sub(target, chi);
      if (!delta.is_zero()) {
        if (!in_fph(delta, h)) {
          sol.feasible = false;
          sol.infeasible_degree = d;
          sol.reason =
              "coefficient at degree " + std::to_string(d) +
              " lies outside F_{p^h}; no series with it commutes with a nontorsion automorphism";
          sol.residual_witness = best_effort_residual(sol.psi);
          sol.residual = valuation(commutation_residual(u.with_prec(D), sol.psi));
          return sol;
        }
        EndoSolution basic = solve_endomorphism(L, delta, s, {}, D);
        if (!basic.ok) {
          sol.feasible = false;
          sol.infeasible_degree = basic.obstruction_degree;
          sol.reason = "endomorphism solve failed: " + basic.obstruction;
          return sol;
        }
        sol.psi = fgl::g_add(L, sol.psi, basic.e);
      }
      sol.ledger.push_back(
          {d, is_prescribed ? LedgerEntry::kPrescribed : LedgerEntry::kFree, sol.psi[d]});
    } else {
      if (pres != prescribed.end() && !ring.eq(pres->second, chi)) {
        sol.feasible = false;
        sol.infeasible_degree = d;
        sol.reason = "coefficient at degree " + std::to_string(d) +
                     " is forced to a different value by the lower-degree data";
        sol.residual_witness = best_effort_residual(sol.psi);
        sol.residual = valuation(commutation_residual(u.with_prec(D), sol.psi));
        return sol;
      }
      sol.ledger.push_back({d, LedgerEntry::kForced, chi});
    }
  }

  GfSeries res = commutation_residual(u.with_prec(D), sol.psi);
  sol.residual = valuation(res);
  if (sol.residual.finite) {
    sol.feasible = false;
    sol.infeasible_degree = static_cast<int>(sol.residual.v);
    sol.residual_witness = sol.infeasible_degree;
    sol.reason = "completed endomorphism does not commute with u within the window";
  }
  return sol;
}

Decomposition nearest_endomorphism(const FormalGroupLaw& L, const GfSeries& psi) {
  const GfRing& ring = L.ring();
  const int p = L.p();
  const int h = L.height().h;
  const int W = std::min(psi.prec(), L.prec());
  detail::require_no_constant(psi, "nearest_endomorphism");

  Decomposition dec;
  dec.endo_part = GfSeries(ring, W);
  GfSeries target = psi.with_prec(W);
  long last_v = 0;
  for (;;) {
    GfSeries delta = fgl::g_sub(L, target, dec.endo_part);
    Valn v = valuation(delta);
    dec.remainder = delta;
    dec.remainder_valuation = v;
    if (!v.finite) {
      dec.stop = Decomposition::kRemainderZero;
      return dec;
    }
    if (v.v <= last_v && dec.rounds > 0)
      throw std::logic_error("nearest_endomorphism: remainder valuation did not increase");
    last_v = v.v;
    int r = ppower_exponent(v.v, p);
    if (r < 0) {
      dec.stop = Decomposition::kDegreeNotPPower;
      return dec;
    }
    Fq alpha = delta[static_cast<int>(v.v)];
    if (!in_fph(alpha, h)) {
      dec.stop = Decomposition::kCoeffOutsideSubfield;
      return dec;
    }
    EndoSolution basic = solve_endomorphism(L, alpha, r, {}, W);
    if (!basic.ok) throw std::logic_error("nearest_endomorphism: " + basic.obstruction);
    dec.endo_part = fgl::g_add(L, dec.endo_part, basic.e);
    ++dec.rounds;
  }
}

mpq_class V_endo(const FormalGroupLaw& L, const GfSeries& z) {
  if (!L.height().finite) throw std::domain_error("V_endo: height must be finite");
  auto chk = fgl::is_endomorphism(L, z);
  if (!chk.ok) throw std::invalid_argument("V_endo: input is not an endomorphism on the window");
  Valn v = valuation(z);
  if (!v.finite) throw std::invalid_argument("V_endo: zero to precision");
  int e = ppower_exponent(v.v, L.p());
  if (e < 0)
    throw std::domain_error("V_endo: v_x is not a p-power; not a valid endomorphism");
  mpq_class r(e, L.height().h);
  r.canonicalize();
  return r;
}

StableRange in_stable_range(int p, int h, const GfSeries& u) {
  Valn w = fgl::w_proximity(u);
  if (!w.finite) return StableRange{true, true};
  // strict: w > p^{h/(p-1)}  <=>  w^{p-1} > p^h
  mpz_class lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(w.v),
                static_cast<unsigned long>(p - 1));
  mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(h));
  return StableRange{lhs > rhs, false};
}

StableRange in_stable_range(const FormalGroupLaw& L, const GfSeries& u) {
  if (!L.height().finite) throw std::domain_error("in_stable_range: height must be finite");
  return in_stable_range(L.p(), L.height().h, u);
}

std::vector<GrowthEntry> iterate_growth(int p, int h, const GfSeries& u, int M) {
  const GfRing& ring = u.ring();
  if (!ring.eq(u.coeff_or_zero(1), ring.one()))
    throw std::invalid_argument("iterate_growth: u'(0) must be 1");
  std::vector<GrowthEntry> rows;
  GfSeries cur = u;
  mpz_class ph;  // p^h
  mpz_ui_pow_ui(ph.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(h));
  for (int m = 0; m <= M; ++m) {
    GrowthEntry e;
    e.m = m;
    e.w = fgl::w_proximity(cur);
    if (e.w.finite) {
      mpz_class wp1;
      mpz_ui_pow_ui(wp1.get_mpz_t(), static_cast<unsigned long>(e.w.v),
                    static_cast<unsigned long>(p - 1));
      e.kase = wp1 < ph ? GrowthEntry::kBelow
                        : (wp1 == ph ? GrowthEntry::kBoundary : GrowthEntry::kAbove);
    }
    rows.push_back(e);
    if (!e.w.finite || m == M) break;
    cur = iterate(cur, p);
    // prediction check against the measured next value
    Valn wn = fgl::w_proximity(cur);
    GrowthEntry& row = rows.back();
    if (wn.finite) {
      row.prediction_checked = true;
      switch (row.kase) {
        case GrowthEntry::kBelow: {
          mpz_class pred;
          mpz_ui_pow_ui(pred.get_mpz_t(), static_cast<unsigned long>(row.w.v),
                        static_cast<unsigned long>(p));
          row.prediction_ok = (pred == wn.v);
          break;
        }
        case GrowthEntry::kBoundary: {
          // w(u^{o p})^{p-1} >= p^{ph}
          mpz_class lhs, rhs;
          mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(wn.v),
                        static_cast<unsigned long>(p - 1));
          mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(p),
                        static_cast<unsigned long>(p) * static_cast<unsigned long>(h));
          row.prediction_ok = (lhs >= rhs);
          break;
        }
        case GrowthEntry::kAbove:
          row.prediction_ok = (mpz_class(row.w.v) * ph == wn.v);
          break;
        default:
          row.prediction_checked = false;
      }
    }
  }
  return rows;
}

HeightEstimate estimate_height(const GfSeries& u, int p) {
  const GfRing& ring = u.ring();
  HeightEstimate est;
  if (!ring.eq(u.coeff_or_zero(1), ring.one())) {
    est.error = "u'(0) must be 1 (remove the torsion part first)";
    return est;
  }
  Valn w0 = fgl::w_proximity(u);
  if (!w0.finite) {
    est.error = "torsion-or-identity to precision";
    return est;
  }
  est.w_sequence.push_back(w0.v);
  GfSeries cur = u;
  for (;;) {
    cur = iterate(cur, p);
    Valn w = fgl::w_proximity(cur);
    if (!w.finite) break;
    long prev = est.w_sequence.back();
    if (w.v % prev != 0) {
      est.error = "iterate growth is not multiplicative; not an automorphism?";
      return est;
    }
    est.w_sequence.push_back(w.v);
    est.ratios.push_back(w.v / prev);
    size_t n = est.ratios.size();
    if (n >= 2 && est.ratios[n - 1] == est.ratios[n - 2]) {
      long r = est.ratios[n - 1];
      int hc = ppower_exponent(r, p);
      if (hc > 0) {
        // stable-range confirmation at the base of the first agreeing ratio
        long wbase = est.w_sequence[n - 2];
        mpz_class lhs, rhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(wbase),
                      static_cast<unsigned long>(p - 1));
        mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(hc));
        if (lhs > rhs) {
          est.ok = true;
          est.h = hc;
          est.confidence = HeightEstimate::kTwoRatio;
          return est;
        }
      }
    }
  }
  // window exhausted: accept a single stable ratio when its base is already
  // confirmed to be in the stable range for the candidate height
  if (!est.ratios.empty()) {
    long r = est.ratios.back();
    int hc = ppower_exponent(r, p);
    if (hc > 0) {
      long wbase = est.w_sequence[est.w_sequence.size() - 2];
      mpz_class lhs, rhs;
      mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(wbase),
                    static_cast<unsigned long>(p - 1));
      mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(p),
                    static_cast<unsigned long>(hc));
      if (lhs > rhs) {
        est.ok = true;
        est.h = hc;
        est.confidence = HeightEstimate::kSingleRatio;
        return est;
      }
    }
  }
  est.error = est.ratios.empty() ? "torsion-or-identity to precision"
                                 : "precision exhausted before the ratio stabilized";
  return est;
}

PadicIterate padic_iterate(const GfSeries& rho, int p, const std::vector<int>& digits) {
  const GfRing& ring = rho.ring();
  if (!ring.eq(rho.coeff_or_zero(1), ring.one()))
    throw std::invalid_argument("padic_iterate: rho'(0) must be 1");
  for (int d : digits)
    if (d < 0 || d >= p) throw std::invalid_argument("padic_iterate: digit out of range");
  PadicIterate out;
  out.value = identity_series(ring, rho.prec());
  GfSeries stage = rho;  // rho^{o p^m}
  for (size_t m = 0; m < digits.size(); ++m) {
    if (digits[m] != 0) out.value = compose(out.value, iterate(stage, digits[m]));
    stage = iterate(stage, p);
  }
  Valn w = fgl::w_proximity(stage);
  if (w.finite) {
    out.window = w.v;
    out.covers_precision = false;
  } else {
    out.window = w.bound;
    out.covers_precision = true;
  }
  return out;
}

TorsionResult torsion_order(const GfSeries& u, long bound) {
  const GfRing& ring = u.ring();
  if (ring.is_zero(u.coeff_or_zero(1)))
    throw std::invalid_argument("torsion_order: u must be invertible");
  GfSeries x = identity_series(ring, u.prec());
  GfSeries cur = u;
  for (long n = 1; n <= bound; ++n) {
    if (cur == x) return TorsionResult{true, n, bound};
    if (n < bound) cur = compose(cur, u);
  }
  return TorsionResult{false, 0, bound};
}

RamificationResult ramification_number(const GfSeries& u, int p, int h, int M) {
  const GfRing& ring = u.ring();
  if (!ring.eq(u.coeff_or_zero(1), ring.one()))
    throw std::invalid_argument("ramification_number: u'(0) must be 1");
  Valn w0 = fgl::w_proximity(u);
  if (!w0.finite) throw std::invalid_argument("ramification_number: u is the identity to precision");

  RamificationResult out;
  GfSeries cur = u;
  std::vector<long> ws;
  for (int n = 0; n < M; ++n) {
    Valn w = fgl::w_proximity(cur);
    if (!w.finite) {
      out.window_exhausted = true;
      break;
    }
    ws.push_back(w.v);
    mpz_class pn1;
    mpz_ui_pow_ui(pn1.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(n + 1));
    mpq_class term(mpz_class(p - 1) * (w.v - 1), pn1);
    term.canonicalize();
    out.terms.push_back(term);
    if (n + 1 < M) cur = iterate(cur, p);
  }
  // limit guess: stable tail w_{n+1} = p^h w_n with the base in stable range
  if (ws.size() >= 2) {
    size_t n = ws.size() - 1;
    mpz_class ph;
    mpz_ui_pow_ui(ph.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(h));
    bool stable_step = (mpz_class(ws[n - 1]) * ph == ws[n]);
    mpz_class lhs;  // the step base must be in the stable range
    mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(ws[n - 1]),
                  static_cast<unsigned long>(p - 1));
    if (stable_step && lhs > ph) {
      mpz_class pn1;
      mpz_ui_pow_ui(pn1.get_mpz_t(), static_cast<unsigned long>(p),
                    static_cast<unsigned long>(n + 1));
      mpq_class lim(mpz_class(p - 1) * ws[n], pn1);
      lim.canonicalize();
      out.limit = lim;
    }
  }
  return out;
}

TeichmullerResult teichmuller_automorphism(const FormalGroupLaw& L, const GfSeries& e,
                                           int budget) {
  const GfRing& ring = L.ring();
  if (ring.is_zero(e.coeff_or_zero(1)))
    throw std::invalid_argument("teichmuller_automorphism: e must be invertible");
  long q = 1;
  for (int i = 0; i < L.height().h; ++i) q *= L.p();
  TeichmullerResult out;
  GfSeries cur = e.with_prec(std::min(e.prec(), L.prec()));
  for (int m = 0; m < budget; ++m) {
    GfSeries next = iterate(cur, q);
    ++out.iterations;
    if (next == cur) {
      out.stabilized = true;
      cur = next;
      break;
    }
    cur = next;
  }
  out.t = cur;
  if (out.stabilized) {
    GfSeries pw = iterate(out.t, q - 1);
    out.torsion_verified = (pw == identity_series(ring, out.t.prec()));
  }
  return out;
}

}  // namespace fglab::endo
