#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fglab/endo.hpp"
#include "fglab/prng.hpp"

using namespace fglab;
using namespace fglab::fgl;
using namespace fglab::endo;

namespace {

FormalGroupLaw standard_law(int p, int h, int N, int field_deg = 0) {
  auto log = lift::honda_logarithm(p, h, N);
  auto G = lift::group_law_char0(log);
  const FieldSpec* F = FieldSpec::get(p, field_deg > 0 ? field_deg : 1);
  auto Gbar = lift::reduce_mod_p(G, FieldSpec::get(p, 1));
  auto L = FormalGroupLaw::validate(std::move(Gbar));
  return field_deg > 0 ? L.over_field(F) : L;
}

}  // namespace

TEST_CASE("solve_endomorphism: identity, [p], and a nontrivial leading coefficient") {
  auto L = standard_law(2, 2, 40, 2);
  GfRing ring = L.ring();
  Fq one = ring.one();

  auto id = solve_endomorphism(L, one, 0);
  CHECK(id.ok);
  CHECK(id.e == identity_series(ring, 40));

  auto mp = solve_endomorphism(L, one, 2);  // alpha=1, r=h: [p]_G = x^4
  CHECK(mp.ok);
  CHECK(mp.e == monomial_series(ring, 40, 4, one));

  Fq t = ring.F->gen();  // generator of F_4 inside F_4
  auto et = solve_endomorphism(L, t, 0);
  CHECK(et.ok);
  CHECK(et.e[1] == t);
  for (int d = 1; d <= 40; ++d) CHECK(et.e[d].in_subfield(2));
  CHECK(is_endomorphism(L, et.e).ok);

  // alpha outside F_{p^h} is rejected up front
  auto L16 = standard_law(2, 2, 24, 4);  // working field F_16, h = 2
  Fq g16 = L16.ring().F->gen();
  CHECK_FALSE(g16.in_subfield(2));
  CHECK_THROWS_AS(solve_endomorphism(L16, g16, 0), std::invalid_argument);
}

TEST_CASE("solve_endomorphism: free choices parameterize distinct endomorphisms") {
  auto L = standard_law(2, 2, 32, 2);
  GfRing ring = L.ring();
  Fq t = ring.F->gen();

  FreeChoicePolicy pol;
  pol.choices[4] = t;
  auto e = solve_endomorphism(L, ring.one(), 0, pol);
  CHECK(e.ok);
  CHECK(e.e[1] == ring.one());
  CHECK(e.e[4] == t);
  CHECK(is_endomorphism(L, e.e).ok);

  // ledger marks 4 as free, non-p-powers as forced
  bool saw_free4 = false;
  for (const auto& le : e.ledger)
    if (le.degree == 4) {
      saw_free4 = true;
      CHECK(le.kind == LedgerEntry::kFree);
    }
  CHECK(saw_free4);
}

TEST_CASE("solve_endomorphism windows in the frobenius family") {
  // x^{p^r} and alpha x^{p^r} leading monomials, gated by is_endomorphism
  auto L = standard_law(3, 2, 30, 2);
  GfRing ring = L.ring();
  Fq g = ring.F->gen();
  for (int r = 0; r <= 2; ++r) {
    auto s = solve_endomorphism(L, g, r);
    CHECK(s.ok);
    long pr = 1;
    for (int i = 0; i < r; ++i) pr *= 3;
    CHECK(valuation(s.e) == Valn::at(pr));
    CHECK(s.e[static_cast<int>(pr)] == g);
    CHECK(is_endomorphism(L, s.e).ok);
  }
}

TEST_CASE("commutation residual and solve_commutant positive controls") {
  auto L = standard_law(2, 2, 80, 4);  // working field F_16
  GfRing ring = L.ring();
  auto u = bracket_int(L, 5);  // [1+p^2], central nontorsion

  // psi = u commutes with itself
  CHECK(commutation_residual(u, u).is_zero());
  // brackets commute with u
  CHECK(commutation_residual(u, bracket_int(L, 7)).is_zero());
  // frobenius composites commute (everything here has F_2 coefficients)
  auto fr = frobenius_series(ring, 80);
  CHECK(commutation_residual(u, compose(fr, bracket_int(L, 3))).is_zero());

  // solve with prescribed derivative in F_4: the completed series commutes
  Fq t = ring.F->gen().pow(5);  // element of order 3: generator of F_4 inside F_16
  REQUIRE(t.in_subfield(2));
  REQUIRE_FALSE(t.in_subfield(1));
  auto sol = solve_commutant(L, u, {{1, t}}, 60);
  CHECK(sol.feasible);
  CHECK_FALSE(sol.residual.finite);
  CHECK(sol.psi[1] == t);
  CHECK(is_endomorphism(L, sol.psi, 60).ok);
  // Lemma-style subfield invariant on the whole solution
  for (int d = 1; d <= 60; ++d) CHECK(sol.psi[d].in_subfield(2));
}

TEST_CASE("solve_commutant: prescribed derivative outside F_{p^h} is infeasible with witness") {
  auto L = standard_law(2, 2, 80, 4);
  GfRing ring = L.ring();
  auto u = bracket_int(L, 5);
  Fq g = ring.F->gen();  // generator of F_16, not in F_4
  REQUIRE_FALSE(g.in_subfield(2));

  auto sol = solve_commutant(L, u, {{1, g}}, 80);
  CHECK_FALSE(sol.feasible);
  CHECK(sol.infeasible_degree == 1);
  // the best-effort series alpha*x exhibits a concrete residual within window
  CHECK(sol.residual_witness > 0);
  CHECK(sol.residual_witness <= 80);
}

TEST_CASE("commutant solutions survive the nearest-endomorphism shadow") {
  // forced coefficients of a completed commutant match an endomorphism
  // found by decomposing the completed solution
  auto L = standard_law(2, 2, 60, 4);
  auto u = bracket_int(L, 5);
  Fq t = L.ring().F->gen().pow(5);  // generator of F_4 inside F_16
  auto sol = solve_commutant(L, u, {{1, t}}, 60);
  REQUIRE(sol.feasible);
  auto dec = nearest_endomorphism(L, sol.psi);
  CHECK(dec.stop == Decomposition::kRemainderZero);
  CHECK(dec.endo_part == sol.psi);
  for (const auto& le : sol.ledger)
    if (le.kind == LedgerEntry::kForced)
      CHECK(dec.endo_part[le.degree] == le.value);
}

TEST_CASE("solve_commutant: forced-coefficient conflicts are reported") {
  auto L = standard_law(2, 2, 40, 2);
  GfRing ring = L.ring();
  auto u = bracket_int(L, 5);
  // [3] = x + x^4 + ...: prescribing c_1 = 1 and a wrong value at a forced
  // degree must be infeasible
  auto three = bracket_int(L, 3);
  int forced_deg = -1;
  for (int d = 2; d <= 40; ++d) {
    int dd = d;
    while (dd % 2 == 0) dd /= 2;
    if (dd != 1 && !three[d].is_zero()) {
      forced_deg = d;
      break;
    }
  }
  REQUIRE(forced_deg > 0);
  std::map<int, Fq> want{{1, ring.one()}, {4, three[4]}, {forced_deg, ring.add(three[forced_deg], ring.one())}};
  auto sol = solve_commutant(L, u, want, 40);
  CHECK_FALSE(sol.feasible);
  CHECK(sol.infeasible_degree == forced_deg);
}

TEST_CASE("nearest_endomorphism: endomorphisms decompose exactly; corruption is located") {
  auto L = standard_law(2, 2, 48, 2);
  GfRing ring = L.ring();

  auto three = bracket_int(L, 3);
  auto dec = nearest_endomorphism(L, three);
  CHECK(dec.stop == Decomposition::kRemainderZero);
  CHECK(dec.endo_part == three);
  CHECK_FALSE(dec.remainder_valuation.finite);

  // corrupt a non-p-power coefficient: v_x(delta) lands exactly there
  auto corrupted = three;
  int d0 = 12;  // not a power of 2
  corrupted.set(d0, ring.add(corrupted[d0], ring.one()));
  auto dec2 = nearest_endomorphism(L, corrupted);
  CHECK(dec2.stop == Decomposition::kDegreeNotPPower);
  CHECK(dec2.remainder_valuation == Valn::at(d0));
  CHECK(is_endomorphism(L, dec2.endo_part).ok);

  // idempotence: re-running on g +_G delta reproduces the split
  auto recombined = g_add(L, dec2.endo_part, dec2.remainder);
  CHECK(recombined == corrupted);
  auto dec3 = nearest_endomorphism(L, recombined);
  CHECK(dec3.remainder_valuation == dec2.remainder_valuation);
  CHECK(dec3.endo_part == dec2.endo_part);

  // derivative outside F_{p^h}: everything is remainder
  auto L16 = standard_law(2, 2, 24, 4);
  GfSeries psi(L16.ring(), 24);
  psi.set(1, L16.ring().F->gen());
  auto dec4 = nearest_endomorphism(L16, psi);
  CHECK(dec4.stop == Decomposition::kCoeffOutsideSubfield);
  CHECK(dec4.endo_part.is_zero());
  CHECK(dec4.remainder == psi);
}

TEST_CASE("V_endo") {
  auto L = standard_law(2, 2, 32);
  GfRing ring = L.ring();
  CHECK(V_endo(L, L.mult_p()) == mpq_class(1));
  CHECK(V_endo(L, identity_series(ring, 32)) == mpq_class(0));
  CHECK(V_endo(L, frobenius_series(ring, 32)) == RatRing::make(1, 2));
  GfSeries bad(ring, 32);
  bad.set(1, ring.one());
  bad.set(2, ring.one());
  CHECK_THROWS(std::ignore = V_endo(L, bad));
}

TEST_CASE("stable range: boundary cases from the w-arithmetic") {
  auto L22 = standard_law(2, 2, 80);
  // w([3]) = 4 = p^{h/(p-1)}: boundary, not stable
  CHECK_FALSE(in_stable_range(L22, bracket_int(L22, 3)).stable);
  // w([5]) = 16 > 4: stable
  CHECK(in_stable_range(L22, bracket_int(L22, 5)).stable);

  auto L32 = standard_law(3, 2, 30);
  // w([4]) = v_x([3]) = 9 > 3 = p^{h/(p-1)}: stable
  auto u4 = bracket_int(L32, 4);
  CHECK(w_proximity(u4) == Valn::at(9));
  CHECK(in_stable_range(L32, u4).stable);
  // boundary for (3,2) is w = 3: u = id +_G fr = G(x, x^3)
  auto ufr = lift::translate_by_monomial(3, 2, 3, 30);
  CHECK(w_proximity(ufr) == Valn::at(3));
  CHECK_FALSE(in_stable_range(3, 2, ufr).stable);

  // identity to precision: stable but window-limited
  auto sr = in_stable_range(L22, identity_series(L22.ring(), 80));
  CHECK(sr.stable);
  CHECK(sr.window_limited);
}

TEST_CASE("iterate growth trichotomy rows") {
  // case 3 on (2,2): u = [5], (16, 64) with exact factor p^h
  auto L = standard_law(2, 2, 80);
  auto rows = iterate_growth(2, 2, bracket_int(L, 5), 1);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0].w == Valn::at(16));
  CHECK(rows[0].kase == GrowthEntry::kAbove);
  CHECK(rows[0].prediction_checked);
  CHECK(rows[0].prediction_ok);
  CHECK(rows[1].w == Valn::at(64));

  // case 2 boundary on (2,2): u = [3], w = 4, next >= 16 (measured: 64)
  auto rows3 = iterate_growth(2, 2, bracket_int(L, 3), 1);
  CHECK(rows3[0].w == Valn::at(4));
  CHECK(rows3[0].kase == GrowthEntry::kBoundary);
  CHECK(rows3[0].prediction_ok);
  CHECK(rows3[1].w == Valn::at(64));

  // case 1 on (2,3): u = id +_G fr, w = 2 < 8, exact square growth
  auto L23 = standard_law(2, 3, 70);
  GfRing r23 = L23.ring();
  auto u = g_add(L23, identity_series(r23, 70), frobenius_series(r23, 70));
  auto rows1 = iterate_growth(2, 3, u, 2);
  REQUIRE(rows1.size() >= 3);
  CHECK(rows1[0].w == Valn::at(2));
  CHECK(rows1[0].kase == GrowthEntry::kBelow);
  CHECK(rows1[0].prediction_ok);
  CHECK(rows1[1].w == Valn::at(4));
  CHECK(rows1[1].prediction_ok);
  CHECK(rows1[2].w == Valn::at(16));

  // identity: sentinel at m = 0
  auto rows_id = iterate_growth(2, 2, identity_series(L.ring(), 80), 3);
  CHECK(rows_id.size() == 1);
  CHECK_FALSE(rows_id[0].w.finite);
}

TEST_CASE("estimate_height from the serialized automorphism alone") {
  // (2,2): u = [5] at N = 260 gives ratios (4, 4)
  auto u22 = lift::translate_by_monomial(2, 2, 16, 260);
  auto est = estimate_height(u22, 2);
  REQUIRE(est.ok);
  CHECK(est.h == 2);
  CHECK(est.confidence == HeightEstimate::kTwoRatio);

  // same automorphism at N = 64: single stable ratio, flagged
  auto u22s = lift::translate_by_monomial(2, 2, 16, 64);
  auto est2 = estimate_height(u22s, 2);
  REQUIRE(est2.ok);
  CHECK(est2.h == 2);
  CHECK(est2.confidence == HeightEstimate::kSingleRatio);

  // (3,1): u = [4] shows ratios (3,3,...)
  auto u31 = lift::translate_by_monomial(3, 1, 3, 100);
  auto est3 = estimate_height(u31, 3);
  REQUIRE(est3.ok);
  CHECK(est3.h == 1);
  CHECK(est3.confidence == HeightEstimate::kTwoRatio);

  // identity: clean error
  GfRing F2(FieldSpec::get(2, 1));
  auto bad = estimate_height(identity_series(F2, 40), 2);
  CHECK_FALSE(bad.ok);
  CHECK(bad.error == "torsion-or-identity to precision");
}

TEST_CASE("padic_iterate: integer digits match iterates; 1/2 squares to rho (p=3)") {
  auto L = standard_law(3, 1, 60);
  GfRing ring = L.ring();
  auto rho = bracket_int(L, 4);  // rho'(0) = 1

  auto one = padic_iterate(rho, 3, {1});
  CHECK(one.value == rho);
  auto two = padic_iterate(rho, 3, {2});
  CHECK(two.value == compose(rho, rho));
  auto five = padic_iterate(rho, 3, {2, 1});
  CHECK(five.value == iterate(rho, 5));

  // digits of 1/2 in Z_3: (2, 1, 1, 1, ...)
  auto half = padic_iterate(rho, 3, {2, 1, 1, 1, 1});
  auto sq = compose(half.value, half.value);
  // agreement with rho below the window
  for (int d = 1; d < static_cast<int>(half.window) && d <= 60; ++d) CHECK(sq[d] == rho[d]);
  // w(rho^{o 3^5}) = 3^6 > 60: the whole precision is certified
  CHECK(half.covers_precision);
  CHECK(half.window == 61);
  // with fewer digits the window is the measured w(rho^{o 3^K})
  auto rough = padic_iterate(rho, 3, {2, 1});
  CHECK_FALSE(rough.covers_precision);
  CHECK(rough.window == 27);

  // additivity of exponents on the common window
  auto a = padic_iterate(rho, 3, {1, 1});
  auto b = padic_iterate(rho, 3, {2, 0});
  auto ab = padic_iterate(rho, 3, {0, 2});
  auto comp = compose(a.value, b.value);
  for (int d = 1; d <= 60; ++d) CHECK(comp[d] == ab.value[d]);
}

TEST_CASE("torsion order") {
  auto L3 = standard_law(3, 1, 40);
  auto iota = g_neg(L3);
  auto t = torsion_order(iota, 10);
  CHECK(t.torsion);
  CHECK(t.order == 2);

  CHECK(torsion_order(identity_series(L3.ring(), 40), 5).order == 1);

  // [5] on (2,2): nontorsion to precision, provided the window can tell the
  // iterates from x: w([5^n] - 1) = 16*4^{v_2(n)} must stay <= N over the scan
  auto L = standard_law(2, 2, 64);
  auto five = bracket_int(L, 5);
  auto nt = torsion_order(five, 3);
  CHECK_FALSE(nt.torsion);
  CHECK(nt.bound == 3);
  // at bound 4 the same window reports u^{o 4} = x to precision:
  // w([5^4] - 1) = 256 exceeds N = 64, an honest finite-precision outcome
  auto t4 = torsion_order(five, 4);
  CHECK(t4.torsion);
  CHECK(t4.order == 4);
  // a wider window separates them again
  auto u260 = lift::translate_by_monomial(2, 2, 16, 260);
  auto nt2 = torsion_order(u260, 4);
  CHECK_FALSE(nt2.torsion);
}

TEST_CASE("ramification terms: height-1 frozen sequences") {
  // p=3: u=[4]: w(u^{o 3^n}) = 3^{n+1}, e_n = 2(3^{n+1}-1)/3^{n+1} -> 2
  auto L3 = standard_law(3, 1, 100);
  auto r3 = ramification_number(bracket_int(L3, 4), 3, 1, 4);
  REQUIRE(r3.terms.size() == 4);
  CHECK(r3.terms[0] == RatRing::make(2 * (3 - 1), 3));
  CHECK(r3.terms[1] == RatRing::make(2 * (9 - 1), 9));
  CHECK(r3.terms[2] == RatRing::make(2 * (27 - 1), 27));
  CHECK(r3.terms[3] == RatRing::make(2 * (81 - 1), 81));
  REQUIRE(r3.limit.has_value());
  CHECK(*r3.limit == mpq_class(2));

  // p=2 (height-1 law constructed on the fly): u=[3]: w = 2^{n+2}, e_n -> 2
  auto log21 = lift::honda_logarithm(2, 1, 80);
  auto L2 = FormalGroupLaw::validate(lift::reduce_mod_p(lift::group_law_char0(log21), FieldSpec::get(2, 1)));
  auto r2 = ramification_number(bracket_int(L2, 3), 2, 1, 4);
  REQUIRE(r2.terms.size() == 4);
  // n = 0: v_2(3 - 1) = 1, so w = 2 (the 2^{n+2} law starts at n = 1)
  CHECK(r2.terms[0] == RatRing::make(2 - 1, 2));
  CHECK(r2.terms[1] == RatRing::make(8 - 1, 4));
  CHECK(r2.terms[2] == RatRing::make(16 - 1, 8));
  CHECK(r2.terms[3] == RatRing::make(32 - 1, 16));
  REQUIRE(r2.limit.has_value());
  CHECK(*r2.limit == mpq_class(2));

  CHECK_THROWS_AS(ramification_number(identity_series(L2.ring(), 80), 2, 1, 3),
                  std::invalid_argument);
}

TEST_CASE("teichmuller representative") {
  auto L = standard_law(2, 2, 48, 2);
  GfRing ring = L.ring();

  // stable-range u with u'(0) = 1 collapses to the identity
  auto u = bracket_int(L, 5);
  auto t1 = teichmuller_automorphism(L, u);
  CHECK(t1.stabilized);
  CHECK(t1.t == identity_series(ring, 48));

  // e with e'(0) = t in F_4: torsion of order 3 to precision
  auto e = solve_endomorphism(L, ring.F->gen(), 0).e;
  auto t2 = teichmuller_automorphism(L, e);
  CHECK(t2.stabilized);
  CHECK(t2.torsion_verified);
  CHECK(t2.t[1] == ring.F->gen());
  auto cube = iterate(t2.t, 3);
  CHECK(cube == identity_series(ring, 48));
}

TEST_CASE("leading-term commutator formula on constructed pairs") {
  // [u, delta] = (lambda alpha^{p^m} - alpha lambda^{p^r}) x^{p^{r+m}} + ...
  auto L = standard_law(2, 2, 80, 2);
  GfRing ring = L.ring();
  int p = 2, h = 2;
  for (Fq lambda : {ring.one(), ring.F->gen(), ring.F->element({1, 1})}) {
    for (Fq alpha : {ring.one(), ring.F->gen()}) {
      for (int m : {3, 4}) {
        for (int r : {1, 2}) {
          if ((1 << (r + m)) > 80) continue;
          auto eu = solve_endomorphism(L, lambda, m);
          REQUIRE(eu.ok);
          auto u = g_add(L, identity_series(ring, 80), eu.e);
          GfSeries delta = monomial_series(ring, 80, 1 << r, alpha);
          auto c = g_commutator(L, u, delta);
          long lead = 1L << (r + m);
          Fq expect = ring.sub(ring.mul(lambda, alpha.frobenius(m)),
                               ring.mul(alpha, lambda.frobenius(r)));
          for (long d = 1; d < lead; ++d) CHECK(c[static_cast<int>(d)].is_zero());
          CHECK(c[static_cast<int>(lead)] == expect);
          // iterate relation: v_x([u^{o p}, delta]) = p^h v_x([u, delta])
          if (!expect.is_zero() && lead * 4 <= 80) {
            auto up = iterate(u, p);
            auto cp = g_commutator(L, up, delta);
            Valn v1 = valuation(c), v2 = valuation(cp);
            REQUIRE(v1.finite);
            REQUIRE(v2.finite);
            CHECK(v2.v == (1L << h) * v1.v);
          }
        }
      }
    }
  }
}
