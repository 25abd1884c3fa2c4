#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fglab/fgl.hpp"
#include "fglab/prng.hpp"

using namespace fglab;
using namespace fglab::fgl;

namespace {

FormalGroupLaw standard_law(int p, int h, int N, const FieldSpec* field = nullptr) {
  auto log = lift::honda_logarithm(p, h, N);
  auto G = lift::group_law_char0(log);
  auto Gbar = lift::reduce_mod_p(G, field ? field : FieldSpec::get(p, 1));
  return FormalGroupLaw::validate(std::move(Gbar));
}

GfBiv additive_law(GfRing ring, int N) {
  GfBiv B(ring, N);
  B.set(1, 0, ring.one());
  B.set(0, 1, ring.one());
  return B;
}

}  // namespace

TEST_CASE("validate: standardized law, additive law, and a broken law") {
  auto L = standard_law(2, 2, 24);
  CHECK(L.height().finite);
  CHECK(L.height().h == 2);
  CHECK(L.height().v == 4);

  GfRing F2(FieldSpec::get(2, 1));
  auto A = FormalGroupLaw::validate(additive_law(F2, 16));
  CHECK_FALSE(A.height().finite);
  CHECK(A.height().bound == 17);

  // x + y + x^2 y is asymmetric: commutativity is the first witness
  GfBiv bad = additive_law(F2, 8);
  bad.set(2, 1, F2.one());
  auto fail = FormalGroupLaw::check_axioms(bad, 8);
  REQUIRE(fail.has_value());
  CHECK(fail->axiom == "commutativity");
  CHECK_THROWS_AS(FormalGroupLaw::validate(bad), std::domain_error);

  // a symmetric corruption of a real law is caught by associativity
  GfBiv corrupted = L.table().with_prec(12);
  corrupted.set(2, 2, L.ring().add(corrupted.get(2, 2), L.ring().one()));
  auto fail2 = FormalGroupLaw::check_axioms(corrupted, 12);
  REQUIRE(fail2.has_value());
  CHECK(fail2->axiom == "associativity");
}

TEST_CASE("g_add: identity, doubling, valuation rule") {
  auto L = standard_law(2, 2, 24);
  GfRing ring = L.ring();
  auto x = identity_series(ring, 24);
  GfSeries zero(ring, 24);
  CHECK(g_add(L, x, zero) == x);

  // G(x,x) = [2] = x^4 exactly for the standardized law
  auto dbl = g_add(L, x, x);
  CHECK(dbl == monomial_series(ring, 24, 4, ring.one()));
  CHECK(dbl == L.mult_p());

  // v_x(phi +_G psi) = v_x(phi) when v_x(psi) > v_x(phi)
  auto m2 = monomial_series(ring, 24, 2, ring.one());
  auto m5 = monomial_series(ring, 24, 5, ring.one());
  CHECK(valuation(g_add(L, m2, m5)) == Valn::at(2));

  Prng rng(17);
  for (int k = 0; k < 20; ++k) {
    GfSeries a(ring, 20), b(ring, 20);
    for (int d = 1; d <= 20; ++d) {
      a.set(d, ring.F->element_by_index(rng.below(2)));
      b.set(d, ring.F->element_by_index(rng.below(2)));
    }
    Valn va = valuation(a), vb = valuation(b);
    if (va.finite && vb.finite && va.v < vb.v)
      CHECK(valuation(g_add(L, a, b)) == va);
  }
}

TEST_CASE("g_neg: frozen low terms and defining contract") {
  auto L = standard_law(2, 2, 16);
  GfRing ring = L.ring();
  auto iota = g_neg(L);
  // iota = x + x^4 + O(x^5): solve iota + x + x^2 iota^2 = 0 mod deg 5
  CHECK(iota[1] == ring.one());
  CHECK(iota[2].is_zero());
  CHECK(iota[3].is_zero());
  CHECK(iota[4] == ring.one());
  CHECK(g_add(L, identity_series(ring, 16), iota).is_zero());

  GfRing F3(FieldSpec::get(3, 1));
  auto A = FormalGroupLaw::validate(additive_law(F3, 10));
  CHECK(g_neg(A) == neg(identity_series(F3, 10)));
}

TEST_CASE("g_sub") {
  auto L = standard_law(2, 2, 24);
  GfRing ring = L.ring();
  Prng rng(31);
  GfSeries a(ring, 24);
  for (int d = 1; d <= 24; ++d) a.set(d, ring.F->element_by_index(rng.below(2)));
  CHECK(g_sub(L, a, a).is_zero());
  CHECK(g_sub(L, bracket_int(L, 3), identity_series(ring, 24)) == bracket_int(L, 2));

  // v_x(phi -_G psi) = v_x(phi - psi) for same-valuation pairs
  for (int k = 0; k < 10; ++k) {
    GfSeries f(ring, 20), g(ring, 20);
    f.set(1, ring.one());
    g.set(1, ring.one());
    for (int d = 2; d <= 20; ++d) {
      f.set(d, ring.F->element_by_index(rng.below(2)));
      g.set(d, ring.F->element_by_index(rng.below(2)));
    }
    Valn plain = valuation(sub(f, g));
    Valn gsubv = valuation(g_sub(L, f, g));
    CHECK(plain == gsubv);
  }
}

TEST_CASE("bracket_int: frozen values on the standardized p=2,h=2 law") {
  auto L = standard_law(2, 2, 24);
  GfRing ring = L.ring();
  CHECK(bracket_int(L, 1) == identity_series(ring, 24));
  CHECK(bracket_int(L, 0).is_zero());
  CHECK(bracket_int(L, 2) == monomial_series(ring, 24, 4, ring.one()));
  // [3] = x + x^4 mod x^5
  auto three = bracket_int(L, 3);
  CHECK(three[1] == ring.one());
  CHECK(three[2].is_zero());
  CHECK(three[3].is_zero());
  CHECK(three[4] == ring.one());
  // ring structure: [2] o [3] = [6] = [3] o [2]
  CHECK(compose(bracket_int(L, 2), three) == bracket_int(L, 6));
  CHECK(compose(three, bracket_int(L, 2)) == bracket_int(L, 6));
  // [-1] matches the cached inverse series
  CHECK(bracket_int(L, -1) == g_neg(L));
  CHECK(g_add(L, bracket_int(L, -3), three).is_zero());
}

TEST_CASE("bracket_zp: digit consistency and window") {
  auto L = standard_law(2, 2, 64);
  auto five = bracket_zp(L, {1, 0, 1});  // 5 = 1 + 4
  CHECK(five.window == 64);              // p^{Kh} = 2^6
  auto direct = bracket_int(L, 5);
  for (int d = 1; d < 64; ++d) CHECK(five.value[d] == direct[d]);

  auto zero = bracket_zp(L, {0, 0});
  CHECK(zero.value.is_zero());

  // K = 3, h = 2, N = 64: window 2^6 = 64 < N+1, not fully covered;
  // one more digit covers it
  CHECK_FALSE(five.covers_precision);
  auto five4 = bracket_zp(L, {1, 0, 1, 0});
  CHECK(five4.covers_precision);
}

TEST_CASE("is_endomorphism: frobenius and brackets pass, a generic series fails early") {
  auto L = standard_law(2, 2, 24);
  GfRing ring = L.ring();
  CHECK(is_endomorphism(L, frobenius_series(ring, 24)).ok);
  CHECK(is_endomorphism(L, bracket_int(L, 3)).ok);
  CHECK(is_endomorphism(L, g_neg(L)).ok);

  // e = x + x^2: e(G) and G(e,e) agree through total degree 5 over F_2
  // (the char-0 degree-3 terms of G vanish mod 2) and split at degree 6,
  // where G(e,e) picks up x^2 y^4 + x^4 y^2 from e(x)^2 e(y)^2.
  GfSeries bad(ring, 24);
  bad.set(1, ring.one());
  bad.set(2, ring.one());
  auto chk = is_endomorphism(L, bad);
  CHECK_FALSE(chk.ok);
  CHECK(chk.i + chk.j == 6);
}

TEST_CASE("g_commutator basics") {
  auto L = standard_law(2, 2, 32, FieldSpec::get(2, 2));
  GfRing ring = L.ring();
  Prng rng(5150);
  GfSeries phi(ring, 32);
  for (int d = 1; d <= 32; ++d) phi.set(d, ring.F->element_by_index(rng.below(4)));
  if (phi[1].is_zero()) phi.set(1, ring.one());
  CHECK(g_commutator(L, phi, phi).is_zero());
  CHECK(g_commutator(L, frobenius_series(ring, 32), bracket_int(L, 3)).is_zero());
  // v_x([phi,psi]) = v_x(phi o psi - psi o phi)
  GfSeries psi(ring, 32);
  for (int d = 1; d <= 32; ++d) psi.set(d, ring.F->element_by_index(rng.below(4)));
  if (psi[1].is_zero()) psi.set(1, ring.F->gen());
  CHECK(valuation(g_commutator(L, phi, psi)) ==
        valuation(sub(compose(phi, psi), compose(psi, phi))));
}

TEST_CASE("commutator valuation growth for endomorphisms") {
  // v_x([a^{n+1}, b]) >= v_x([a,b]) v_x(a)^n for v_x(a) > 1
  auto L = standard_law(2, 2, 64, FieldSpec::get(2, 2));
  GfRing ring = L.ring();
  auto fr = frobenius_series(ring, 64);
  GfSeries a = compose(fr, fr);  // v_x = 4
  GfSeries b = scale(ring.F->gen(), fr);
  // b must be an endomorphism for the statement: use t*x^2? t in F_4, x^2 = fr.
  // leading alpha x^{p^r} with alpha = t: valid endomorphism shape is solved
  // later by the endo module; here use plain brackets and frobenii.
  b = compose(fr, bracket_int(L, 3));
  auto c1 = g_commutator(L, a, b);
  auto a2 = compose(a, a);
  auto c2 = g_commutator(L, a2, b);
  Valn v1 = valuation(c1), v2 = valuation(c2);
  if (v1.finite && v2.finite) CHECK(v2.v >= v1.v * 4);
  // both sides commute here (all in F_2[[x]]), so also test a genuinely
  // noncommuting pair via coefficient twists in test_endo
  CHECK(g_commutator(L, a, compose(fr, fr)).is_zero());
}

TEST_CASE("conjugate_law: identity, automorphism invariance, non-automorphism moves the law") {
  auto L = standard_law(2, 2, 20);
  GfRing ring = L.ring();
  CHECK(conjugate_table(L, identity_series(ring, 20)) == L.table());

  // [3]_G is an automorphism: G^{[3]} = G
  CHECK(conjugate_table(L, bracket_int(L, 3)) == L.table());
  auto LL = conjugate_law(L, bracket_int(L, 3));
  CHECK(LL.table() == L.table());

  // psi = x + x^2 is not an endomorphism: the conjugated law differs
  GfSeries psi(ring, 20);
  psi.set(1, ring.one());
  psi.set(2, ring.one());
  CHECK_FALSE(conjugate_table(L, psi) == L.table());

  // double conjugation restores the law
  auto tw = conjugate_table(FormalGroupLaw::validate(conjugate_table(L, psi)), reverse(psi));
  CHECK(tw == L.table());

  GfSeries sing(ring, 20);
  sing.set(2, ring.one());
  CHECK_THROWS_AS(conjugate_table(L, sing), std::invalid_argument);
}

TEST_CASE("height across laws") {
  CHECK(standard_law(3, 1, 12).height().h == 1);
  CHECK(standard_law(3, 1, 12).height().v == 3);
  CHECK(standard_law(2, 3, 16).height().h == 3);
  CHECK(standard_law(5, 1, 10).height().h == 1);
}

TEST_CASE("w_proximity and the closeness identity") {
  auto L = standard_law(2, 2, 40);
  GfRing ring = L.ring();
  auto x = identity_series(ring, 40);
  Valn w = w_proximity(x);
  CHECK_FALSE(w.finite);
  CHECK(w.bound == 41);

  GfSeries u(ring, 40);
  u.set(1, ring.one());
  u.set(5, ring.one());
  CHECK(w_proximity(u) == Valn::at(5));

  // w([5]_G) = 16 on the p=2, h=2 law
  auto five = bracket_int(L, 5);
  CHECK(w_proximity(five) == Valn::at(16));

  // w(u) = v_x(u -_G id) for automorphisms (plain and G-difference agree)
  for (long n : {3L, 5L, 7L, 9L}) {
    auto un = bracket_int(L, n);
    CHECK(w_proximity(un) == valuation(g_sub(L, un, x)));
  }
}

TEST_CASE("law truncation and field extension") {
  auto L = standard_law(2, 2, 32);
  auto Lt = L.truncated(12);
  CHECK(Lt.prec() == 12);
  CHECK(Lt.height().h == 2);

  auto L4 = L.over_field(FieldSpec::get(2, 2));
  CHECK(L4.ring().F->n() == 2);
  CHECK(L4.height().h == 2);
  CHECK(is_endomorphism(L4, frobenius_series(L4.ring(), 32)).ok);
}
