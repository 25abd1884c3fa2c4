#pragma once

#include <gmpxx.h>

#include <concepts>
#include <stdexcept>
#include <string>

#include "fglab/gf.hpp"

namespace fglab {

/// Coefficient-domain handles for the series layer. A ring handle is a small
/// value object: series carry one and route all coefficient arithmetic
/// through it.
template <class R>
concept CoeffRing = requires(const R r, const typename R::Elem a, const typename R::Elem b) {
  { r.zero() } -> std::same_as<typename R::Elem>;
  { r.one() } -> std::same_as<typename R::Elem>;
  { r.add(a, b) } -> std::same_as<typename R::Elem>;
  { r.sub(a, b) } -> std::same_as<typename R::Elem>;
  { r.neg(a) } -> std::same_as<typename R::Elem>;
  { r.mul(a, b) } -> std::same_as<typename R::Elem>;
  { r.inv(a) } -> std::same_as<typename R::Elem>;
  { r.is_zero(a) } -> std::same_as<bool>;
  { r.eq(a, b) } -> std::same_as<bool>;
  { r.from_int(long{}) } -> std::same_as<typename R::Elem>;
  { r.characteristic() } -> std::same_as<int>;
  { r.same(r) } -> std::same_as<bool>;
};

/// Finite-field coefficients F_{p^n}.
struct GfRing {
  using Elem = Fq;
  const FieldSpec* F = nullptr;

  GfRing() = default;
  explicit GfRing(const FieldSpec* spec) : F(spec) {}

  Elem zero() const { return F->zero(); }
  Elem one() const { return F->one(); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const { return a.inv(); }
  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  Elem from_int(long v) const { return F->from_int(v); }
  int characteristic() const { return F->p(); }
  bool same(const GfRing& o) const { return F == o.F; }
};

/// Exact rational coefficients (GMP-backed). No floating point anywhere.
struct RatRing {
  using Elem = mpq_class;

  Elem zero() const { return mpq_class(0); }
  Elem one() const { return mpq_class(1); }
  Elem add(const Elem& a, const Elem& b) const { return mpq_class(a + b); }
  Elem sub(const Elem& a, const Elem& b) const { return mpq_class(a - b); }
  Elem neg(const Elem& a) const { return mpq_class(-a); }
  Elem mul(const Elem& a, const Elem& b) const { return mpq_class(a * b); }
  Elem inv(const Elem& a) const {
    if (a == 0) throw std::domain_error("RatRing::inv: zero");
    return mpq_class(1 / a);
  }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool eq(const Elem& a, const Elem& b) const { return cmp(a, b) == 0; }
  Elem from_int(long v) const { return mpq_class(v); }
  int characteristic() const { return 0; }
  bool same(const RatRing&) const { return true; }

  static Elem make(long num, long den) {
    mpq_class r(num, den);
    r.canonicalize();
    return r;
  }
  static Elem parse(const std::string& s);
  static std::string str(const Elem& a) { return a.get_str(); }
};

static_assert(CoeffRing<GfRing>);
static_assert(CoeffRing<RatRing>);

}  // namespace fglab
