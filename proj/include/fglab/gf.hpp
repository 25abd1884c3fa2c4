#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fglab {

class FieldSpec;

/// Element of F_{p^n} in a fixed polynomial basis over F_p.
/// Coordinates are residues mod p, little-endian (coords_[0] is the constant
/// term). Elements are trivially copyable; the spec pointer refers to an
/// interned FieldSpec and stays valid for the process lifetime.
class Fq {
public:
  static constexpr int kMaxDeg = 8;

  Fq() : spec_(nullptr), c_{} {}
  Fq(const FieldSpec* spec, std::array<uint8_t, kMaxDeg> c) : spec_(spec), c_(c) {}

  const FieldSpec& spec() const { return *spec_; }
  const FieldSpec* spec_ptr() const { return spec_; }

  bool is_zero() const {
    for (auto v : c_) if (v) return false;
    return true;
  }

  uint8_t coord(int i) const { return c_[static_cast<size_t>(i)]; }
  std::vector<int> coords() const;

  Fq operator+(const Fq& o) const;
  Fq operator-(const Fq& o) const;
  Fq operator-() const;
  Fq operator*(const Fq& o) const;
  Fq& operator+=(const Fq& o) { return *this = *this + o; }
  Fq& operator-=(const Fq& o) { return *this = *this - o; }
  Fq& operator*=(const Fq& o) { return *this = *this * o; }
  bool operator==(const Fq& o) const { return spec_ == o.spec_ && c_ == o.c_; }
  bool operator!=(const Fq& o) const { return !(*this == o); }

  /// Multiplicative inverse; throws on zero.
  Fq inv() const;
  /// a^e for nonnegative e (a^0 = 1, 0^e = 0 for e > 0).
  Fq pow(uint64_t e) const;
  /// a^{p^r}; r is reduced mod n since Frobenius has order n.
  Fq frobenius(int r) const;
  /// True iff a lies in F_{p^m}, identified as the fixed field of Frobenius^m.
  /// Requires m | n.
  bool in_subfield(int m) const;

  std::string str() const;

private:
  friend class FieldSpec;
  const FieldSpec* spec_;
  std::array<uint8_t, kMaxDeg> c_;
};

/// Description of F_{p^n}: prime p, extension degree n, and a monic
/// irreducible modulus of degree n over F_p. Instances are immutable and
/// interned: get() returns a pointer that remains valid forever, so that
/// elements can carry a raw spec pointer safely. Construction verifies
/// primality of p and irreducibility of the modulus.
class FieldSpec {
public:
  /// Field with the canonical modulus: the lexicographically least monic
  /// irreducible polynomial of degree n over F_p (coefficients compared from
  /// the constant term up).
  static const FieldSpec* get(int p, int n);
  /// Field with a user-supplied monic modulus (length n+1, little-endian,
  /// leading coefficient 1). Throws if reducible or non-monic.
  static const FieldSpec* get(int p, int n, const std::vector<int>& modulus);

  int p() const { return p_; }
  int n() const { return n_; }
  uint64_t q() const { return q_; }  // p^n
  const std::vector<uint8_t>& modulus() const { return modulus_; }

  Fq zero() const { return Fq(this, {}); }
  Fq one() const { return from_int(1); }
  /// Element from polynomial-basis coordinates; entries are reduced mod p.
  /// Throws if the vector length differs from n.
  Fq element(const std::vector<int>& coords) const;
  /// Image of an integer in the prime subfield.
  Fq from_int(long v) const;
  /// The basis element x (requires n >= 2).
  Fq gen() const;
  /// Enumeration helper: the k-th element in lexicographic coordinate order,
  /// 0 <= k < q. Useful for exhaustive small-field checks.
  Fq element_by_index(uint64_t k) const;

  bool operator==(const FieldSpec& o) const { return this == &o; }

  struct Key {};  // construction restricted to the intern pool
  FieldSpec(Key, int p, int n, std::vector<uint8_t> modulus)
      : FieldSpec(p, n, std::move(modulus)) {}

private:
  FieldSpec(int p, int n, std::vector<uint8_t> modulus);
  void build_tables();

  friend class Fq;
  int p_, n_;
  uint64_t q_;
  std::vector<uint8_t> modulus_;             // length n+1, monic
  std::vector<std::array<uint8_t, Fq::kMaxDeg>> red_;   // x^{n+k} mod f, k = 0..n-2
  std::array<std::array<uint8_t, Fq::kMaxDeg>, Fq::kMaxDeg> frob_;  // coords of (x^i)^p
};

/// Prime test for the small moduli this library supports.
bool is_small_prime(long p);

}  // namespace fglab
