#pragma once

#include <optional>
#include <string>

#include "fglab/lift.hpp"
#include "fglab/series.hpp"

namespace fglab::fgl {

using GfSeries = TruncSeries<GfRing>;
using GfBiv = BivSeries<GfRing>;

struct ValidationOptions {
  /// Total degree through which associativity is verified; 0 picks
  /// min(N, 48). Identity and commutativity are always checked at full N.
  int assoc_prec = 0;
  bool check_assoc = true;
};

/// First failed axiom with its witness monomial (k = -1 for bivariate
/// witnesses, set for associativity witnesses x^i y^j z^k).
struct AxiomFailure {
  std::string axiom;
  int i = -1, j = -1, k = -1;
  std::string describe() const;
};

/// Homogeneous components [B^j]_d for 1 <= j <= d <= W, built degree by
/// degree. Backbone of the endomorphism identity checks and solvers: the
/// coefficient of x^a y^{d-a} in B^j is at(j, d)[a].
class BivPowerTable {
public:
  BivPowerTable(const GfBiv& B, int W);
  int window() const { return W_; }
  /// Row of d+1 coefficients of the homogeneous degree-d part of B^j.
  const std::vector<Fq>& at(int j, int d) const {
    return rows_[static_cast<size_t>(offset(d) + (j - 1))];
  }

private:
  static long offset(int d) { return static_cast<long>(d - 1) * d / 2; }
  int W_;
  std::vector<std::vector<Fq>> rows_;  // [offset(d) + j-1] -> coeffs, j = 1..d
};

class FormalGroupLaw {
public:
  /// Validates the group-law axioms and caches [p]_G, the inverse series
  /// and the height. Throws std::domain_error with the witness monomial on
  /// an axiom failure.
  static FormalGroupLaw validate(GfBiv B, ValidationOptions opts = {});
  /// Non-throwing axiom check.
  static std::optional<AxiomFailure> check_axioms(const GfBiv& B, int assoc_prec);

  const GfBiv& table() const { return G_; }
  const GfRing& ring() const { return G_.ring(); }
  int prec() const { return G_.prec(); }
  int p() const { return G_.ring().characteristic(); }
  int assoc_checked_prec() const { return assoc_prec_; }

  /// [p]_G, cached at validation.
  const GfSeries& mult_p() const { return mult_p_; }
  /// iota = [-1]_G with G(x, iota(x)) = 0, solved degree by degree.
  const GfSeries& neg_series() const { return iota_; }

  struct Height {
    bool finite = false;
    int h = 0;    // when finite
    long v = 0;   // v_x([p]_G) when finite
    long bound = 0;  // when !finite: v_x([p]_G) >= bound
  };
  const Height& height() const { return height_; }

  /// Same law truncated to precision M (axioms restrict; caches recomputed).
  FormalGroupLaw truncated(int M, ValidationOptions opts = {}) const;
  /// Same law re-tagged over a larger field. Only defined when every
  /// coefficient lies in the prime subfield (true for the standardized
  /// laws); throws otherwise.
  FormalGroupLaw over_field(const FieldSpec* bigger, ValidationOptions opts = {}) const;

private:
  FormalGroupLaw() = default;
  GfBiv G_;
  GfSeries mult_p_;
  GfSeries iota_;
  Height height_;
  int assoc_prec_ = 0;
};

/// G-sum (phi +_G psi)(x) = G(phi(x), psi(x)). Requires v_x >= 1 on both.
GfSeries g_add(const FormalGroupLaw& L, const GfSeries& a, const GfSeries& b);

/// The inverse series iota = [-1]_G (cached copy).
GfSeries g_neg(const FormalGroupLaw& L);

/// phi -_G psi = phi +_G (iota o psi).
GfSeries g_sub(const FormalGroupLaw& L, const GfSeries& a, const GfSeries& b);

/// [n]_G by double-and-add; [1] = x, [0] = 0, negative n through iota.
GfSeries bracket_int(const FormalGroupLaw& L, long n);

/// [a_K]_G for a_K = sum digits[i] p^i. The result agrees with the p-adic
/// limit [a]_G modulo x^{p^{Kh}}; `window` records that exponent (capped at
/// N+1 when it exceeds the precision) and `covers_precision` says whether
/// the whole window is certified.
struct BracketZp {
  GfSeries value;
  long window = 0;
  bool covers_precision = false;
};
BracketZp bracket_zp(const FormalGroupLaw& L, const std::vector<int>& digits);

/// e(G(x,y)) == G(e(x), e(y)) through total degree `window` (the tested
/// window is min(N, prec(e)) unless a smaller one is requested); on failure
/// the witness monomial x^i y^j.
struct EndoCheck {
  bool ok = true;
  int i = -1, j = -1;
  int window = 0;
};
EndoCheck is_endomorphism(const FormalGroupLaw& L, const GfSeries& e, int window = 0);

/// G-commutator [phi, psi] = phi o psi -_G psi o phi.
GfSeries g_commutator(const FormalGroupLaw& L, const GfSeries& a, const GfSeries& b);

/// The series psi(G(psi^{-1} x, psi^{-1} y)) as a raw coefficient table.
GfBiv conjugate_table(const FormalGroupLaw& L, const GfSeries& psi);

/// Conjugated law G^psi, validated. Requires psi'(0) != 0.
FormalGroupLaw conjugate_law(const FormalGroupLaw& L, const GfSeries& psi,
                             ValidationOptions opts = {});

/// Proximity to the identity w(u) = v_x(u(x) - x).
Valn w_proximity(const GfSeries& u);

/// G(a(x), b(y)): separable bivariate substitution (series in two distinct
/// variables), used by conjugation and the endomorphism identity.
GfBiv b_substitute_split(const GfBiv& B, const GfSeries& a, const GfSeries& b);

}  // namespace fglab::fgl
