#pragma once

#include <map>
#include <optional>

#include "fglab/fgl.hpp"

namespace fglab::endo {

using fgl::FormalGroupLaw;
using fgl::GfSeries;

/// Values chosen at the free p-power degrees of a solve. Degrees absent from
/// the map default to zero; values must lie in F_{p^h}.
struct FreeChoicePolicy {
  std::map<int, Fq> choices;
};

struct LedgerEntry {
  int degree = 0;
  enum Kind { kSeed, kForced, kFree, kPrescribed } kind = kForced;
  Fq value;
};

/// Degree-by-degree endomorphism solve: the unique-given-the-free-choices
/// endomorphism with lowest monomial alpha x^{p^r}. At every degree the full
/// homogeneous consistency of e(G(x,y)) = G(e(x), e(y)) is verified, so
/// ok == true certifies the identity through `window`.
struct EndoSolution {
  GfSeries e;
  int window = 0;
  bool ok = true;
  std::vector<LedgerEntry> ledger;
  int obstruction_degree = -1;  // when !ok
  std::string obstruction;      // when !ok
};

EndoSolution solve_endomorphism(const FormalGroupLaw& L, const Fq& alpha, int r,
                                const FreeChoicePolicy& policy = {}, int window = 0);

/// Commutant solve for psi o u = u o psi with prescribed low coefficients.
/// The solution family is walked through the endomorphism parameterization:
/// basic endomorphisms are G-added to match each prescribed or free p-power
/// coefficient in turn, non-p-power coefficients are forced, and the
/// commutation residual of the completed series is verified directly up to
/// degree D. A prescription that no commuting series can satisfy is reported
/// as infeasible with the degree at which it fails and a residual witness.
struct CommutantSolution {
  GfSeries psi;
  int window = 0;
  bool feasible = true;
  std::vector<LedgerEntry> ledger;
  int infeasible_degree = -1;
  std::string reason;
  Valn residual;                  // v_x(psi o u - u o psi); sentinel = commutes through window
  int residual_witness = -1;      // first residual degree of the best-effort series when infeasible
};

CommutantSolution solve_commutant(const FormalGroupLaw& L, const GfSeries& u,
                                  const std::map<int, Fq>& prescribed, int D,
                                  const FreeChoicePolicy& policy = {});

/// psi o u - u o psi (plain difference; commuting means this vanishes).
GfSeries commutation_residual(const GfSeries& u, const GfSeries& psi);

/// Greedy nearest-endomorphism decomposition psi = g +_G delta with
/// v_x(delta) maximal: while the leading monomial of delta is alpha x^{p^r}
/// with alpha in F_{p^h}, the matching basic endomorphism is absorbed into g.
struct Decomposition {
  GfSeries endo_part;   // g
  GfSeries remainder;   // delta
  Valn remainder_valuation;
  enum Stop { kRemainderZero, kCoeffOutsideSubfield, kDegreeNotPPower, kWindowExhausted } stop =
      kWindowExhausted;
  int rounds = 0;
};

Decomposition nearest_endomorphism(const FormalGroupLaw& L, const GfSeries& psi);

/// V(z) = (1/h) log_p v_x(z) for an endomorphism z; exact rational.
mpq_class V_endo(const FormalGroupLaw& L, const GfSeries& z);

/// w(u) > p^{h/(p-1)}, strictly (compared as w^{p-1} > p^h in integers).
/// A u that is the identity to precision counts as stable but flagged.
struct StableRange {
  bool stable = false;
  bool window_limited = false;
};
StableRange in_stable_range(const FormalGroupLaw& L, const GfSeries& u);
StableRange in_stable_range(int p, int h, const GfSeries& u);

/// Measured w(u^{o p^m}) for m = 0..M with the growth-law classification of
/// each step and whether the next measured value matches the prediction.
struct GrowthEntry {
  int m = 0;
  Valn w;
  enum Case { kBelow, kBoundary, kAbove, kSentinel } kase = kSentinel;
  bool prediction_checked = false;  // next entry within window
  bool prediction_ok = false;
};
std::vector<GrowthEntry> iterate_growth(int p, int h, const GfSeries& u, int M);

/// Height of the (withheld) law from one automorphism: successive
/// w(u^{o p^{m+1}})/w(u^{o p^m}) ratios until the stable value p^h shows.
struct HeightEstimate {
  bool ok = false;
  int h = 0;
  enum Confidence { kTwoRatio, kSingleRatio } confidence = kSingleRatio;
  std::vector<long> w_sequence;
  std::vector<long> ratios;
  std::string error;
};
HeightEstimate estimate_height(const GfSeries& u, int p);

/// rho^{o b} for b given by base-p digits; the result agrees with the
/// p-adic limit modulo x^window where window = w(rho^{o p^K}) (measured).
struct PadicIterate {
  GfSeries value;
  long window = 0;
  bool covers_precision = false;
};
PadicIterate padic_iterate(const GfSeries& rho, int p, const std::vector<int>& digits);

/// Least n <= bound with u^{o n} = x to precision, or "nontorsion to
/// precision" (finite precision can never certify nontorsion).
struct TorsionResult {
  bool torsion = false;
  long order = 0;
  long bound = 0;
};
TorsionResult torsion_order(const GfSeries& u, long bound);

/// Lower ramification terms e_n = (p-1)(w(u^{o p^n}) - 1)/p^{n+1} and the
/// limit once the tail shows stable growth.
struct RamificationResult {
  std::vector<mpq_class> terms;
  bool window_exhausted = false;
  std::optional<mpq_class> limit;
};
RamificationResult ramification_number(const GfSeries& u, int p, int h, int M);

/// Teichmueller-style torsion representative: the limit of e^{o q^m},
/// q = p^h, iterated to stabilization. Satisfies t^{o(q-1)} = x to precision
/// and t'(0) = e'(0).
struct TeichmullerResult {
  GfSeries t;
  int iterations = 0;
  bool stabilized = false;
  bool torsion_verified = false;
};
TeichmullerResult teichmuller_automorphism(const FormalGroupLaw& L, const GfSeries& e,
                                           int budget = 64);

}  // namespace fglab::endo
