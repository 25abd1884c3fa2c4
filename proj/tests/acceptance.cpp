// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code = number of failed
// criteria. Expects the golden-file directory as argv[1].

#include <chrono>
#include <iostream>
#include <sstream>

#include "fglab/lab.hpp"
#include "fglab/prng.hpp"

using namespace fglab;
using namespace fglab::lab;

namespace {

int failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << num << ": " << name;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
  if (!pass) ++failures;
}

double run_seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string golden_dir;

std::string valn_to_string(const Valn& v) {
  return v.finite ? std::to_string(v.v) : (">=" + std::to_string(v.bound));
}

bool row_passes(const Report& rep, const std::string& name, std::string* why) {
  for (const auto& c : rep.checks())
    if (c.name == name) {
      if (!c.pass && why) *why += name + " failed (" + c.measured + "); ";
      return c.pass;
    }
  if (why) *why += name + " missing; ";
  return false;
}

// ---------------------------------------------------------------------------

void criterion1_construction() {
  struct Row {
    int p, h, N;
    const char* golden;
  };
  std::vector<Row> rows = {{2, 2, 256, "law_p2_h2.json"},
                           {2, 3, 256, nullptr},
                           {3, 2, 256, "law_p3_h2.json"},
                           {3, 1, 243, "law_p3_h1.json"},
                           {5, 1, 128, "law_p5_h1.json"}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& r : rows) {
    ExperimentConfig cfg;
    cfg.p = r.p;
    cfg.h = r.h;
    cfg.prec = r.N;
    cfg.out = "/tmp/fglab_acc_law.json";
    RunResult res{Report(cfg), 2};
    double secs = run_seconds([&] { res = run_construct(cfg); });
    std::string why;
    bool ok = res.exit_code == 0 && row_passes(res.report, "axioms", &why) &&
              row_passes(res.report, "p-multiplication", &why) &&
              (r.h < 2 || row_passes(res.report, "unit-partials", &why));
    if (secs > 60.0) {
      ok = false;
      why += "runtime " + std::to_string(secs) + "s exceeds seconds-per-law; ";
    }
    if (r.golden) {
      std::string fresh = io::read_file(cfg.out);
      std::string shipped = io::read_file(golden_dir + "/" + std::string(r.golden));
      if (fresh != shipped) {
        ok = false;
        why += std::string(r.golden) + " regeneration differs from the shipped file; ";
      }
    }
    detail << "(" << r.p << "," << r.h << ")@" << r.N << " " << (ok ? "ok" : why) << " ["
           << static_cast<int>(secs * 1000) << "ms] ";
    pass = pass && ok;
  }
  // (2,3) at N = 512 under ~2 minutes, byte-identical to the shipped golden
  {
    ExperimentConfig cfg;
    cfg.p = 2;
    cfg.h = 3;
    cfg.prec = 512;
    cfg.out = "/tmp/fglab_acc_law23.json";
    RunResult res{Report(cfg), 2};
    double secs = run_seconds([&] { res = run_construct(cfg); });
    bool ok = res.exit_code == 0 && secs < 120.0 &&
              io::read_file(cfg.out) == io::read_file(golden_dir + "/law_p2_h3.json");
    detail << "(2,3)@512 " << (ok ? "ok" : "FAIL") << " [" << static_cast<int>(secs * 1000)
           << "ms]";
    pass = pass && ok;
  }
  report(1, "construction: axioms, [p] = x^{p^h}, unit partials, runtime", pass, detail.str());
}

void criterion2_trichotomy() {
  bool pass = true;
  std::ostringstream detail;
  // case 3 exact on (2,2): u = [1+p^2] = [5], w-pairs (16, 64)
  {
    auto L = build_standard_law(2, 2, 80, 1, 32);
    auto rows = endo::iterate_growth(2, 2, fgl::bracket_int(L, 5), 1);
    bool ok = rows.size() >= 2 && rows[0].w == Valn::at(16) && rows[1].w == Valn::at(64) &&
              rows[0].kase == endo::GrowthEntry::kAbove && rows[0].prediction_ok;
    detail << "(2,2)[5]:(16,64) " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  // case 3 exact на (3,1): u = [1+p^2] = [10], w-pairs (9, 27)
  {
    auto L = build_standard_law(3, 1, 40, 1, 24);
    auto rows = endo::iterate_growth(3, 1, fgl::bracket_int(L, 10), 1);
    bool ok = rows.size() >= 2 && rows[0].w == Valn::at(9) && rows[1].w == Valn::at(27) &&
              rows[0].kase == endo::GrowthEntry::kAbove && rows[0].prediction_ok;
    detail << "(3,1)[10]:(9,27) " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  // case 1 exact on (2,3): u = id +_G fr, w-pairs (2, 4)
  {
    auto L = build_standard_law(2, 3, 70, 1, 24);
    auto u = fgl::g_add(L, identity_series(L.ring(), 70), frobenius_series(L.ring(), 70));
    auto rows = endo::iterate_growth(2, 3, u, 1);
    bool ok = rows.size() >= 2 && rows[0].w == Valn::at(2) && rows[1].w == Valn::at(4) &&
              rows[0].kase == endo::GrowthEntry::kBelow && rows[0].prediction_ok;
    detail << "(2,3)id+fr:(2,4) " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  // case 2 inequality on (2,2): u = [3], w = 4, w(u^{o2}) >= 16
  {
    auto L = build_standard_law(2, 2, 80, 1, 32);
    auto rows = endo::iterate_growth(2, 2, fgl::bracket_int(L, 3), 1);
    bool ok = rows.size() >= 2 && rows[0].w == Valn::at(4) &&
              rows[0].kase == endo::GrowthEntry::kBoundary && rows[1].w.finite &&
              rows[1].w.v >= 16;
    detail << "(2,2)[3]: w(u^2)=" << (rows.size() >= 2 ? valn_to_string(rows[1].w) : "?")
           << ">=16 " << (ok ? "ok" : "FAIL");
    pass = pass && ok;
  }
  report(2, "iterate-growth trichotomy, exact integer equalities", pass, detail.str());
}

void criterion3_height() {
  bool pass = true;
  std::ostringstream detail;
  for (auto [p, h] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 1}, {5, 1}}) {
    auto probe = height_probe_series(p, h);
    // serialized automorphism alone: round-trip through the wire format
    auto j = io::series_to_json(probe);
    auto u = io::series_from_json(j);
    auto est = endo::estimate_height(u, p);
    long ph = 1;
    for (int i = 0; i < h; ++i) ph *= p;
    bool ratios_ok = est.ok && !est.ratios.empty();
    if (ratios_ok) {
      // the trailing two ratios must both equal p^h (stabilized, exactly)
      size_t n = est.ratios.size();
      ratios_ok = n >= 2 && est.ratios[n - 1] == ph && est.ratios[n - 2] == ph;
    }
    bool ok = est.ok && est.h == h && est.confidence == endo::HeightEstimate::kTwoRatio &&
              ratios_ok;
    detail << "(" << p << "," << h << "): "
           << (est.ok ? "h=" + std::to_string(est.h) : est.error) << " "
           << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  report(3, "height detection from one serialized automorphism, stable ratio exactly p^h", pass,
         detail.str());
}

void criterion4_centralizer() {
  ExperimentConfig cfg;
  cfg.p = 2;
  cfg.h = 2;
  cfg.seed = 20260809;
  auto res = run_centralizer(cfg);
  std::string why;
  bool pass = res.exit_code == 0;
  for (const char* row : {"solved-instances", "outside-subfield-infeasible", "positive-controls",
                          "random-non-endomorphisms", "commutator-leading-term",
                          "commutator-iterate-valuation"})
    pass = row_passes(res.report, row, &why) && pass;
  report(4, "centralizer suite: subfield constraint, infeasibility, 50 residual witnesses, "
            "24 leading-term pairs",
         pass, why.empty() ? "all rows pass on (2,2) over F_16" : why);
}

void criterion5_normalizer() {
  ExperimentConfig cfg;
  cfg.p = 2;
  cfg.h = 2;
  cfg.seed = 90210;
  auto res = run_normalizer(cfg);
  std::string why;
  bool pass = res.exit_code == 0;
  for (const char* row :
       {"automorphisms-fix-law", "conjugated-out-of-end", "law-moves"})
    pass = row_passes(res.report, row, &why) && pass;
  report(5, "normalizer suite: G^u = G for sampled automorphisms, 50 conjugation witnesses",
         pass, why.empty() ? "all rows pass on (2,2)" : why);
}

void criterion6_ramification() {
  bool pass = true;
  std::ostringstream detail;
  for (int p : {3, 2, 5}) {
    ExperimentConfig cfg;
    cfg.p = p;
    cfg.h = 1;
    auto res = run_ramification(cfg);
    bool ok = res.exit_code == 0;
    int terms = 0;
    for (const auto& c : res.report.checks())
      if (c.name.rfind("term", 0) == 0) ++terms;
    if (p != 5 && terms < 4) ok = false;  // n <= 3 exact for p = 3 and p = 2
    detail << "p=" << p << ": " << terms << " exact terms " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  report(6, "ramification terms and limits (p-1 for p>2, 2 for p=2), exact rationals", pass,
         detail.str());
}

void criterion7_oracles() {
  bool pass = true;
  std::ostringstream detail;
  {
    auto L = build_standard_law(2, 2, 64, 1, 32);
    auto x = identity_series(L.ring(), 64);
    bool ok = fgl::bracket_int(L, 2) == fgl::g_add(L, x, x);
    detail << "[2]=G(x,x) " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  {
    GfRing F9(FieldSpec::get(3, 2));
    Prng rng(777);
    bool ok = true;
    for (int k = 0; k < 5; ++k) {
      TruncSeries<GfRing> f(F9, 40);
      for (int d = 1; d <= 40; ++d) f.set(d, F9.F->element_by_index(rng.below(9)));
      if (f[1].is_zero()) f.set(1, F9.one());
      auto g = reverse(f);
      if (!(compose(f, g) == identity_series(F9, 40)) ||
          !(compose(g, f) == identity_series(F9, 40)))
        ok = false;
    }
    detail << "reverse-by-composition " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  {
    auto L = build_standard_law(2, 2, 60, 2, 24);
    auto e = endo::solve_endomorphism(L, L.ring().F->gen(), 1);
    bool ok = e.ok && fgl::is_endomorphism(L, e.e).ok;
    detail << "endo-solver-gate " << (ok ? "ok" : "FAIL") << "; ";
    pass = pass && ok;
  }
  {
    auto L = build_standard_law(3, 1, 60, 1, 24);
    auto rho = fgl::bracket_int(L, 4);
    auto half = endo::padic_iterate(rho, 3, {2, 1, 1, 1, 1});
    auto sq = compose(half.value, half.value);
    bool ok = true;
    for (int d = 1; d < static_cast<int>(half.window) && d <= 60; ++d)
      if (!(sq[d] == rho[d])) ok = false;
    detail << "half-iterate-squares (window " << half.window << ") " << (ok ? "ok" : "FAIL");
    pass = pass && ok;
  }
  report(7, "oracle cross-checks", pass, detail.str());
}

// (definition moved above row_passes)
void criterion8_determinism() {
  bool pass = true;
  std::ostringstream detail;
  {
    ExperimentConfig cfg;
    cfg.p = 2;
    cfg.h = 2;
    cfg.seed = 4242;
    auto a = run_centralizer(cfg);
    auto b = run_centralizer(cfg);
    bool ok = a.report.to_json().dump() == b.report.to_json().dump();
    detail << "centralizer reruns " << (ok ? "byte-identical" : "DIFFER") << "; ";
    pass = pass && ok;
  }
  {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.h = 1;
    auto a = run_height(cfg);
    auto b = run_height(cfg);
    bool ok = a.report.to_json().dump() == b.report.to_json().dump();
    detail << "height reruns " << (ok ? "byte-identical" : "DIFFER") << "; ";
    pass = pass && ok;
  }
  {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.h = 2;
    cfg.prec = 96;
    cfg.out = "/tmp/fglab_det_a.json";
    run_construct(cfg);
    cfg.out = "/tmp/fglab_det_b.json";
    run_construct(cfg);
    bool ok = io::read_file("/tmp/fglab_det_a.json") == io::read_file("/tmp/fglab_det_b.json");
    detail << "law files " << (ok ? "byte-identical" : "DIFFER");
    pass = pass && ok;
  }
  report(8, "determinism: identical configs and seeds give byte-identical outputs", pass,
         detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  golden_dir = argc > 1 ? argv[1] : "data/golden";
  criterion1_construction();
  criterion2_trichotomy();
  criterion3_height();
  criterion4_centralizer();
  criterion5_normalizer();
  criterion6_ramification();
  criterion7_oracles();
  criterion8_determinism();
  if (failures == 0)
    std::cout << "all acceptance criteria pass" << std::endl;
  else
    std::cout << failures << " criteria failed" << std::endl;
  return failures;
}
