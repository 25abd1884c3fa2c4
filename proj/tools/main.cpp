#include <CLI11.hpp>
#include <iostream>

#include "fglab/lab.hpp"

using namespace fglab;
using lab::ExperimentConfig;

int main(int argc, char** argv) {
  CLI::App app{
      "fglab: standardized formal group laws over finite fields, their "
      "endomorphism machinery, and the quantitative verification suites"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string law_path;

  app.set_help_flag("--help", "print help");

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--p", cfg.p, "characteristic (prime)");
    sub->add_option("--h", cfg.h, "height");
    sub->add_option("--field-deg", cfg.field_deg,
                    "working-field degree n (0 = experiment default, >= h)");
    sub->add_option("--prec", cfg.prec, "series precision N (0 = experiment default)");
    sub->add_option("--seed", cfg.seed, "PRNG seed (splitmix64)");
    sub->add_option("--format", cfg.format, "report format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
    sub->add_option("--policy", cfg.policy, "free-choice policy overrides (JSON)");
  };

  auto* construct = app.add_subcommand(
      "construct", "construct a standardized law; --out names the law file");
  add_common(construct);
  auto* verify = app.add_subcommand("verify-law", "re-validate a law file");
  add_common(verify);
  verify->add_option("--law", law_path, "law file to verify")->required();
  auto* trich = app.add_subcommand("trichotomy", "iterate-growth trichotomy suite");
  add_common(trich);
  auto* height = app.add_subcommand("height", "height detection from one automorphism");
  add_common(height);
  auto* centr = app.add_subcommand("centralizer", "commutant suite");
  add_common(centr);
  auto* norm = app.add_subcommand("normalizer", "conjugation suite");
  add_common(norm);
  auto* ram = app.add_subcommand("ramification", "height-one ramification terms");
  add_common(ram);
  auto* bench = app.add_subcommand("bench", "series kernel timings");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    lab::RunResult r = [&]() -> lab::RunResult {
      if (construct->parsed()) {
        auto res = lab::run_construct(cfg);
        // --out names the law file; the report itself goes to stdout
        ExperimentConfig view = cfg;
        view.out.clear();
        res.report.emit(view);
        return lab::RunResult{res.report, res.exit_code};
      }
      if (verify->parsed()) {
        auto res = lab::run_verify_law(cfg, law_path);
        res.report.emit(cfg);
        return res;
      }
      lab::RunResult res = trich->parsed()    ? lab::run_trichotomy(cfg)
                           : height->parsed() ? lab::run_height(cfg)
                           : centr->parsed()  ? lab::run_centralizer(cfg)
                           : norm->parsed()   ? lab::run_normalizer(cfg)
                           : ram->parsed()    ? lab::run_ramification(cfg)
                                              : lab::run_bench(cfg);
      res.report.emit(cfg);
      return res;
    }();
    return r.exit_code;
  } catch (const lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lab::PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
