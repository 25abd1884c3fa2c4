#pragma once

#include "fglab/endo.hpp"
#include "fglab/report.hpp"

namespace fglab::lab {

/// Construct the standardized height-h law over F_{p^{field_deg}} at
/// precision N (lift pipeline + validation).
fgl::FormalGroupLaw build_standard_law(int p, int h, int N, int field_deg,
                                       int assoc_prec = 0);

/// Default precision for an experiment when the config leaves prec = 0.
int default_prec(const std::string& experiment, int p, int h);

RunResult run_construct(const ExperimentConfig& cfg);
RunResult run_verify_law(const ExperimentConfig& cfg, const std::string& law_path);
RunResult run_trichotomy(const ExperimentConfig& cfg);
RunResult run_height(const ExperimentConfig& cfg);
RunResult run_centralizer(const ExperimentConfig& cfg);
RunResult run_normalizer(const ExperimentConfig& cfg);
RunResult run_ramification(const ExperimentConfig& cfg);
RunResult run_bench(const ExperimentConfig& cfg);

/// The height-detection probe series u = id +_G fr^{o r} with the smallest
/// stable leading exponent M = p^r, evaluated at x-precision M*p^{2h} + M
/// so that two consecutive stable ratios fit in the window.
TruncSeries<GfRing> height_probe_series(int p, int h);

}  // namespace fglab::lab
