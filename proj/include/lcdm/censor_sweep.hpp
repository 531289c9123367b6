#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lcdm/correction.hpp"
#include "lcdm/dataset.hpp"
#include "lcdm/stats.hpp"

namespace lcdm {

// Roster of per-threshold tests. Multi-group kinds run on all groups;
// pairwise kinds run on a (a, b) pair with a direction.
enum class TestKind {
  ANOVA_F,         // "f1"
  WELCH_ANOVA,     // "f2"
  KRUSKAL_WALLIS,  // "kw"
  BROWN_FORSYTHE,  // "bf"
  BF_PAIRWISE,     // "bf2"
  WRS,             // "wrs"
  WELCH_T,         // "t"
  KS,              // "ks"
};
bool is_pairwise(TestKind k);
const char* test_kind_name(TestKind k);
std::optional<TestKind> test_kind_from_name(std::string_view s);

struct SweepConfig {
  CensorSpec censor;
  std::size_t min_n = 10;  // per-group guard; below it the point is MISSING
};

struct CurvePoint {
  double gamma = 0.0;
  std::optional<double> p;           // empty = MISSING (guard or degenerate)
  std::optional<double> p_adjusted;  // filled by apply_correction
  std::vector<std::size_t> group_n;  // censored sizes at this threshold
};

struct PValueCurve {
  std::string test;  // e.g. "bf", "wrs[x,y]"
  Alternative alternative = Alternative::TWO_SIDED;
  Correction correction = Correction::NONE;
  std::vector<CurvePoint> points;  // ascending gamma
};

// Per-threshold multi-group test over the censored prefixes of `groups`.
PValueCurve sweep_multigroup(const std::vector<std::vector<double>>& groups,
                             TestKind kind, const SweepConfig& cfg);

// Per-threshold pairwise test; group_n holds the pair's censored sizes.
PValueCurve sweep_pairwise(std::span<const double> a, std::span<const double> b,
                           TestKind kind, Alternative alt,
                           const SweepConfig& cfg);

// Adjust one curve as a multiplicity family across its thresholds.
// MISSING points split the family: each contiguous non-missing run is
// corrected on its own.
void apply_correction(PValueCurve& curve, Correction method);

// Maximal runs where the curve value is below (or above) `threshold`,
// with each run's extremum and its location. MISSING points break runs.
struct GammaRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;     // points in the run
  double extremum = 0.0;     // min value (below mode) / max value (above mode)
  double extremum_gamma = 0.0;
};
std::vector<GammaRange> extract_ranges(
    std::span<const double> gamma,
    std::span<const std::optional<double>> values, double threshold,
    bool below);

// Ranges where the adjusted (if present) or raw p of `curve` is below alpha.
std::vector<GammaRange> significant_ranges(const PValueCurve& curve,
                                           double alpha,
                                           bool use_adjusted = false);

}  // namespace lcdm
