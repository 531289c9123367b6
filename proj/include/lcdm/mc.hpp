#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcdm/censor_sweep.hpp"
#include "lcdm/simgen.hpp"

namespace lcdm {

inline constexpr std::uint64_t kDefaultSeed = 1729;

// z for the nominal band around the target level. The study convention is the
// normal 95th percentile (1.645), which reproduces the published
// (.0464, .0536) band at N_mc = 10000, alpha = .05.
inline constexpr double kBandZ = 1.6448536269514722;
inline constexpr double kTwoSidedZ = 1.959963984540054;

// One roster entry. Multi-group kinds ignore (a, b, alternative); pairwise
// kinds run samples a vs b (0 = x, 1 = y, 2 = z) with the given direction.
struct McTest {
  TestKind kind = TestKind::BROWN_FORSYTHE;
  int a = 0;
  int b = 1;
  Alternative alternative = Alternative::TWO_SIDED;
  std::string label;  // derived from the fields when empty
};
std::string mc_test_label(const McTest& t);
std::vector<McTest> default_multigroup_roster();  // bf, kw, f1, f2
// bf2/wrs/t/ks on pairs (x,y), (x,z), (y,z) with the given direction.
std::vector<McTest> default_pairwise_roster(Alternative alt);

struct McConfig {
  CaseId case_id = CaseId::NULL_L;
  std::array<std::size_t, 3> sizes = {1000, 1000, 1000};
  std::size_t n_mc = 2000;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;  // 0 = all hardware threads
  std::vector<McTest> roster;  // empty = default_multigroup_roster()
};

// Size/power study. Replicate t draws samples x, y, z from substream
// (seed, t), so results are identical regardless of worker count.
struct RejectionSummary {
  std::vector<McTest> roster;
  std::vector<double> rates;
  std::vector<double> ci_lo, ci_hi;        // rate +- 1.96 * SE(rate)
  std::vector<std::string> verdicts;       // vs nominal band (null cases)
  std::vector<std::vector<double>> agreement;  // mean of elementwise AND
  std::pair<double, double> nominal;
  std::size_t n_mc = 0;
  double alpha = 0.05;
};
RejectionSummary run_size_power(const McConfig& cfg);

// alpha +- z * sqrt(alpha*(1-alpha)/n_mc), clamped to [0, 1].
std::pair<double, double> nominal_band(std::size_t n_mc, double alpha,
                                       double z = kBandZ);

// Pooled two-proportion z-test for two rejection rates from n_mc replicates
// each. Equal rates give p = 1.
struct TwoProportion {
  double z = 0.0;
  double p = 1.0;
};
TwoProportion two_proportion_test(double rate1, double rate2,
                                  std::size_t n_mc);

// indicators[t][r]: test t rejected in replicate r. Returns the symmetric
// matrix of P(both reject); the diagonal is each test's own rate.
std::vector<std::vector<double>> agreement_proportions(
    const std::vector<std::vector<std::uint8_t>>& indicators);

// ============================================================================
// Censoring Monte Carlo: per-threshold mean p (with +-1.96 SE/sqrt(n) band),
// rejection rate, per-replicate corrected means, and coverage counts.
// Thresholds untestable in a replicate (guard / degenerate) are excluded for
// that replicate and reported through `covered`.
// ============================================================================
struct CensorMcCurve {
  McTest test;
  std::vector<double> gamma;
  std::vector<std::size_t> covered;
  std::vector<double> mean_p;              // NaN where covered == 0
  std::vector<double> band_lo, band_hi;    // clamped to [0, 1]
  std::vector<double> reject_rate;         // rejects / covered
  // mean over replicates of per-replicate corrected curves, per method
  std::vector<std::pair<Correction, std::vector<double>>> mean_adjusted;
};

struct CensorMcConfig {
  McConfig base;                      // roster: multi-group and/or pairwise
  std::optional<CensorSpec> censor;   // default: the case's censoring grid
  std::size_t min_n = 10;
  std::vector<Correction> corrections;
};
std::vector<CensorMcCurve> run_censor_mc(const CensorMcConfig& cfg);

}  // namespace lcdm
