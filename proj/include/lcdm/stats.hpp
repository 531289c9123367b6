#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lcdm {

using Sample = std::span<const double>;
using Groups = std::vector<Sample>;

enum class Alternative { TWO_SIDED, LESS, GREATER };

const char* alternative_name(Alternative a);
std::optional<Alternative> alternative_from_name(std::string_view s);

struct TestResult {
  std::string name;
  double statistic = 0.0;
  std::optional<double> df1;
  std::optional<double> df2;
  Alternative alternative = Alternative::TWO_SIDED;
  double p = 1.0;
  std::optional<double> mc_se;  // set only for Monte Carlo calibrated p-values
};

// ============================================================================
// Distribution CDFs (regularized incomplete beta/gamma under the hood)
// ============================================================================
double std_normal_cdf(double x);
double t_cdf(double x, double df);
double chi2_cdf(double x, double df);
double f_cdf(double x, double df1, double df2);

enum class DistKind { F, T, CHI2, STD_NORMAL };
double dist_cdf(DistKind kind, double x, double df1 = 0.0, double df2 = 0.0);

// Exposed for direct verification against closed forms.
double reg_inc_gamma_lower(double a, double x);
double reg_inc_beta(double a, double b, double x);

// ============================================================================
// Small-sample helpers
// ============================================================================
double sample_mean(Sample x);
double sample_variance(Sample x);  // ddof = 1
double sample_median(Sample x);    // even n -> average of the middle two

// ============================================================================
// Hypothesis tests
// ============================================================================
// One-way ANOVA F (k >= 2 groups). Zero within- and between-group variance
// gives F = 0, p = 1 by convention.
TestResult one_way_anova_f(const Groups& groups);

// Welch's heteroscedastic ANOVA; Welch-Satterthwaite denominator df.
TestResult welch_anova(const Groups& groups);

// Kruskal-Wallis with midranks and tie correction; chi-square with k-1 df.
TestResult kruskal_wallis(const Groups& groups);

// Brown-Forsythe homogeneity-of-variance: ANOVA F on |x - group median|.
TestResult brown_forsythe(const Groups& groups);

// Pairwise Brown-Forsythe: Welch t on median residuals.
// GREATER means Var(a) > Var(b).
TestResult brown_forsythe_pairwise(Sample a, Sample b, Alternative alt);

// Wilcoxon rank-sum, normal approximation with continuity correction and
// tie-adjusted variance. LESS means a-values stochastically smaller.
TestResult wilcoxon_rank_sum(Sample a, Sample b, Alternative alt);

// Welch two-sample t. LESS means mean(a) < mean(b).
TestResult welch_t(Sample a, Sample b, Alternative alt);

// Two-sample Kolmogorov-Smirnov, asymptotic p with effective
// n = n_a*n_b/(n_a+n_b). LESS/GREATER use the one-sided suprema
// D+ = sup(F_a - F_b) / D- = sup(F_b - F_a).
TestResult ks_two_sample(Sample a, Sample b, Alternative alt);

// Normality test with estimated mean/sd; p calibrated by seeded Monte Carlo
// (n_mc standard-normal resamples at the same n); mc_se reports the p SE.
inline constexpr std::uint64_t kLillieforsSeed = 0x11e'f0'5ULL;
TestResult lilliefors(Sample x, std::size_t n_mc = 2000,
                      std::uint64_t seed = kLillieforsSeed);

// Convenience for containers of owned vectors.
Groups as_groups(const std::vector<std::vector<double>>& gs);

}  // namespace lcdm
