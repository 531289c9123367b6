#include "lcdm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "lcdm/errors.hpp"
#include "lcdm/rng.hpp"

namespace lcdm {

namespace {

constexpr double kEps = 3e-15;     // continued fraction / series tolerance
constexpr double kTiny = 1e-300;   // Lentz underflow floor
constexpr int kMaxIter = 20000;    // covers df up to ~1e6

// ---------------------------------------------------------------------------
// Regularized incomplete gamma P(a, x)
// ---------------------------------------------------------------------------
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericalError("incomplete gamma series did not converge");
}

double gamma_q_contfrac(double a, double x) {
  // Lentz's method on the continued fraction for Q(a, x).
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

// ---------------------------------------------------------------------------
// Regularized incomplete beta I_x(a, b)
// ---------------------------------------------------------------------------
double beta_contfrac(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

double upper_tail_from_cdf(double cdf) {
  return std::min(1.0, std::max(0.0, 1.0 - cdf));
}

// Merged (value, group) pairs in ascending value order. Already-sorted groups
// (the common case: censoring sweeps pass sorted prefixes) take a linear
// k-way merge; otherwise fall back to a sort. Equal values may appear in any
// group order, which midrank accumulation is insensitive to.
std::vector<std::pair<double, std::size_t>> merged_labeled(
    const Groups& groups) {
  const std::size_t k = groups.size();
  std::size_t n_total = 0;
  bool all_sorted = true;
  for (const auto& g : groups) {
    n_total += g.size();
    all_sorted = all_sorted && std::is_sorted(g.begin(), g.end());
  }
  std::vector<std::pair<double, std::size_t>> v;
  v.reserve(n_total);
  if (all_sorted) {
    std::vector<std::size_t> head(k, 0);
    for (std::size_t filled = 0; filled < n_total; ++filled) {
      std::size_t best = k;
      for (std::size_t g = 0; g < k; ++g) {
        if (head[g] < groups[g].size() &&
            (best == k || groups[g][head[g]] < groups[best][head[best]])) {
          best = g;
        }
      }
      v.emplace_back(groups[best][head[best]], best);
      ++head[best];
    }
  } else {
    for (std::size_t g = 0; g < k; ++g) {
      for (double x : groups[g]) v.emplace_back(x, g);
    }
    std::sort(v.begin(), v.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
  }
  return v;
}

// Midranks over a merged two-sample. Returns the rank sum of sample a and
// the tie correction term sum over tie groups of t^3 - t.
struct RankInfo {
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
};

RankInfo midranks_two(Sample a, Sample b) {
  const auto v = merged_labeled(Groups{a, b});
  RankInfo info;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j].first == v[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t m = i; m < j; ++m) {
      if (v[m].second == 0) info.rank_sum_a += midrank;
    }
    info.tie_term += t * t * t - t;
    i = j;
  }
  return info;
}

void require_groups(const Groups& groups, std::size_t min_per_group,
                    const char* what) {
  if (groups.size() < 2) {
    throw SemanticError(std::string(what) + ": need at least 2 groups");
  }
  for (const auto& g : groups) {
    if (g.size() < min_per_group) {
      throw SemanticError(std::string(what) + ": group needs at least " +
                          std::to_string(min_per_group) + " values");
    }
  }
}

std::vector<double> abs_median_residuals(Sample g) {
  const double med = sample_median(g);
  std::vector<double> res(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) res[i] = std::fabs(g[i] - med);
  return res;
}

}  // namespace

// ============================================================================
// Special functions and CDFs
// ============================================================================
double reg_inc_gamma_lower(double a, double x) {
  if (!(a > 0.0)) throw SemanticError("incomplete gamma: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw SemanticError("incomplete beta: a, b must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                             std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_contfrac(a, b, x) / a;
  return 1.0 - bt * beta_contfrac(b, a, 1.0 - x) / b;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double t_cdf(double x, double df) {
  if (!(df > 0.0)) throw SemanticError("t_cdf: df must be positive");
  const double ib = reg_inc_beta(0.5 * df, 0.5, df / (df + x * x));
  return x >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double chi2_cdf(double x, double df) {
  if (!(df > 0.0)) throw SemanticError("chi2_cdf: df must be positive");
  if (x <= 0.0) return 0.0;
  return reg_inc_gamma_lower(0.5 * df, 0.5 * x);
}

double f_cdf(double x, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) {
    throw SemanticError("f_cdf: df must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return reg_inc_beta(0.5 * df1, 0.5 * df2, df1 * x / (df1 * x + df2));
}

double dist_cdf(DistKind kind, double x, double df1, double df2) {
  switch (kind) {
    case DistKind::F: return f_cdf(x, df1, df2);
    case DistKind::T: return t_cdf(x, df1);
    case DistKind::CHI2: return chi2_cdf(x, df1);
    case DistKind::STD_NORMAL: return std_normal_cdf(x);
  }
  throw SemanticError("dist_cdf: unknown distribution kind");
}

// ============================================================================
// Sample helpers
// ============================================================================
double sample_mean(Sample x) {
  if (x.empty()) throw SemanticError("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) /
         static_cast<double>(x.size());
}

double sample_variance(Sample x) {
  if (x.size() < 2) throw SemanticError("variance needs at least 2 values");
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double sample_median(Sample x) {
  if (x.empty()) throw SemanticError("median of empty sample");
  const std::size_t n = x.size();
  if (std::is_sorted(x.begin(), x.end())) {
    return (n % 2 == 1) ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
  }
  std::vector<double> v(x.begin(), x.end());
  const std::size_t hi = n / 2;
  std::nth_element(v.begin(), v.begin() + hi, v.end());
  if (n % 2 == 1) return v[hi];
  const double upper = v[hi];
  const double lower = *std::max_element(v.begin(), v.begin() + hi);
  return 0.5 * (lower + upper);
}

Groups as_groups(const std::vector<std::vector<double>>& gs) {
  Groups out;
  out.reserve(gs.size());
  for (const auto& g : gs) out.emplace_back(g.data(), g.size());
  return out;
}

const char* alternative_name(Alternative a) {
  switch (a) {
    case Alternative::TWO_SIDED: return "two";
    case Alternative::LESS: return "less";
    case Alternative::GREATER: return "greater";
  }
  return "?";
}

std::optional<Alternative> alternative_from_name(std::string_view s) {
  if (s == "two" || s == "two_sided" || s == "two-sided" || s == "twosided") {
    return Alternative::TWO_SIDED;
  }
  if (s == "less" || s == "l") return Alternative::LESS;
  if (s == "greater" || s == "g") return Alternative::GREATER;
  return std::nullopt;
}

// ============================================================================
// Tests
// ============================================================================
TestResult one_way_anova_f(const Groups& groups) {
  require_groups(groups, 1, "anova_f");
  const std::size_t k = groups.size();
  std::size_t n_total = 0;
  for (const auto& g : groups) n_total += g.size();
  if (n_total <= k) throw SemanticError("anova_f: no within-group df");

  double grand = 0.0;
  for (const auto& g : groups) grand += std::accumulate(g.begin(), g.end(), 0.0);
  grand /= static_cast<double>(n_total);

  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    const double m = sample_mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  const double df1 = static_cast<double>(k - 1);
  const double df2 = static_cast<double>(n_total - k);

  TestResult r{.name = "anova_f", .df1 = df1, .df2 = df2};
  if (ssw <= 0.0) {
    // Degenerate within-group variance: flat data is a non-result (p = 1);
    // separated constant groups are an infinite F.
    if (ssb <= 0.0) {
      r.statistic = 0.0;
      r.p = 1.0;
    } else {
      r.statistic = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  r.statistic = (ssb / df1) / (ssw / df2);
  r.p = upper_tail_from_cdf(f_cdf(r.statistic, df1, df2));
  return r;
}

TestResult welch_anova(const Groups& groups) {
  require_groups(groups, 2, "welch_anova");
  const std::size_t k = groups.size();
  std::vector<double> w(k), mean(k);
  double w_sum = 0.0, wm_sum = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    const double s2 = sample_variance(groups[g]);
    if (s2 <= 0.0) {
      throw NumericalError("welch_anova: zero within-group variance");
    }
    mean[g] = sample_mean(groups[g]);
    w[g] = static_cast<double>(groups[g].size()) / s2;
    w_sum += w[g];
    wm_sum += w[g] * mean[g];
  }
  const double grand = wm_sum / w_sum;
  double a = 0.0, tmp = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    a += w[g] * (mean[g] - grand) * (mean[g] - grand);
    const double u = 1.0 - w[g] / w_sum;
    tmp += u * u / static_cast<double>(groups[g].size() - 1);
  }
  const double kf = static_cast<double>(k);
  a /= (kf - 1.0);
  const double b = 2.0 * (kf - 2.0) / (kf * kf - 1.0) * tmp;
  const double df1 = kf - 1.0;
  const double df2 = (kf * kf - 1.0) / (3.0 * tmp);

  TestResult r{.name = "welch_anova", .df1 = df1, .df2 = df2};
  r.statistic = a / (1.0 + b);
  r.p = upper_tail_from_cdf(f_cdf(r.statistic, df1, df2));
  return r;
}

TestResult kruskal_wallis(const Groups& groups) {
  require_groups(groups, 1, "kruskal_wallis");
  const std::size_t k = groups.size();
  std::size_t n_total = 0;
  for (const auto& g : groups) n_total += g.size();
  if (n_total < 3) throw SemanticError("kruskal_wallis: need N >= 3");

  const auto v = merged_labeled(groups);  // (value, group), ascending

  std::vector<double> rank_sum(k, 0.0);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j].first == v[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t m = i; m < j; ++m) rank_sum[v[m].second] += midrank;
    tie_term += t * t * t - t;
    i = j;
  }

  const double n = static_cast<double>(n_total);
  double h = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    h += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
  const double c = 1.0 - tie_term / (n * n * n - n);

  TestResult r{.name = "kruskal_wallis", .df1 = static_cast<double>(k - 1)};
  if (c <= 0.0) {
    // Every observation identical: no evidence against the null.
    r.statistic = 0.0;
    r.p = 1.0;
    return r;
  }
  r.statistic = h / c;
  r.p = upper_tail_from_cdf(chi2_cdf(r.statistic, *r.df1));
  return r;
}

TestResult brown_forsythe(const Groups& groups) {
  require_groups(groups, 1, "brown_forsythe");
  std::vector<std::vector<double>> residuals;
  residuals.reserve(groups.size());
  for (const auto& g : groups) residuals.push_back(abs_median_residuals(g));
  TestResult r = one_way_anova_f(as_groups(residuals));
  r.name = "brown_forsythe";
  return r;
}

TestResult brown_forsythe_pairwise(Sample a, Sample b, Alternative alt) {
  const std::vector<double> ra = abs_median_residuals(a);
  const std::vector<double> rb = abs_median_residuals(b);
  TestResult r = welch_t(Sample(ra), Sample(rb), alt);
  // GREATER now reads as Var(a) > Var(b): larger spread, larger residual mean.
  r.name = "brown_forsythe_pairwise";
  return r;
}

TestResult wilcoxon_rank_sum(Sample a, Sample b, Alternative alt) {
  if (a.empty() || b.empty()) {
    throw SemanticError("wilcoxon_rank_sum: empty sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  const RankInfo info = midranks_two(a, b);
  const double mu = na * (n + 1.0) / 2.0;
  const double var =
      na * nb / 12.0 * ((n + 1.0) - info.tie_term / (n * (n - 1.0)));

  TestResult r{.name = "wilcoxon_rank_sum", .alternative = alt};
  if (var <= 0.0) {
    // Pooled sample is a single repeated constant.
    r.statistic = 0.0;
    r.p = 1.0;
    return r;
  }
  const double sd = std::sqrt(var);
  const double d = info.rank_sum_a - mu;
  switch (alt) {
    case Alternative::LESS:
      r.statistic = (d + 0.5) / sd;
      r.p = std_normal_cdf(r.statistic);
      break;
    case Alternative::GREATER:
      r.statistic = (d - 0.5) / sd;
      r.p = 1.0 - std_normal_cdf(r.statistic);
      break;
    case Alternative::TWO_SIDED: {
      const double cc = d > 0.0 ? 0.5 : (d < 0.0 ? -0.5 : 0.0);
      r.statistic = (d - cc) / sd;
      r.p = std::min(1.0, 2.0 * (1.0 - std_normal_cdf(std::fabs(r.statistic))));
      break;
    }
  }
  return r;
}

TestResult welch_t(Sample a, Sample b, Alternative alt) {
  if (a.size() < 2 || b.size() < 2) {
    throw SemanticError("welch_t: each sample needs at least 2 values");
  }
  const double s2a = sample_variance(a);
  const double s2b = sample_variance(b);
  if (s2a <= 0.0 || s2b <= 0.0) {
    throw NumericalError("welch_t: zero variance sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = s2a / na;
  const double vb = s2b / nb;
  const double se2 = va + vb;
  const double df =
      se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  TestResult r{.name = "welch_t", .df1 = df, .alternative = alt};
  r.statistic = (sample_mean(a) - sample_mean(b)) / std::sqrt(se2);
  const double cdf = t_cdf(r.statistic, df);
  switch (alt) {
    case Alternative::LESS: r.p = cdf; break;
    case Alternative::GREATER: r.p = 1.0 - cdf; break;
    case Alternative::TWO_SIDED:
      r.p = std::min(1.0, 2.0 * std::min(cdf, 1.0 - cdf));
      break;
  }
  return r;
}

TestResult ks_two_sample(Sample a, Sample b, Alternative alt) {
  if (a.empty() || b.empty()) throw SemanticError("ks: empty sample");
  std::vector<double> copy_a, copy_b;
  Sample sa = a, sb = b;
  if (!std::is_sorted(a.begin(), a.end())) {
    copy_a.assign(a.begin(), a.end());
    std::sort(copy_a.begin(), copy_a.end());
    sa = copy_a;
  }
  if (!std::is_sorted(b.begin(), b.end())) {
    copy_b.assign(b.begin(), b.end());
    std::sort(copy_b.begin(), copy_b.end());
    sb = copy_b;
  }
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());

  double d_plus = 0.0, d_minus = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < sa.size() || ib < sb.size()) {
    const double v = (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib]))
                         ? sa[ia]
                         : sb[ib];
    while (ia < sa.size() && sa[ia] <= v) ++ia;
    while (ib < sb.size() && sb[ib] <= v) ++ib;
    const double diff =
        static_cast<double>(ia) / na - static_cast<double>(ib) / nb;
    d_plus = std::max(d_plus, diff);
    d_minus = std::max(d_minus, -diff);
  }

  const double n_eff = na * nb / (na + nb);
  TestResult r{.name = "ks", .alternative = alt};
  auto one_sided_p = [&](double d) {
    return std::min(1.0, std::exp(-2.0 * n_eff * d * d));
  };
  switch (alt) {
    case Alternative::LESS:  // a stochastically smaller: F_a above F_b
      r.statistic = d_plus;
      r.p = one_sided_p(d_plus);
      break;
    case Alternative::GREATER:
      r.statistic = d_minus;
      r.p = one_sided_p(d_minus);
      break;
    case Alternative::TWO_SIDED: {
      const double d = std::max(d_plus, d_minus);
      r.statistic = d;
      const double lambda = std::sqrt(n_eff) * d;
      if (lambda < 1e-8) {
        r.p = 1.0;
        break;
      }
      double sum = 0.0;
      double sign = 1.0;
      for (int j = 1; j <= 1000; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;  // truncate once terms are negligible
        sign = -sign;
      }
      r.p = std::min(1.0, std::max(0.0, 2.0 * sum));
      break;
    }
  }
  return r;
}

TestResult lilliefors(Sample x, std::size_t n_mc, std::uint64_t seed) {
  if (x.size() < 5) throw SemanticError("lilliefors: need n >= 5");
  if (n_mc == 0) throw SemanticError("lilliefors: need n_mc >= 1");
  const double sd2 = sample_variance(x);
  if (sd2 <= 0.0) throw NumericalError("lilliefors: zero variance sample");

  // KS distance of the sample against Normal(mean, sd) with estimated params.
  auto ks_stat = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double u : v) ss += (u - m) * (u - m);
    const double s = std::sqrt(ss / (n - 1.0));
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double z = std_normal_cdf((v[i] - m) / s);
      d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - z));
      d = std::max(d, std::fabs(z - static_cast<double>(i) / n));
    }
    return d;
  };

  std::vector<double> v(x.begin(), x.end());
  const double d_obs = ks_stat(v);

  std::size_t exceed = 0;
  std::vector<double> sim(x.size());
  for (std::size_t t = 0; t < n_mc; ++t) {
    RngStream rng(seed, t);
    for (auto& u : sim) u = rng.normal();
    if (ks_stat(sim) >= d_obs) ++exceed;
  }
  const double p = static_cast<double>(exceed) / static_cast<double>(n_mc);

  TestResult r{.name = "lilliefors"};
  r.statistic = d_obs;
  r.p = p;
  r.mc_se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_mc));
  return r;
}

}  // namespace lcdm
