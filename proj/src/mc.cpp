#include "lcdm/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "lcdm/errors.hpp"

namespace lcdm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void validate_roster(const std::vector<McTest>& roster) {
  if (roster.empty()) throw SemanticError("mc: empty test roster");
  for (const auto& t : roster) {
    if (is_pairwise(t.kind)) {
      if (t.a < 0 || t.a > 2 || t.b < 0 || t.b > 2 || t.a == t.b) {
        throw SemanticError("mc: pairwise test needs distinct samples in 0..2");
      }
    }
  }
}

void validate_config(const McConfig& cfg) {
  if (cfg.n_mc == 0) throw SemanticError("mc: n_mc must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw SemanticError("mc: alpha must be in (0, 1)");
  }
  for (std::size_t n : cfg.sizes) {
    if (n == 0) throw SemanticError("mc: sample sizes must be positive");
  }
}

std::array<std::vector<double>, 3> generate_replicate(
    const StudyCase& sc, const std::array<std::size_t, 3>& sizes,
    std::uint64_t seed, std::size_t t) {
  // One substream per replicate: results do not depend on worker count.
  RngStream rng(seed, t);
  return {generate(sc.specs[0], sizes[0], rng),
          generate(sc.specs[1], sizes[1], rng),
          generate(sc.specs[2], sizes[2], rng)};
}

double eval_mc_test(const McTest& test,
                    const std::array<std::vector<double>, 3>& s) {
  switch (test.kind) {
    case TestKind::ANOVA_F:
      return one_way_anova_f(as_groups({s[0], s[1], s[2]})).p;
    case TestKind::WELCH_ANOVA:
      return welch_anova(as_groups({s[0], s[1], s[2]})).p;
    case TestKind::KRUSKAL_WALLIS:
      return kruskal_wallis(as_groups({s[0], s[1], s[2]})).p;
    case TestKind::BROWN_FORSYTHE:
      return brown_forsythe(as_groups({s[0], s[1], s[2]})).p;
    case TestKind::BF_PAIRWISE:
      return brown_forsythe_pairwise(Sample(s[test.a]), Sample(s[test.b]),
                                     test.alternative).p;
    case TestKind::WRS:
      return wilcoxon_rank_sum(Sample(s[test.a]), Sample(s[test.b]),
                               test.alternative).p;
    case TestKind::WELCH_T:
      return welch_t(Sample(s[test.a]), Sample(s[test.b]), test.alternative).p;
    case TestKind::KS:
      return ks_two_sample(Sample(s[test.a]), Sample(s[test.b]),
                           test.alternative).p;
  }
  throw SemanticError("mc: unknown test kind");
}

// Run fn(t) for t in [begin, end) across threads; fn must only touch slot t.
void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const int nt = std::min<int>(resolve_threads(threads),
                               static_cast<int>(std::max<std::size_t>(
                                   1, end - begin)));
  if (nt <= 1) {
    for (std::size_t t = begin; t < end; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= end) break;
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string mc_test_label(const McTest& t) {
  if (!t.label.empty()) return t.label;
  if (!is_pairwise(t.kind)) return test_kind_name(t.kind);
  static constexpr const char* kSampleNames = "xyz";
  const char op = t.alternative == Alternative::LESS
                      ? '<'
                      : (t.alternative == Alternative::GREATER ? '>' : ',');
  std::string s = test_kind_name(t.kind);
  s += '[';
  s += kSampleNames[t.a];
  s += op;
  s += kSampleNames[t.b];
  s += ']';
  return s;
}

std::vector<McTest> default_multigroup_roster() {
  return {{TestKind::BROWN_FORSYTHE, 0, 1, Alternative::TWO_SIDED, ""},
          {TestKind::KRUSKAL_WALLIS, 0, 1, Alternative::TWO_SIDED, ""},
          {TestKind::ANOVA_F, 0, 1, Alternative::TWO_SIDED, ""},
          {TestKind::WELCH_ANOVA, 0, 1, Alternative::TWO_SIDED, ""}};
}

std::vector<McTest> default_pairwise_roster(Alternative alt) {
  std::vector<McTest> out;
  for (const auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    out.push_back({TestKind::BF_PAIRWISE, a, b, alt, ""});
    out.push_back({TestKind::WRS, a, b, alt, ""});
    out.push_back({TestKind::WELCH_T, a, b, alt, ""});
    out.push_back({TestKind::KS, a, b, alt, ""});
  }
  return out;
}

std::pair<double, double> nominal_band(std::size_t n_mc, double alpha,
                                       double z) {
  if (n_mc < 30) throw SemanticError("nominal_band: need n_mc >= 30");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw SemanticError("nominal_band: alpha must be in (0, 1)");
  }
  const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(n_mc));
  return {std::max(0.0, alpha - z * se), std::min(1.0, alpha + z * se)};
}

TwoProportion two_proportion_test(double rate1, double rate2,
                                  std::size_t n_mc) {
  if (n_mc == 0) throw SemanticError("two_proportion_test: n_mc must be > 0");
  for (double r : {rate1, rate2}) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw SemanticError("two_proportion_test: rate outside [0, 1]");
    }
  }
  const double pbar = 0.5 * (rate1 + rate2);
  const double se =
      std::sqrt(pbar * (1.0 - pbar) * 2.0 / static_cast<double>(n_mc));
  TwoProportion out;
  if (se == 0.0) return out;  // both 0 or both 1: no evidence of a difference
  out.z = (rate1 - rate2) / se;
  out.p = std::min(1.0, 2.0 * (1.0 - std_normal_cdf(std::fabs(out.z))));
  return out;
}

std::vector<std::vector<double>> agreement_proportions(
    const std::vector<std::vector<std::uint8_t>>& indicators) {
  const std::size_t k = indicators.size();
  if (k == 0) return {};
  const std::size_t n = indicators[0].size();
  for (const auto& row : indicators) {
    if (row.size() != n) {
      throw SemanticError("agreement_proportions: ragged indicator matrix");
    }
  }
  if (n == 0) throw SemanticError("agreement_proportions: no replicates");
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::size_t both = 0;
      for (std::size_t r = 0; r < n; ++r) {
        both += static_cast<std::size_t>(indicators[i][r] && indicators[j][r]);
      }
      m[i][j] = m[j][i] = static_cast<double>(both) / static_cast<double>(n);
    }
  }
  return m;
}

RejectionSummary run_size_power(const McConfig& cfg) {
  validate_config(cfg);
  const std::vector<McTest> roster =
      cfg.roster.empty() ? default_multigroup_roster() : cfg.roster;
  validate_roster(roster);
  const StudyCase sc = case_params(cfg.case_id);
  const std::size_t nt = roster.size();

  std::vector<std::vector<std::uint8_t>> indicators(
      nt, std::vector<std::uint8_t>(cfg.n_mc, 0));

  constexpr std::size_t kBlock = 1024;
  std::vector<double> pbuf(kBlock * nt);
  for (std::size_t bs = 0; bs < cfg.n_mc; bs += kBlock) {
    const std::size_t be = std::min(cfg.n_mc, bs + kBlock);
    parallel_for(bs, be, cfg.threads, [&](std::size_t t) {
      const auto samples = generate_replicate(sc, cfg.sizes, cfg.seed, t);
      double* row = pbuf.data() + (t - bs) * nt;
      for (std::size_t i = 0; i < nt; ++i) {
        row[i] = eval_mc_test(roster[i], samples);
      }
    });
    for (std::size_t t = bs; t < be; ++t) {
      const double* row = pbuf.data() + (t - bs) * nt;
      for (std::size_t i = 0; i < nt; ++i) {
        indicators[i][t] = row[i] < cfg.alpha ? 1 : 0;
      }
    }
  }

  RejectionSummary out;
  out.roster = roster;
  out.n_mc = cfg.n_mc;
  out.alpha = cfg.alpha;
  out.nominal = cfg.n_mc >= 30 ? nominal_band(cfg.n_mc, cfg.alpha)
                               : std::pair{0.0, 1.0};
  out.agreement = agreement_proportions(indicators);
  const double n = static_cast<double>(cfg.n_mc);
  for (std::size_t i = 0; i < nt; ++i) {
    const double rate = out.agreement[i][i];  // diagonal = own rate
    const double se = std::sqrt(rate * (1.0 - rate) / n);
    out.rates.push_back(rate);
    out.ci_lo.push_back(std::max(0.0, rate - kTwoSidedZ * se));
    out.ci_hi.push_back(std::min(1.0, rate + kTwoSidedZ * se));
    out.verdicts.push_back(rate < out.nominal.first
                               ? "below_band"
                               : (rate > out.nominal.second ? "above_band"
                                                            : "within_band"));
  }
  return out;
}

std::vector<CensorMcCurve> run_censor_mc(const CensorMcConfig& cfg) {
  validate_config(cfg.base);
  const std::vector<McTest> roster =
      cfg.base.roster.empty() ? default_multigroup_roster() : cfg.base.roster;
  validate_roster(roster);
  if (cfg.min_n == 0) throw SemanticError("censor mc: min_n must be positive");
  const StudyCase sc = case_params(cfg.base.case_id);
  const CensorSpec censor = cfg.censor.value_or(sc.censor);
  const std::vector<double> thresholds = censor_thresholds(censor);
  const SweepConfig sweep_cfg{censor, cfg.min_n};
  const std::size_t nt = roster.size();
  const std::size_t nk = thresholds.size();

  struct Accum {
    std::vector<std::size_t> covered, rejects;
    std::vector<double> sum, sum2;
    std::vector<std::vector<double>> adj_sum;  // per correction method
    explicit Accum(std::size_t nk, std::size_t n_corr)
        : covered(nk, 0),
          rejects(nk, 0),
          sum(nk, 0.0),
          sum2(nk, 0.0),
          adj_sum(n_corr, std::vector<double>(nk, 0.0)) {}
  };
  std::vector<Accum> acc(nt, Accum(nk, cfg.corrections.size()));

  // Per-replicate p matrices are computed in parallel blocks, then reduced in
  // replicate order so results are bit-identical for any worker count.
  constexpr std::size_t kBlock = 256;
  const std::size_t block =
      std::min<std::size_t>(kBlock, std::max<std::size_t>(1, cfg.base.n_mc));
  std::vector<double> pbuf(block * nt * nk, kNaN);

  for (std::size_t bs = 0; bs < cfg.base.n_mc; bs += block) {
    const std::size_t be = std::min(cfg.base.n_mc, bs + block);
    parallel_for(bs, be, cfg.base.threads, [&](std::size_t t) {
      const auto samples =
          generate_replicate(sc, cfg.base.sizes, cfg.base.seed, t);
      const std::vector<std::vector<double>> groups = {samples[0], samples[1],
                                                       samples[2]};
      double* base = pbuf.data() + (t - bs) * nt * nk;
      for (std::size_t i = 0; i < nt; ++i) {
        const McTest& test = roster[i];
        const PValueCurve curve =
            is_pairwise(test.kind)
                ? sweep_pairwise(Sample(samples[test.a]),
                                 Sample(samples[test.b]), test.kind,
                                 test.alternative, sweep_cfg)
                : sweep_multigroup(groups, test.kind, sweep_cfg);
        for (std::size_t k = 0; k < nk; ++k) {
          base[i * nk + k] =
              curve.points[k].p ? *curve.points[k].p : kNaN;
        }
      }
    });
    for (std::size_t t = bs; t < be; ++t) {
      const double* base = pbuf.data() + (t - bs) * nt * nk;
      for (std::size_t i = 0; i < nt; ++i) {
        const double* row = base + i * nk;
        Accum& a = acc[i];
        for (std::size_t k = 0; k < nk; ++k) {
          const double p = row[k];
          if (std::isnan(p)) continue;
          ++a.covered[k];
          a.sum[k] += p;
          a.sum2[k] += p * p;
          if (p < cfg.base.alpha) ++a.rejects[k];
        }
        // Correct this replicate's curve, one contiguous run at a time.
        for (std::size_t c = 0; c < cfg.corrections.size(); ++c) {
          std::size_t k = 0;
          while (k < nk) {
            if (std::isnan(row[k])) {
              ++k;
              continue;
            }
            std::size_t j = k;
            std::vector<double> run;
            while (j < nk && !std::isnan(row[j])) run.push_back(row[j++]);
            const std::vector<double> adj =
                adjust_pvalues(run, cfg.corrections[c]);
            for (std::size_t m = k; m < j; ++m) {
              a.adj_sum[c][m] += adj[m - k];
            }
            k = j;
          }
        }
      }
    }
  }

  std::vector<CensorMcCurve> out(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    CensorMcCurve& c = out[i];
    c.test = roster[i];
    c.gamma = thresholds;
    c.covered = acc[i].covered;
    c.mean_p.assign(nk, kNaN);
    c.band_lo.assign(nk, kNaN);
    c.band_hi.assign(nk, kNaN);
    c.reject_rate.assign(nk, kNaN);
    c.mean_adjusted.resize(cfg.corrections.size());
    for (std::size_t m = 0; m < cfg.corrections.size(); ++m) {
      c.mean_adjusted[m].first = cfg.corrections[m];
      c.mean_adjusted[m].second.assign(nk, kNaN);
    }
    for (std::size_t k = 0; k < nk; ++k) {
      const std::size_t cov = acc[i].covered[k];
      if (cov == 0) continue;
      const double n = static_cast<double>(cov);
      const double mean = acc[i].sum[k] / n;
      c.mean_p[k] = mean;
      c.reject_rate[k] = static_cast<double>(acc[i].rejects[k]) / n;
      double half = 0.0;
      if (cov >= 2) {
        const double var =
            std::max(0.0, (acc[i].sum2[k] - n * mean * mean) / (n - 1.0));
        half = kTwoSidedZ * std::sqrt(var / n);
      }
      c.band_lo[k] = std::max(0.0, mean - half);
      c.band_hi[k] = std::min(1.0, mean + half);
      for (std::size_t m = 0; m < cfg.corrections.size(); ++m) {
        c.mean_adjusted[m].second[k] = acc[i].adj_sum[m][k] / n;
      }
    }
  }
  return out;
}

}  // namespace lcdm
