#include "lcdm/censor_sweep.hpp"

#include <algorithm>
#include <string>

#include "lcdm/errors.hpp"

namespace lcdm {

namespace {

// Censored prefix of an ascending-sorted sample: values <= gamma.
Sample prefix_at(const std::vector<double>& sorted, double gamma) {
  const auto end = std::upper_bound(sorted.begin(), sorted.end(), gamma);
  return Sample(sorted.data(), static_cast<std::size_t>(end - sorted.begin()));
}

TestResult run_multigroup_kind(TestKind kind, const Groups& groups) {
  switch (kind) {
    case TestKind::ANOVA_F: return one_way_anova_f(groups);
    case TestKind::WELCH_ANOVA: return welch_anova(groups);
    case TestKind::KRUSKAL_WALLIS: return kruskal_wallis(groups);
    case TestKind::BROWN_FORSYTHE: return brown_forsythe(groups);
    default: throw SemanticError("multi-group sweep: pairwise test kind");
  }
}

TestResult run_pairwise_kind(TestKind kind, Sample a, Sample b,
                             Alternative alt) {
  switch (kind) {
    case TestKind::BF_PAIRWISE: return brown_forsythe_pairwise(a, b, alt);
    case TestKind::WRS: return wilcoxon_rank_sum(a, b, alt);
    case TestKind::WELCH_T: return welch_t(a, b, alt);
    case TestKind::KS: return ks_two_sample(a, b, alt);
    default: throw SemanticError("pairwise sweep: multi-group test kind");
  }
}

}  // namespace

bool is_pairwise(TestKind k) {
  switch (k) {
    case TestKind::BF_PAIRWISE:
    case TestKind::WRS:
    case TestKind::WELCH_T:
    case TestKind::KS:
      return true;
    default:
      return false;
  }
}

const char* test_kind_name(TestKind k) {
  switch (k) {
    case TestKind::ANOVA_F: return "f1";
    case TestKind::WELCH_ANOVA: return "f2";
    case TestKind::KRUSKAL_WALLIS: return "kw";
    case TestKind::BROWN_FORSYTHE: return "bf";
    case TestKind::BF_PAIRWISE: return "bf2";
    case TestKind::WRS: return "wrs";
    case TestKind::WELCH_T: return "t";
    case TestKind::KS: return "ks";
  }
  return "?";
}

std::optional<TestKind> test_kind_from_name(std::string_view s) {
  if (s == "f1") return TestKind::ANOVA_F;
  if (s == "f2") return TestKind::WELCH_ANOVA;
  if (s == "kw") return TestKind::KRUSKAL_WALLIS;
  if (s == "bf") return TestKind::BROWN_FORSYTHE;
  if (s == "bf2") return TestKind::BF_PAIRWISE;
  if (s == "wrs") return TestKind::WRS;
  if (s == "t") return TestKind::WELCH_T;
  if (s == "ks") return TestKind::KS;
  return std::nullopt;
}

PValueCurve sweep_multigroup(const std::vector<std::vector<double>>& groups,
                             TestKind kind, const SweepConfig& cfg) {
  if (is_pairwise(kind)) {
    throw SemanticError("sweep_multigroup: pairwise test kind");
  }
  if (groups.size() < 2) {
    throw SemanticError("sweep_multigroup: need at least 2 groups");
  }
  std::vector<std::vector<double>> sorted(groups);
  for (auto& g : sorted) std::sort(g.begin(), g.end());

  PValueCurve curve;
  curve.test = test_kind_name(kind);
  for (double gamma : censor_thresholds(cfg.censor)) {
    CurvePoint pt;
    pt.gamma = gamma;
    Groups spans;
    spans.reserve(sorted.size());
    bool guarded = false;
    for (const auto& g : sorted) {
      const Sample s = prefix_at(g, gamma);
      pt.group_n.push_back(s.size());
      spans.push_back(s);
      guarded = guarded || s.size() < cfg.min_n;
    }
    if (!guarded) {
      try {
        pt.p = run_multigroup_kind(kind, spans).p;
      } catch (const NumericalError&) {
        // degenerate censored prefix: leave the point MISSING
      }
    }
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

PValueCurve sweep_pairwise(std::span<const double> a, std::span<const double> b,
                           TestKind kind, Alternative alt,
                           const SweepConfig& cfg) {
  if (!is_pairwise(kind)) {
    throw SemanticError("sweep_pairwise: multi-group test kind");
  }
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  PValueCurve curve;
  curve.test = test_kind_name(kind);
  curve.alternative = alt;
  for (double gamma : censor_thresholds(cfg.censor)) {
    CurvePoint pt;
    pt.gamma = gamma;
    const Sample pa = prefix_at(sa, gamma);
    const Sample pb = prefix_at(sb, gamma);
    pt.group_n = {pa.size(), pb.size()};
    if (pa.size() >= cfg.min_n && pb.size() >= cfg.min_n) {
      try {
        pt.p = run_pairwise_kind(kind, pa, pb, alt).p;
      } catch (const NumericalError&) {
        // degenerate censored prefix: leave the point MISSING
      }
    }
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

void apply_correction(PValueCurve& curve, Correction method) {
  curve.correction = method;
  std::size_t i = 0;
  const std::size_t n = curve.points.size();
  while (i < n) {
    if (!curve.points[i].p) {
      curve.points[i].p_adjusted.reset();
      ++i;
      continue;
    }
    std::size_t j = i;
    std::vector<double> run;
    while (j < n && curve.points[j].p) {
      run.push_back(*curve.points[j].p);
      ++j;
    }
    const std::vector<double> adj = adjust_pvalues(run, method);
    for (std::size_t k = i; k < j; ++k) {
      curve.points[k].p_adjusted = adj[k - i];
    }
    i = j;
  }
}

std::vector<GammaRange> extract_ranges(
    std::span<const double> gamma,
    std::span<const std::optional<double>> values, double threshold,
    bool below) {
  if (gamma.size() != values.size()) {
    throw SemanticError("extract_ranges: gamma/value size mismatch");
  }
  auto hit = [&](std::size_t i) {
    return values[i].has_value() &&
           (below ? *values[i] < threshold : *values[i] > threshold);
  };
  std::vector<GammaRange> out;
  std::size_t i = 0;
  while (i < gamma.size()) {
    if (!hit(i)) {
      ++i;
      continue;
    }
    GammaRange r;
    r.lo = gamma[i];
    r.extremum = *values[i];
    r.extremum_gamma = gamma[i];
    std::size_t j = i;
    while (j < gamma.size() && hit(j)) {
      const double v = *values[j];
      if (below ? v < r.extremum : v > r.extremum) {
        r.extremum = v;
        r.extremum_gamma = gamma[j];
      }
      r.hi = gamma[j];
      ++r.count;
      ++j;
    }
    out.push_back(r);
    i = j;
  }
  return out;
}

std::vector<GammaRange> significant_ranges(const PValueCurve& curve,
                                           double alpha, bool use_adjusted) {
  std::vector<double> gamma;
  std::vector<std::optional<double>> values;
  gamma.reserve(curve.points.size());
  values.reserve(curve.points.size());
  for (const auto& pt : curve.points) {
    gamma.push_back(pt.gamma);
    values.push_back(use_adjusted ? pt.p_adjusted : pt.p);
  }
  return extract_ranges(gamma, values, alpha, true);
}

}  // namespace lcdm
