#include "lcdm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "lcdm/errors.hpp"

namespace lcdm {

const char* hemisphere_name(Hemisphere h) {
  switch (h) {
    case Hemisphere::LEFT: return "left";
    case Hemisphere::RIGHT: return "right";
    case Hemisphere::NONE: return "none";
  }
  return "?";
}

std::optional<Hemisphere> hemisphere_from_name(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t == "left" || t == "l") return Hemisphere::LEFT;
  if (t == "right" || t == "r") return Hemisphere::RIGHT;
  if (t == "none" || t == "") return Hemisphere::NONE;
  return std::nullopt;
}

void validate(const CensorSpec& spec) {
  if (!(spec.delta > 0.0)) {
    throw SemanticError("censor spec: delta must be positive");
  }
  if (!(spec.d_max > 0.0)) {
    throw SemanticError("censor spec: d_max must be positive");
  }
  if (spec.analysis_lo < 0.0 || spec.analysis_lo > spec.d_max) {
    throw SemanticError("censor spec: analysis_lo must be in [0, d_max]");
  }
}

std::vector<double> censor_thresholds(const CensorSpec& spec) {
  validate(spec);
  const double tol = spec.delta * 1e-9;
  const auto k_lo = static_cast<long long>(
      std::ceil((spec.analysis_lo - tol) / spec.delta));
  const auto k_hi =
      static_cast<long long>(std::floor((spec.d_max + tol) / spec.delta));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(0LL, k_hi - k_lo + 1)));
  for (long long k = std::max(0LL, k_lo); k <= k_hi; ++k) {
    out.push_back(static_cast<double>(k) * spec.delta);
  }
  return out;
}

TrimResult trim(Sample distances, double lo, double hi) {
  if (!(lo < hi)) throw SemanticError("trim: need lo < hi");
  TrimResult r;
  r.kept.reserve(distances.size());
  for (double d : distances) {
    if (d <= lo) {
      ++r.n_below;
    } else if (d > hi) {
      ++r.n_above;
    } else {
      r.kept.push_back(d);
    }
  }
  const double n = static_cast<double>(distances.size());
  if (n > 0) {
    r.frac_below = static_cast<double>(r.n_below) / n;
    r.frac_above = static_cast<double>(r.n_above) / n;
  }
  return r;
}

GroupPool pool(const std::vector<SubjectDistances>& subjects,
               const std::string& group) {
  GroupPool out;
  out.group = group;
  bool first = true;
  for (const auto& s : subjects) {
    if (s.group != group) continue;
    if (first) {
      out.hemisphere = s.hemisphere;
      first = false;
    } else if (s.hemisphere != out.hemisphere) {
      throw SemanticError("pool: mixed hemispheres in group '" + group + "'");
    }
    out.subject_ids.push_back(s.subject_id);
    out.distances.insert(out.distances.end(), s.distances.begin(),
                         s.distances.end());
  }
  if (first) throw SemanticError("pool: no subjects in group '" + group + "'");
  return out;
}

std::vector<double> censor_at(Sample distances, double gamma) {
  std::vector<double> out;
  out.reserve(distances.size());
  for (double d : distances) {
    if (d <= gamma) out.push_back(d);
  }
  return out;
}

DescriptiveStats descriptives(Sample x) {
  if (x.empty()) throw SemanticError("descriptives: empty sample");
  DescriptiveStats s;
  s.n = x.size();
  s.mean = sample_mean(x);
  s.median = sample_median(x);
  s.sd = x.size() >= 2 ? std::sqrt(sample_variance(x)) : 0.0;
  return s;
}

KdeResult kde(Sample x, double bandwidth, std::size_t grid_points) {
  if (x.size() < 2) throw SemanticError("kde: need at least 2 values");
  if (grid_points < 2) throw SemanticError("kde: need at least 2 grid points");
  const double n = static_cast<double>(x.size());
  const double sd = std::sqrt(sample_variance(x));
  if (sd <= 0.0) throw NumericalError("kde: zero variance sample");

  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());

  double bw = bandwidth;
  if (bw <= 0.0) {
    // Silverman: 0.9 * min(SD, IQR/1.34) * n^(-1/5); fall back to SD when the
    // IQR collapses (heavily tied data).
    auto quantile = [&](double q) {  // linear interpolation on order stats
      const double h = (n - 1.0) * q;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const auto hi = std::min(lo + 1, v.size() - 1);
      return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double scale = std::min(sd, iqr / 1.34);
    if (scale <= 0.0) scale = sd;
    bw = 0.9 * scale * std::pow(n, -0.2);
  }

  KdeResult out;
  out.bandwidth = bw;
  const double lo = v.front() - 3.0 * bw;
  const double hi = v.back() + 3.0 * bw;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  out.x.resize(grid_points);
  out.density.resize(grid_points);
  const double norm = 1.0 / (n * bw * std::sqrt(2.0 * M_PI));
  const double window = 10.0 * bw;  // beyond this the kernel is ~1e-22
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double g = lo + static_cast<double>(i) * step;
    out.x[i] = g;
    const auto begin =
        std::lower_bound(v.begin(), v.end(), g - window) - v.begin();
    const auto end =
        std::upper_bound(v.begin(), v.end(), g + window) - v.begin();
    double acc = 0.0;
    for (auto m = begin; m < end; ++m) {
      const double u = (g - v[static_cast<std::size_t>(m)]) / bw;
      acc += std::exp(-0.5 * u * u);
    }
    out.density[i] = norm * acc;
  }
  return out;
}

std::vector<double> subject_vs_group_wrs(const SubjectDistances& subject,
                                         const std::vector<GroupPool>& pools) {
  if (subject.distances.empty()) {
    throw SemanticError("subject_vs_group_wrs: subject has no distances");
  }
  std::vector<double> z;
  z.reserve(pools.size());
  for (const auto& p : pools) {
    const TestResult r = wilcoxon_rank_sum(
        Sample(subject.distances), Sample(p.distances),
        Alternative::TWO_SIDED);
    z.push_back(r.statistic);
  }
  return z;
}

}  // namespace lcdm
