#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcdm/stats.hpp"

namespace lcdm {

enum class Hemisphere { LEFT, RIGHT, NONE };
const char* hemisphere_name(Hemisphere h);
std::optional<Hemisphere> hemisphere_from_name(std::string_view s);

struct SubjectDistances {
  std::string subject_id;
  std::string group;
  Hemisphere hemisphere = Hemisphere::NONE;
  std::vector<double> distances;
};

struct GroupPool {
  std::string group;
  Hemisphere hemisphere = Hemisphere::NONE;
  std::vector<std::string> subject_ids;
  std::vector<double> distances;  // multiset union, subject order preserved
};

// Censoring grid: thresholds gamma_k = k*delta for k = 0..floor(d_max/delta);
// analyses start at analysis_lo (inclusive).
struct CensorSpec {
  double delta = 0.01;
  double d_max = 5.5;
  double analysis_lo = 0.0;
};
void validate(const CensorSpec& spec);                 // throws SemanticError
std::vector<double> censor_thresholds(const CensorSpec& spec);

struct TrimResult {
  std::vector<double> kept;  // lo < d <= hi, input order preserved
  std::size_t n_below = 0;   // d <= lo
  std::size_t n_above = 0;   // d > hi
  double frac_below = 0.0;
  double frac_above = 0.0;
};

// Keep d in (lo, hi]; count and report what was discarded on each side.
TrimResult trim(Sample distances, double lo, double hi);

// Pool every subject of `group`; all pooled subjects must share the group's
// hemisphere. Throws SemanticError if the group is absent.
GroupPool pool(const std::vector<SubjectDistances>& subjects,
               const std::string& group);

// Keep d <= gamma (inclusive).
std::vector<double> censor_at(Sample distances, double gamma);

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
};
DescriptiveStats descriptives(Sample x);

// Gaussian-kernel density on a regular grid spanning
// [min - 3*bw, max + 3*bw]. bandwidth <= 0 selects Silverman's rule
// 0.9 * min(SD, IQR/1.34) * n^(-1/5). Zero-variance input is an error.
struct KdeResult {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;
};
KdeResult kde(Sample x, double bandwidth = 0.0, std::size_t grid_points = 512);

// Standardized Wilcoxon rank-sum z of one subject against each group pool,
// in pool order. The subject's own group pool must already exclude the
// subject (leave-one-out is the caller's responsibility).
std::vector<double> subject_vs_group_wrs(const SubjectDistances& subject,
                                         const std::vector<GroupPool>& pools);

}  // namespace lcdm
