#include "lcdm/correction.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lcdm/errors.hpp"

namespace lcdm {

const char* correction_name(Correction c) {
  switch (c) {
    case Correction::NONE: return "none";
    case Correction::BONFERRONI: return "bonferroni";
    case Correction::HOLM: return "holm";
    case Correction::BH: return "bh";
    case Correction::BY: return "by";
  }
  return "?";
}

std::optional<Correction> correction_from_name(std::string_view s) {
  if (s == "none") return Correction::NONE;
  if (s == "bonferroni") return Correction::BONFERRONI;
  if (s == "holm") return Correction::HOLM;
  if (s == "bh") return Correction::BH;
  if (s == "by") return Correction::BY;
  return std::nullopt;
}

std::vector<double> adjust_pvalues(std::span<const double> p,
                                   Correction method) {
  const std::size_t m = p.size();
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw SemanticError("adjust_pvalues: p outside [0, 1]");
    }
  }
  std::vector<double> out(p.begin(), p.end());
  if (m == 0 || method == Correction::NONE) return out;

  if (method == Correction::BONFERRONI) {
    for (auto& v : out) v = std::min(1.0, v * static_cast<double>(m));
    return out;
  }

  // Sort positions by p, index as tiebreak so equal p's adjust stably.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p[a] != p[b] ? p[a] < p[b] : a < b;
  });

  const double md = static_cast<double>(m);
  if (method == Correction::HOLM) {
    double running = 0.0;  // step-down cumulative max
    for (std::size_t i = 0; i < m; ++i) {
      const double q = std::min(1.0, (md - static_cast<double>(i)) * p[order[i]]);
      running = std::max(running, q);
      out[order[i]] = running;
    }
    return out;
  }

  // BH / BY step-up from the largest p.
  double factor = 1.0;
  if (method == Correction::BY) {
    factor = 0.0;
    for (std::size_t i = 1; i <= m; ++i) factor += 1.0 / static_cast<double>(i);
  }
  double running = 1.0;  // cumulative min
  for (std::size_t i = m; i-- > 0;) {
    const double rank = static_cast<double>(i + 1);
    const double q = std::min(1.0, factor * md * p[order[i]] / rank);
    running = std::min(running, q);
    out[order[i]] = running;
  }
  return out;
}

}  // namespace lcdm
