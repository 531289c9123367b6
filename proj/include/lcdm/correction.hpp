#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lcdm {

enum class Correction { NONE, BONFERRONI, HOLM, BH, BY };

const char* correction_name(Correction c);
std::optional<Correction> correction_from_name(std::string_view s);

// Adjusted p-values (positions preserved, ties handled stably):
//   BONFERRONI  min(1, m*p_i)
//   HOLM        step-down: q_(i) = max_{j<=i} min(1, (m-j+1) p_(j))
//   BH          step-up:   q_(i) = min_{j>=i} min(1, m p_(j) / j)
//   BY          BH with the extra factor c(m) = sum_{i<=m} 1/i
// Throws SemanticError if any p is outside [0, 1].
std::vector<double> adjust_pvalues(std::span<const double> p, Correction method);

}  // namespace lcdm
