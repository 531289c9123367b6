#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "lcdm/dataset.hpp"
#include "lcdm/rng.hpp"

namespace lcdm {

// Reference frequency vectors: counts of distances per 0.5 mm bin (bins
// 0..11) observed on real pooled data; they parameterize the binned
// generator below.
using FreqVector = std::array<double, 12>;
using BinnedPmf = std::array<double, 13>;  // bins 0..12

const FreqVector& cortical_ref_freq();     // heavy-shouldered cortical profile
const FreqVector& exponential_ref_freq();  // exponential-like decay profile

// Perturbed bin pmf: the 12 values |freq_i - eta| together with a remainder
// mass of 12 * eta are sorted in DESCENDING order onto bins 0..12 and
// normalized by their sum. While eta <= min(freq) this equals
// (T - sum|freq_i - eta|) / T with the remainder last; beyond that the
// remainder keeps growing linearly, thickening the right tail.
// eta = 0 reproduces freq/T with zero mass on bin 12 (for descending freq).
BinnedPmf pmf_from_freq(const FreqVector& freq, double eta);

enum class Family { BINNED, NORMAL, EXPONENTIAL };

// One sample's generator. BINNED draws J ~ pmf_from_freq(freq, eta) over bins
// 0..12 and U ~ Uniform(0, r), returning (J + U) / 2; valid for r in [1, 2)
// and eta in [0, 1000]. NORMAL is mu + sigma*Z; EXPONENTIAL has rate lambda.
struct GeneratorSpec {
  Family family = Family::BINNED;
  FreqVector freq{};
  double r = 1.0;
  double eta = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double lambda = 1.0;
};
void validate(const GeneratorSpec& spec);  // throws SemanticError

std::vector<double> generate(const GeneratorSpec& spec, std::size_t n,
                             RngStream& rng);

// ============================================================================
// Three-sample study cases. Families: L (binned, cortical profile),
// N (normal), E (exponential null / binned alternatives with the
// exponential profile). Case 0 of each family is the null.
// ============================================================================
enum class CaseId {
  NULL_L, L1, L2, L3, L4, L5,
  NULL_N, N1, N2, N3, N4, N5,
  NULL_E, E1, E2, E3, E4, E5,
};

struct StudyCase {
  CaseId id;
  std::array<GeneratorSpec, 3> specs;  // samples X, Y, Z
  CensorSpec censor;                   // family's default censoring grid
};

StudyCase case_params(CaseId id);
const char* case_name(CaseId id);
std::optional<CaseId> case_from_name(std::string_view s);
std::vector<CaseId> all_case_ids();

}  // namespace lcdm
