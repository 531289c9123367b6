#include "lcdm/simgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "lcdm/errors.hpp"

namespace lcdm {

namespace {

// Bin-count profiles (0.5 mm bins 0..11) taken from real pooled distance data;
// they drive the binned generator below.
const FreqVector kCorticalRefFreq = {2059, 1898, 1764, 1670, 1492, 1268,
                                     814,  417,  142,  81,   61,   16};
const FreqVector kExponentialRefFreq = {3930, 2385, 1449, 878, 534, 324,
                                        196,  121,  73,   43,  26,  16};

constexpr double kEtaMax = 1000.0;

GeneratorSpec binned_spec(const FreqVector& freq, double r, double eta) {
  GeneratorSpec s;
  s.family = Family::BINNED;
  s.freq = freq;
  s.r = r;
  s.eta = eta;
  return s;
}

GeneratorSpec normal_spec(double mu, double sigma) {
  GeneratorSpec s;
  s.family = Family::NORMAL;
  s.mu = mu;
  s.sigma = sigma;
  return s;
}

GeneratorSpec exponential_spec(double lambda) {
  GeneratorSpec s;
  s.family = Family::EXPONENTIAL;
  s.lambda = lambda;
  return s;
}

// (r_y, r_z, eta_y, eta_z) perturbations shared by the binned families.
struct BinnedTuple {
  double r_y, r_z, eta_y, eta_z;
};

BinnedTuple binned_tuple(int variant) {
  switch (variant) {
    case 1: return {1.1, 1.0, 0.0, 0.0};
    case 2: return {1.1, 1.2, 0.0, 0.0};
    case 3: return {1.0, 1.0, 10.0, 0.0};
    case 4: return {1.0, 1.0, 10.0, 30.0};
    case 5: return {1.2, 1.0, 0.0, 50.0};
  }
  throw SemanticError("binned_tuple: unknown variant");
}

constexpr CensorSpec kBinnedCensor{0.01, 5.5, 0.0};
constexpr CensorSpec kNormalCensor{0.02, 10.5, 0.0};

}  // namespace

const FreqVector& cortical_ref_freq() { return kCorticalRefFreq; }
const FreqVector& exponential_ref_freq() { return kExponentialRefFreq; }

BinnedPmf pmf_from_freq(const FreqVector& freq, double eta) {
  double total = 0.0;
  for (double f : freq) {
    if (!(f >= 0.0)) throw SemanticError("pmf_from_freq: negative frequency");
    total += f;
  }
  if (!(total > 0.0)) throw SemanticError("pmf_from_freq: empty frequency vector");

  // Perturbed masses: the 12 deviations |f_i - eta| plus a remainder of
  // 12 * eta, all sorted descending onto bins 0..12 and normalized by their
  // sum. With eta = 0 the remainder vanishes and the reference profile is
  // reproduced exactly; growing eta shifts mass toward the right tail
  // (heavier and longer upper tail, larger variance and mean).
  std::array<double, 13> dev;
  for (std::size_t i = 0; i < freq.size(); ++i) dev[i] = std::fabs(freq[i] - eta);
  dev[12] = 12.0 * eta;
  std::sort(dev.begin(), dev.end(), std::greater<double>());
  const double mass = std::accumulate(dev.begin(), dev.end(), 0.0);

  BinnedPmf pmf{};
  for (std::size_t i = 0; i < dev.size(); ++i) pmf[i] = dev[i] / mass;
  return pmf;
}

void validate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case Family::BINNED:
      if (!(spec.r >= 1.0 && spec.r < 2.0)) {
        throw SemanticError("generator: r must be in [1, 2)");
      }
      if (!(spec.eta >= 0.0 && spec.eta <= kEtaMax)) {
        throw SemanticError("generator: eta must be in [0, 1000]");
      }
      pmf_from_freq(spec.freq, spec.eta);  // validates the frequency profile
      break;
    case Family::NORMAL:
      if (!(spec.sigma > 0.0)) {
        throw SemanticError("generator: sigma must be positive");
      }
      break;
    case Family::EXPONENTIAL:
      if (!(spec.lambda > 0.0)) {
        throw SemanticError("generator: lambda must be positive");
      }
      break;
  }
}

std::vector<double> generate(const GeneratorSpec& spec, std::size_t n,
                             RngStream& rng) {
  validate(spec);
  std::vector<double> out(n);
  switch (spec.family) {
    case Family::BINNED: {
      const BinnedPmf pmf = pmf_from_freq(spec.freq, spec.eta);
      std::array<double, 13> cdf;
      double acc = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i) {
        acc += pmf[i];
        cdf[i] = acc;
      }
      cdf.back() = 1.0;  // guard against accumulated rounding
      for (auto& v : out) {
        const double u = rng.uniform();
        const std::size_t bin = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        v = (static_cast<double>(bin) + rng.uniform(0.0, spec.r)) / 2.0;
      }
      break;
    }
    case Family::NORMAL:
      for (auto& v : out) v = rng.normal(spec.mu, spec.sigma);
      break;
    case Family::EXPONENTIAL:
      for (auto& v : out) v = rng.exponential(spec.lambda);
      break;
  }
  return out;
}

StudyCase case_params(CaseId id) {
  const GeneratorSpec l_null = binned_spec(kCorticalRefFreq, 1.0, 0.0);
  const GeneratorSpec e_null = binned_spec(kExponentialRefFreq, 1.0, 0.0);
  const GeneratorSpec n_null = normal_spec(3.35, 2.28);

  auto binned_case = [](CaseId cid, const FreqVector& freq, int variant,
                        const GeneratorSpec& null_spec) {
    const BinnedTuple t = binned_tuple(variant);
    StudyCase c{cid,
                {null_spec, binned_spec(freq, t.r_y, t.eta_y),
                 binned_spec(freq, t.r_z, t.eta_z)},
                kBinnedCensor};
    return c;
  };

  switch (id) {
    case CaseId::NULL_L:
      return {id, {l_null, l_null, l_null}, kBinnedCensor};
    case CaseId::L1: return binned_case(id, kCorticalRefFreq, 1, l_null);
    case CaseId::L2: return binned_case(id, kCorticalRefFreq, 2, l_null);
    case CaseId::L3: return binned_case(id, kCorticalRefFreq, 3, l_null);
    case CaseId::L4: return binned_case(id, kCorticalRefFreq, 4, l_null);
    case CaseId::L5: return binned_case(id, kCorticalRefFreq, 5, l_null);

    case CaseId::NULL_N:
      return {id, {n_null, n_null, n_null}, kNormalCensor};
    case CaseId::N1:
      return {id, {n_null, normal_spec(3.39, 2.28), n_null}, kNormalCensor};
    case CaseId::N2:
      return {id,
              {n_null, normal_spec(3.39, 2.28), normal_spec(3.40, 2.28)},
              kNormalCensor};
    case CaseId::N3:
      return {id, {n_null, normal_spec(3.39, 2.33), n_null}, kNormalCensor};
    case CaseId::N4:
      return {id,
              {n_null, normal_spec(3.39, 2.33), normal_spec(3.42, 2.37)},
              kNormalCensor};
    case CaseId::N5:
      return {id,
              {n_null, normal_spec(3.44, 2.26), normal_spec(3.47, 2.40)},
              kNormalCensor};

    case CaseId::NULL_E: {
      const GeneratorSpec e = exponential_spec(1.0);
      return {id, {e, e, e}, kBinnedCensor};
    }
    case CaseId::E1: return binned_case(id, kExponentialRefFreq, 1, e_null);
    case CaseId::E2: return binned_case(id, kExponentialRefFreq, 2, e_null);
    case CaseId::E3: return binned_case(id, kExponentialRefFreq, 3, e_null);
    case CaseId::E4: return binned_case(id, kExponentialRefFreq, 4, e_null);
    case CaseId::E5: return binned_case(id, kExponentialRefFreq, 5, e_null);
  }
  throw SemanticError("case_params: unknown case");
}

const char* case_name(CaseId id) {
  switch (id) {
    case CaseId::NULL_L: return "null_l";
    case CaseId::L1: return "l1";
    case CaseId::L2: return "l2";
    case CaseId::L3: return "l3";
    case CaseId::L4: return "l4";
    case CaseId::L5: return "l5";
    case CaseId::NULL_N: return "null_n";
    case CaseId::N1: return "n1";
    case CaseId::N2: return "n2";
    case CaseId::N3: return "n3";
    case CaseId::N4: return "n4";
    case CaseId::N5: return "n5";
    case CaseId::NULL_E: return "null_e";
    case CaseId::E1: return "e1";
    case CaseId::E2: return "e2";
    case CaseId::E3: return "e3";
    case CaseId::E4: return "e4";
    case CaseId::E5: return "e5";
  }
  return "?";
}

std::optional<CaseId> case_from_name(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (CaseId id : all_case_ids()) {
    if (t == case_name(id)) return id;
  }
  return std::nullopt;
}

std::vector<CaseId> all_case_ids() {
  return {CaseId::NULL_L, CaseId::L1, CaseId::L2, CaseId::L3, CaseId::L4,
          CaseId::L5,     CaseId::NULL_N, CaseId::N1, CaseId::N2, CaseId::N3,
          CaseId::N4,     CaseId::N5, CaseId::NULL_E, CaseId::E1, CaseId::E2,
          CaseId::E3,     CaseId::E4, CaseId::E5};
}

}  // namespace lcdm
