// Multiple-comparison adjustments: worked fixtures, dominance relations,
// order preservation, and permutation equivariance.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lcdm/correction.hpp"
#include "lcdm/errors.hpp"
#include "lcdm/rng.hpp"

using namespace lcdm;

namespace {

std::vector<double> adjust(const std::vector<double>& p, Correction m) {
  return adjust_pvalues(std::span<const double>(p.data(), p.size()), m);
}

std::vector<double> random_pvalues(std::size_t n, std::uint64_t stream) {
  RngStream rng(99, stream);
  std::vector<double> p(n);
  for (auto& v : p) v = rng.uniform();
  // Inject ties so the tie paths get exercised too.
  if (n >= 6) p[4] = p[1];
  return p;
}

}  // namespace

TEST_SUITE("correction") {

TEST_CASE("worked example (.01, .04, .03) for all methods") {
  const std::vector<double> p{0.01, 0.04, 0.03};

  const auto bonf = adjust(p, Correction::BONFERRONI);
  CHECK(bonf[0] == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(bonf[1] == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(bonf[2] == doctest::Approx(0.09).epsilon(1e-12));

  const auto holm = adjust(p, Correction::HOLM);
  CHECK(holm[0] == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(holm[1] == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(holm[2] == doctest::Approx(0.06).epsilon(1e-12));

  const auto bh = adjust(p, Correction::BH);
  CHECK(bh[0] == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(bh[1] == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(bh[2] == doctest::Approx(0.04).epsilon(1e-12));

  // BY multiplies BH by c(3) = 1 + 1/2 + 1/3 = 11/6.
  const auto by = adjust(p, Correction::BY);
  CHECK(by[0] == doctest::Approx(0.055).epsilon(1e-12));
  CHECK(by[1] == doctest::Approx(0.04 * 11.0 / 6.0).epsilon(1e-12));
  CHECK(by[2] == doctest::Approx(0.04 * 11.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("by equals bh scaled by the harmonic factor when no cummin bites") {
  // Strictly increasing p with widening gaps: the step-up minimum is inert.
  const std::vector<double> p{0.01, 0.1, 0.5, 0.9};
  const auto bh = adjust(p, Correction::BH);
  CHECK(bh[0] == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(bh[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(bh[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(bh[3] == doctest::Approx(0.9).epsilon(1e-12));
  const double c4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;  // 25/12
  const auto by = adjust(p, Correction::BY);
  CHECK(by[0] == doctest::Approx(0.04 * c4).epsilon(1e-12));
  CHECK(by[1] == doctest::Approx(0.2 * c4).epsilon(1e-12));
  CHECK(by[2] == 1.0);  // clamped
  CHECK(by[3] == 1.0);
}

TEST_CASE("none is the identity; empty and singleton families") {
  const std::vector<double> p{0.3, 0.01, 0.99};
  CHECK(adjust(p, Correction::NONE) == p);
  const std::vector<double> empty;
  for (auto m : {Correction::NONE, Correction::BONFERRONI, Correction::HOLM,
                 Correction::BH, Correction::BY}) {
    CHECK(adjust(empty, m).empty());
  }
  const std::vector<double> one{0.2};
  for (auto m : {Correction::BONFERRONI, Correction::HOLM, Correction::BH,
                 Correction::BY}) {
    CHECK(adjust(one, m)[0] == doctest::Approx(0.2).epsilon(1e-15));
  }
}

TEST_CASE("dominance: bh <= by and bh <= holm <= bonferroni elementwise") {
  for (std::uint64_t stream = 0; stream < 4; ++stream) {
    const auto p = random_pvalues(25, stream);
    const auto bonf = adjust(p, Correction::BONFERRONI);
    const auto holm = adjust(p, Correction::HOLM);
    const auto bh = adjust(p, Correction::BH);
    const auto by = adjust(p, Correction::BY);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(bh[i] <= by[i] + 1e-12);
      CHECK(bh[i] <= holm[i] + 1e-12);
      CHECK(holm[i] <= bonf[i] + 1e-12);
      CHECK(p[i] <= holm[i] + 1e-12);  // adjusted never below raw
      CHECK(bh[i] >= 0.0);
      CHECK(by[i] <= 1.0);
    }
  }
}

TEST_CASE("adjustment preserves the input ordering") {
  const auto p = random_pvalues(30, 7);
  for (auto m : {Correction::BONFERRONI, Correction::HOLM, Correction::BH,
                 Correction::BY}) {
    const auto adj = adjust(p, m);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[i] < p[j]) CHECK(adj[i] <= adj[j] + 1e-12);
        if (p[i] == p[j]) CHECK(adj[i] == adj[j]);  // ties stay tied
      }
    }
  }
}

TEST_CASE("adjustment commutes with permuting the family") {
  const auto p = random_pvalues(12, 3);
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  // Fixed shuffle driven by the seeded stream.
  RngStream rng(5, 0);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1],
              perm[static_cast<std::size_t>(rng.uniform() * i)]);
  }
  std::vector<double> shuffled(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) shuffled[i] = p[perm[i]];
  for (auto m : {Correction::BONFERRONI, Correction::HOLM, Correction::BH,
                 Correction::BY}) {
    const auto direct = adjust(p, m);
    const auto via = adjust(shuffled, m);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(via[i] == direct[perm[i]]);
    }
  }
}

TEST_CASE("values cap at 1 and invalid inputs throw") {
  const std::vector<double> p{0.5, 0.7, 0.9, 0.2};
  for (auto m : {Correction::BONFERRONI, Correction::HOLM, Correction::BH,
                 Correction::BY}) {
    for (double v : adjust(p, m)) CHECK(v <= 1.0);
  }
  const std::vector<double> neg{0.5, -0.1};
  CHECK_THROWS_AS((void)adjust(neg, Correction::BH), SemanticError);
  const std::vector<double> big{0.5, 1.1};
  CHECK_THROWS_AS((void)adjust(big, Correction::HOLM), SemanticError);
  const std::vector<double> nan{0.5, std::nan("")};
  CHECK_THROWS_AS((void)adjust(nan, Correction::BONFERRONI), SemanticError);
}

TEST_CASE("method names round-trip") {
  for (auto m : {Correction::NONE, Correction::BONFERRONI, Correction::HOLM,
                 Correction::BH, Correction::BY}) {
    CHECK(correction_from_name(correction_name(m)) == m);
  }
  CHECK(!correction_from_name("fdr").has_value());
}

}  // TEST_SUITE("correction")
