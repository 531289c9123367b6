// Python bindings for the main library operations: distributions, the test
// battery, multiplicity corrections, the binned/normal/exponential sample
// generators, the Monte Carlo driver, dataset utilities, and point-to-surface
// distances.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "lcdm/correction.hpp"
#include "lcdm/dataset.hpp"
#include "lcdm/errors.hpp"
#include "lcdm/geometry.hpp"
#include "lcdm/mc.hpp"
#include "lcdm/rng.hpp"
#include "lcdm/simgen.hpp"
#include "lcdm/stats.hpp"
#include "lcdm/version.hpp"

namespace py = pybind11;
using namespace lcdm;

namespace {

Alternative alt_from(const std::string& s) {
  if (s == "two" || s == "two-sided") return Alternative::TWO_SIDED;
  if (s == "less") return Alternative::LESS;
  if (s == "greater") return Alternative::GREATER;
  throw SemanticError("unknown alternative '" + s + "'");
}

Correction corr_from(const std::string& s) {
  for (const Correction c : {Correction::NONE, Correction::BONFERRONI,
                             Correction::HOLM, Correction::BH, Correction::BY}) {
    if (s == correction_name(c)) return c;
  }
  throw SemanticError("unknown correction '" + s + "'");
}

Groups as_groups_copy(const std::vector<std::vector<double>>& v) {
  Groups g;
  for (const auto& x : v) g.emplace_back(x);
  return g;
}

py::dict result_dict(const TestResult& r) {
  py::dict d;
  d["name"] = r.name;
  d["statistic"] = r.statistic;
  d["p"] = r.p;
  d["alternative"] = alternative_name(r.alternative);
  if (r.df1) d["df1"] = *r.df1;
  if (r.df2) d["df2"] = *r.df2;
  if (r.mc_se) d["mc_se"] = *r.mc_se;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lcdm, m) {
  m.doc() =
      "Labeled signed distance maps, censored distance analysis, and the "
      "simulation battery";
  m.attr("__version__") = kVersion;

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<SemanticError>(m, "SemanticError");
  py::register_exception<NumericalError>(m, "NumericalError");

  // --- distributions -------------------------------------------------------
  m.def("std_normal_cdf", &std_normal_cdf, py::arg("x"));
  m.def("t_cdf", &t_cdf, py::arg("x"), py::arg("df"));
  m.def("f_cdf", &f_cdf, py::arg("x"), py::arg("df1"), py::arg("df2"));
  m.def("chi2_cdf", &chi2_cdf, py::arg("x"), py::arg("df"));

  // --- tests ----------------------------------------------------------------
  m.def(
      "one_way_anova_f",
      [](const std::vector<std::vector<double>>& g) {
        return result_dict(one_way_anova_f(as_groups_copy(g)));
      },
      py::arg("groups"));
  m.def(
      "welch_anova",
      [](const std::vector<std::vector<double>>& g) {
        return result_dict(welch_anova(as_groups_copy(g)));
      },
      py::arg("groups"));
  m.def(
      "kruskal_wallis",
      [](const std::vector<std::vector<double>>& g) {
        return result_dict(kruskal_wallis(as_groups_copy(g)));
      },
      py::arg("groups"));
  m.def(
      "brown_forsythe",
      [](const std::vector<std::vector<double>>& g) {
        return result_dict(brown_forsythe(as_groups_copy(g)));
      },
      py::arg("groups"));
  m.def(
      "brown_forsythe_pairwise",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const std::string& alternative) {
        return result_dict(brown_forsythe_pairwise(a, b, alt_from(alternative)));
      },
      py::arg("a"), py::arg("b"), py::arg("alternative") = "two");
  m.def(
      "wilcoxon_rank_sum",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const std::string& alternative) {
        return result_dict(wilcoxon_rank_sum(a, b, alt_from(alternative)));
      },
      py::arg("a"), py::arg("b"), py::arg("alternative") = "two");
  m.def(
      "welch_t",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const std::string& alternative) {
        return result_dict(welch_t(a, b, alt_from(alternative)));
      },
      py::arg("a"), py::arg("b"), py::arg("alternative") = "two");
  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b,
         const std::string& alternative) {
        return result_dict(ks_two_sample(a, b, alt_from(alternative)));
      },
      py::arg("a"), py::arg("b"), py::arg("alternative") = "two");
  m.def(
      "lilliefors",
      [](const std::vector<double>& x, std::size_t n_mc) {
        return result_dict(lilliefors(x, n_mc));
      },
      py::arg("x"), py::arg("n_mc") = 2000);

  // --- multiplicity ---------------------------------------------------------
  m.def(
      "adjust_pvalues",
      [](const std::vector<double>& p, const std::string& method) {
        return adjust_pvalues(p, corr_from(method));
      },
      py::arg("p"), py::arg("method"));

  // --- generators -----------------------------------------------------------
  m.def(
      "pmf_from_freq",
      [](const std::vector<double>& freq, double eta) {
        if (freq.size() != 12) {
          throw SemanticError("freq must have 12 entries");
        }
        FreqVector f;
        std::copy(freq.begin(), freq.end(), f.begin());
        const BinnedPmf pmf = pmf_from_freq(f, eta);
        return std::vector<double>(pmf.begin(), pmf.end());
      },
      py::arg("freq"), py::arg("eta"));
  m.def("cortical_ref_freq", [] {
    const FreqVector f = cortical_ref_freq();
    return std::vector<double>(f.begin(), f.end());
  });
  m.def("case_names", [] {
    std::vector<std::string> names;
    for (const CaseId id : all_case_ids()) names.push_back(case_name(id));
    return names;
  });
  m.def(
      "generate_case",
      [](const std::string& name, std::size_t n, std::uint64_t seed,
         std::uint64_t stream) {
        const auto id = case_from_name(name);
        if (!id) throw SemanticError("unknown case '" + name + "'");
        const StudyCase sc = case_params(*id);
        RngStream rng(seed, stream);
        py::dict out;
        const char* keys[3] = {"x", "y", "z"};
        for (int i = 0; i < 3; ++i) {
          out[keys[i]] = generate(sc.specs[static_cast<std::size_t>(i)], n, rng);
        }
        return out;
      },
      py::arg("name"), py::arg("n"), py::arg("seed") = kDefaultSeed,
      py::arg("stream") = 0,
      "Draw the case's three samples (in x, y, z order) from one substream");

  // --- Monte Carlo -----------------------------------------------------------
  m.def(
      "run_size_power",
      [](const std::string& case_name_, std::size_t n, std::size_t n_mc,
         double alpha, std::uint64_t seed, int threads) {
        const auto id = case_from_name(case_name_);
        if (!id) throw SemanticError("unknown case '" + case_name_ + "'");
        McConfig cfg;
        cfg.case_id = *id;
        cfg.sizes = {n, n, n};
        cfg.n_mc = n_mc;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.threads = threads;
        const RejectionSummary s = run_size_power(cfg);
        py::dict out;
        py::dict rates;
        for (std::size_t i = 0; i < s.roster.size(); ++i) {
          rates[py::str(mc_test_label(s.roster[i]))] = s.rates[i];
        }
        out["rates"] = rates;
        out["nominal"] = s.nominal;
        out["agreement"] = s.agreement;
        out["n_mc"] = s.n_mc;
        return out;
      },
      py::arg("case_name"), py::arg("n") = 1000, py::arg("n_mc") = 2000,
      py::arg("alpha") = 0.05, py::arg("seed") = kDefaultSeed,
      py::arg("threads") = 0);
  m.def("nominal_band", &nominal_band, py::arg("n_mc"), py::arg("alpha"),
        py::arg("z") = kBandZ);

  // --- dataset utilities ------------------------------------------------------
  m.def(
      "trim",
      [](const std::vector<double>& d, double lo, double hi) {
        const TrimResult t = trim(d, lo, hi);
        py::dict out;
        out["kept"] = t.kept;
        out["n_below"] = t.n_below;
        out["n_above"] = t.n_above;
        out["frac_below"] = t.frac_below;
        out["frac_above"] = t.frac_above;
        return out;
      },
      py::arg("distances"), py::arg("lo"), py::arg("hi"));
  m.def(
      "censor_at",
      [](const std::vector<double>& d, double gamma) {
        return censor_at(d, gamma);
      },
      py::arg("distances"), py::arg("gamma"));
  m.def(
      "descriptives",
      [](const std::vector<double>& x) {
        const DescriptiveStats d = descriptives(x);
        py::dict out;
        out["n"] = d.n;
        out["mean"] = d.mean;
        out["median"] = d.median;
        out["sd"] = d.sd;
        return out;
      },
      py::arg("x"));
  m.def(
      "kde",
      [](const std::vector<double>& x, double bandwidth,
         std::size_t grid_points) {
        const KdeResult r = kde(x, bandwidth, grid_points);
        py::dict out;
        out["x"] = r.x;
        out["density"] = r.density;
        out["bandwidth"] = r.bandwidth;
        return out;
      },
      py::arg("x"), py::arg("bandwidth") = 0.0, py::arg("grid_points") = 512);

  // --- geometry ----------------------------------------------------------------
  m.def(
      "surface_distances",
      [](const std::vector<std::array<double, 3>>& vertices,
         const std::vector<std::array<int, 3>>& faces,
         const std::vector<std::array<double, 3>>& points) {
        TriangleMesh mesh;
        for (const auto& v : vertices) mesh.vertices.push_back({v[0], v[1], v[2]});
        for (const auto& f : faces) {
          mesh.triangles.push_back({f[0], f[1], f[2]});
        }
        const MeshAccel accel(mesh);
        std::vector<double> out;
        out.reserve(points.size());
        for (const auto& p : points) {
          out.push_back(accel.distance({p[0], p[1], p[2]}));
        }
        return out;
      },
      py::arg("vertices"), py::arg("faces"), py::arg("points"),
      "Unsigned distance from each point to the triangulated surface");
}
