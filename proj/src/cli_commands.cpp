#include "lcdm/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "lcdm/censor_sweep.hpp"
#include "lcdm/errors.hpp"
#include "lcdm/io.hpp"
#include "lcdm/version.hpp"

namespace lcdm::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

Correction correction_from_name(const std::string& s) {
  for (const Correction c : {Correction::NONE, Correction::BONFERRONI,
                             Correction::HOLM, Correction::BH, Correction::BY}) {
    if (s == correction_name(c)) return c;
  }
  throw SemanticError("unknown correction '" + s +
                      "' (use none, bonferroni, holm, bh or by)");
}

Alternative alternative_from_name(const std::string& s) {
  if (s == "two" || s == "two-sided") return Alternative::TWO_SIDED;
  if (s == "less") return Alternative::LESS;
  if (s == "greater") return Alternative::GREATER;
  throw SemanticError("unknown alternative '" + s +
                      "' (use two, less or greater)");
}

std::vector<TestKind> parse_test_roster(const std::vector<std::string>& names,
                                        bool allow_pairwise,
                                        bool allow_multigroup) {
  std::vector<TestKind> kinds;
  for (const auto& n : names) {
    const auto k = test_kind_from_name(n);
    if (!k) throw SemanticError("unknown test '" + n + "'");
    if (is_pairwise(*k) && !allow_pairwise) {
      throw SemanticError("test '" + n + "' is pairwise-only here");
    }
    if (!is_pairwise(*k) && !allow_multigroup) {
      throw SemanticError("test '" + n + "' is multi-group-only here");
    }
    if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) {
      kinds.push_back(*k);
    }
  }
  return kinds;
}

// Pools the long-form subject file into one trimmed, ascending-sorted
// distance vector per group, in first-seen group order.
struct PooledData {
  std::vector<std::string> group_names;
  std::vector<Hemisphere> hemispheres;
  std::vector<std::size_t> n_subjects;
  std::vector<std::vector<double>> distances;  // sorted ascending
  std::vector<TrimResult> trims;
};

PooledData pool_and_trim(const std::vector<SubjectDistances>& subjects,
                         double trim_lo, double trim_hi) {
  PooledData out;
  for (const auto& s : subjects) {
    if (std::find(out.group_names.begin(), out.group_names.end(), s.group) ==
        out.group_names.end()) {
      out.group_names.push_back(s.group);
    }
  }
  for (const auto& g : out.group_names) {
    const GroupPool p = pool(subjects, g);
    TrimResult t = trim(p.distances, trim_lo, trim_hi);
    std::sort(t.kept.begin(), t.kept.end());
    out.hemispheres.push_back(p.hemisphere);
    out.n_subjects.push_back(p.subject_ids.size());
    out.distances.push_back(std::move(t.kept));
    t.kept.clear();
    out.trims.push_back(std::move(t));
  }
  return out;
}

void append_config(RunManifest& m, std::string key, std::string value) {
  m.config.emplace_back(std::move(key), std::move(value));
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

int run_lcdm(const LcdmArgs& args, const std::string& command_line) {
  return guarded([&] {
    const TriangleMesh mesh = read_off(args.mesh_path);
    const LabeledVoxelGrid grid = read_grid(args.grid_path);
    const LcdmResult result = compute_lcdm(grid, mesh, args.threads);
    write_text_atomic(args.out_path, lcdm_csv(result));

    RunManifest m;
    m.command = command_line;
    append_config(m, "threads", std::to_string(args.threads));
    m.inputs = {{args.mesh_path, file_digest(args.mesh_path)},
                {args.grid_path, file_digest(args.grid_path)}};
    m.outputs = {args.out_path};
    write_manifest_for(args.out_path, m);
    return 0;
  });
}

int run_pooled(const PooledArgs& args, const std::string& command_line) {
  return guarded([&] {
    if (!(args.trim_lo < args.trim_hi)) {
      throw SemanticError("trim-lo must be below trim-hi");
    }
    std::vector<TestKind> omnibus_kinds;
    std::vector<TestKind> pair_kinds;
    bool want_lilliefors = false;
    if (args.tests.empty()) {
      omnibus_kinds = {TestKind::BROWN_FORSYTHE, TestKind::KRUSKAL_WALLIS,
                       TestKind::ANOVA_F, TestKind::WELCH_ANOVA};
      pair_kinds = {TestKind::BF_PAIRWISE, TestKind::WRS, TestKind::WELCH_T,
                    TestKind::KS};
      want_lilliefors = true;
    } else {
      for (const auto& n : args.tests) {
        if (n == "lilliefors") {
          want_lilliefors = true;
          continue;
        }
        const auto k = test_kind_from_name(n);
        if (!k) throw SemanticError("unknown test '" + n + "'");
        auto& dst = is_pairwise(*k) ? pair_kinds : omnibus_kinds;
        if (std::find(dst.begin(), dst.end(), *k) == dst.end()) {
          dst.push_back(*k);
        }
      }
    }
    const Correction method = correction_from_name(args.correction);

    const auto subjects = read_subject_csv(args.distances_path);
    const PooledData data =
        pool_and_trim(subjects, args.trim_lo, args.trim_hi);
    const std::size_t k = data.group_names.size();
    if (k < 2) {
      throw SemanticError("pooled analysis needs at least 2 groups, got " +
                          std::to_string(k));
    }
    Groups groups;
    for (const auto& g : data.distances) groups.emplace_back(g);

    // --- descriptives ---------------------------------------------------
    std::string desc =
        "group,hemisphere,n_subjects,n,mean,median,sd,n_trimmed_below,"
        "n_trimmed_above\n";
    std::vector<double> all;
    std::size_t all_subjects = 0, all_below = 0, all_above = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const DescriptiveStats d = descriptives(data.distances[i]);
      desc += data.group_names[i];
      desc += ',';
      desc += hemisphere_name(data.hemispheres[i]);
      desc += ',' + std::to_string(data.n_subjects[i]);
      desc += ',' + std::to_string(d.n);
      desc += ',' + num(d.mean) + ',' + num(d.median) + ',' + num(d.sd);
      desc += ',' + std::to_string(data.trims[i].n_below);
      desc += ',' + std::to_string(data.trims[i].n_above) + '\n';
      all.insert(all.end(), data.distances[i].begin(),
                 data.distances[i].end());
      all_subjects += data.n_subjects[i];
      all_below += data.trims[i].n_below;
      all_above += data.trims[i].n_above;
    }
    std::sort(all.begin(), all.end());
    const DescriptiveStats d_all = descriptives(all);
    desc += "overall,," + std::to_string(all_subjects) + ',' +
            std::to_string(d_all.n) + ',' + num(d_all.mean) + ',' +
            num(d_all.median) + ',' + num(d_all.sd) + ',' +
            std::to_string(all_below) + ',' + std::to_string(all_above) + '\n';

    // --- omnibus ----------------------------------------------------------
    std::string omni = "test,statistic,df1,df2,p\n";
    for (const TestKind kind : omnibus_kinds) {
      TestResult r;
      switch (kind) {
        case TestKind::ANOVA_F: r = one_way_anova_f(groups); break;
        case TestKind::WELCH_ANOVA: r = welch_anova(groups); break;
        case TestKind::KRUSKAL_WALLIS: r = kruskal_wallis(groups); break;
        case TestKind::BROWN_FORSYTHE: r = brown_forsythe(groups); break;
        default: continue;
      }
      omni += std::string(test_kind_name(kind)) + ',' + num(r.statistic) + ',';
      omni += (r.df1 ? num(*r.df1) : "") + ',';
      omni += (r.df2 ? num(*r.df2) : "") + ',';
      omni += num(r.p) + '\n';
    }
    if (want_lilliefors) {
      for (std::size_t i = 0; i < k; ++i) {
        if (data.distances[i].size() < 5) continue;
        const TestResult r = lilliefors(data.distances[i]);
        omni += "lilliefors[" + data.group_names[i] + "]," +
                num(r.statistic) + ",,," + num(r.p) + '\n';
      }
    }

    // --- pairwise: both directions, corrected per (test, direction) ------
    std::string pw = "group_a,group_b,test,alternative,p,p_adjusted,method\n";
    struct PairRow {
      std::size_t a, b;
      TestKind kind;
      Alternative alt;
      double p;
    };
    std::vector<PairRow> rows;
    for (const TestKind kind : pair_kinds) {
      for (const Alternative alt : {Alternative::GREATER, Alternative::LESS}) {
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t b = a + 1; b < k; ++b) {
            TestResult r;
            switch (kind) {
              case TestKind::BF_PAIRWISE:
                r = brown_forsythe_pairwise(groups[a], groups[b], alt);
                break;
              case TestKind::WRS:
                r = wilcoxon_rank_sum(groups[a], groups[b], alt);
                break;
              case TestKind::WELCH_T:
                r = welch_t(groups[a], groups[b], alt);
                break;
              case TestKind::KS:
                r = ks_two_sample(groups[a], groups[b], alt);
                break;
              default: continue;
            }
            rows.push_back({a, b, kind, alt, r.p});
          }
        }
      }
    }
    // Family = all pairs sharing (test, direction).
    for (const TestKind kind : pair_kinds) {
      for (const Alternative alt : {Alternative::GREATER, Alternative::LESS}) {
        std::vector<std::size_t> idx;
        std::vector<double> ps;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].kind == kind && rows[i].alt == alt) {
            idx.push_back(i);
            ps.push_back(rows[i].p);
          }
        }
        const std::vector<double> adj = adjust_pvalues(ps, method);
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const PairRow& r = rows[idx[j]];
          pw += data.group_names[r.a] + ',' + data.group_names[r.b] + ',';
          pw += std::string(test_kind_name(r.kind)) + ',';
          pw += std::string(alternative_name(r.alt)) + ',';
          pw += num(r.p) + ',' + num(adj[j]) + ',';
          pw += correction_name(method);
          pw += '\n';
        }
      }
    }

    const std::string f_desc = args.out_prefix + "_descriptives.csv";
    const std::string f_omni = args.out_prefix + "_omnibus.csv";
    const std::string f_pw = args.out_prefix + "_pairwise.csv";
    write_text_atomic(f_desc, desc);
    write_text_atomic(f_omni, omni);
    write_text_atomic(f_pw, pw);

    RunManifest m;
    m.command = command_line;
    append_config(m, "trim_lo", num(args.trim_lo));
    append_config(m, "trim_hi", num(args.trim_hi));
    append_config(m, "correction", correction_name(method));
    append_config(m, "alpha", num(args.alpha));
    append_config(m, "tests", join(args.tests, " "));
    m.seed = kLillieforsSeed;
    m.inputs = {{args.distances_path, file_digest(args.distances_path)}};
    m.outputs = {f_desc, f_omni, f_pw};
    write_manifest_for(f_desc, m);
    return 0;
  });
}

int run_censor(const CensorArgs& args, const std::string& command_line) {
  return guarded([&] {
    if (!(args.trim_lo < args.trim_hi)) {
      throw SemanticError("trim-lo must be below trim-hi");
    }
    SweepConfig cfg;
    cfg.censor = {args.delta, args.d_max, args.analysis_lo};
    validate(cfg.censor);
    cfg.min_n = args.min_n;
    const Correction method = correction_from_name(args.correction);
    const Alternative alt = alternative_from_name(args.alternative);

    std::vector<TestKind> kinds;
    if (args.tests.empty()) {
      kinds = {TestKind::BROWN_FORSYTHE, TestKind::KRUSKAL_WALLIS,
               TestKind::ANOVA_F, TestKind::WELCH_ANOVA,
               TestKind::BF_PAIRWISE, TestKind::WRS, TestKind::WELCH_T,
               TestKind::KS};
    } else {
      kinds = parse_test_roster(args.tests, true, true);
    }

    const auto subjects = read_subject_csv(args.distances_path);
    const PooledData data =
        pool_and_trim(subjects, args.trim_lo, args.trim_hi);
    const std::size_t k = data.group_names.size();
    if (k < 2) {
      throw SemanticError("censoring analysis needs at least 2 groups");
    }

    std::vector<PValueCurve> curves;
    std::vector<std::array<std::size_t, 2>> curve_pairs;  // pairwise only
    for (const TestKind kind : kinds) {
      if (!is_pairwise(kind)) {
        PValueCurve c = sweep_multigroup(data.distances, kind, cfg);
        apply_correction(c, method);
        curves.push_back(std::move(c));
        curve_pairs.push_back({0, 0});
      } else {
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t b = a + 1; b < k; ++b) {
            PValueCurve c = sweep_pairwise(data.distances[a],
                                           data.distances[b], kind, alt, cfg);
            c.test = std::string(test_kind_name(kind)) + '[' +
                     data.group_names[a] + ',' + data.group_names[b] + ']';
            apply_correction(c, method);
            curves.push_back(std::move(c));
            curve_pairs.push_back({a, b});
          }
        }
      }
    }

    std::string csv = "gamma_mm,test,alternative,p,p_adjusted,method";
    for (const auto& g : data.group_names) csv += ",n_" + g;
    csv += ",status\n";
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      const PValueCurve& c = curves[ci];
      // Omnibus curves carry one size per group; pairwise entries (always
      // a < b) carry just the pair's two sizes.
      const bool pairwise_curve = curve_pairs[ci][1] > curve_pairs[ci][0];
      for (const CurvePoint& pt : c.points) {
        csv += num(pt.gamma) + ',' + c.test + ',';
        csv += std::string(alternative_name(c.alternative)) + ',';
        csv += (pt.p ? num(*pt.p) : "") + ',';
        csv += (pt.p_adjusted ? num(*pt.p_adjusted) : "") + ',';
        csv += correction_name(method);
        for (std::size_t g = 0; g < k; ++g) {
          csv += ',';
          if (!pairwise_curve) {
            csv += std::to_string(pt.group_n[g]);
          } else if (g == curve_pairs[ci][0]) {
            csv += std::to_string(pt.group_n[0]);
          } else if (g == curve_pairs[ci][1]) {
            csv += std::to_string(pt.group_n[1]);
          }
        }
        csv += pt.p ? ",OK\n" : ",MISSING\n";
      }
    }
    write_text_atomic(args.out_path, csv);

    RunManifest m;
    m.command = command_line;
    append_config(m, "delta", num(args.delta));
    append_config(m, "d_max", num(args.d_max));
    append_config(m, "analysis_lo", num(args.analysis_lo));
    append_config(m, "trim_lo", num(args.trim_lo));
    append_config(m, "trim_hi", num(args.trim_hi));
    append_config(m, "correction", correction_name(method));
    append_config(m, "alternative", alternative_name(alt));
    append_config(m, "min_n", std::to_string(args.min_n));
    m.inputs = {{args.distances_path, file_digest(args.distances_path)}};
    m.outputs = {args.out_path};
    write_manifest_for(args.out_path, m);
    return 0;
  });
}

int run_simulate(const SimulateArgs& args, const std::string& command_line) {
  return guarded([&] {
    const auto case_id = case_from_name(args.case_name);
    if (!case_id) {
      throw SemanticError("unknown case '" + args.case_name + "'");
    }
    if (args.out_path.empty()) throw SemanticError("--out is required");
    const Alternative alt = alternative_from_name(args.alternative);
    const Correction method = correction_from_name(args.correction);

    McConfig base;
    base.case_id = *case_id;
    base.sizes = args.sizes;
    base.n_mc = args.n_mc;
    base.alpha = args.alpha;
    base.seed = args.seed;
    base.threads = args.threads;
    if (args.tests.empty()) {
      base.roster = default_multigroup_roster();
    } else {
      for (const TestKind kind : parse_test_roster(args.tests, true, true)) {
        if (!is_pairwise(kind)) {
          base.roster.push_back({kind, 0, 1, Alternative::TWO_SIDED, ""});
        } else {
          for (const auto& [a, b] :
               {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
            base.roster.push_back({kind, a, b, alt, ""});
          }
        }
      }
    }

    RunManifest m;
    m.command = command_line;
    m.seed = args.seed;
    append_config(m, "case", case_name(*case_id));
    append_config(m, "mode", args.mode);
    append_config(m, "sizes", std::to_string(args.sizes[0]) + " " +
                                  std::to_string(args.sizes[1]) + " " +
                                  std::to_string(args.sizes[2]));
    append_config(m, "n_mc", std::to_string(args.n_mc));
    append_config(m, "alpha", num(args.alpha));
    append_config(m, "alternative", alternative_name(alt));
    append_config(m, "correction", correction_name(method));
    m.outputs = {args.out_path};

    if (args.mode == "pooled") {
      const RejectionSummary s = run_size_power(base);
      std::string csv = "test,rate,ci_lo,ci_hi,verdict\n";
      for (std::size_t i = 0; i < s.roster.size(); ++i) {
        csv += mc_test_label(s.roster[i]) + ',' + num(s.rates[i]) + ',' +
               num(s.ci_lo[i]) + ',' + num(s.ci_hi[i]) + ',' + s.verdicts[i] +
               '\n';
      }
      csv += "# nominal_band," + num(s.nominal.first) + ',' +
             num(s.nominal.second) + '\n';
      csv += "# agreement";
      for (const auto& t : s.roster) csv += ',' + mc_test_label(t);
      csv += '\n';
      for (std::size_t i = 0; i < s.roster.size(); ++i) {
        csv += "# " + mc_test_label(s.roster[i]);
        for (std::size_t j = 0; j < s.roster.size(); ++j) {
          csv += ',' + num(s.agreement[i][j]);
        }
        csv += '\n';
      }
      write_text_atomic(args.out_path, csv);
    } else if (args.mode == "censor") {
      CensorMcConfig cc;
      cc.base = base;
      cc.min_n = args.min_n;
      if (args.delta || args.d_max || args.analysis_lo) {
        CensorSpec spec = case_params(*case_id).censor;
        if (args.delta) spec.delta = *args.delta;
        if (args.d_max) spec.d_max = *args.d_max;
        if (args.analysis_lo) spec.analysis_lo = *args.analysis_lo;
        validate(spec);
        cc.censor = spec;
      }
      if (method != Correction::NONE) cc.corrections = {method};
      const auto curves = run_censor_mc(cc);
      std::string csv =
          "gamma_mm,test,alternative,covered,mean_p,band_lo,band_hi,"
          "reject_rate";
      if (!cc.corrections.empty()) {
        for (const Correction c : cc.corrections) {
          csv += std::string(",mean_p_") + correction_name(c);
        }
      }
      csv += '\n';
      for (const auto& c : curves) {
        const std::string label = mc_test_label(c.test);
        for (std::size_t i = 0; i < c.gamma.size(); ++i) {
          csv += num(c.gamma[i]) + ',' + label + ',';
          csv += std::string(alternative_name(c.test.alternative)) + ',';
          csv += std::to_string(c.covered[i]) + ',';
          csv += num(c.mean_p[i]) + ',' + num(c.band_lo[i]) + ',' +
                 num(c.band_hi[i]) + ',' + num(c.reject_rate[i]);
          for (const auto& [corr, curve] : c.mean_adjusted) {
            (void)corr;
            csv += ',' + num(curve[i]);
          }
          csv += '\n';
        }
      }
      write_text_atomic(args.out_path, csv);
    } else {
      throw SemanticError("mode must be 'pooled' or 'censor'");
    }
    write_manifest_for(args.out_path, m);
    return 0;
  });
}

int main_with_args(int argc, const char* const* argv) {
  CLI::App app{
      "Signed voxel-to-surface distance maps and censored distance analysis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config")
      ->description("key=value config file; command-line flags take precedence");
  app.require_subcommand(1);

  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    if (i) command_line += ' ';
    command_line += argv[i];
  }

  LcdmArgs lc;
  CLI::App* c_lcdm =
      app.add_subcommand("lcdm", "Compute a labeled signed distance map");
  c_lcdm->add_option("--mesh", lc.mesh_path, "Surface mesh (ASCII OFF)")
      ->required();
  c_lcdm->add_option("--grid", lc.grid_path, "Labeled voxel grid")->required();
  c_lcdm->add_option("--out", lc.out_path, "Output CSV")->required();
  c_lcdm->add_option("--threads", lc.threads, "Worker threads (0 = all)");

  PooledArgs po;
  CLI::App* c_pooled = app.add_subcommand(
      "pooled", "Descriptives, omnibus and pairwise tests on pooled distances");
  c_pooled->add_option("--distances", po.distances_path, "Long-form CSV")
      ->required();
  c_pooled->add_option("--out", po.out_prefix, "Output prefix")->required();
  c_pooled->add_option("--trim-lo", po.trim_lo, "Keep distances > this");
  c_pooled->add_option("--trim-hi", po.trim_hi, "Keep distances <= this");
  c_pooled->add_option("--tests", po.tests,
                       "Subset of bf,kw,f1,f2,bf2,wrs,t,ks,lilliefors")
      ->delimiter(',');
  c_pooled->add_option("--correction", po.correction,
                       "Pairwise family correction");
  c_pooled->add_option("--alpha", po.alpha, "Significance level");

  CensorArgs ce;
  CLI::App* c_censor = app.add_subcommand(
      "censor", "Per-threshold p-value curves over the censoring grid");
  c_censor->add_option("--distances", ce.distances_path, "Long-form CSV")
      ->required();
  c_censor->add_option("--out", ce.out_path, "Output curve CSV")->required();
  c_censor->add_option("--delta", ce.delta, "Threshold step (mm)");
  c_censor->add_option("--dmax", ce.d_max, "Top threshold (mm)");
  c_censor->add_option("--analysis-lo", ce.analysis_lo,
                       "First analyzed threshold (mm)");
  c_censor->add_option("--trim-lo", ce.trim_lo, "Keep distances > this");
  c_censor->add_option("--trim-hi", ce.trim_hi, "Keep distances <= this");
  c_censor->add_option("--tests", ce.tests,
                       "Subset of bf,kw,f1,f2,bf2,wrs,t,ks")
      ->delimiter(',');
  c_censor->add_option("--correction", ce.correction,
                       "Per-curve threshold-family correction");
  c_censor->add_option("--alternative", ce.alternative,
                       "Pairwise direction: two, less or greater");
  c_censor->add_option("--min-n", ce.min_n, "Per-group size guard");

  SimulateArgs si;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo size/power and censoring studies");
  c_sim->add_option("--case", si.case_name,
                    "null_l, l1..l5, null_n, n1..n5, null_e, e1..e5");
  c_sim->add_option("--mode", si.mode, "pooled | censor");
  c_sim->add_option("--sizes", si.sizes, "Group sizes n_x,n_y,n_z")
      ->delimiter(',');
  c_sim->add_option("--nmc", si.n_mc, "Monte Carlo replicates");
  c_sim->add_option("--alpha", si.alpha, "Significance level");
  c_sim->add_option("--seed", si.seed, "Master seed");
  c_sim->add_option("--threads", si.threads, "Worker threads (0 = all)");
  c_sim->add_option("--out", si.out_path, "Output CSV")->required();
  c_sim->add_option("--tests", si.tests, "Subset of bf,kw,f1,f2,bf2,wrs,t,ks")
      ->delimiter(',');
  c_sim->add_option("--alternative", si.alternative,
                    "Pairwise direction: two, less or greater");
  c_sim->add_option("--correction", si.correction,
                    "censor mode: none, bonferroni, holm, bh or by");
  double sim_delta, sim_dmax, sim_lo;
  CLI::Option* o_delta =
      c_sim->add_option("--delta", sim_delta, "Override threshold step (mm)");
  CLI::Option* o_dmax =
      c_sim->add_option("--dmax", sim_dmax, "Override top threshold (mm)");
  CLI::Option* o_lo = c_sim->add_option("--analysis-lo", sim_lo,
                                        "Override first analyzed threshold");
  c_sim->add_option("--min-n", si.min_n, "Per-group size guard");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  if (c_lcdm->parsed()) return run_lcdm(lc, command_line);
  if (c_pooled->parsed()) return run_pooled(po, command_line);
  if (c_censor->parsed()) return run_censor(ce, command_line);
  if (c_sim->parsed()) {
    if (*o_delta) si.delta = sim_delta;
    if (*o_dmax) si.d_max = sim_dmax;
    if (*o_lo) si.analysis_lo = sim_lo;
    return run_simulate(si, command_line);
  }
  return 3;
}

}  // namespace lcdm::cli
