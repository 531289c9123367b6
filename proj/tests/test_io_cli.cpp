// File readers/writers, digests, run manifests, and the command-line driver
// (exit codes, output files, and end-to-end agreement with the library).

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcdm/cli_commands.hpp"
#include "lcdm/dataset.hpp"
#include "lcdm/errors.hpp"
#include "lcdm/io.hpp"
#include "lcdm/rng.hpp"
#include "lcdm/stats.hpp"
#include "lcdm/version.hpp"

using namespace lcdm;

namespace {

namespace fs = std::filesystem;

// Fresh scratch directory per test case, removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto tick =
        std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() /
           ("lcdm_io_cli_" + std::to_string(tick) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("lcdm");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::main_with_args(static_cast<int>(argv.size()), argv.data());
}

// Same formatting the CLI uses for numeric CSV cells.
std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* kSquareOff =
    "OFF\n"
    "# a unit square, two triangles\n"
    "4 2 0\n"
    "\n"
    "0 0 0\n"
    "1 0 0\n"
    "1 1 0\n"
    "0 1 0\n"
    "3 0 1 2\n"
    "3 0 2 3\n";

// Two distance groups drawn away from the trim/censor boundaries; written as
// a long-form subject file and also pooled in-process for dual-route checks.
std::string make_subject_csv(const TempDir& dir) {
  RngStream rng(555, 0);
  std::string csv = "subject_id,group,hemisphere,distance_mm\n";
  const auto emit = [&](const std::string& id, const std::string& group,
                        std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      csv += id + ',' + group + ",left," + fmt12(0.6 + 4.3 * rng.uniform()) +
             '\n';
    }
  };
  emit("s1", "ctrl", 20);
  emit("s2", "ctrl", 20);
  emit("s3", "mdd", 15);
  emit("s4", "mdd", 15);
  const std::string path = dir.file("distances.csv");
  write_file(path, csv);
  return path;
}

// Mirrors the CLI's pooling: trim to (lo, hi], pool per group in first-seen
// order, sort ascending.
std::vector<std::vector<double>> pool_groups(const std::string& path,
                                             double lo, double hi) {
  const auto subjects = read_subject_csv(path);
  std::vector<std::string> names;
  std::vector<std::vector<double>> groups;
  for (const auto& s : subjects) {
    std::size_t g = 0;
    while (g < names.size() && names[g] != s.group) ++g;
    if (g == names.size()) {
      names.push_back(s.group);
      groups.emplace_back();
    }
    for (double d : s.distances) {
      if (d > lo && d <= hi) groups[g].push_back(d);
    }
  }
  for (auto& v : groups) std::sort(v.begin(), v.end());
  return groups;
}

}  // namespace

TEST_SUITE("io_cli") {

// ---------------------------------------------------------------------------
// Readers
// ---------------------------------------------------------------------------

TEST_CASE("off reader parses vertices, faces, comments and blank lines") {
  TempDir dir;
  const std::string path = dir.file("square.off");
  write_file(path, kSquareOff);
  const TriangleMesh mesh = read_off(path);
  REQUIRE(mesh.vertices.size() == 4);
  REQUIRE(mesh.triangles.size() == 2);
  CHECK(mesh.vertices[2].x == 1.0);
  CHECK(mesh.vertices[2].y == 1.0);
  CHECK(mesh.vertices[3].x == 0.0);
  CHECK(mesh.triangles[0][0] == 0);
  CHECK(mesh.triangles[0][1] == 1);
  CHECK(mesh.triangles[0][2] == 2);
  CHECK(mesh.triangles[1][2] == 3);
}

TEST_CASE("off reader reports malformed content with file and line") {
  TempDir dir;
  const auto expect_parse_error = [&](const std::string& content,
                                      std::size_t line) {
    const std::string path = dir.file("bad.off");
    write_file(path, content);
    try {
      (void)read_off(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.file == path);
      CHECK(e.line == line);
    }
  };
  CHECK_THROWS_AS((void)read_off(dir.file("missing.off")), ParseError);
  expect_parse_error("NOFF\n4 2 0\n", 1);                    // header
  expect_parse_error("OFF\n4\n", 2);                         // counts
  expect_parse_error("OFF\n1 1 0\n0 0\n", 3);                // short vertex
  expect_parse_error("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n"
                     "4 0 1 2 3\n", 6);                      // quad face
  expect_parse_error("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n"
                     "3 0 1 9\n", 6);                        // index range
  // Collinear vertices: rejected as degenerate geometry at parse time.
  expect_parse_error("OFF\n3 1 0\n0 0 0\n1 0 0\n2 0 0\n3 0 1 2\n", 6);
  expect_parse_error("OFF\n4 2 0\n0 0 0\n1 0 0\n", 4);       // truncated
}

TEST_CASE("grid reader fills labels and defaults to background") {
  TempDir dir;
  const std::string path = dir.file("grid.txt");
  write_file(path,
             "origin -1 -1 -1\n"
             "spacing 0.5\n"
             "dims 4 4 4\n"
             "# labels\n"
             "0,0,0,GM\n"
             "1,0,0,WM\n"
             "2,2,2,CSF\n");
  const LabeledVoxelGrid grid = read_grid(path);
  CHECK(grid.origin.x == -1.0);
  CHECK(grid.spacing == 0.5);
  CHECK(grid.dims[0] == 4);
  REQUIRE(grid.labels.size() == 64);
  CHECK(grid.labels[grid.linear(0, 0, 0)] == VoxelLabel::GM);
  CHECK(grid.labels[grid.linear(1, 0, 0)] == VoxelLabel::WM);
  CHECK(grid.labels[grid.linear(2, 2, 2)] == VoxelLabel::CSF);
  std::size_t background = 0;
  for (const VoxelLabel l : grid.labels) {
    if (l == VoxelLabel::BACKGROUND) ++background;
  }
  CHECK(background == 61);
}

TEST_CASE("grid reader rejects bad structure") {
  TempDir dir;
  const auto expect_throw = [&](const std::string& content) {
    const std::string path = dir.file("bad_grid.txt");
    write_file(path, content);
    CHECK_THROWS_AS((void)read_grid(path), ParseError);
  };
  const std::string head = "origin 0 0 0\nspacing 0.5\ndims 2 2 2\n";
  expect_throw("");                                    // empty
  expect_throw("origin 0 0\nspacing 1\ndims 1 1 1\n"); // short origin
  expect_throw("origin 0 0 0\n");                      // missing spacing
  expect_throw("origin 0 0 0\nspacing 0\ndims 1 1 1\n");
  expect_throw("origin 0 0 0\nspacing 1\ndims 0 1 1\n");
  expect_throw(head + "0,0,0\n");                      // short voxel row
  expect_throw(head + "0,0,2,GM\n");                   // out of bounds
  expect_throw(head + "0,0,0,AIR\n");                  // unknown label
  expect_throw(head + "0,0,0,GM\n0,0,0,WM\n");         // duplicate voxel
}

TEST_CASE("subject reader: optional header, first-seen order, merged rows") {
  TempDir dir;
  const std::string body =
      "s1,ctrl,left,1.0\n"
      "s2,mdd,right,3.5\n"
      "# interleaved rows accumulate onto the same subject\n"
      "s1,ctrl,left,2.0\n"
      "s1,ctrl,left,0.5\n";
  const std::string with_header = dir.file("with_header.csv");
  const std::string without_header = dir.file("without_header.csv");
  write_file(with_header,
             "subject_id,group,hemisphere,distance_mm\n" + body);
  write_file(without_header, body);

  for (const std::string& path : {with_header, without_header}) {
    const auto subjects = read_subject_csv(path);
    REQUIRE(subjects.size() == 2);
    CHECK(subjects[0].subject_id == "s1");
    CHECK(subjects[0].group == "ctrl");
    CHECK(subjects[0].hemisphere == Hemisphere::LEFT);
    CHECK(subjects[0].distances == std::vector<double>{1.0, 2.0, 0.5});
    CHECK(subjects[1].subject_id == "s2");
    CHECK(subjects[1].hemisphere == Hemisphere::RIGHT);
    CHECK(subjects[1].distances == std::vector<double>{3.5});
  }
}

TEST_CASE("subject reader rejects conflicts and malformed rows") {
  TempDir dir;
  const std::string path = dir.file("subjects.csv");

  write_file(path, "s1,ctrl,left,1.0\ns1,mdd,left,2.0\n");
  try {
    (void)read_subject_csv(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);  // the conflicting row, not the first one
  }

  write_file(path, "s1,ctrl,left,1.0\ns1,ctrl,right,2.0\n");
  CHECK_THROWS_AS((void)read_subject_csv(path), ParseError);  // hemisphere
  write_file(path, "s1,ctrl,left\n");
  CHECK_THROWS_AS((void)read_subject_csv(path), ParseError);  // short row
  write_file(path, "s1,ctrl,central,1.0\n");
  CHECK_THROWS_AS((void)read_subject_csv(path), ParseError);  // bad side
  write_file(path, "s1,ctrl,left,abc\n");
  CHECK_THROWS_AS((void)read_subject_csv(path), ParseError);  // bad number
  write_file(path, "subject_id,group,hemisphere,distance_mm\n");
  CHECK_THROWS_AS((void)read_subject_csv(path), ParseError);  // header only
  write_file(path, "");
  CHECK_THROWS_AS((void)read_subject_csv(path), ParseError);  // empty
}

// ---------------------------------------------------------------------------
// Writers and digests
// ---------------------------------------------------------------------------

TEST_CASE("file digest matches the fnv-1a 64-bit reference vectors") {
  TempDir dir;
  const std::string path = dir.file("blob");
  write_file(path, "");
  CHECK(file_digest(path) == "cbf29ce484222325");
  write_file(path, "a");
  CHECK(file_digest(path) == "af63dc4c8601ec8c");
  write_file(path, "abc");
  CHECK(file_digest(path) == "e71fa2190541574b");
  write_file(path, "abd");
  CHECK(file_digest(path) != "e71fa2190541574b");
  CHECK_THROWS_AS((void)file_digest(dir.file("missing")), Error);
}

TEST_CASE("atomic writer overwrites and leaves no temp file behind") {
  TempDir dir;
  const std::string path = dir.file("out.txt");
  write_text_atomic(path, "first\n");
  CHECK(read_file(path) == "first\n");
  write_text_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  CHECK(!fs::exists(path + ".tmp"));
  CHECK_THROWS_AS(
      write_text_atomic(dir.file("no_such_dir/out.txt"), "x"), Error);
}

TEST_CASE("distance map csv formats rows to nine decimals") {
  LcdmResult res;
  res.rows.push_back({1, 2, 3, VoxelLabel::GM, 0.123456789123});
  res.rows.push_back({0, 0, 0, VoxelLabel::WM, -2.0});
  CHECK(lcdm_csv(res) ==
        "i,j,k,label,signed_distance_mm\n"
        "1,2,3,GM,0.123456789\n"
        "0,0,0,WM,-2.000000000\n");
}

TEST_CASE("manifest json round-trips through a json parser") {
  RunManifest m;
  m.command = "lcdm pooled --distances d.csv";
  m.config = {{"alpha", "0.05"}, {"correction", "holm"}};
  m.inputs = {{"d.csv", "0123456789abcdef"}};
  m.outputs = {"out.csv"};
  m.seed = 99;
  const auto j = nlohmann::json::parse(manifest_json(m));
  CHECK(j.at("command").get<std::string>() == m.command);
  CHECK(j.at("version").get<std::string>() == std::string(kVersion));
  CHECK(j.at("seed").get<std::uint64_t>() == 99);
  CHECK(j.at("config").at("alpha").get<std::string>() == "0.05");
  CHECK(j.at("config").at("correction").get<std::string>() == "holm");
  CHECK(j.at("inputs").size() == 1);
  CHECK(j.at("inputs")[0].at("path").get<std::string>() == "d.csv");
  CHECK(j.at("inputs")[0].at("digest").get<std::string>() ==
        "0123456789abcdef");
  CHECK(j.at("outputs")[0].get<std::string>() == "out.csv");
  const auto ts = j.at("timestamp").get<std::string>();
  REQUIRE(ts.size() == 20);  // YYYY-MM-DDTHH:MM:SSZ
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}

// ---------------------------------------------------------------------------
// Command-line driver
// ---------------------------------------------------------------------------

TEST_CASE("cli exit codes map the error classes") {
  TempDir dir;
  CHECK(run_cli({"--version"}) == 0);
  CHECK(run_cli({}) == 3);                         // subcommand required
  CHECK(run_cli({"lcdm"}) == 3);                   // missing required flags
  CHECK(run_cli({"lcdm", "--bogus"}) == 3);        // unknown flag

  const std::string prefix = dir.file("pooled");
  CHECK(run_cli({"pooled", "--distances", dir.file("missing.csv"), "--out",
                 prefix}) == 2);

  const std::string csv = dir.file("d.csv");
  write_file(csv,
             "s1,a,left,1.0\ns1,a,left,1.0\ns1,a,left,1.0\n"
             "s2,b,left,1.0\ns2,b,left,2.0\ns2,b,left,3.0\n");
  CHECK(run_cli({"pooled", "--distances", csv, "--out", prefix, "--tests",
                 "bogus"}) == 3);
  // A zero-variance group is a numerical failure for the unequal-variance
  // anova, and nothing is written before the failure.
  CHECK(run_cli({"pooled", "--distances", csv, "--out", prefix, "--tests",
                 "f2"}) == 4);
  CHECK(!fs::exists(prefix + "_descriptives.csv"));
  CHECK(run_cli({"censor", "--distances", csv, "--out", dir.file("c.csv"),
                 "--correction", "bogus"}) == 3);
  CHECK(run_cli({"simulate", "--case", "l9", "--out", dir.file("s.csv")}) ==
        3);
}

TEST_CASE("cli distance-map pipeline writes csv and manifest") {
  TempDir dir;
  const std::string mesh_path = dir.file("plane.off");
  const std::string grid_path = dir.file("grid.txt");
  const std::string out_path = dir.file("map.csv");
  write_file(mesh_path,
             "OFF\n4 2 0\n"
             "-100 -100 0\n100 -100 0\n100 100 0\n-100 100 0\n"
             "3 0 1 2\n3 0 2 3\n");
  std::string grid = "origin -1 -1 -1.5\nspacing 0.5\ndims 4 4 6\n";
  for (int k = 0; k < 6; ++k) {
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 4; ++i) {
        grid += std::to_string(i) + ',' + std::to_string(j) + ',' +
                std::to_string(k) + (k < 3 ? ",WM\n" : ",GM\n");
      }
    }
  }
  write_file(grid_path, grid);

  REQUIRE(run_cli({"lcdm", "--mesh", mesh_path, "--grid", grid_path, "--out",
                   out_path, "--threads", "2"}) == 0);

  // Labels split at the plane, so the signed distance is the centroid's z.
  const auto lines = lines_of(read_file(out_path));
  REQUIRE(lines.size() == 97);  // header + 4*4*6 voxels
  CHECK(lines[0] == "i,j,k,label,signed_distance_mm");
  CHECK(lines[1] == "0,0,0,WM,-1.250000000");
  CHECK(lines[49] == "0,0,3,GM,0.250000000");  // linear index 48
  CHECK(lines[96] == "3,3,5,GM,1.250000000");

  const auto j = nlohmann::json::parse(read_file(out_path + ".manifest.json"));
  CHECK(j.at("version").get<std::string>() == std::string(kVersion));
  CHECK(j.at("command").get<std::string>().find("lcdm") != std::string::npos);
  std::map<std::string, std::string> digests;
  for (const auto& in : j.at("inputs")) {
    digests[in.at("path").get<std::string>()] =
        in.at("digest").get<std::string>();
  }
  REQUIRE(digests.size() == 2);
  CHECK(digests.at(mesh_path) == file_digest(mesh_path));
  CHECK(digests.at(grid_path) == file_digest(grid_path));
  CHECK(j.at("outputs")[0].get<std::string>() == out_path);
}

TEST_CASE("pooled command agrees with a direct computation") {
  TempDir dir;
  const std::string csv = make_subject_csv(dir);
  const std::string prefix = dir.file("pooled");
  REQUIRE(run_cli({"pooled", "--distances", csv, "--out", prefix, "--tests",
                   "kw,f1,wrs,lilliefors", "--correction", "holm"}) == 0);

  const auto desc = lines_of(read_file(prefix + "_descriptives.csv"));
  REQUIRE(desc.size() == 4);  // header + ctrl + mdd + overall
  CHECK(desc[0] ==
        "group,hemisphere,n_subjects,n,mean,median,sd,"
        "n_trimmed_below,n_trimmed_above");
  CHECK(cells_of(desc[1])[0] == "ctrl");
  CHECK(cells_of(desc[1])[2] == "2");
  CHECK(cells_of(desc[1])[3] == "40");
  CHECK(cells_of(desc[2])[0] == "mdd");
  CHECK(cells_of(desc[2])[3] == "30");
  CHECK(cells_of(desc[3])[0] == "overall");
  CHECK(cells_of(desc[3])[3] == "70");

  // The omnibus rows must match the library run on the same pooled data.
  const auto groups = pool_groups(csv, -0.5, 5.5);
  REQUIRE(groups.size() == 2);
  const std::vector<Sample> samples{Sample(groups[0].data(), groups[0].size()),
                                    Sample(groups[1].data(), groups[1].size())};
  const TestResult kw = kruskal_wallis(samples);
  const TestResult f1 = one_way_anova_f(samples);

  const auto omni = lines_of(read_file(prefix + "_omnibus.csv"));
  REQUIRE(omni.size() == 5);  // header + kw + f1 + 2 lilliefors rows
  CHECK(omni[0] == "test,statistic,df1,df2,p");
  std::map<std::string, std::vector<std::string>> rows;
  for (std::size_t i = 1; i < omni.size(); ++i) {
    const auto c = cells_of(omni[i]);
    rows[c[0]] = c;
  }
  REQUIRE(rows.count("kw") == 1);
  CHECK(rows.at("kw")[1] == fmt12(kw.statistic));
  CHECK(rows.at("kw")[4] == fmt12(kw.p));
  REQUIRE(rows.count("f1") == 1);
  CHECK(rows.at("f1")[1] == fmt12(f1.statistic));
  CHECK(rows.at("f1")[2] == fmt12(*f1.df1));
  CHECK(rows.at("f1")[3] == fmt12(*f1.df2));
  CHECK(rows.at("f1")[4] == fmt12(f1.p));
  CHECK(rows.count("lilliefors[ctrl]") == 1);
  CHECK(rows.count("lilliefors[mdd]") == 1);

  // Pairwise: one pair, both directions, and the direct rank-sum p-values.
  const auto pw = lines_of(read_file(prefix + "_pairwise.csv"));
  REQUIRE(pw.size() == 3);  // header + greater + less
  CHECK(pw[0] == "group_a,group_b,test,alternative,p,p_adjusted,method");
  const TestResult wg =
      wilcoxon_rank_sum(samples[0], samples[1], Alternative::GREATER);
  const TestResult wl =
      wilcoxon_rank_sum(samples[0], samples[1], Alternative::LESS);
  const auto row_g = cells_of(pw[1]);
  const auto row_l = cells_of(pw[2]);
  CHECK(row_g[0] == "ctrl");
  CHECK(row_g[1] == "mdd");
  CHECK(row_g[2] == "wrs");
  CHECK(row_g[3] == "greater");
  CHECK(row_g[4] == fmt12(wg.p));
  CHECK(row_g[5] == fmt12(std::min(1.0, wg.p)));  // family of one
  CHECK(row_g[6] == "holm");
  CHECK(row_l[3] == "less");
  CHECK(row_l[4] == fmt12(wl.p));

  CHECK(fs::exists(prefix + "_descriptives.csv.manifest.json"));
}

TEST_CASE("censor final threshold matches the pooled analysis") {
  TempDir dir;
  const std::string csv = make_subject_csv(dir);
  const std::string out = dir.file("curve.csv");
  REQUIRE(run_cli({"censor", "--distances", csv, "--out", out, "--delta",
                   "0.5", "--dmax", "5.5", "--analysis-lo", "0.5", "--tests",
                   "kw", "--correction", "none"}) == 0);

  const auto groups = pool_groups(csv, -0.5, 5.5);
  const std::vector<Sample> samples{Sample(groups[0].data(), groups[0].size()),
                                    Sample(groups[1].data(), groups[1].size())};
  const TestResult kw = kruskal_wallis(samples);

  const auto lines = lines_of(read_file(out));
  REQUIRE(lines.size() == 12);  // header + thresholds 0.5, 1.0, ..., 5.5
  CHECK(lines[0] ==
        "gamma_mm,test,alternative,p,p_adjusted,method,n_ctrl,n_mdd,status");
  const auto last = cells_of(lines[11]);
  CHECK(last[0] == "5.5");
  CHECK(last[1] == "kw");
  // Nothing sits above the top threshold, so the final point is exactly the
  // pooled omnibus test.
  CHECK(last[3] == fmt12(kw.p));
  CHECK(last[4] == fmt12(kw.p));  // correction "none" keeps p unchanged
  CHECK(last[5] == "none");
  CHECK(last[6] == "40");
  CHECK(last[7] == "30");
  CHECK(last[8] == "OK");
  // Below the first data point every row is a guarded miss, never an error.
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = cells_of(lines[i]);
    CHECK((c[8] == "OK" || c[8] == "MISSING"));
    if (c[8] == "MISSING") CHECK(c[3].empty());
  }
}

TEST_CASE("simulate pooled is byte-deterministic for a fixed seed") {
  TempDir dir;
  const std::string out_a = dir.file("a.csv");
  const std::string out_b = dir.file("b.csv");
  const std::vector<std::string> common{
      "simulate", "--case", "null_l", "--mode",  "pooled",
      "--sizes",  "30,30,30", "--nmc", "40",     "--seed", "42",
      "--tests",  "kw",     "--threads", "2"};
  auto args = common;
  args.insert(args.end(), {"--out", out_a});
  REQUIRE(run_cli(args) == 0);
  args = common;
  args.insert(args.end(), {"--out", out_b});
  REQUIRE(run_cli(args) == 0);
  CHECK(read_file(out_a) == read_file(out_b));

  const auto lines = lines_of(read_file(out_a));
  REQUIRE(lines.size() >= 4);
  CHECK(lines[0] == "test,rate,ci_lo,ci_hi,verdict");
  const auto row = cells_of(lines[1]);
  CHECK(row[0] == "kw");
  const double rate = std::stod(row[1]);
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);
  CHECK(std::stod(row[2]) <= rate);
  CHECK(std::stod(row[3]) >= rate);
  CHECK(lines[2].rfind("# nominal_band,", 0) == 0);
  CHECK(lines[3].rfind("# agreement", 0) == 0);

  const auto j = nlohmann::json::parse(read_file(out_a + ".manifest.json"));
  CHECK(j.at("seed").get<std::uint64_t>() == 42);
  CHECK(j.at("config").at("case").get<std::string>() == "null_l");
}

TEST_CASE("simulate censor honours grid overrides") {
  TempDir dir;
  const std::string out = dir.file("censor_mc.csv");
  REQUIRE(run_cli({"simulate", "--case", "l1", "--mode", "censor", "--sizes",
                   "40,40,40", "--nmc", "4", "--seed", "7", "--tests", "kw",
                   "--correction", "bh", "--delta", "1", "--dmax", "3",
                   "--analysis-lo", "1", "--threads", "1", "--out", out}) ==
          0);
  const auto lines = lines_of(read_file(out));
  REQUIRE(lines.size() == 4);  // header + thresholds 1, 2, 3
  CHECK(lines[0] ==
        "gamma_mm,test,alternative,covered,mean_p,band_lo,band_hi,"
        "reject_rate,mean_p_bh");
  CHECK(cells_of(lines[1])[0] == "1");
  CHECK(cells_of(lines[2])[0] == "2");
  CHECK(cells_of(lines[3])[0] == "3");
  const auto last = cells_of(lines[3]);
  CHECK(last[1] == "kw");
  CHECK(last[3] == "4");  // all replicates pass the size guard at the top
  const double mean_p = std::stod(last[4]);
  CHECK(mean_p >= 0.0);
  CHECK(mean_p <= 1.0);
  CHECK(std::stod(last[5]) <= mean_p);
  CHECK(std::stod(last[6]) >= mean_p);
  CHECK(std::stod(last[8]) >= mean_p - 1e-12);  // corrected mean can't drop
}

TEST_CASE("config file provides defaults and flags win") {
  TempDir dir;
  const std::string csv = make_subject_csv(dir);
  const std::string cfg = dir.file("run.ini");
  write_file(cfg, "[censor]\ndelta=0.5\n");
  const std::string out = dir.file("curve.csv");

  // delta comes from the config file: thresholds 0.5, 1.0, 1.5, 2.0.
  // --config lives on the top-level command, ahead of the subcommand.
  REQUIRE(run_cli({"--config", cfg, "censor", "--distances", csv, "--out",
                   out, "--dmax", "2", "--analysis-lo", "0.5", "--tests",
                   "kw"}) == 0);
  CHECK(lines_of(read_file(out)).size() == 5);

  // An explicit flag beats the config file: 0.5, 0.75, ..., 2.0.
  REQUIRE(run_cli({"--config", cfg, "censor", "--distances", csv, "--out",
                   out, "--dmax", "2", "--analysis-lo", "0.5", "--tests",
                   "kw", "--delta", "0.25"}) == 0);
  CHECK(lines_of(read_file(out)).size() == 8);
}

}  // TEST_SUITE
