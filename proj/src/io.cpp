#include "lcdm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lcdm/version.hpp"

namespace lcdm {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_char(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {  // trim surrounding whitespace
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& file,
                    std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected a number, got '" + s + "'");
  }
}

long parse_int(const std::string& s, const std::string& file,
               std::size_t line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected an integer, got '" + s + "'");
  }
}

// Reads lines, skipping blanks and '#' comments, tracking line numbers.
class LineReader {
 public:
  LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw ParseError(path, 0, "cannot open file");
  }
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }
  std::size_t lineno() const { return lineno_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t lineno_ = 0;
};

}  // namespace

TriangleMesh read_off(const std::string& path) {
  LineReader r(path);
  std::string line;
  if (!r.next(line)) throw ParseError(path, r.lineno(), "empty OFF file");
  {
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0] != "OFF") {
      throw ParseError(path, r.lineno(), "expected OFF header");
    }
  }
  if (!r.next(line)) {
    throw ParseError(path, r.lineno(), "missing OFF counts line");
  }
  const auto counts = split_ws(line);
  if (counts.size() < 2) {
    throw ParseError(path, r.lineno(), "expected 'nv nf ne' counts");
  }
  const long nv = parse_int(counts[0], path, r.lineno());
  const long nf = parse_int(counts[1], path, r.lineno());
  if (nv <= 0 || nf <= 0) {
    throw ParseError(path, r.lineno(), "OFF needs positive vertex/face counts");
  }

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!r.next(line)) {
      throw ParseError(path, r.lineno(), "unexpected end of vertex list");
    }
    const auto toks = split_ws(line);
    if (toks.size() != 3) {
      throw ParseError(path, r.lineno(), "vertex row needs 3 coordinates");
    }
    mesh.vertices.push_back({parse_double(toks[0], path, r.lineno()),
                             parse_double(toks[1], path, r.lineno()),
                             parse_double(toks[2], path, r.lineno())});
  }
  mesh.triangles.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    if (!r.next(line)) {
      throw ParseError(path, r.lineno(), "unexpected end of face list");
    }
    const auto toks = split_ws(line);
    if (toks.size() != 4 || toks[0] != "3") {
      throw ParseError(path, r.lineno(), "face row must be '3 a b c'");
    }
    mesh.triangles.push_back(
        {static_cast<std::int32_t>(parse_int(toks[1], path, r.lineno())),
         static_cast<std::int32_t>(parse_int(toks[2], path, r.lineno())),
         static_cast<std::int32_t>(parse_int(toks[3], path, r.lineno()))});
  }
  try {
    validate_mesh(mesh);
  } catch (const SemanticError& e) {
    throw ParseError(path, r.lineno(), e.what());
  }
  return mesh;
}

LabeledVoxelGrid read_grid(const std::string& path) {
  LineReader r(path);
  LabeledVoxelGrid grid;
  std::string line;

  if (!r.next(line)) throw ParseError(path, r.lineno(), "empty grid file");
  auto toks = split_ws(line);
  if (toks.size() != 4 || toks[0] != "origin") {
    throw ParseError(path, r.lineno(), "expected 'origin x y z'");
  }
  grid.origin = {parse_double(toks[1], path, r.lineno()),
                 parse_double(toks[2], path, r.lineno()),
                 parse_double(toks[3], path, r.lineno())};

  if (!r.next(line)) throw ParseError(path, r.lineno(), "missing spacing line");
  toks = split_ws(line);
  if (toks.size() != 2 || toks[0] != "spacing") {
    throw ParseError(path, r.lineno(), "expected 'spacing h'");
  }
  grid.spacing = parse_double(toks[1], path, r.lineno());
  if (!(grid.spacing > 0.0)) {
    throw ParseError(path, r.lineno(), "spacing must be positive");
  }

  if (!r.next(line)) throw ParseError(path, r.lineno(), "missing dims line");
  toks = split_ws(line);
  if (toks.size() != 4 || toks[0] != "dims") {
    throw ParseError(path, r.lineno(), "expected 'dims nx ny nz'");
  }
  for (int d = 0; d < 3; ++d) {
    const long v = parse_int(toks[static_cast<std::size_t>(d) + 1], path, r.lineno());
    if (v <= 0) throw ParseError(path, r.lineno(), "dims must be positive");
    grid.dims[static_cast<std::size_t>(d)] = static_cast<std::int32_t>(v);
  }
  grid.labels.assign(static_cast<std::size_t>(grid.dims[0]) *
                         static_cast<std::size_t>(grid.dims[1]) *
                         static_cast<std::size_t>(grid.dims[2]),
                     VoxelLabel::BACKGROUND);

  while (r.next(line)) {
    const auto cells = split_char(line, ',');
    if (cells.size() != 4) {
      throw ParseError(path, r.lineno(), "expected 'i,j,k,label'");
    }
    const long i = parse_int(cells[0], path, r.lineno());
    const long j = parse_int(cells[1], path, r.lineno());
    const long k = parse_int(cells[2], path, r.lineno());
    if (i < 0 || i >= grid.dims[0] || j < 0 || j >= grid.dims[1] || k < 0 ||
        k >= grid.dims[2]) {
      throw ParseError(path, r.lineno(), "voxel index out of bounds");
    }
    VoxelLabel label;
    if (cells[3] == "GM") {
      label = VoxelLabel::GM;
    } else if (cells[3] == "WM") {
      label = VoxelLabel::WM;
    } else if (cells[3] == "CSF") {
      label = VoxelLabel::CSF;
    } else {
      throw ParseError(path, r.lineno(),
                       "label must be GM, WM or CSF, got '" + cells[3] + "'");
    }
    const std::size_t lin = grid.linear(static_cast<int>(i), static_cast<int>(j),
                                        static_cast<int>(k));
    if (grid.labels[lin] != VoxelLabel::BACKGROUND) {
      throw ParseError(path, r.lineno(), "duplicate voxel");
    }
    grid.labels[lin] = label;
  }
  return grid;
}

std::vector<SubjectDistances> read_subject_csv(const std::string& path) {
  LineReader r(path);
  std::vector<SubjectDistances> subjects;
  std::map<std::string, std::size_t> index;
  std::string line;
  bool first_row = true;
  while (r.next(line)) {
    const auto cells = split_char(line, ',');
    if (first_row) {
      first_row = false;
      if (!cells.empty() && cells[0] == "subject_id") continue;  // header
    }
    if (cells.size() != 4) {
      throw ParseError(path, r.lineno(),
                       "expected 'subject_id,group,hemisphere,distance_mm'");
    }
    const auto hemi = hemisphere_from_name(cells[2]);
    if (!hemi) {
      throw ParseError(path, r.lineno(),
                       "hemisphere must be left, right or none");
    }
    const double d = parse_double(cells[3], path, r.lineno());
    const auto it = index.find(cells[0]);
    if (it == index.end()) {
      index.emplace(cells[0], subjects.size());
      subjects.push_back({cells[0], cells[1], *hemi, {d}});
    } else {
      SubjectDistances& s = subjects[it->second];
      if (s.group != cells[1] || s.hemisphere != *hemi) {
        throw ParseError(path, r.lineno(),
                         "subject '" + cells[0] +
                             "' listed with conflicting group/hemisphere");
      }
      s.distances.push_back(d);
    }
  }
  if (subjects.empty()) {
    throw ParseError(path, r.lineno(), "no distance rows");
  }
  return subjects;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw Error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

std::string lcdm_csv(const LcdmResult& result) {
  std::string out = "i,j,k,label,signed_distance_mm\n";
  char buf[128];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%s,%.9f\n", row.i, row.j, row.k,
                  voxel_label_name(row.label), row.signed_distance);
    out += buf;
  }
  return out;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for digest");
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64 offset basis
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto n = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["version"] = kVersion;
  j["seed"] = m.seed;
  std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["timestamp"] = stamp;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& [p, d] : m.inputs) {
    inputs.push_back({{"path", p}, {"digest", d}});
  }
  j["inputs"] = inputs;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

void write_manifest_for(const std::string& output_path, const RunManifest& m) {
  write_text_atomic(output_path + ".manifest.json", manifest_json(m));
}

}  // namespace lcdm
