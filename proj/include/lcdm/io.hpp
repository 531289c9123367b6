#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcdm/dataset.hpp"
#include "lcdm/errors.hpp"
#include "lcdm/geometry.hpp"

namespace lcdm {

// ============================================================================
// Readers. All throw ParseError with file:line on malformed content.
// ============================================================================

// ASCII OFF: "OFF" header, "nv nf ne" counts, vertex rows, "3 a b c" faces.
TriangleMesh read_off(const std::string& path);

// Labeled grid:
//   origin x y z
//   spacing h
//   dims nx ny nz
//   i,j,k,label          (label in {GM, WM, CSF}; absent voxels BACKGROUND)
LabeledVoxelGrid read_grid(const std::string& path);

// Long-form distances: subject_id,group,hemisphere,distance_mm
// (header row optional; hemisphere in {left, right, none}).
std::vector<SubjectDistances> read_subject_csv(const std::string& path);

// ============================================================================
// Writers
// ============================================================================

// Atomic: writes to a temp file in the same directory, then renames.
void write_text_atomic(const std::string& path, const std::string& content);

std::string lcdm_csv(const LcdmResult& result);  // i,j,k,label,signed_distance_mm

// FNV-1a 64-bit digest of a file's bytes, hex-encoded.
std::string file_digest(const std::string& path);

// Run manifest: JSON with command line, resolved configuration, input digests,
// seed, tool version, and timestamp. Written as <output>.manifest.json.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // key, value
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
};
std::string manifest_json(const RunManifest& m);
void write_manifest_for(const std::string& output_path, const RunManifest& m);

}  // namespace lcdm
