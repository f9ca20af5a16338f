#pragma once

// File formats.
//
// Generatrix CSV: '#'-prefixed "key = value" metadata lines (profile, tau,
// chart), a header row, then one row per sample with columns
//   arc,rho,z,theta,k_meridian,k_parallel,H,K,q,sigma
// written with %.17g so a reload is bit-exact.
//
// Patch CSV: metadata (periodic_v, nu, nv, profile), header, then rows
//   u,v,x,y,z[,E,F,G,L,M,N,H,K,q]
// in grid order (u outer, v inner).
//
// OBJ: vertices, per-vertex normals when available, triangulated faces with
// the periodic seam closed. The axis of revolution is the third coordinate;
// no y-up convention is applied.

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

#include "eswmt/rotational.hpp"
#include "eswmt/surface.hpp"

namespace eswmt {

using Metadata = std::map<std::string, std::string>;

// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string format_double(double x);  // %.17g

std::string generatrix_csv(const Generatrix& g, const Metadata& meta = {});
struct LoadedGeneratrix {
  Generatrix generatrix;
  Metadata meta;
};
LoadedGeneratrix parse_generatrix_csv(const std::string& text);

std::string patch_csv(const ParametricPatch& patch, const Metadata& meta = {});
struct LoadedPatch {
  ParametricPatch patch;
  Metadata meta;
};
LoadedPatch parse_patch_csv(const std::string& text);

std::string patch_obj(const ParametricPatch& patch);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace eswmt
