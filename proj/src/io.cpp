#include "eswmt/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "eswmt/error.hpp"

namespace eswmt {

namespace {

const char* const kGeneratrixHeader = "arc,rho,z,theta,k_meridian,k_parallel,H,K,q";
const char* const kPatchHeader = "u,v,x,y,z";
const char* const kFormsHeader = ",E,F,G,L,M,N,H,K,q";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void write_meta(std::ostringstream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << '\n';
}

// Splits '#' metadata from data rows; returns the header and the rows.
struct CsvText {
  Metadata meta;
  std::string header;
  std::vector<std::vector<double>> rows;
};

CsvText split_csv(const std::string& text) {
  CsvText out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) out.meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      continue;
    }
    if (out.header.empty()) {
      out.header = line;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (trim(cell.substr(used)).size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail_config("malformed number '" + cell + "' on line " + std::to_string(lineno));
      }
    }
    out.rows.push_back(std::move(row));
  }
  if (out.header.empty()) fail_config("csv has no header row");
  return out;
}

std::size_t meta_size(const Metadata& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) fail_config("missing metadata '" + key + "'");
  try {
    return static_cast<std::size_t>(std::stoull(it->second));
  } catch (const std::exception&) {
    fail_config("metadata '" + key + "' is not an integer");
  }
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail_io("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail_io("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string generatrix_csv(const Generatrix& g, const Metadata& meta) {
  std::ostringstream os;
  Metadata m = meta;
  m["tau"] = format_double(g.tau);
  m["chart"] = g.chart == Chart::arc_length ? "arc_length" : "conformal";
  if (!g.profile_id.empty() && !m.count("profile")) m["profile"] = g.profile_id;
  write_meta(os, m);
  os << kGeneratrixHeader << ",sigma\n";
  for (const auto& s : g.samples) {
    const double vals[] = {s.arc, s.rho, s.z, s.theta, s.k_meridian, s.k_parallel,
                           s.mean_curvature(), s.gauss_curvature(), s.skew_curvature(), s.sigma};
    for (std::size_t k = 0; k < std::size(vals); ++k) os << (k ? "," : "") << format_double(vals[k]);
    os << '\n';
  }
  return os.str();
}

LoadedGeneratrix parse_generatrix_csv(const std::string& text) {
  CsvText csv = split_csv(text);
  if (csv.header.rfind(kGeneratrixHeader, 0) != 0) fail_config("not a generatrix csv (header mismatch)");
  LoadedGeneratrix out;
  out.meta = csv.meta;
  Generatrix& g = out.generatrix;
  try {
    g.tau = std::stod(csv.meta.at("tau"));
  } catch (const std::exception&) {
    fail_config("generatrix csv needs a numeric 'tau' metadata entry");
  }
  const auto chart = csv.meta.count("chart") ? csv.meta.at("chart") : "arc_length";
  if (chart != "arc_length" && chart != "conformal") fail_config("unknown chart '" + chart + "'");
  g.chart = chart == "arc_length" ? Chart::arc_length : Chart::conformal;
  if (csv.meta.count("profile")) g.profile_id = csv.meta.at("profile");
  for (const auto& r : csv.rows) {
    if (r.size() < 10) fail_config("generatrix row has fewer than 10 columns");
    GeneratrixSample s;
    s.arc = r[0];
    s.rho = r[1];
    s.z = r[2];
    s.theta = r[3];
    s.k_meridian = r[4];
    s.k_parallel = r[5];
    s.sigma = r[9];
    g.samples.push_back(s);
  }
  return out;
}

std::string patch_csv(const ParametricPatch& patch, const Metadata& meta) {
  std::ostringstream os;
  Metadata m = meta;
  m["nu"] = std::to_string(patch.grid.nu());
  m["nv"] = std::to_string(patch.grid.nv());
  m["periodic_v"] = patch.grid.periodic_v ? "1" : "0";
  write_meta(os, m);
  const bool full = patch.has_forms() && patch.has_curvatures();
  os << kPatchHeader << (full ? kFormsHeader : "") << '\n';
  for (std::size_t i = 0; i < patch.grid.nu(); ++i) {
    for (std::size_t j = 0; j < patch.grid.nv(); ++j) {
      const std::size_t k = patch.grid.index(i, j);
      os << format_double(patch.grid.u[i]) << ',' << format_double(patch.grid.v[j]);
      for (int c = 0; c < 3; ++c) os << ',' << format_double(patch.X[k][c]);
      if (full) {
        for (double x : {patch.E[k], patch.F[k], patch.G[k], patch.L[k], patch.M[k], patch.Nn[k], patch.H[k],
                         patch.K[k], patch.q[k]})
          os << ',' << format_double(x);
      }
      os << '\n';
    }
  }
  return os.str();
}

LoadedPatch parse_patch_csv(const std::string& text) {
  CsvText csv = split_csv(text);
  if (csv.header.rfind(kPatchHeader, 0) != 0) fail_config("not a patch csv (header mismatch)");
  const bool full = csv.header == std::string(kPatchHeader) + kFormsHeader;
  const std::size_t nu = meta_size(csv.meta, "nu"), nv = meta_size(csv.meta, "nv");
  if (csv.rows.size() != nu * nv) fail_config("patch csv row count does not match nu * nv");
  LoadedPatch out;
  out.meta = csv.meta;
  ParametricPatch& p = out.patch;
  p.grid.periodic_v = csv.meta.count("periodic_v") && csv.meta.at("periodic_v") == "1";
  p.grid.u.resize(nu);
  p.grid.v.resize(nv);
  const std::size_t width = full ? 14 : 5;
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    if (csv.rows[k].size() != width) fail_config("patch row " + std::to_string(k) + " has the wrong column count");
  }
  for (std::size_t i = 0; i < nu; ++i) p.grid.u[i] = csv.rows[i * nv][0];
  for (std::size_t j = 0; j < nv; ++j) p.grid.v[j] = csv.rows[j][1];
  p.X.resize(nu * nv);
  if (full) {
    for (auto* f : {&p.E, &p.F, &p.G, &p.L, &p.M, &p.Nn, &p.H, &p.K, &p.q}) f->resize(nu * nv);
  }
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    const auto& r = csv.rows[k];
    p.X[k] = Vec3(r[2], r[3], r[4]);
    if (!full) continue;
    p.E[k] = r[5]; p.F[k] = r[6]; p.G[k] = r[7];
    p.L[k] = r[8]; p.M[k] = r[9]; p.Nn[k] = r[10];
    p.H[k] = r[11]; p.K[k] = r[12]; p.q[k] = r[13];
  }
  if (full) {
    // Normal and principal curvatures are recomputed from positions and forms.
    p.normal.resize(nu * nv);
    p.k1.resize(nu * nv);
    p.k2.resize(nu * nv);
    ParametricPatch tmp;
    tmp.grid = p.grid;
    tmp.X = p.X;
    fundamental_forms(tmp, Exec::serial);
    p.normal = tmp.normal;
    for (std::size_t k = 0; k < nu * nv; ++k) {
      const double s = std::sqrt(p.q[k]);
      p.k1[k] = p.H[k] + s;
      p.k2[k] = p.H[k] - s;
    }
  }
  return out;
}

std::string patch_obj(const ParametricPatch& patch) {
  std::ostringstream os;
  const auto& g = patch.grid;
  const bool normals = patch.normal.size() == patch.X.size();
  os << "# " << g.nu() << " x " << g.nv() << " grid\n";
  for (const auto& x : patch.X)
    os << "v " << format_double(x.x()) << ' ' << format_double(x.y()) << ' ' << format_double(x.z()) << '\n';
  if (normals) {
    for (const auto& n : patch.normal)
      os << "vn " << format_double(n.x()) << ' ' << format_double(n.y()) << ' ' << format_double(n.z()) << '\n';
  }
  auto vert = [&](std::size_t k) {
    const std::string id = std::to_string(k + 1);
    return normals ? id + "//" + id : id;
  };
  const std::size_t nv_faces = g.periodic_v ? g.nv() : g.nv() - 1;
  for (std::size_t i = 0; i + 1 < g.nu(); ++i) {
    for (std::size_t j = 0; j < nv_faces; ++j) {
      const std::size_t j1 = (j + 1) % g.nv();
      const std::size_t a = g.index(i, j), b = g.index(i + 1, j), c = g.index(i + 1, j1), d = g.index(i, j1);
      os << "f " << vert(a) << ' ' << vert(b) << ' ' << vert(c) << '\n';
      os << "f " << vert(a) << ' ' << vert(c) << ' ' << vert(d) << '\n';
    }
  }
  return os.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_atomic(path, j.dump(2) + "\n"); }

}  // namespace eswmt
