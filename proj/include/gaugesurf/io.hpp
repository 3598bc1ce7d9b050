#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "discretei.hpp"
#include "grid.hpp"
#include "isothermic.hpp"
#include "report.hpp"

namespace gaugesurf {

namespace fs = std::filesystem;

// Grid files: {extents, steps, origin, values} with values flat and row-major
// (i fastest). Reals are numbers, vectors are arrays, complex scalars are
// [re, im] pairs.
namespace detail {
inline json value_to_json(double v) { return v; }
inline json value_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }
template <int D>
json value_to_json(const Vec<double, D>& v) {
  json a = json::array();
  for (int k = 0; k < D; ++k) a.push_back(v(k));
  return a;
}

inline double number_at(const json& j, const std::string& what) {
  if (!j.is_number()) throw DataError("grid file: " + what + " must be a number");
  return j.get<double>();
}
inline void value_from_json(const json& j, double& out) { out = number_at(j, "value"); }
inline void value_from_json(const json& j, Complex& out) {
  if (!j.is_array() || j.size() != 2) throw DataError("grid file: complex value must be [re, im]");
  out = Complex(number_at(j[0], "re"), number_at(j[1], "im"));
}
template <int D>
void value_from_json(const json& j, Vec<double, D>& out) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(D))
    throw DataError("grid file: vector value must have " + std::to_string(D) + " components");
  for (int k = 0; k < D; ++k) out(k) = number_at(j[k], "component");
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("grid file: missing key '") + key + "'");
  return j.at(key);
}
}  // namespace detail

template <class T>
json grid_to_json(const Field<T>& f) {
  json j;
  j["extents"] = {f.grid.n[0], f.grid.n[1]};
  j["steps"] = {f.grid.step[0], f.grid.step[1]};
  j["origin"] = {f.grid.origin[0], f.grid.origin[1]};
  json vals = json::array();
  for (const T& v : f.values) vals.push_back(detail::value_to_json(v));
  j["values"] = std::move(vals);
  return j;
}

template <class T>
Field<T> grid_from_json(const json& j) {
  const json &ext = detail::require(j, "extents"), &st = detail::require(j, "steps"), &org = detail::require(j, "origin"),
             &vals = detail::require(j, "values");
  if (!ext.is_array() || ext.size() != 2 || !st.is_array() || st.size() != 2 || !org.is_array() || org.size() != 2)
    throw DataError("grid file: extents, steps and origin must have two entries");
  if (!ext[0].is_number_integer() || !ext[1].is_number_integer()) throw DataError("grid file: extents must be integers");
  Grid2 g;
  try {
    g = Grid2(ext[0].get<int>(), ext[1].get<int>(), detail::number_at(st[0], "step"), detail::number_at(st[1], "step"),
              detail::number_at(org[0], "origin"), detail::number_at(org[1], "origin"));
  } catch (const ContractError& e) {
    throw DataError(std::string("grid file: ") + e.what());
  }
  if (!vals.is_array() || vals.size() != g.size())
    throw DataError("grid file: expected " + std::to_string(g.size()) + " values");
  Field<T> f(g);
  for (std::size_t v = 0; v < g.size(); ++v) detail::value_from_json(vals[v], f.values[v]);
  return f;
}

// Discrete maps store 5-component unit representatives on a unit lattice.
inline json quadmap_to_json(const QuadMap& m) {
  json j;
  j["extents"] = {m.extents[0], m.extents[1], m.extents[2]};
  j["steps"] = {1.0, 1.0, 1.0};
  j["origin"] = {0.0, 0.0, 0.0};
  json vals = json::array();
  for (const Vec5& v : m.points) vals.push_back(detail::value_to_json(v));
  j["values"] = std::move(vals);
  return j;
}

// Deterministic text output: every double printed with round-trip precision.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct ObjStats {
  std::size_t vertices = 0;
  std::size_t faces = 0;
  std::size_t masked_vertices = 0;
  std::size_t omitted_faces = 0;
};

// Quad mesh of a grid: "v x y z" in row-major order, one "f a b d c" per cell
// (1-indexed, counter-clockwise). Masked vertices are dropped, later indices
// renumbered, and every face touching them omitted.
inline ObjStats write_obj(std::ostream& out, const Grid2& g, const std::vector<Vec3>& pts,
                          const std::vector<bool>* mask = nullptr) {
  ObjStats s;
  std::vector<std::size_t> number(pts.size(), 0);
  for (std::size_t v = 0; v < pts.size(); ++v) {
    const bool keep = (!mask || (*mask)[v]) && pts[v].allFinite();
    if (!keep) {
      ++s.masked_vertices;
      continue;
    }
    number[v] = ++s.vertices;
    out << "v " << format_double(pts[v](0)) << ' ' << format_double(pts[v](1)) << ' ' << format_double(pts[v](2)) << '\n';
  }
  for (int j = 0; j + 1 < g.n[1]; ++j)
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const std::size_t a = number[g.index(i, j)], b = number[g.index(i + 1, j)], c = number[g.index(i, j + 1)],
                        d = number[g.index(i + 1, j + 1)];
      if (!a || !b || !c || !d) {
        ++s.omitted_faces;
        continue;
      }
      out << "f " << a << ' ' << b << ' ' << d << ' ' << c << '\n';
      ++s.faces;
    }
  return s;
}

inline ObjStats write_obj(std::ostream& out, const VecField& f, const std::vector<bool>* mask = nullptr) {
  return write_obj(out, f.grid, f.values, mask);
}

// Points at infinity become masked vertices.
inline ObjStats write_obj(std::ostream& out, const CurvatureLinePatch& p) {
  return write_obj(out, p.points(), &p.finite);
}

// One z-level of a discrete map.
inline ObjStats write_obj(std::ostream& out, const QuadMap& m, int level = 0) {
  Grid2 g(m.extents[0], m.extents[1], 1.0, 1.0);
  std::vector<Vec3> pts(g.size(), Vec3::Zero());
  std::vector<bool> mask(g.size(), false);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i)
      if (auto x = project(m[m.index(i, j, level)], 1e-9)) {
        pts[g.index(i, j)] = *x;
        mask[g.index(i, j)] = true;
      }
  return write_obj(out, g, pts, &mask);
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

template <class Mesh>
ObjStats save_obj(const fs::path& path, const Mesh& m) {
  std::ostringstream s;
  const ObjStats st = write_obj(s, m);
  write_text(path, s.str());
  return st;
}

}  // namespace gaugesurf
