#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <variant>

#include "io.hpp"
#include "verify.hpp"

namespace gaugesurf {

// A malformed scenario; the message names the offending key.
struct ScenarioError : DataError {
  ScenarioError(const std::string& key, const std::string& why)
      : DataError("scenario key '" + key + "': " + why), key(key) {}
  std::string key;
};

using ParamValue = std::variant<double, std::string>;

struct GridSpec {
  int n[2];
  double step[2];
  double origin[2];
};

struct Scenario {
  std::string name;
  std::string module;
  std::string operation;
  std::map<std::string, ParamValue> parameters;
  std::optional<GridSpec> grid;
  std::map<std::string, std::string> outputs;
  std::map<std::string, double> tolerances;
  json source;  // echoed into the report
};

// Parameter signature of one operation.
struct ParamSpec {
  enum Kind { Number, Text } kind;
  std::optional<ParamValue> fallback;  // empty: required
  std::vector<std::string> choices;    // allowed strings for Text
};

struct OperationSpec {
  std::map<std::string, ParamSpec> params;
  std::set<std::string> outputs;
  bool takes_grid = true;
};

namespace scenario_detail {
inline ParamSpec num(std::optional<double> d = std::nullopt) {
  ParamSpec s{ParamSpec::Number, std::nullopt, {}};
  if (d) s.fallback = *d;
  return s;
}
inline ParamSpec text(std::string d, std::vector<std::string> choices) {
  return {ParamSpec::Text, ParamValue(std::move(d)), std::move(choices)};
}
}  // namespace scenario_detail

// module -> operation -> signature
inline const std::map<std::string, std::map<std::string, OperationSpec>>& operations() {
  using namespace scenario_detail;
  static const std::map<std::string, std::map<std::string, OperationSpec>> ops = {
      {"ksurface",
       {{"sine_gordon", {{{"rho", num(1.0)}}, {"report", "json"}, true}},
        {"pseudosphere", {{}, {"report", "obj", "json"}, true}}}},
      {"loopgauge",
       {{"holonomy", {{{"lambda_re", num()}, {"lambda_im", num(0.0)}}, {"report"}, true}},
        {"backlund", {{{"a", num()}, {"angle", num(0.0)}}, {"report", "obj", "obj_transform"}, true}}}},
      {"isothermic",
       {{"darboux",
         {{{"surface", text("cylinder", {"cylinder", "catenoid", "sphere"})},
           {"a", num()},
           {"y0_x", num(0.3)},
           {"y0_y", num(-0.8)},
           {"y0_z", num(0.5)},
           {"on_singular", text("fail", {"fail", "mask"})}},
          {"report", "obj", "obj_transform"},
          true}},
        {"christoffel",
         {{{"surface", text("catenoid", {"cylinder", "catenoid"})}}, {"report", "obj", "obj_transform"}, true}}}},
      {"discretei",
       {{"is_isothermic",
         {{{"seed_surface", text("plane", {"plane", "cylinder"})},
           {"n0", num(8)},
           {"n1", num(8)},
           {"p", num(1.0)},
           {"q", num(1.0)},
           {"perturb", num(0.0)}},
          {"report", "obj"},
          false}},
        {"darboux",
         {{{"seed_surface", text("plane", {"plane", "cylinder"})},
           {"n0", num(8)},
           {"n1", num(8)},
           {"p", num(1.0)},
           {"q", num(1.0)},
           {"ahat", num()},
           {"y0_x", num(0.5)},
           {"y0_y", num(0.5)},
           {"y0_z", num(1.0)},
           {"on_singular", text("fail", {"fail", "mask"})}},
          {"report", "obj", "obj_transform", "json"},
          false}},
        {"t_transform",
         {{{"seed_surface", text("plane", {"plane", "cylinder"})},
           {"n0", num(8)},
           {"n1", num(8)},
           {"p", num(1.0)},
           {"q", num(1.0)},
           {"s", num()}},
          {"report", "obj", "obj_transform"},
          false}}}},
  };
  return ops;
}

namespace scenario_detail {
inline double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ScenarioError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(key, "must be finite");
  return v;
}
inline std::array<double, 2> pair(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw ScenarioError(key, "expected an array of two numbers");
  return {number(j[0], key), number(j[1], key)};
}
inline std::string string_at(const json& j, const std::string& key) {
  if (!j.is_string()) throw ScenarioError(key, "expected a string");
  return j.get<std::string>();
}
}  // namespace scenario_detail

inline Scenario parse_scenario(const json& j) {
  using namespace scenario_detail;
  if (!j.is_object()) throw ScenarioError("<root>", "scenario must be a JSON object");
  static const std::set<std::string> known = {"name", "module", "operation", "parameters", "grid", "outputs", "tolerances", "description"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ScenarioError(k, "unknown key");
  for (const char* req : {"name", "module", "operation"})
    if (!j.contains(req)) throw ScenarioError(req, "missing");
  Scenario s;
  s.source = j;
  s.name = string_at(j["name"], "name");
  s.module = string_at(j["module"], "module");
  s.operation = string_at(j["operation"], "operation");
  const auto& ops = operations();
  auto mod = ops.find(s.module);
  if (mod == ops.end()) throw ScenarioError("module", "unknown module '" + s.module + "'");
  auto op = mod->second.find(s.operation);
  if (op == mod->second.end()) throw ScenarioError("operation", "unknown operation '" + s.operation + "' for module " + s.module);
  const OperationSpec& spec = op->second;

  const json params = j.value("parameters", json::object());
  if (!params.is_object()) throw ScenarioError("parameters", "expected an object");
  for (const auto& [k, v] : params.items()) {
    const std::string key = "parameters." + k;
    auto ps = spec.params.find(k);
    if (ps == spec.params.end()) throw ScenarioError(key, "not a parameter of " + s.module + "." + s.operation);
    if (ps->second.kind == ParamSpec::Number) {
      s.parameters[k] = number(v, key);
    } else {
      const std::string t = string_at(v, key);
      if (std::find(ps->second.choices.begin(), ps->second.choices.end(), t) == ps->second.choices.end())
        throw ScenarioError(key, "unsupported value '" + t + "'");
      s.parameters[k] = t;
    }
  }
  for (const auto& [k, ps] : spec.params) {
    if (s.parameters.count(k)) continue;
    if (!ps.fallback) throw ScenarioError("parameters." + k, "required parameter missing");
    s.parameters[k] = *ps.fallback;
  }

  if (j.contains("grid")) {
    if (!spec.takes_grid) throw ScenarioError("grid", "operation " + s.operation + " is sized by its parameters");
    const json& g = j["grid"];
    if (!g.is_object()) throw ScenarioError("grid", "expected an object");
    for (const auto& [k, v] : g.items())
      if (k != "extents" && k != "steps" && k != "origin") throw ScenarioError("grid." + k, "unknown key");
    for (const char* req : {"extents", "steps", "origin"})
      if (!g.contains(req)) throw ScenarioError(std::string("grid.") + req, "missing");
    const auto e = pair(g["extents"], "grid.extents");
    const auto st = pair(g["steps"], "grid.steps");
    const auto o = pair(g["origin"], "grid.origin");
    GridSpec gs{};
    for (int a = 0; a < 2; ++a) {
      if (e[a] < 2 || e[a] != std::floor(e[a])) throw ScenarioError("grid.extents", "need integers >= 2");
      if (!(st[a] > 0)) throw ScenarioError("grid.steps", "must be positive");
      gs.n[a] = static_cast<int>(e[a]);
      gs.step[a] = st[a];
      gs.origin[a] = o[a];
    }
    s.grid = gs;
  }

  const json outs = j.value("outputs", json::object());
  if (!outs.is_object()) throw ScenarioError("outputs", "expected an object");
  for (const auto& [k, v] : outs.items()) {
    if (!spec.outputs.count(k)) throw ScenarioError("outputs." + k, "not an output of " + s.module + "." + s.operation);
    const std::string p = string_at(v, "outputs." + k);
    if (p.empty() || fs::path(p).is_absolute() || p.find("..") != std::string::npos)
      throw ScenarioError("outputs." + k, "must be a relative path inside the output directory");
    s.outputs[k] = p;
  }

  const json tols = j.value("tolerances", json::object());
  if (!tols.is_object()) throw ScenarioError("tolerances", "expected an object");
  for (const auto& [k, v] : tols.items()) {
    if (!Tolerances::defaults().count(k)) throw ScenarioError("tolerances." + k, "unknown tolerance");
    s.tolerances[k] = number(v, "tolerances." + k);
  }
  return s;
}

inline Scenario load_scenario(const fs::path& path) {
  json j;
  try {
    j = read_json(path);
  } catch (const DataError& e) {
    throw ScenarioError("<file>", e.what());
  }
  return parse_scenario(j);
}

struct RunOptions {
  double tol_scale = 1.0;
  double grid_scale = 1.0;
  std::uint64_t seed = 1;
  fs::path out = ".";
};

namespace scenario_detail {

inline double p_num(const Scenario& s, const std::string& k) { return std::get<double>(s.parameters.at(k)); }
inline std::string p_str(const Scenario& s, const std::string& k) { return std::get<std::string>(s.parameters.at(k)); }

inline std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "scenario" : out;
}

inline Grid2 make_grid(const Scenario& s, const GridSpec& fallback, double scale) {
  const GridSpec g = s.grid.value_or(fallback);
  const double k = std::max(1, static_cast<int>(std::lround(scale)));
  // integer refinement keeps the covered domain fixed
  return Grid2(static_cast<int>((g.n[0] - 1) * k) + 1, static_cast<int>((g.n[1] - 1) * k) + 1, g.step[0] / k, g.step[1] / k,
               g.origin[0], g.origin[1]);
}

inline const GridSpec kPseudosphereGrid{{65, 65}, {1.0 / 32, 1.0 / 32}, {-2.1, -2.1}};
inline const GridSpec kSolitonGrid{{129, 129}, {1.0 / 32, 1.0 / 32}, {-2.0, -2.0}};
inline const GridSpec kUnitSquare{{65, 65}, {1.0 / 64, 1.0 / 64}, {0.0, 0.0}};
inline const GridSpec kCatenoidSquare{{65, 65}, {1.0 / 64, 1.0 / 64}, {0.2, 0.0}};

struct Artifacts {
  const Scenario& s;
  const fs::path& dir;
  Report& r;

  std::optional<fs::path> target(const std::string& key, const std::string& fallback) const {
    auto it = s.outputs.find(key);
    if (it != s.outputs.end()) return dir / it->second;
    if (fallback.empty()) return std::nullopt;
    return dir / fallback;
  }
  template <class Mesh>
  void obj(const std::string& key, const std::string& fallback, const Mesh& m) {
    auto p = target(key, fallback);
    if (!p) return;
    const ObjStats st = save_obj(*p, m);
    r.artifacts.push_back(fs::relative(*p, dir).generic_string());
    r.extra[key] = {{"vertices", st.vertices}, {"faces", st.faces}, {"masked_vertices", st.masked_vertices},
                    {"omitted_faces", st.omitted_faces}};
  }
  void json_file(const std::string& key, const std::string& fallback, const json& j) {
    auto p = target(key, fallback);
    if (!p) return;
    write_json(*p, j);
    r.artifacts.push_back(fs::relative(*p, dir).generic_string());
  }
};

inline void run_sine_gordon(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  const Grid2 g = make_grid(s, kSolitonGrid, o.grid_scale);
  const double rho = p_num(s, "rho");
  std::vector<double> ax(g.n[0]), ay(g.n[1]);
  for (int k = 0; k < g.n[0]; ++k) ax[k] = one_soliton(g.coord(0, k), g.coord(1, 0), rho);
  for (int k = 0; k < g.n[1]; ++k) ay[k] = one_soliton(g.coord(0, 0), g.coord(1, k), rho);
  const ScalarField w = solve_sine_gordon(ax, ay, rho, g);
  double e = 0.0;
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) e = std::max(e, std::abs(w(i, j) - one_soliton(g.coord(0, i), g.coord(1, j), rho)));
  out.r.add(make_entry("sine_gordon.max_error", "ksurface", e, tol.upper("sg.max_error")));
  out.json_file("json", "omega.json", grid_to_json(w));
}

inline void run_pseudosphere(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  const Grid2 g = make_grid(s, kPseudosphereGrid, o.grid_scale);
  const ScalarField w = sample<double>(g, [](double x, double y) { return one_soliton(x, y); });
  const KSurface ks = integrate_frame(w);
  const FundamentalForms ff = fundamental_forms(ks.f);
  out.r.add(make_entry("ksurface.gauss_curvature_deviation", "ksurface", curvature_deviation(ff, -1.0), tol.upper("ks.curvature")));
  out.r.add(make_entry("ksurface.cayley_hamilton_residual", "ksurface", cayley_hamilton_residual(ff), tol.upper("ks.cayley_hamilton")));
  out.r.add(make_entry("ksurface.tchebyshev_deviation", "ksurface", check_tchebyshev(ks.f, 1.0).max(), tol.upper("ks.tchebyshev")));
  out.r.add(make_entry("ksurface.lelieuvre_residual", "ksurface", lelieuvre_residual(ks.f, ks.normal, 1.0).max(), tol.upper("ks.lelieuvre")));
  out.obj("obj", "pseudosphere.obj", ks.f);
  out.json_file("json", "pseudosphere.json", grid_to_json(ks.f));
}

inline void run_holonomy(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  const Grid2 g = make_grid(s, kPseudosphereGrid, o.grid_scale);
  const KSurface ks = integrate_frame(sample<double>(g, [](double x, double y) { return one_soliton(x, y); }));
  const Complex lam(p_num(s, "lambda_re"), p_num(s, "lambda_im"));
  if (lam == Complex(0.0, 0.0)) throw ScenarioError("parameters.lambda_re", "lambda must be nonzero");
  const HolonomyReport h = holonomy_residual(split_connection(ks.normal), lam);
  out.r.add(make_entry("loop.holonomy_density", "loopgauge", h.density, tol.upper("loop.holonomy")));
  out.r.tables["holonomy"] = {{"max_defect", h.max_defect}, {"density", h.density}, {"worst_plaquette", h.worst_plaquette}};
}

inline void run_backlund(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  const double a = p_num(s, "a");
  if (!(a > 0.0)) throw ScenarioError("parameters.a", "must be positive");
  const Grid2 g = make_grid(s, kPseudosphereGrid, o.grid_scale);
  const KSurface ks = integrate_frame(sample<double>(g, [](double x, double y) { return one_soliton(x, y); }));
  const LoopConnection c = split_connection(ks.normal);
  const BacklundResult b = backlund(c, a, tangent_at_base(c, p_num(s, "angle")));
  double dmin = 1e300, dmax = -1e300, nmin = 1e300, nmax = -1e300;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const double d = (b.f_hat[v] - b.f[v]).norm(), nn = b.normal_hat[v].dot(c.normal()[v]);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
    nmin = std::min(nmin, nn);
    nmax = std::max(nmax, nn);
  }
  const double dist = 2.0 / (a + 1.0 / a), ndot = (1.0 / a - a) / (1.0 / a + a);
  out.r.add(make_entry("backlund.distance_error", "loopgauge", std::max(std::abs(dmax - dist), std::abs(dmin - dist)), tol.upper("bk.constant")));
  out.r.add(make_entry("backlund.normal_dot_error", "loopgauge", std::max(std::abs(nmax - ndot), std::abs(nmin - ndot)), tol.upper("bk.constant")));
  out.r.add(make_entry("backlund.gauss_curvature_deviation", "loopgauge", curvature_deviation(fundamental_forms(b.f_hat), -1.0),
                       tol.upper("bk.curvature")));
  out.r.tables["backlund"] = {{"a", a}, {"distance", {dmin, dmax}}, {"expected_distance", dist}, {"normal_dot", {nmin, nmax}},
                              {"expected_normal_dot", ndot}};
  out.obj("obj", "surface.obj", b.f);
  out.obj("obj_transform", "backlund.obj", b.f_hat);
}

inline CurvatureLinePatch smooth_surface(const std::string& name, const Grid2& g) {
  if (name == "cylinder") return make_cylinder(g);
  if (name == "catenoid") return make_catenoid(g);
  return make_sphere(g);
}

inline void run_iso_darboux(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  const std::string surf = p_str(s, "surface");
  const Grid2 g = make_grid(s, surf == "catenoid" ? kCatenoidSquare : kUnitSquare, o.grid_scale);
  const CurvatureLinePatch f = smooth_surface(surf, g);
  const double a = p_num(s, "a");
  if (a == 0.0) throw ScenarioError("parameters.a", "must be nonzero");
  const DarbouxResult d = darboux(f, build_eta(f), a, lift_rep(Vec3(p_num(s, "y0_x"), p_num(s, "y0_y"), p_num(s, "y0_z"))));
  if (p_str(s, "on_singular") == "fail")
    out.r.add(make_entry("iso_darboux.singular_vertices", "isothermic", static_cast<double>(d.singular.size()), 0.0));
  else
    out.r.extra["singular_vertices"] = d.singular.size();
  out.r.add(make_entry("iso_darboux.invariants", "isothermic", patch_invariants(d.patch).max(), tol.upper("iso.invariants")));
  out.r.add(make_entry("iso_darboux.tangency", "isothermic", d.tangency, tol.upper("iso.invariants")));
  out.obj("obj", "surface.obj", f);
  out.obj("obj_transform", "darboux.obj", d.patch);
}

inline void run_christoffel(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  const std::string surf = p_str(s, "surface");
  const Grid2 g = make_grid(s, surf == "catenoid" ? kCatenoidSquare : kUnitSquare, o.grid_scale);
  const CurvatureLinePatch f = smooth_surface(surf, g);
  const ChristoffelResult c = christoffel_dual(f);
  const VecField pts = f.points();
  const auto [n, h] = normal_and_mean_curvature(pts);
  VecField target(g);
  for (std::size_t v = 0; v < target.values.size(); ++v) target[v] = surf == "catenoid" ? n[v] : Vec3(pts[v] + n[v] / h[v]);
  const auto [scale, res] = fit_homothety(c.dual, target);
  out.r.add(make_entry("christoffel.dual_vs_expected", "isothermic", std::max(std::abs(std::abs(scale) - 1.0), res),
                       tol.upper("iso.christoffel")));
  const ChristoffelResult twice = christoffel_dual(CurvatureLinePatch::from_points(c.dual));
  const auto [si, ri] = fit_homothety(twice.dual, pts);
  out.r.add(make_entry("christoffel.involution", "isothermic", std::max(std::abs(si - 1.0), ri), tol.upper("iso.involution")));
  out.r.tables["christoffel"] = {{"homothety", scale}, {"fit_residual", res}};
  out.obj("obj", "surface.obj", pts);
  out.obj("obj_transform", "dual.obj", c.dual);
}

inline QuadMap discrete_seed(const Scenario& s, EdgeWeights& a) {
  const double n0 = p_num(s, "n0"), n1 = p_num(s, "n1");
  if (n0 < 2 || n1 < 2 || n0 != std::floor(n0) || n1 != std::floor(n1) || n0 * n1 > 1e6)
    throw ScenarioError("parameters.n0", "lattice extents must be integers >= 2");
  const double p = p_num(s, "p"), q = p_num(s, "q");
  if (!(p > 0.0) || !(q > 0.0)) throw ScenarioError("parameters.p", "spacings must be positive");
  if (p_str(s, "seed_surface") == "plane") return planar_grid(static_cast<int>(n0), static_cast<int>(n1), p, q, &a);
  return cylinder_grid(static_cast<int>(n0), static_cast<int>(n1), p, q, &a);
}

inline void run_disc_isothermic(const Scenario& s, const RunOptions& o, const Tolerances& tol, Artifacts& out) {
  EdgeWeights a;
  QuadMap f = discrete_seed(s, a);
  const double size = p_num(s, "perturb");
  if (size > 0.0) {
    f = perturbed(f, size, o.seed);
    const IsothermicReport rep = is_isothermic(f, a, 1e300);
    out.r.add(make_entry("discrete.perturbed.isothermic_defect", "discretei", rep.max_defect, tol.lower("disc.control_min"), Bound::Lower));
  } else {
    const IsothermicReport rep = is_isothermic(f, a, 1e300);
    out.r.add(make_entry("discrete.isothermic_defect", "discretei", rep.max_defect, tol.upper("disc.flat")));
  }
  out.obj("obj", "net.obj", f);
}

inline void run_disc_darboux(const Scenario& s, const RunOptions&, const Tolerances& tol, Artifacts& out) {
  EdgeWeights a;
  const QuadMap f = discrete_seed(s, a);
  const double ahat = p_num(s, "ahat");
  const DiscreteDarbouxResult d = darboux(f, a, ahat, lift_rep(Vec3(p_num(s, "y0_x"), p_num(s, "y0_y"), p_num(s, "y0_z"))));
  out.r.add(make_entry("discrete_darboux.cross_ratio_spread", "discretei", d.cross_ratio_spread, tol.upper("disc.spread")));
  out.r.add(make_entry("discrete_darboux.isothermic_defect", "discretei", is_isothermic(d.fhat, a, 1e300).max_defect,
                       tol.upper("disc.flat")));
  if (p_str(s, "on_singular") == "fail")
    out.r.add(make_entry("discrete_darboux.singular_vertices", "discretei", static_cast<double>(d.singular.size()), 0.0));
  else
    out.r.extra["singular_vertices"] = d.singular.size();
  // cross-ratios of the vertical quadrilaterals, per edge direction
  json table = json::object();
  for (int axis = 0; axis < 2; ++axis) {
    double lo = 1e300, hi = -1e300;
    for (std::size_t v = 0; v < f.size(); ++v) {
      const std::size_t w = f.neighbour(v, axis);
      if (w == static_cast<std::size_t>(-1)) continue;
      const double cr = cross_ratio(Point(d.fhat[v]), Point(f[w]), Point(f[v]), Point(d.fhat[w])).value;
      lo = std::min(lo, cr);
      hi = std::max(hi, cr);
    }
    table[axis == 0 ? "axis0" : "axis1"] = {{"min", lo}, {"max", hi}, {"expected", a.per_axis[axis][0] / ahat}};
  }
  out.r.tables["vertical_cross_ratios"] = table;
  out.obj("obj", "net.obj", f);
  out.obj("obj_transform", "darboux.obj", d.fhat);
  out.json_file("json", "", quadmap_to_json(d.fhat));
}

inline void run_disc_t_transform(const Scenario& s, const RunOptions&, const Tolerances& tol, Artifacts& out) {
  EdgeWeights a;
  const QuadMap f = discrete_seed(s, a);
  const DiscreteTTransform t = t_transform(f, a, p_num(s, "s"));
  out.r.add(make_entry("discrete_t_transform.isothermic_defect", "discretei", is_isothermic(t.map, t.weights, 1e300).max_defect,
                       tol.upper("disc.triple")));
  out.obj("obj", "net.obj", f);
  out.obj("obj_transform", "t_transform.obj", t.map);
}

}  // namespace scenario_detail

// Execute a scenario, writing artifacts under o.out. The report is also
// written there (outputs.report, default <slug>.report.json).
inline Report run_scenario(const Scenario& s, const RunOptions& o) {
  using namespace scenario_detail;
  Tolerances tol;
  tol.set_scale(o.tol_scale);
  for (const auto& [k, v] : s.tolerances) tol.set(k, v);
  Report r;
  r.scenario = s.source;
  r.scenario["seed"] = o.seed;
  r.scenario["grid_scale"] = o.grid_scale;
  r.scenario["tol_scale"] = o.tol_scale;
  Artifacts out{s, o.out, r};
  using Fn = void (*)(const Scenario&, const RunOptions&, const Tolerances&, Artifacts&);
  static const std::map<std::string, Fn> table = {
      {"ksurface.sine_gordon", run_sine_gordon},      {"ksurface.pseudosphere", run_pseudosphere},
      {"loopgauge.holonomy", run_holonomy},           {"loopgauge.backlund", run_backlund},
      {"isothermic.darboux", run_iso_darboux},        {"isothermic.christoffel", run_christoffel},
      {"discretei.is_isothermic", run_disc_isothermic}, {"discretei.darboux", run_disc_darboux},
      {"discretei.t_transform", run_disc_t_transform},
  };
  const Fn fn = table.at(s.module + "." + s.operation);
  try {
    fn(s, o, tol, out);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    // library failures (singular data, non-flat input, ...) become a failing entry
    r.add(make_entry(s.module + ".error", s.module, 1.0, 0.0));
    r.extra["error"] = e.what();
  }
  const fs::path rp = out.target("report", slug(s.name) + ".report.json").value();
  write_json(rp, to_json(r));
  return r;
}

}  // namespace gaugesurf
