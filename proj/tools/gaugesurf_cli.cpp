// gaugesurf command-line driver: run scenarios, the acceptance suite and
// mesh exports.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "gaugesurf/scenario.hpp"

#ifndef GAUGESURF_SCENARIO_DIR
#define GAUGESURF_SCENARIO_DIR "scenarios"
#endif

using namespace gaugesurf;

namespace {

struct Global {
  double tol_scale = 1.0;
  double grid_scale = 1.0;
  std::uint64_t seed = 1;
  std::string out = "out";
};

RunOptions run_options(const Global& g) { return {g.tol_scale, g.grid_scale, g.seed, g.out}; }

void print_entries(const Report& r) {
  for (const Entry& e : r.entries)
    std::printf("  %-4s %-58s %-11s %.3e %s %.3e\n", e.pass ? "ok" : "FAIL", e.name.c_str(), e.module.c_str(), e.value,
                e.bound == Bound::Upper ? "<=" : ">=", e.threshold);
}

int cmd_run(const Global& g, const std::string& path) {
  const Scenario s = load_scenario(path);
  const Report r = run_scenario(s, run_options(g));
  std::printf("scenario %s (%s.%s)\n", s.name.c_str(), s.module.c_str(), s.operation.c_str());
  print_entries(r);
  if (r.extra.contains("error")) std::fprintf(stderr, "error: %s\n", r.extra["error"].get<std::string>().c_str());
  std::printf("%s\n", r.overall_pass() ? "PASS" : "FAIL");
  return r.overall_pass() ? 0 : 1;
}

int cmd_verify_all(const Global& g, bool flip) {
  VerifyOptions o;
  o.tol.set_scale(g.tol_scale);
  o.grid_scale = g.grid_scale;
  o.seed = g.seed;
  o.lelieuvre_flip = flip;
  const Report r = verify_all(o);
  const fs::path path = fs::path(g.out) / "verify_all.json";
  write_json(path, to_json(r));
  print_entries(r);
  for (auto& [k, v] : r.extra.items()) std::fprintf(stderr, "%s: %s\n", k.c_str(), v.dump().c_str());
  std::printf("%zu entries, %zu failing; report written to %s\n", r.entries.size(), r.failing().size(), path.string().c_str());
  std::printf("%s\n", r.overall_pass() ? "PASS" : "FAIL");
  return r.overall_pass() ? 0 : 1;
}

const std::vector<std::string> kSurfaces = {"pseudosphere", "cylinder", "catenoid", "sphere", "torus", "plane-net", "cylinder-net"};

int cmd_export(const Global& g, const std::string& surface, const std::string& format, int n) {
  if (n < 2) throw ParameterError("export: --size must be at least 2");
  const fs::path path = fs::path(g.out) / (surface + "." + format);
  const bool obj = format == "obj";
  ObjStats st;
  auto emit = [&](const auto& mesh, const json& j) {
    if (obj)
      st = save_obj(path, mesh);
    else
      write_json(path, j);
  };
  if (surface == "plane-net" || surface == "cylinder-net") {
    const QuadMap m = surface == "plane-net" ? planar_grid(n, n, 1.0 / n, 1.0 / n) : cylinder_grid(n, n, 2 * M_PI / n, 2 * M_PI / n);
    emit(m, quadmap_to_json(m));
  } else if (surface == "pseudosphere") {
    const double h = 2.0 / (n - 1);
    const Grid2 grid(n, n, h, h, -2.1, -2.1);
    const VecField f = integrate_frame(sample<double>(grid, [](double x, double y) { return one_soliton(x, y); })).f;
    emit(f, grid_to_json(f));
  } else {
    CurvatureLinePatch p;
    if (surface == "torus") {
      // one full turn of the meridian in hyperbolic arc length
      const double big = 2.0, small = 1.0, period = 2 * M_PI * small / std::sqrt(big * big - small * small);
      p = make_revolution(Grid2(n, n, period / (n - 1), 2 * M_PI / (n - 1)), torus_profile(big, small));
    } else {
      const Grid2 grid(n, n, 1.0 / (n - 1), 1.0 / (n - 1), surface == "catenoid" ? 0.2 : 0.0, 0.0);
      p = surface == "cylinder" ? make_cylinder(grid) : surface == "catenoid" ? make_catenoid(grid) : make_sphere(grid);
    }
    emit(p, grid_to_json(p.points()));
  }
  if (obj)
    std::printf("wrote %s: %zu vertices, %zu faces, %zu masked vertices, %zu omitted faces\n", path.string().c_str(), st.vertices,
                st.faces, st.masked_vertices, st.omitted_faces);
  else
    std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_gallery(const Global& g, const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("gallery: no scenarios in '" + dir + "'");
  json index = json::array();
  bool all = true;
  for (const auto& f : files) {
    RunOptions o = run_options(g);
    o.out = fs::path(g.out) / f.stem();
    bool pass = false;
    std::string error;
    try {
      pass = run_scenario(load_scenario(f), o).overall_pass();
    } catch (const std::exception& e) {
      error = e.what();
    }
    all = all && pass;
    std::printf("%-4s %s%s%s\n", pass ? "ok" : "FAIL", f.filename().string().c_str(), error.empty() ? "" : ": ", error.c_str());
    json item = {{"scenario", f.filename().string()}, {"output", f.stem().string()}, {"pass", pass}};
    if (!error.empty()) item["error"] = error;
    index.push_back(item);
  }
  write_json(fs::path(g.out) / "gallery.json", json{{"schema", 1}, {"runs", index}, {"overall_pass", all}});
  std::printf("%s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauge-theoretic transformations of K-surfaces and isothermic surfaces"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--tol-scale", g.tol_scale, "Multiply every tolerance (divide lower bounds)")->check(CLI::PositiveNumber);
  app.add_option("--grid-scale", g.grid_scale, "Refine every grid by this factor")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomised controls");
  app.add_option("--out", g.out, "Output directory");

  auto* run = app.add_subcommand("run", "Execute one scenario file");
  std::string scenario;
  run->add_option("scenario", scenario, "Scenario JSON")->required();

  auto* va = app.add_subcommand("verify-all", "Run the acceptance suite and write verify_all.json");
  bool flip = false;
  va->add_flag("--inject-lelieuvre-flip", flip, "Mutation control: flip one sign in the Lelieuvre check")->group("");

  auto* ex = app.add_subcommand("export", "Write a sample surface as OBJ or JSON grid");
  std::string surface, format = "obj";
  int size = 64;
  ex->add_option("surface", surface, "Surface name")->required()->check(CLI::IsMember(kSurfaces));
  ex->add_option("--format", format, "obj or json")->check(CLI::IsMember({"obj", "json"}));
  ex->add_option("--size", size, "Vertices per side");

  auto* gal = app.add_subcommand("gallery", "Run every scenario in a directory");
  std::string dir = GAUGESURF_SCENARIO_DIR;
  gal->add_option("dir", dir, "Scenario directory");

  // global flags are accepted after the subcommand too
  for (auto* sub : {run, va, ex, gal}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(g, scenario);
    if (*va) return cmd_verify_all(g, flip);
    if (*ex) return cmd_export(g, surface, format, size);
    return cmd_gallery(g, dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
