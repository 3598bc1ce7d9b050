#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gaugesurf/scenario.hpp"

using namespace gaugesurf;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("gaugesurf_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + GAUGESURF_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string scenario(const std::string& name) { return std::string(GAUGESURF_SCENARIO_DIR) + "/" + name; }

std::vector<std::string> lines_starting(const std::string& text, char c) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);)
    if (!l.empty() && l[0] == c) out.push_back(l);
  return out;
}

json minimal() { return {{"name", "t"}, {"module", "discretei"}, {"operation", "darboux"}, {"parameters", {{"ahat", 10.0}}}}; }

std::string error_of(const json& j) {
  try {
    parse_scenario(j);
  } catch (const ScenarioError& e) {
    return e.key;
  }
  return "";
}

}  // namespace

TEST(Obj, TwoByTwoGrid) {
  const Grid2 g(2, 2, 1.0, 1.0);
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  std::ostringstream s;
  const ObjStats st = write_obj(s, g, pts);
  EXPECT_EQ(lines_starting(s.str(), 'v').size(), 4u);
  EXPECT_EQ(lines_starting(s.str(), 'f'), std::vector<std::string>{"f 1 2 4 3"});
  EXPECT_EQ(st.faces, 1u);
}

TEST(Obj, SixtyFourSquared) {
  const Grid2 g(64, 64, 0.1, 0.1);
  std::ostringstream s;
  const ObjStats st = write_obj(s, sample<Vec3>(g, [](double x, double y) { return Vec3(x, y, x * y); }));
  EXPECT_EQ(st.vertices, 4096u);
  EXPECT_EQ(st.faces, 3969u);
  EXPECT_EQ(lines_starting(s.str(), 'f').size(), 3969u);
}

TEST(Obj, MaskedVerticesDropTheirFaces) {
  const Grid2 g(3, 3, 1.0, 1.0);
  std::vector<Vec3> pts(9);
  for (int v = 0; v < 9; ++v) pts[v] = Vec3(v % 3, v / 3, 0);
  std::vector<bool> mask(9, true);
  mask[0] = false;  // a corner touches one face
  std::ostringstream s;
  ObjStats st = write_obj(s, g, pts, &mask);
  EXPECT_EQ(st.vertices, 8u);
  EXPECT_EQ(st.masked_vertices, 1u);
  EXPECT_EQ(st.faces, 3u);
  EXPECT_EQ(st.omitted_faces, 1u);
  // renumbered: old vertex 1 is now 1
  EXPECT_EQ(lines_starting(s.str(), 'f').front(), "f 1 2 5 4");
  mask.assign(9, true);
  pts[4] = Vec3(NAN, 0, 0);  // the centre touches all four
  std::ostringstream s2;
  st = write_obj(s2, g, pts, &mask);
  EXPECT_EQ(st.faces, 0u);
  EXPECT_EQ(st.omitted_faces, 4u);
}

TEST(GridJson, RoundTripsRealComplexAndVector) {
  const Grid2 g(3, 2, 0.5, 0.25, -1.0, 2.0);
  const ScalarField a = sample<double>(g, [](double x, double y) { return x * y + 0.1; });
  const auto b = sample<Complex>(g, [](double x, double y) { return Complex(x, -y); });
  const VecField c = sample<Vec3>(g, [](double x, double y) { return Vec3(x, y, 1.0 / 3.0); });
  const json ja = grid_to_json(a);
  EXPECT_EQ(ja["extents"], json::array({3, 2}));
  EXPECT_EQ(ja["values"].size(), 6u);
  EXPECT_EQ(ja["values"][1], a.values[1]);  // row-major, i fastest
  EXPECT_EQ(grid_from_json<double>(json::parse(ja.dump())).values, a.values);
  const json jb = grid_to_json(b);
  EXPECT_EQ(jb["values"][5], json::array({b.values[5].real(), b.values[5].imag()}));
  EXPECT_EQ(grid_from_json<Complex>(json::parse(jb.dump())).values, b.values);
  const VecField c2 = grid_from_json<Vec3>(json::parse(grid_to_json(c).dump()));
  for (std::size_t v = 0; v < 6; ++v) EXPECT_EQ(c2[v], c[v]);
  EXPECT_EQ(c2.grid.origin[1], 2.0);
}

TEST(GridJson, MalformedInputNamesTheProblem) {
  json j = grid_to_json(ScalarField(Grid2(2, 2, 1.0, 1.0), 0.0));
  json missing = j;
  missing.erase("steps");
  try {
    grid_from_json<double>(missing);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("steps"), std::string::npos);
  }
  json short_values = j;
  short_values["values"].erase(0);
  EXPECT_THROW(grid_from_json<double>(short_values), DataError);
  json bad_step = j;
  bad_step["steps"][0] = -1.0;
  EXPECT_THROW(grid_from_json<double>(bad_step), DataError);
}

TEST(Report, SchemaAndPassSemantics) {
  Report r;
  r.add(make_entry("a", "m", 0.5, 1.0));
  r.add(make_entry("b", "m", 2.0, 1.0, Bound::Lower));
  EXPECT_TRUE(r.overall_pass());
  r.add(make_entry("c", "m", NAN, 1.0));
  EXPECT_FALSE(r.overall_pass());
  const json j = to_json(r);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["entries"][2]["value"], "nan");
  EXPECT_EQ(j["entries"][0]["pass"], true);
  for (const auto& e : j["entries"])
    for (const char* k : {"name", "value", "threshold", "pass"}) EXPECT_TRUE(e.contains(k));
}

TEST(Tolerances, ScaleAndOverrides) {
  Tolerances t;
  t.set_scale(10.0);
  EXPECT_DOUBLE_EQ(t.upper("disc.flat"), 1e-8);
  EXPECT_DOUBLE_EQ(t.lower("disc.control_min"), 1e-6);
  t.set("disc.flat", 1.0);
  EXPECT_DOUBLE_EQ(t.get("disc.flat"), 1.0);
  EXPECT_THROW(t.set("disc.nope", 1.0), std::out_of_range);
  EXPECT_THROW(t.set_scale(0.0), std::invalid_argument);
}

TEST(ScenarioParse, ErrorsNameTheKey) {
  EXPECT_EQ(error_of(minimal()), "");
  json j = minimal();
  j["colour"] = "red";
  EXPECT_EQ(error_of(j), "colour");
  j = minimal();
  j["parameters"]["bogus"] = 1;
  EXPECT_EQ(error_of(j), "parameters.bogus");
  j = minimal();
  j["parameters"]["ahat"] = "ten";
  EXPECT_EQ(error_of(j), "parameters.ahat");
  j = minimal();
  j["parameters"].erase("ahat");
  EXPECT_EQ(error_of(j), "parameters.ahat");
  j = minimal();
  j["module"] = "nope";
  EXPECT_EQ(error_of(j), "module");
  j = minimal();
  j["outputs"] = {{"obj", "../escape.obj"}};
  EXPECT_EQ(error_of(j), "outputs.obj");
  j = minimal();
  j["tolerances"] = {{"disc.flatt", 1.0}};
  EXPECT_EQ(error_of(j), "tolerances.disc.flatt");
  j = minimal();
  j["grid"] = {{"extents", {4, 4}}, {"steps", {1, 1}}, {"origin", {0, 0}}};
  EXPECT_EQ(error_of(j), "grid");
  j = {{"name", "p"}, {"module", "ksurface"}, {"operation", "pseudosphere"},
       {"grid", {{"extents", {4, 4}}, {"steps", {1, 1}}}}};
  EXPECT_EQ(error_of(j), "grid.origin");
}

TEST(ScenarioParse, EveryShippedScenarioIsValid) {
  int count = 0;
  for (const auto& e : fs::directory_iterator(GAUGESURF_SCENARIO_DIR)) {
    if (e.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_scenario(e.path())) << e.path();
    ++count;
  }
  EXPECT_GE(count, 6);
}

TEST(Cli, BacklundScenario) {
  const fs::path d = fresh_dir("backlund");
  const CliRun r = cli("run " + scenario("backlund_pseudosphere.json") + " --out " + d.string(), d);
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const json rep = read_json(d / "report.json");
  EXPECT_EQ(rep["schema"], 1);
  EXPECT_TRUE(rep["overall_pass"].get<bool>());
  EXPECT_NEAR(rep["tables"]["backlund"]["distance"][0].get<double>(), 12.0 / 13.0, 1e-9);
  EXPECT_NEAR(rep["tables"]["backlund"]["distance"][1].get<double>(), 12.0 / 13.0, 1e-9);
  EXPECT_TRUE(fs::exists(d / "pseudosphere.obj"));
  EXPECT_TRUE(fs::exists(d / "backlund.obj"));
}

TEST(Cli, DiscreteDarbouxCrossRatioTable) {
  const fs::path d = fresh_dir("ddarboux");
  const CliRun r = cli("run " + scenario("discrete_darboux_plane.json") + " --out " + d.string(), d);
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const json t = read_json(d / "report.json")["tables"]["vertical_cross_ratios"]["axis0"];
  EXPECT_DOUBLE_EQ(t["expected"].get<double>(), 0.1);
  EXPECT_NEAR(t["min"].get<double>(), 0.1, 1e-9);
  EXPECT_NEAR(t["max"].get<double>(), 0.1, 1e-9);
  const json grid = read_json(d / "darboux.json");
  EXPECT_EQ(grid["values"].size(), 64u);
}

TEST(Cli, MalformedScenarioFailsWithTheKey) {
  const fs::path d = fresh_dir("malformed");
  json j = minimal();
  j["parameters"]["ahatt"] = 3;
  write_json(d / "bad.json", j);
  const CliRun r = cli("run " + (d / "bad.json").string() + " --out " + d.string(), d);
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("parameters.ahatt"), std::string::npos) << r.err;
  write_text(d / "broken.json", "{\"name\": ");
  EXPECT_NE(cli("run " + (d / "broken.json").string(), d).code, 0);
}

TEST(Cli, FailingScenarioExitsNonzero) {
  const fs::path d = fresh_dir("failing");
  json j = minimal();
  j["tolerances"] = {{"disc.spread", 0.0}};
  j["parameters"]["p"] = 0.37;
  write_json(d / "strict.json", j);
  const CliRun r = cli("run " + (d / "strict.json").string() + " --out " + d.string(), d);
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_FALSE(read_json(d / "t.report.json")["overall_pass"].get<bool>());
}

TEST(Cli, RunIsDeterministic) {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  for (const char* name : {"darboux_cylinder.json", "discrete_perturbed_control.json"}) {
    ASSERT_EQ(cli(std::string("--seed 9 run ") + scenario(name) + " --out " + (a / "o").string(), a).code, 0);
    ASSERT_EQ(cli(std::string("--seed 9 run ") + scenario(name) + " --out " + (b / "o").string(), b).code, 0);
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a / "o")) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / "o" / e.path().filename())) << e.path();
  }
  EXPECT_GE(files, 4u);
}

TEST(Cli, ExportPseudosphereObj) {
  const fs::path d = fresh_dir("export");
  ASSERT_EQ(cli("export pseudosphere --size 64 --out " + d.string(), d).code, 0);
  const std::string obj = slurp(d / "pseudosphere.obj");
  EXPECT_EQ(lines_starting(obj, 'v').size(), 4096u);
  EXPECT_EQ(lines_starting(obj, 'f').size(), 3969u);
  ASSERT_EQ(cli("export catenoid --format json --size 5 --out " + d.string(), d).code, 0);
  EXPECT_EQ(read_json(d / "catenoid.json")["values"].size(), 25u);
  EXPECT_NE(cli("export klein-bottle --out " + d.string(), d).code, 0);
}
