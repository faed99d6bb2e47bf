#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lamekit/cli/app.hpp"
#include "lamekit/cli/spec_file.hpp"
#include "lamekit/errors.hpp"

using namespace lamekit;
using namespace lamekit::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("lamekit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string parse_error_text(std::string_view doc) {
  try {
    parse_spec(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("spec documents parse") {
  const PotentialSpec c = parse_spec(R"({"kind":"constant","value":1.0})");
  CHECK(c.kind() == "constant");
  CHECK(std::get<ConstantKind>(c.body).value == 1.0);

  const PotentialSpec e = parse_spec(R"({"kind":"lame_even","n":1,"c0":0.5,"g2":2,"g3":0.1})");
  const auto& le = std::get<LameEvenKind>(e.body);
  CHECK(le.n == 1);
  CHECK(le.c0 == 0.5);
  CHECK(le.g2 == 2.0);
  CHECK(le.g3 == 0.1);
  CHECK_FALSE(e.domain.has_value());

  const PotentialSpec m = parse_spec(R"({"kind":"mexican_hat","nu":1,"delta":1,"domain":[-2,2]})");
  CHECK(std::get<MexicanHatKind>(m.body).nu == 1.0);
  CHECK(m.domain->lo == -2.0);
}

TEST_CASE("every kind round-trips") {
  const char* docs[] = {
      R"({"kind":"constant","value":-0.1})",
      R"({"kind":"lame_even","n":3,"c0":0.1,"g2":0.30000000000000004,"g3":-1e-17,"domain":[0.3,1.3]})",
      R"({"kind":"lame_odd","n":0,"c0":0,"g2":1,"g3":2})",
      R"({"kind":"lame_general","C":[0.5,-2],"E":[],"A":[0.5,1],"g2":2,"g3":0.1})",
      R"({"kind":"mexican_hat","nu":1.5,"delta":0.25})",
      R"({"kind":"odd_trivial","n":2,"w0":0.125})",
      R"({"kind":"hierarchy","base":{"kind":"hierarchy","base":{"kind":"constant","value":1},"c_hat":0.5,"alpha":[1,0,0],"base_point":0.5,"domain":[0,1]},"c_hat":1,"alpha":[1,0.1,0],"base_point":0.25,"domain":[0,1],"samples":65})",
  };
  for (const char* d : docs) {
    CAPTURE(d);
    const PotentialSpec s = parse_spec(d);
    const std::string text = serialize_spec(s);
    const PotentialSpec back = parse_spec(text);
    CHECK(back == s);
    CHECK(serialize_spec(back) == text);
  }
}

TEST_CASE("diagnostics list every violation") {
  const std::string msg = parse_error_text(R"({"kind":"lame_even","n":"two","c0":"x","extra":1})");
  CHECK(msg.find("n: must be an integer") != std::string::npos);
  CHECK(msg.find("c0: must be a number") != std::string::npos);
  CHECK(msg.find("g2: missing") != std::string::npos);
  CHECK(msg.find("g3: missing") != std::string::npos);
  CHECK(msg.find("extra: unknown field") != std::string::npos);
  CHECK(msg.find("5 problems") != std::string::npos);

  CHECK(parse_error_text(R"({"kind":"lame_oddd","n":1})").find("kind: unknown kind 'lame_oddd'") != std::string::npos);
  CHECK(parse_error_text(R"({"n":1})").find("kind: missing") != std::string::npos);
  CHECK(parse_error_text("{\"kind\":\"constant\",\n\"value\": 1,,\n}").find("line 2") != std::string::npos);

  const std::string nested = parse_error_text(
      R"({"kind":"hierarchy","base":{"kind":"lame_even","n":0,"c0":1,"g2":1,"g3":1},"c_hat":1,"alpha":[1,0],"base_point":5,"domain":[0,1]})");
  CHECK(nested.find("base.n: must lie in [1, 1000]") != std::string::npos);
  CHECK(nested.find("alpha: must have exactly 3 entries") != std::string::npos);
  CHECK(nested.find("base_point: must lie inside domain") != std::string::npos);

  CHECK(parse_error_text(R"({"kind":"hierarchy","base":{"kind":"constant","value":1},"c_hat":1,"alpha":[1,0,0],"base_point":0})")
            .find("domain: missing") != std::string::npos);
  CHECK(parse_error_text(R"({"kind":"constant","value":1,"domain":[1,0]})").find("x0 < x1") != std::string::npos);
  CHECK(parse_error_text(R"({"kind":"mexican_hat","nu":-1,"delta":1})").find("nu: must be positive") != std::string::npos);
}

TEST_CASE("lame even through the command line") {
  const Run r = run({"lame", "even", "--n", "2", "--c0", "1", "--g2", "1", "--g3", "1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["c1"] == -6.0);
  CHECK(j["a"].size() == 3);
  CHECK(j["c_w"].get<double>() == doctest::Approx(j["c_w_closed_form"].get<double>()));
  CHECK(j["case"] == "elliptic");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"lame", "even", "--c0", "1", "--g2", "1", "--g3", "1"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).out.find(std::string(kVersion)) != std::string::npos);

  const Run pole = run({"wp", "--g2", "2", "--g3", "0.1", "--x", "0"});
  CHECK(pole.code == 1);
  CHECK(pole.err.find("pole") != std::string::npos);

  const std::string bad = write("bad.json", R"({"kind":"lame_even","n":1})");
  CHECK(run({"solve", "--potential", bad, "--x0", "0.3", "--x1", "1"}).code == 2);
  CHECK(run({"solve", "--potential", (scratch() / "missing.json").string(), "--x0", "0.3", "--x1", "1"}).code == 2);

  // z = wp + c0 with c0 = -1.5 vanishes inside [0.4, 1.2]
  const std::string vanish = write("vanish.json", R"({"kind":"lame_even","n":1,"c0":-1.5,"g2":2,"g3":0.1})");
  const Run v = run({"solve", "--potential", vanish, "--x0", "0.4", "--x1", "1.2"});
  CHECK(v.code == 1);

  CHECK(run({"--tol", "rtol=abc", "lame", "odd", "--n", "0", "--c0", "0", "--g2", "0", "--g3", "0"}).code == 2);
  CHECK(run({"lame", "even", "--n", "0", "--c0", "0", "--g2", "0", "--g3", "0"}).code == 2);
  CHECK(run({"eigen", "--a", "0", "--b", "1"}).code == 2);
}

TEST_CASE("wp output") {
  const Run one = run({"wp", "--g2", "4", "--g3", "0", "--x", "0.3"});
  REQUIRE(one.code == 0);
  CHECK(json::parse(one.out)["wp"].get<double>() == doctest::Approx(11.129120833534212).epsilon(1e-13));

  const Run csv = run({"wp", "--g2", "4", "--g3", "0", "--x0", "0.2", "--x1", "0.9", "--samples", "8"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("x,wp,wp_prime\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 9);
  CHECK(csv.out.find('\r') == std::string::npos);
  CHECK(csv.out.find("0.20000000000000001,") != std::string::npos);  // 17 significant digits
}

TEST_CASE("solve emits the documented columns") {
  const std::string spec = write("lame1.json", R"({"kind":"lame_even","n":1,"c0":0.5,"g2":2,"g3":0.1,"domain":[0.3,1.3]})");
  const Run r = run({"solve", "--potential", spec, "--samples", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("x,z,w,y1,y2,Phi\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
}

TEST_CASE("eigen and density") {
  const std::string hat = write("mexhat.json", R"({"kind":"mexican_hat","nu":1,"delta":1})");
  const Run r = run({"eigen", "--potential", hat, "--a", "-2", "--b", "2", "--lmin", "-9", "--lmax", "0", "--method", "shoot"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["eigenvalues"].size() == 4);
  CHECK(j["residuals"].size() == 4);
  CHECK(j["method_flags"][0] == "shoot");

  const Run d = run({"eigen", "density", "--potential", hat, "--lambda", "-0.043254439409039336", "--a", "-2", "--b", "2",
                     "--samples", "11"});
  REQUIRE(d.code == 0);
  CHECK(d.out.rfind("x,density\n", 0) == 0);
  CHECK(run({"eigen", "density", "--potential", hat, "--lambda", "-1", "--a", "-2", "--b", "2"}).code == 1);
  CHECK(run({"eigen", "--potential", hat, "--a", "-2", "--b", "2", "--lmin", "-9", "--lmax", "0", "--method", "x"}).code == 2);
}

TEST_CASE("hierarchy chains through spec files") {
  const std::string base = write("base.json", R"({"kind":"lame_even","n":1,"c0":0.5,"g2":2,"g3":0.1})");
  const std::string step1 = (scratch() / "step1.json").string();
  const std::string report1 = (scratch() / "step1.report.json").string();
  const Run r1 = run({"--out", step1, "hierarchy", "--base", base, "--chat", "1", "--alpha", "1,0.1,0", "--x0", "0.2",
                      "--x1", "1.4", "--report", report1});
  REQUIRE(r1.code == 0);
  const json rep = json::parse(slurp(report1));
  CHECK(rep["ok"] == true);
  CHECK(rep["max_relative_lie_residual"].get<double>() < 1e-6);
  CHECK(rep["c_w"].get<double>() == doctest::Approx(1.0 + (-0.1) * (1.0 + 0.01)).epsilon(1e-7));
  CHECK(parse_spec(slurp(step1)).kind() == "hierarchy");

  const Run r2 = run({"hierarchy", "--base", step1, "--chat", "-0.2", "--alpha", "1,0,0.05", "--samples", "33"});
  REQUIRE(r2.code == 0);
  CHECK(r2.err.find("\"ok\": true") != std::string::npos);
  CHECK(run({"hierarchy", "--base", base, "--chat", "1", "--alpha", "1,0.1"}).code == 2);
}

TEST_CASE("outputs are deterministic and come with a manifest") {
  const std::string spec = write("lame1d.json", R"({"kind":"lame_even","n":1,"c0":0.5,"g2":2,"g3":0.1,"domain":[0.3,1.3]})");
  const std::string a = (scratch() / "a.csv").string();
  const std::string b = (scratch() / "b.csv").string();
  REQUIRE(run({"--out", a, "solve", "--potential", spec, "--samples", "17"}).code == 0);
  REQUIRE(run({"--out", b, "solve", "--potential", spec, "--samples", "17"}).code == 0);
  CHECK(slurp(a) == slurp(b));

  const json m = json::parse(slurp(scratch() / "a.manifest.json"));
  CHECK(m["command"] == "solve");
  CHECK(m["version"] == std::string(kVersion));
  CHECK(m["parameters"]["samples"] == 17);
  CHECK(m["inputs"]["potential"]["kind"] == "lame_even");
  CHECK(m.contains("wall_clock_seconds"));
  CHECK(m["tolerances"]["rtol"] == 1e-10);

  // the recorded argv regenerates the file byte for byte
  std::vector<std::string> argv = m["argv"].get<std::vector<std::string>>();
  const std::string c = (scratch() / "c.csv").string();
  for (std::size_t i = 0; i + 1 < argv.size(); ++i)
    if (argv[i] == "--out") argv[i + 1] = c;
  REQUIRE(run(argv).code == 0);
  CHECK(slurp(c) == slurp(a));
}

TEST_CASE("the installed binary honors environment overrides") {
  const std::string bin = LAMEKIT_CLI_PATH;
  const std::string out = (scratch() / "env.json").string();
  const std::string base = bin + " --out " + out + " lame odd --n 1 --c0 0.1 --g2 1 --g3 0.5";
  REQUIRE(shell("LAME_KIT_TOL='rtol=1e-7' LAME_KIT_SIMD=scalar " + base) == 0);
  const json m = json::parse(slurp(scratch() / "env.manifest.json"));
  CHECK(m["tolerances"]["rtol"] == 1e-7);
  CHECK(m["simd_backend"] == "scalar");
  CHECK(shell("LAME_KIT_TOL='bogus=1' " + base + " 2>/dev/null") == 2);
  CHECK(shell(bin + " wp --g2 2 --g3 0.1 --x 0 2>/dev/null") == 1);
  CHECK(shell(bin + " nothing-here 2>/dev/null >/dev/null") == 2);
}
