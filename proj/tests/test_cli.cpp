#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("lgl_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::string& env = "") {
  const fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
  const std::string cmd = env + " '" + std::string(LGL_CLI_PATH) + "' " + args + " >'" + o.string() + "' 2>'" +
                          e.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

double value_after(const std::string& text, const std::string& key) {
  const auto at = text.find(key);
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size()));
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("catalog --res 8").code == 2);
  CHECK(run("solve --weight nope").code == 2);
  CHECK(run("solve -c /nonexistent/run.cfg").code == 2);
  CHECK(run("solve --weight heavy_disk --alpha 1").code == 2);
  CHECK(run("verify --experiment bogus --out '" + (scratch() / "v").string() + "'").code == 2);
  const Run f = run("figure");
  CHECK(f.code == 2);
  CHECK(f.out.find("heavy_diamond_a") != std::string::npos);
  CHECK(run("figure fig99").code == 2);
  const fs::path bad = scratch() / "bad.cfg";
  std::ofstream(bad) << "res = 256\nbogus = 1\n";
  const Run b = run("solve -c '" + bad.string() + "'");
  CHECK(b.code == 2);
  CHECK(b.err.find("line 2") != std::string::npos);
}

TEST_CASE("catalog and figure list") {
  const Run c = run("catalog");
  CHECK(c.code == 0);
  for (const char* name : {"constant", "heavy_diamond", "heavy_disk", "light_diamond_tight", "three_heavy_diamonds",
                           "lite_dmd_heavy_core"}) {
    CHECK(c.out.find(name) != std::string::npos);
  }
  const Run f = run("figure --list");
  CHECK(f.code == 0);
  CHECK(f.out.find("lite_dmd_heavy_core_max") != std::string::npos);
}

TEST_CASE("geodesic") {
  const fs::path out = scratch() / "geo";
  const Run g = run("geodesic --weight heavy_diamond --alpha 2 --out '" + out.string() + "'");
  REQUIRE(g.code == 0);
  CHECK(std::abs(value_after(g.out, "length=") - std::sqrt(5.0)) <= 1e-9);
  const std::string csv = slurp(out / "geodesic.csv");
  CHECK(csv.rfind("x,y\n-1,0\n", 0) == 0);

  const Run v = run("geodesic --weight lite_dmd_heavy_core --from '-0.5 0' --to '0.5 0' --via '0 0.2' --out '" +
                    out.string() + "'");
  REQUIRE(v.code == 0);
  CHECK(std::abs(value_after(v.out, "length=") - 0.575 * std::sqrt(1.16)) <= 1e-9);

  const Run o = run("geodesic --weight constant --from '-0.9 0' --to '0.9 0' --res 256 --method oracle --out '" +
                    out.string() + "'");
  REQUIRE(o.code == 0);
  CHECK(std::abs(value_after(o.out, "length=") - 1.8) <= 0.018);
}

TEST_CASE("solver failures exit with 3") {
  const Run r = run("geodesic --weight light_diamond_tight --alpha 0.5 --from '-0.9 0.3' --to '0.8 -0.5' "
                    "--method shoot --out '" + (scratch() / "fail").string() + "'");
  CHECK(r.code == 3);
  CHECK(r.err.find("solver failure") != std::string::npos);
}

TEST_CASE("solve writes deterministic artifacts") {
  const fs::path cfg = scratch() / "small.cfg";
  std::ofstream(cfg) << "weight = heavy_diamond\nalpha = 2\nres = 96\nlevels = 40\n";
  const fs::path a = scratch() / "a", b = scratch() / "b";
  const Run ra = run("solve -c '" + cfg.string() + "' --out '" + a.string() + "'");
  REQUIRE(ra.code == 0);
  CHECK(value_after(ra.out, "energy=") > 3.0);
  // LGL_OUT overrides --out.
  const Run rb = run("solve -c '" + cfg.string() + "' --out ignored", "LGL_OUT='" + b.string() + "'");
  REQUIRE(rb.code == 0);
  CHECK_FALSE(fs::exists("ignored"));
  for (const char* f : {"heavy_diamond.pgm", "heavy_diamond.svg", "heavy_diamond_curves.csv"}) {
    INFO(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "heavy_diamond.pgm").rfind("P2\n96 96\n65535\n", 0) == 0);
}

TEST_CASE("verify") {
  const fs::path out = scratch() / "verify";
  const Run r = run("verify --experiment thresholds --out '" + out.string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(slurp(out / "verify_thresholds.csv").rfind("label,value,expected,tolerance,pass\n", 0) == 0);
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
