#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

const fs::path &workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("spinwig_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string &args) {
  const std::string cmd = std::string(SPINWIG_CLI) + " " + args + " 2>" +
                          (workdir() / "stderr.txt").string();
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
    r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string last_stderr() {
  std::ifstream in(workdir() / "stderr.txt");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write(const std::string &name, const std::string &text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("convert") {
  const std::string tet = write(
      "tet.json", R"({"twice_j": 4, "stars": [[0, 0], [1.9106332362490184, 0],
      [1.9106332362490184, 2.0943951023931957], [1.9106332362490184, 4.1887902047863905]]})");
  Run r = run("convert file:" + tet + " --roundtrip");
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  const auto &a = doc["amps"];
  REQUIRE(a.size() == 5);
  const double expect[] = {0.0, std::sqrt(2.0 / 3.0), 0.0, 0.0, 1.0 / std::sqrt(3.0)};
  for (int i = 0; i < 5; ++i)
    CHECK(std::hypot(a[i][0].get<double>(), a[i][1].get<double>()) ==
          doctest::Approx(expect[i]).epsilon(1e-9));
  CHECK(doc["roundtrip_fidelity"].get<double>() > 1.0 - 1e-12);

  r = run("convert " + write("d10.json", R"({"twice_j": 2, "amps": [[0, 0], [1, 0], [0, 0]]})"));
  REQUIRE(r.code == 0);
  doc = json::parse(r.out);
  CHECK(std::cos(doc["stars"][0][0].get<double>()) ==
        doctest::Approx(-std::cos(doc["stars"][1][0].get<double>())));

  r = run("convert " + write("zero.json", R"({"twice_j": 2, "amps": []})"));
  CHECK(r.code == 3);
  CHECK(last_stderr().find("zero state") != std::string::npos);
  CHECK(run("convert " + write("short.json", R"({"twice_j": 3, "stars": [[0, 0]]})")).code == 3);
  CHECK(run("convert " + write("broken.json", "{\"twice_j\": ")).code == 2);
  CHECK(run("convert file:/nonexistent/state.json").code == 3);
}

TEST_CASE("negativity") {
  Run r = run("negativity name:coherent --spin 1/2 --format json");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["negativity"].get<double>() == doctest::Approx(1.0 / std::sqrt(3.0) - 0.5).epsilon(1e-9));
  CHECK(doc["levels"].size() >= 3);
  r = run("negativity octahedron");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("negativity 0.6234") != std::string::npos);
  CHECK(run("negativity name:octahedron --tol 2").code == 3);
  CHECK(run("negativity name:nowhere").code == 3);
  CHECK(run("negativity").code == 2);
  CHECK(run("negativity octahedron --format xml").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("search") {
  Run r = run("search --spin 3/2 --starts 20 --seed 2");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["negativity"].get<double>() == doctest::Approx(0.39634).epsilon(2e-5));
  CHECK(doc["seed"] == 2);
  const std::string table = (workdir() / "pyr.csv").string();
  r = run("search --constraint pyramid --grid 31 --table " + table);
  REQUIRE(r.code == 0);
  CHECK(slurp(table).rfind("theta_base,negativity\n", 0) == 0);
  CHECK(run("search --spin 2 --starts 5 --table " + table).code == 3);
  CHECK(run("search --spin 2 --constraint maze").code == 2);
  CHECK(run("search --spin x").code == 2);
}

TEST_CASE("sample is reproducible") {
  const std::string a = (workdir() / "a.csv").string(), b = (workdir() / "b.csv").string();
  REQUIRE(run("sample --spin 2 --n 500 --seed 3 --threads 1 --format csv -o " + a).code == 0);
  REQUIRE(run("sample --spin 2 --n 500 --seed 3 --threads 2 --format csv -o " + b).code == 0);
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  CHECK(ca.rfind("bin_left,bin_right,count\n", 0) == 0);
  Run r = run("sample --spin 2 --n 500");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["seed"] == 1);
  CHECK(last_stderr().find("seed 1") != std::string::npos);
  CHECK(run("sample --spin 2 --n 10 --threads none").code == 2);
}

TEST_CASE("measures") {
  Run r = run("measures name:coherent --spin 4 --format json");
  REQUIRE(r.code == 0);
  const json m = json::parse(r.out);
  CHECK(m["geometric_entanglement"].get<double>() < 1e-12);
  CHECK(m["anticoherence_maximal"][0] == true);
  CHECK(m["negativity"].get<double>() > 0.0);
  r = run("measures --all --spin 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("max-dicke-1") != std::string::npos);
  CHECK(run("measures").code == 2);
}

TEST_CASE("wigner") {
  Run r = run("wigner name:dicke:0 --spin 2 --grid 5 --phi 6");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,phi,W");
  int rows = 0;
  std::string first_w;
  while (std::getline(in, line)) {
    const std::string w = line.substr(line.rfind(',') + 1);
    if (rows % 6 == 0)
      first_w = w;
    CHECK(w == first_w);
    ++rows;
  }
  CHECK(rows == 30);

  r = run("wigner name:coherent --spin 5 --grid 40");
  REQUIRE(r.code == 0);
  double lowest = 1.0;
  std::istringstream field(r.out);
  std::getline(field, line);
  while (std::getline(field, line))
    lowest = std::min(lowest, std::stod(line.substr(line.rfind(',') + 1)));
  CHECK(lowest < 0.0);
}
