#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "sobex_cli_test";

int run(const std::string& args) {
  std::string cmd = std::string(SOBEX_CLI) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (kDir / name).string(); }

struct Dir {
  Dir() { fs::create_directories(kDir); }
  ~Dir() { fs::remove_all(kDir); }
};

}  // namespace

TEST_CASE("exit codes") {
  Dir d;
  CHECK(run("bogus") == 2);
  CHECK(run("") == 2);
  CHECK(run("extend --mesh 11") == 2);
  CHECK(run("extend --mesh 0") == 2);
  CHECK(run("energy pdouglas --p 1.5") == 2);
  CHECK(run("extend --domain nowhere") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("harmonic extension of the identity") {
  Dir d;
  REQUIRE(run("extend --domain disk --map identity --method harmonic --mesh 6 --out " + path("f.csv") + " --report " +
              path("r.json")) == 0);
  auto j = nlohmann::json::parse(slurp(path("r.json")));
  CHECK(j["schema_version"] == 1);
  CHECK(j["trace_error"].get<double>() < 1e-6);
  std::istringstream csv(slurp(path("f.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "node_id,x,y,u,v");
  double worst = 0;
  int rows = 0;
  while (std::getline(csv, line)) {
    double id, x, y, u, v;
    char c;
    std::istringstream(line) >> id >> c >> x >> c >> y >> c >> u >> c >> v;
    worst = std::max(worst, std::hypot(u - x, v - y));
    ++rows;
  }
  CHECK(rows == j["nodes"].get<int>());
  CHECK(worst < 1e-9);
}

TEST_CASE("Douglas energy report") {
  Dir d;
  REQUIRE(run("energy douglas --map identity --out " + path("e.json")) == 0);
  auto j = nlohmann::json::parse(slurp(path("e.json")));
  for (const char* key : {"schema_version", "value", "p", "history", "divergent"}) CHECK(j.contains(key));
  CHECK(std::abs(j["value"].get<double>() - 39.478) < 0.04);
}

TEST_CASE("cusp partial sums match direct summation") {
  Dir d;
  REQUIRE(run("cex cusp --p 1.5 --N 1000000 --out " + path("c.csv") + " --report " + path("c.json")) == 0);
  std::istringstream csv(slurp(path("c.csv")));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "N,partial_sum");
  // oracle: forward sum with tails from a backward sum starting at 10^7
  const long far = 10000000;
  std::vector<double> tails(1000001);
  double t = 1.0 / far;
  for (long j = far - 1; j >= 1; --j) {
    t += 1.0 / (double(j) * double(j));
    if (j <= 1000000) tails[j] = t;
  }
  double sum = 0;
  long k = 0;
  int rows = 0;
  while (std::getline(csv, line)) {
    long n;
    double v;
    char c;
    std::istringstream(line) >> n >> c >> v;
    for (; k < n; ++k) {
      double kk = double(k + 1);
      sum += 1 / std::log1p(kk) / (kk * kk) / tails[k + 1];
    }
    CHECK(std::abs(v / sum - 1) < 1e-9);
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(nlohmann::json::parse(slurp(path("c.json")))["certificate"] == true);
}

TEST_CASE("outputs are byte-identical across runs") {
  Dir d;
  for (int i = 0; i < 2; ++i) {
    REQUIRE(run("extend --domain pentagon --map random:7 --method harmonic --mesh 3 --out " + path("a" + std::to_string(i)) +
                " --svg " + path("s" + std::to_string(i))) == 0);
    REQUIRE(run("map make --kind cusp --domain cusp:0.5 --p 1.5 --out " + path("m" + std::to_string(i))) == 0);
  }
  CHECK(slurp(path("a0")) == slurp(path("a1")));
  CHECK(slurp(path("s0")) == slurp(path("s1")));
  CHECK(slurp(path("m0")) == slurp(path("m1")));
  CHECK(!slurp(path("a0")).empty());
}

TEST_CASE("every subcommand passes its selftest") {
  for (const char* sub : {"domain make", "map make", "conformal eval", "conformal hardy", "conformal koebe", "extend",
                          "energy douglas", "energy invdouglas", "energy pdouglas", "energy sobolev", "energy cond32",
                          "energy carleson", "qh dist", "qh growth", "qh moc", "cex spiral", "cex cusp"})
    CHECK_MESSAGE(run(std::string(sub) + " --selftest") == 0, sub);
}
