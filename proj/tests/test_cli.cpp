#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = CHSLAB_BIN;

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::path("/tmp") / ("chslab-cli-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const fs::path& p) {
  return nlohmann::json::parse(slurp(p));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 64") {
  CHECK(run("") == 64);
  CHECK(run("no-such-experiment") == 64);
  CHECK(run("besov-interp --seed not-a-number") == 64);
  const fs::path d = fresh_dir("usage");
  CHECK(run("besov-interp --out " + d.string() + " not_a_key=3") == 64);
  CHECK(run("besov-interp --out " + d.string() + " --workers 0") == 64);
}

TEST_CASE("unwritable output directory exits 73") {
  // a path through a regular file cannot be created
  CHECK(run("besov-interp fields=2 --out /proc/version/sub") == 73);
}

TEST_CASE("a blown-up trajectory exits 3 and leaves a structured report") {
  const fs::path d = fresh_dir("blowup");
  // A unit-size free-field start needs a strongly inverted quartic to beat
  // the biharmonic damping on the lowest shell; -1 would merely relax.
  const int rc = run("simulate --seed 4 --out " + d.string() +
                     " cutoff=4 cubic=-40.0 dt=0.02 horizon=50.0"
                     " init=free-field");
  CHECK(rc == 3);
  const auto rep = load_json(d / "report.json");
  REQUIRE(rep.contains("blow_up"));
  CHECK(rep["blow_up"]["step"].get<std::int64_t>() >= 1);
  CHECK(rep["blow_up"]["t"].get<double>() > 0.0);
}

TEST_CASE("outputs are byte-identical across reruns and worker counts") {
  const fs::path a = fresh_dir("det-a");
  const fs::path b = fresh_dir("det-b");
  const std::string common =
      "ou-covariance --seed 5 cutoff=4 window=2 samples=300"
      " increments=1000 t=0.05";
  CHECK(run(common + " --workers 1 --out " + a.string()) == 0);
  CHECK(run(common + " --workers 3 --out " + b.string()) == 0);
  for (const char* f : {"manifest.json", "results.csv", "report.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("a manifest replays the exact run") {
  const fs::path a = fresh_dir("replay-a");
  const fs::path b = fresh_dir("replay-b");
  CHECK(run("wick-verify --seed 11 --out " + a.string() +
            " trials=50 field_trials=3 degree_max=6 cutoff=4") == 0);
  CHECK(run("wick-verify --config " + (a / "manifest.json").string() +
            " --out " + b.string()) == 0);
  for (const char* f : {"manifest.json", "results.csv", "report.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("seed precedence: flag over config file over default") {
  const fs::path d = fresh_dir("seed");
  const fs::path cfg = d / "cfg.toml";
  std::ofstream(cfg) << "seed = 21\nfields = 3\n";

  CHECK(run("besov-interp --config " + cfg.string() + " --out " +
            (d / "r1").string()) == 0);
  CHECK(load_json(d / "r1" / "manifest.json")["seed"].get<std::uint64_t>() ==
        21);

  CHECK(run("besov-interp --config " + cfg.string() + " --seed 8 --out " +
            (d / "r2").string()) == 0);
  CHECK(load_json(d / "r2" / "manifest.json")["seed"].get<std::uint64_t>() ==
        8);

  // the recorded config excludes plumbing keys, so replays do not double-apply
  const auto man = load_json(d / "r1" / "manifest.json");
  CHECK_FALSE(man["config"].contains("seed"));
  CHECK_FALSE(man["config"].contains("workers"));
}

TEST_CASE("help exits cleanly and names every experiment") {
  CHECK(run("--help") == 0);
}

}  // TEST_SUITE
