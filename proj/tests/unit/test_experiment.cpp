#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "phi3/errors.hpp"
#include "phi3/experiment/config.hpp"
#include "phi3/experiment/run.hpp"
#include "phi3/spectral/gff.hpp"

using namespace phi3;
using namespace phi3::experiment;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string c;
    while (std::getline(s, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("phi3_exp_" + name);
  fs::remove_all(d);
  return d;
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config("command = sample\n");
  CHECK(c.command == "sample");
  CHECK(c.L_list == std::vector<double>{1.0});
  CHECK(c.n_samples == 1000);
  CHECK(c.flags.mala);
  CHECK(c.effective_A() == 1.0);
}

TEST_CASE("config round trip and hash") {
  const std::string text =
      "command = sandwich\nseed = 42\n# comment\n[lattice]\nL_list = 1, 2\nN_list = 4\n"
      "[model]\nsigma = -0.5\nA = 0.25\n[sampling]\nn_samples = 300\nannealed = true\n"
      "[concentration]\nepsilon_list = 0.5, 2\n";
  const auto c = parse_config(text);
  CHECK(c.seed == 42);
  CHECK(c.L_list == std::vector<double>{1.0, 2.0});
  CHECK(c.annealed);
  const auto back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  auto d = c;
  d.sigma = 0.5;
  CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("config errors are collected") {
  const auto p = problems_of("command = sample\nbogus = 1\n[sampling]\nn_samples = -3\n[model]\nsigma = abc\n");
  REQUIRE(p.size() == 3);
  int unknown = 0, type = 0, constraint = 0;
  for (const auto& s : p) {
    unknown += s.rfind("unknown-key", 0) == 0;
    type += s.rfind("type-mismatch", 0) == 0;
    constraint += s.rfind("constraint-violation", 0) == 0;
  }
  CHECK(unknown == 1);
  CHECK(type == 1);
  CHECK(constraint == 1);
  CHECK(!problems_of("command = nonsense\n").empty());
}

TEST_CASE("Gaussian baseline is accepted and flagged") {
  const auto c = parse_config("command = free-energy\n[model]\nsigma = 0\n");
  CHECK(c.sigma == 0.0);
  CHECK(!c.notes().empty());
}

TEST_CASE("tadpole scan matches the lattice sum exactly") {
  auto c = parse_config("command = tadpole-scan\n[lattice]\nL_list = 1, 2.5, 8\nN_list = 1, 4, 16\n");
  const auto dir = scratch("tadpole");
  const auto m = run(c, dir);
  const auto rows = csv_rows(dir / "tadpole.csv");
  REQUIRE(rows.size() == 10);
  CHECK(rows[0][0] == "L");
  CHECK(rows[0].back() == "config_hash");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double L = std::stod(rows[i][0]), N = std::stod(rows[i][1]);
    CHECK(std::strtod(rows[i][2].c_str(), nullptr) == spectral::tadpole(L, N));
    CHECK(rows[i].back() == m.config_hash);
  }
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["config_hash"] == config_hash(c));
  CHECK(j["seeds"].is_array());
  CHECK(j["outputs"][0] == "tadpole.csv");
  fs::remove_all(dir);
}

TEST_CASE("rerun gives byte-identical CSVs independent of the thread count") {
  auto c = parse_config("command = free-energy\nseed = 3\n[lattice]\nL_list = 1, 2\nN_list = 2\n[sampling]\nn_samples = 400\n");
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  setenv("PHI3_THREADS", "1", 1);
  run(c, a);
  setenv("PHI3_THREADS", "3", 1);
  run(c, b);
  unsetenv("PHI3_THREADS");
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sandwich on the 5-dof truncation is ordered") {
  auto c = parse_config("command = sandwich\nseed = 1\n[lattice]\nL_list = 1\nN_list = 1\n[sampling]\nn_samples = 4000\n");
  const auto dir = scratch("sandwich");
  run(c, dir);
  const auto rows = csv_rows(dir / "sandwich.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][4] == "bd-lower");
  CHECK(rows[2][4] == "mc");
  CHECK(rows[3][4] == "bd-upper");
  const double lo = std::stod(rows[1][5]), mc = std::stod(rows[2][5]), up = std::stod(rows[3][5]);
  const double se_lo = std::stod(rows[1][6]), se_mc = std::stod(rows[2][6]), se_up = std::stod(rows[3][6]);
  CHECK(lo - mc <= 3.0 * std::hypot(se_lo, se_mc));
  CHECK(mc - up <= 3.0 * std::hypot(se_mc, se_up));
  fs::remove_all(dir);
}

TEST_CASE("task errors carry the task name") {
  auto c = parse_config("command = oracle\n[lattice]\nL_list = 2\nN_list = 1\n");
  const auto dir = scratch("oracle");
  try {
    run(c, dir);
    FAIL("expected a task error");
  } catch (const TaskError& e) {
    CHECK(e.kind().find("TooManyDofs") != std::string::npos);
    CHECK(e.task().find("L=2") != std::string::npos);
  }
  fs::remove_all(dir);
}
