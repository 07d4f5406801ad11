// Runs the command-line tool and compares the "result" member of its JSON
// output with recorded files in tests/golden. Set SUMFREE_UPDATE_GOLDEN=1 to
// rewrite them.

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include <sys/wait.h>

using Json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(SUMFREE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string expand(std::string s) {
  const std::string key = "{data}";
  for (auto pos = s.find(key); pos != std::string::npos; pos = s.find(key))
    s.replace(pos, key.size(), SUMFREE_DATA_DIR);
  return s;
}

// Timing fields are dropped before comparison.
void strip_timing(Json& j) {
  if (j.is_object()) {
    j.erase("seconds");
    j.erase("elapsed_seconds");
    for (auto& [k, v] : j.items()) strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

bool same(const Json& a, const Json& b, std::string path, std::string& where) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y))) return true;
    where = path;
    return false;
  }
  if (a.type() != b.type()) {
    where = path + " (type)";
    return false;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      where = path + " (keys)";
      return false;
    }
    for (auto& [k, v] : a.items()) {
      if (!b.contains(k)) {
        where = path + "/" + k + " (missing)";
        return false;
      }
      if (!same(v, b.at(k), path + "/" + k, where)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      where = path + " (length)";
      return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!same(a[i], b[i], path + "/" + std::to_string(i), where)) return false;
    return true;
  }
  if (a != b) where = path;
  return a == b;
}

struct Case {
  const char* name;
  const char* args;
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

const Case kCases[] = {
    {"solve_klarner", "solve --set {data}/klarner.json --convention allow-equal"},
    {"solve_malouf_distinct", "solve --set {data}/malouf.json --convention distinct"},
    {"solve_heuristic", "solve --set {data}/small.txt --heuristic --restarts 2 --seed 5"},
    {"sweep_small", "sweep --set {data}/small.txt"},
    {"compose_klarner", "compose --a {data}/klarner.json --b {data}/klarner.json --solve"},
    {"catalog_verify", "catalog --verify"},
    {"spectral_u2", "spectral u2 --set {data}/small.txt --n 12 --direct"},
    {"spectral_tcount", "spectral tcount --set {data}/small.txt --n 12"},
    {"spectral_popdiff", "spectral popdiff --set {data}/small.txt --n 12 --t 0.25"},
    {"structure_doubling", "structure doubling --set {data}/small.txt --n 12 --eps 1/4 --delta 0.1"},
    {"structure_alphatilde", "structure alphatilde --grid {data}/alpha_grid.json --eta 0.1"},
    {"structure_avoidzero", "structure avoidzero --gridset {data}/grid_set.json --index-bound 4 --min-interval 1/4"},
    {"structure_lev", "structure lev --start 3 --step 2 --length 13 --set {data}/lev_x.txt"},
    {"weight_build", "weight build --eps 1/2 --steps 3 --k 4"},
    {"weight_sample", "weight sample --weight {data}/weight_small.json --n 64 --seed 3"},
    {"experiment_small", "experiment --eps 1/2 --n 2000 --seeds 1,2 --steps 2"},
    {"equidist_check", "equidist check --theta 0.6180339887498949 --a 10 --n 1000"},
    {"equidist_error", "equidist error --theta 0.6180339887498949 --freq cos:1 --n 10000"},
    {"check_solver", "check --suite solver --seed 7"},
};

class Golden : public ::testing::TestWithParam<Case> {};

TEST_P(Golden, ResultMatchesRecording) {
  const Case& c = GetParam();
  auto r = run_cli(expand(c.args));
  ASSERT_EQ(r.status, 0) << c.args;
  Json j;
  ASSERT_NO_THROW(j = Json::parse(r.out)) << r.out;
  ASSERT_EQ(j.at("schema_version"), 1);
  ASSERT_TRUE(j.at("run").contains("version"));
  Json result = j.at("result");
  strip_timing(result);
  const auto path = std::filesystem::path(SUMFREE_GOLDEN_DIR) / (std::string(c.name) + ".json");
  const char* update = std::getenv("SUMFREE_UPDATE_GOLDEN");
  if (update && std::string(update) == "1") {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << result.dump(2) << "\n";
    GTEST_SKIP() << "recorded " << path;
  }
  std::ifstream in(path);
  ASSERT_TRUE(in) << "missing golden file " << path;
  Json want = Json::parse(in);
  std::string where;
  EXPECT_TRUE(same(result, want, "", where)) << c.name << " differs at " << where;
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(kCases),
                         [](const ::testing::TestParamInfo<Case>& info) { return std::string(info.param.name); });

TEST(CliErrors, ExitCodes) {
  EXPECT_EQ(run_cli("").status, 2);
  EXPECT_EQ(run_cli("frobnicate").status, 2);
  EXPECT_EQ(run_cli("check --suite nope").status, 2);
  EXPECT_EQ(run_cli("solve --set /nonexistent/file.txt").status, 1);
  EXPECT_EQ(run_cli(expand("compose --a {data}/klarner.json --b {data}/klarner.json --m 5")).status, 1);
  EXPECT_EQ(run_cli("equidist check --theta 0.5 --a 5000 --n 10").status, 1);
  EXPECT_EQ(run_cli("weight build --eps 2").status, 1);
}

TEST(CliErrors, ReportsAreReproducible) {
  const std::string args = "experiment --eps 1/2 --n 1500 --seeds 4,9 --steps 2";
  auto a = Json::parse(run_cli(args).out).at("result"), b = Json::parse(run_cli(args).out).at("result");
  EXPECT_EQ(a, b);
}

TEST(CliErrors, OutFilesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "sumfree_golden_out";
  std::filesystem::create_directories(dir);
  const auto w = (dir / "w.json").string(), s = (dir / "s.json").string();
  ASSERT_EQ(run_cli("weight build --eps 1/4 --steps 2 --k 8 --out " + w).status, 0);
  ASSERT_EQ(run_cli("weight sample --weight " + w + " --n 500 --seed 1 --out " + s).status, 0);
  auto r = run_cli("solve --set " + s + " --heuristic");
  EXPECT_EQ(r.status, 0);
  std::filesystem::remove_all(dir);
}

}  // namespace
