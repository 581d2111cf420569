#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fraclimit/cli.hpp"

using namespace fraclimit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fraclimit_test_" + name);
}

}  // namespace

TEST_CASE("constants reports sigma at the boundary") {
  const auto r = run({"constants", "--h", "0.75", "--q", "2", "--gamma", "1"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["sigma"].get<double>() == 0.75);
  CHECK(j["schema"] == "fraclimit.constants/1");
  CHECK(j["config"]["h"].get<double>() == 0.75);
  CHECK(j.contains("version"));
}

TEST_CASE("diagram counts and moments") {
  const auto r = run({"diagram", "--p", "2", "--q", "3"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["result"]["count"] == 6);
  const auto m = run({"diagram", "--q", "2", "--sigma", "[[1,0.5],[0.5,1]]"});
  REQUIRE(m.code == 0);
  CHECK(nlohmann::json::parse(m.out)["result"]["moment"].get<double>() == doctest::Approx(0.5));
  const auto bad = run({"diagram", "--q", "2", "--sigma", "[[1,2],[2,1]]"});
  CHECK(bad.code == cli::kExitValidation);
  CHECK(nlohmann::json::parse(bad.err)["error"] == "NotPSD");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kExitValidation);
  CHECK(run({"nonsense"}).code == cli::kExitValidation);
  CHECK(run({"constants", "--h", "abc"}).code == cli::kExitValidation);
  CHECK(run({"constants", "--h", "1.2"}).code == cli::kExitValidation);
  CHECK(run({"verify", "clt", "--h", "0.9"}).code == cli::kExitValidation);
  CHECK(run({"constants", "--out", "xml"}).code == cli::kExitValidation);
  CHECK(run({"unitroot", "thm32", "--gamma", "-500", "--reps", "4"}).code == cli::kExitRuntime);
  const auto e = run({"verify"});
  CHECK(e.code == cli::kExitValidation);
  CHECK(nlohmann::json::parse(e.err).contains("message"));
}

TEST_CASE("identical argv gives identical bytes") {
  const std::vector<std::string> args{"verify", "clt", "--t", "40", "--reps", "200", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run({"verify", "clt", "--t", "40", "--reps", "200", "--seed", "8"});
  CHECK(a.out != c.out);
}

TEST_CASE("sample csv") {
  const auto r = run({"sample", "--kind", "fbm", "--h", "0.3", "--t", "1", "--dt", "0.1", "--out", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) ++comments;
    else ++rows;
  }
  CHECK(comments == 4);
  CHECK(rows == 12);  // header plus 11 grid points
  CHECK(r.out.find("# schema=fraclimit.sample/1") != std::string::npos);
}

TEST_CASE("config file with flag precedence") {
  const auto path = scratch("config.txt");
  {
    std::ofstream f(path);
    f << "# comment\nh = 0.6\nq=3\ngamma=2\n";
  }
  const auto r = run({"constants", "--config", path.string(), "--q", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["config"]["h"].get<double>() == 0.6);
  CHECK(j["config"]["q"] == 2);
  CHECK(j["config"]["gamma"].get<double>() == 2.0);
  {
    std::ofstream f(path);
    f << "bogus=1\n";
  }
  CHECK(run({"constants", "--config", path.string()}).code == cli::kExitValidation);
  std::filesystem::remove(path);
}

TEST_CASE("output file") {
  const auto path = scratch("out.json");
  const auto r = run({"constants", "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["schema"] == "fraclimit.constants/1");
  std::filesystem::remove(path);
}

TEST_CASE("every subcommand emits parseable json") {
  const std::vector<std::vector<std::string>> cases{
      {"verify", "boundary", "--t", "50", "--reps", "100"},
      {"verify", "nclt", "--t", "50", "--reps", "100"},
      {"verify", "variance-scaling", "--t-ladder", "10,20", "--reps", "500"},
      {"verify", "smoothing", "--t", "20", "--reps", "100"},
      {"unitroot", "taubar", "--reps", "50", "--dt", "1e-3"},
      {"unitroot", "thm31", "--reps", "50", "--dt", "1e-3"},
      {"unitroot", "thm32", "--reps", "50", "--dt", "1e-3"},
      {"unitroot", "discrete", "--reps", "50", "--n", "200", "--dt", "1e-3"},
      {"sample", "--kind", "stationary_foup", "--t", "2", "--dt", "0.5"}};
  for (const auto& args : cases) {
    const auto r = run(args);
    CHECK_MESSAGE(r.code == 0, args[0], " ", args[1], " ", r.err);
    if (r.code != 0) continue;
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("schema"));
    CHECK(j.contains("config"));
    CHECK(j["config"].contains("seed"));
  }
}

TEST_CASE("built executable matches the in-process runner") {
  const char* exe = std::getenv("FRACLIMIT_CLI");
  if (exe == nullptr) return;
  const auto path = scratch("exe_out.txt");
  const std::string cmd = std::string(exe) + " diagram --p 2 --q 3 > " + path.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == run({"diagram", "--p", "2", "--q", "3"}).out);
  std::filesystem::remove(path);
}
