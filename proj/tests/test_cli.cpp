#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cache.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "dirlab/error.hpp"

using namespace dirlab;
using namespace dirlab::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dirlab_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t count_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

std::string config_error_text(const std::string& command, const json& cfg) {
  try {
    ExperimentConfig::from_json(command, cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("cache keys round reals to twelve significant digits") {
  const auto a = KeyBuilder("eta", "moments").add("sigma", 0.75).add("k", 2).str();
  const auto b = KeyBuilder("eta", "moments").add("sigma", 0.75 + 1e-14).add("k", 2).str();
  const auto c = KeyBuilder("chi:4:1", "moments").add("sigma", 0.75).add("k", 2).str();
  const auto d = KeyBuilder("eta", "moments").add("sigma", 0.7500001).add("k", 2).str();
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a != d);
  CHECK(format_real12(0.1) == format_real12(0.1 + 1e-15));

  const auto lin = arithmetic_grid(0.05, 0.95, 0.05);
  const auto geo = geometric_grid(500.0, 5000.0, 10);
  const auto ka = KeyBuilder("eta", "op").add("s", lin).add("T", geo).str();
  CHECK(ka.find("lin(") != std::string::npos);
  CHECK(ka.find("geom(") != std::string::npos);
  std::vector<double> ragged{1.0, 2.0, 5.0};
  CHECK(KeyBuilder("eta", "op").add("s", ragged).str() != KeyBuilder("eta", "op").add("s", lin).str());
}

TEST_CASE("cache round trip, corruption and key mismatch") {
  const auto dir = scratch("cache");
  Cache cache(dir);
  const std::string key = KeyBuilder("eta", "moments").add("sigma", 0.6).str();
  CHECK_FALSE(cache.lookup(key));
  const json value = {{"v", {0.1, 1.0 / 3.0, 1e-300, 12345.678901234567}}};
  cache.store(key, value);
  const auto back = cache.lookup(key);
  REQUIRE(back);
  CHECK(*back == value);
  for (std::size_t i = 0; i < 4; ++i) CHECK((*back)["v"][i].get<double>() == value["v"][i].get<double>());
  CHECK(count_files(dir) == 1);

  const std::string other = KeyBuilder("eta", "moments").add("sigma", 0.7).str();
  CHECK(cache.path_for(other) != cache.path_for(key));
  fs::copy_file(cache.path_for(key), cache.path_for(other));
  CHECK_FALSE(cache.lookup(other));

  std::ofstream(cache.path_for(key)) << "{not json";
  CHECK_FALSE(cache.lookup(key));
  fs::remove_all(dir);
}

TEST_CASE("DIRLAB_CACHE overrides the configured directory") {
  const auto dir = scratch("env");
  ::setenv("DIRLAB_CACHE", dir.c_str(), 1);
  auto c = Cache::open("/nonexistent/elsewhere");
  REQUIRE(c);
  CHECK(c->dir() == dir);
  ::unsetenv("DIRLAB_CACHE");
  CHECK_FALSE(Cache::open(""));
  REQUIRE(Cache::open(dir.string()));
  fs::remove_all(dir);
}

TEST_CASE("grid text") {
  CHECK(parse_grid("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
  const auto a = parse_grid("0.1:0.5:0.1");
  REQUIRE(a.size() == 5);
  CHECK(a.back() == doctest::Approx(0.5));
  const auto g = parse_grid("geom:10:1000:3");
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(100.0));
  CHECK(g[2] == 1000.0);
  CHECK_THROWS_AS(parse_grid("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:0:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("geom:0:10:3"), ConfigError);
}

TEST_CASE("config validation names the field") {
  CHECK(config_error_text("abscissa", {{"sigma", {0.8, 0.6}}}).find("'sigma'") != std::string::npos);
  CHECK(config_error_text("moments", {{"sigma", {0.5, -0.1}}}).find("'sigma'") != std::string::npos);
  CHECK(config_error_text("moments", {{"colour", 1}}).find("'colour'") != std::string::npos);
  CHECK(config_error_text("moments", {{"tol", -1.0}}).find("'tol'") != std::string::npos);
  CHECK(config_error_text("abscissa", {{"T", {100.0, 200.0}}}).find("'T'") != std::string::npos);
  CHECK(config_error_text("mu", {{"t", "1:100:1"}}).find("'t'") != std::string::npos);
  CHECK(config_error_text("diagnose", {{"sigma_L", 1.5}}).find("'sigma_L'") != std::string::npos);
  CHECK(config_error_text("moments", {{"k", "two"}}).find("'k'") != std::string::npos);
  CHECK_THROWS_AS(ExperimentConfig::from_json("frobnicate", json::object()), ConfigError);

  const auto m = ExperimentConfig::from_json("moments", json::object());
  CHECK(m.unweighted);
  CHECK(m.T.size() == 10);
  const auto d = ExperimentConfig::from_json("diagnose", {{"table", "lindelof"}});
  CHECK(d.k.size() == 5);
  CHECK(*d.mu0 == 0.5);
}

TEST_CASE("eval and lindelof diagnose outputs") {
  const auto e = run_eval(ExperimentConfig::from_json("eval", json::object()));
  CHECK(e.text.find("0.6931471806") != std::string::npos);
  CHECK(e.csv.rfind(std::string(kEvalColumns) + "\n", 0) == 0);

  const auto d = run_diagnose(ExperimentConfig::from_json("diagnose", {{"table", "lindelof"}}), nullptr);
  CHECK(d.text.find("all checks hold; predicted μ linear") != std::string::npos);
  CHECK(d.csv.rfind(std::string(kDiagnoseColumns) + "\n", 0) == 0);
  CHECK(d.extra.size() >= 2);
}

TEST_CASE("descriptors with commas are quoted in CSV") {
  const auto e = run_eval(ExperimentConfig::from_json("eval", {{"series", "poly:1,-1"}, {"sigma", {2.0}}}));
  CHECK(e.csv.find("\"poly:1,-1\",2,0,0.75,0,0.75") != std::string::npos);
}

TEST_CASE("warm cache reproduces the cold CSV without writing") {
  const auto dir = scratch("warm");
  Cache cache(dir);
  const json cfg = {{"series", "chi:4:1"}, {"k", {1}}, {"alpha", {0.2}}, {"sigma", {0.6, 0.9}}, {"T", "geom:50:200:4"}};
  const auto c = ExperimentConfig::from_json("moments", cfg);
  const auto plain = run_moments(c, nullptr);
  const auto cold = run_moments(c, &cache);
  const std::size_t files = count_files(dir);
  CHECK(files > 0);
  const auto warm = run_moments(c, &cache);
  CHECK(plain.csv == cold.csv);
  CHECK(cold.csv == warm.csv);
  CHECK(count_files(dir) == files);
  fs::remove_all(dir);
}
