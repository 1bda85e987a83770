#include "doctest.h"

#include "nilspec/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nilspec;

TEST_CASE("s-grid specs") {
  SGrid g = SGrid::parse("1e2:1e4:5");
  CHECK(g.lo == 100.0);
  CHECK(g.hi == 1e4);
  CHECK(g.n == 5);
  auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v[2] == doctest::Approx(1000.0));
  CHECK_THROWS_AS(SGrid::parse("1e4:1e2:5"), ConfigError);
  CHECK_THROWS_AS(SGrid::parse("1:2"), ConfigError);
  CHECK_THROWS_AS(SGrid::parse("a:2:3"), ConfigError);
  CHECK_THROWS_AS(SGrid::parse("1:2:1"), ConfigError);
}

TEST_CASE("key = value parsing") {
  std::istringstream in(
      "# comment\n[solver]\nkappa = 6   # margin\ntol=1e-9\noutput = \"out # not a comment.csv\"\n\n"
      "nodes = 8,9\nmethod = eigen_count\ngroup = cartan\n");
  auto kv = parse_key_values(in);
  CHECK(kv.at("kappa") == "6");
  CHECK(kv.at("output") == "out # not a comment.csv");
  RunConfig cfg;
  apply_entries(cfg, kv);
  CHECK(cfg.kappa == 6.0);
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.group == GroupId::Cartan);
  CHECK(cfg.method == TraceMethod::EigenCount);
  CHECK(cfg.nodes == std::vector<std::size_t>{8, 9});
  CHECK_THROWS_AS(cfg.quadrature(), ConfigError);  // Cartan needs 3 counts or 1
  cfg.nodes = {12};
  CHECK(cfg.quadrature().nodes == std::vector<std::size_t>{12, 12, 12});
  CHECK(cfg.solver().kappa == 6.0);

  std::istringstream bad("kappa\n");
  CHECK_THROWS_AS(parse_key_values(bad), ConfigError);
  RunConfig c2;
  CHECK_THROWS_AS(apply_entries(c2, {{"nonsense", "1"}}), ConfigError);
  CHECK_THROWS_AS(apply_entries(c2, {{"kappa", "four"}}), ConfigError);
  CHECK_THROWS_AS(apply_entries(c2, {{"threads", "-2"}}), ConfigError);
}

TEST_CASE("validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.kappa = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.dual_epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("provenance lists the effective configuration") {
  RunConfig cfg;
  cfg.command = "trace";
  cfg.seed = 42;
  const std::string p = cfg.provenance();
  CHECK(p.find("# command = trace\n") != std::string::npos);
  CHECK(p.find("# seed = 42\n") != std::string::npos);
  CHECK(p.find("# kappa = 4\n") != std::string::npos);
  CHECK(p.find("# s = 100:10000:5\n") != std::string::npos);
}

TEST_CASE("config file and environment") {
  const auto path = std::filesystem::temp_directory_path() / "nilspec_test_config.toml";
  {
    std::ofstream out(path);
    out << "kappa = 5\nthreads = 3\n";
  }
  RunConfig cfg;
  apply_config_file(cfg, path.string());
  CHECK(cfg.kappa == 5.0);
  CHECK(cfg.threads == 3);
  CHECK_THROWS_AS(apply_config_file(cfg, (path.string() + ".missing")), ConfigError);

  setenv("NILSPEC_CONFIG", path.c_str(), 1);
  CHECK(config_path_from_env() == path.string());
  setenv("NILSPEC_CONFIG", "", 1);
  CHECK_FALSE(config_path_from_env().has_value());
  unsetenv("NILSPEC_CONFIG");
  std::filesystem::remove(path);
}
