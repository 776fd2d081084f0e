#include <doctest.h>

#include <string>

#include "jko/config.hpp"

using namespace jko;

TEST_CASE("defaults survive a minimal config") {
  const RunConfig c = parse_config("K=12\ntau=1e-3\n");
  CHECK(c.K == 12);
  CHECK(c.tau == 1e-3);
  CHECK(c.d == 2);
  CHECK(c.m == 2.0);
  CHECK(c.T == 0.01);
  CHECK(c.L == 200);
  CHECK(c.tol == 1e-8);
  CHECK(c.potential == "exp1");
  CHECK(c.seed == 42);
  CHECK(c.threads == 1);
  REQUIRE(c.Ks.size() == 3);
  CHECK(c.Ks[0] == 4);
  CHECK(c.Ks[2] == 12);
  REQUIRE(c.snapshot_times.size() == 4);
  CHECK(c.snapshot_times[3] == 5e-2);
}

TEST_CASE("several pairs may share one line") {
  const RunConfig c = parse_config("K=32 tau=5e-4 potential=exp1\n");
  CHECK(c.K == 32);
  CHECK(c.tau == 5e-4);
  CHECK(c.potential == "exp1");
}

TEST_CASE("spaced assignments and comma lists stay single-pair lines") {
  const RunConfig c = parse_config(
      "K = 12\n"
      "Ks = 4, 8, 12\n"
      "snapshot_times = 0, 1e-3\n"
      "# trailing comment line\n"
      "L = 100   # inline comment\n");
  CHECK(c.K == 12);
  REQUIRE(c.Ks.size() == 3);
  CHECK(c.Ks[1] == 8);
  REQUIRE(c.snapshot_times.size() == 2);
  CHECK(c.snapshot_times[1] == 1e-3);
  CHECK(c.L == 100);
}

TEST_CASE("constraint violations carry their line number") {
  CHECK_THROWS_WITH_AS(parse_config("K=-1\n"),
                       "config line 1: K must be at least 1", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("K=8\n\ntau=-2\n"),
                       "config line 3: tau must be positive", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("wibble=3\n"),
                       "config line 1: unknown key 'wibble'", ConfigError);
  CHECK_THROWS_AS(parse_config("K=two\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("K\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("K=\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("d=3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("potential=cubic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("L=2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("threads=0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("Ks=4,0,12\n"), ConfigError);
}

TEST_CASE("exp1 potential insists on two dimensions") {
  CHECK_THROWS_AS(parse_config("d=1\n"), ConfigError);  // default potential is exp1
  const RunConfig c = parse_config("d=1\npotential=zero\n");
  CHECK(c.d == 1);
  CHECK(c.potential == "zero");
}

TEST_CASE("empty and comment-only configs yield pure defaults") {
  const RunConfig a = parse_config("");
  const RunConfig b = parse_config("# nothing here\n\n   \n");
  CHECK(a.K == b.K);
  CHECK(a.K == 8);
  CHECK(b.potential == "exp1");
}
