#include "doctest.h"

#include <map>

#include "cli_config.hpp"
#include "zslab/verify.hpp"

using namespace zslab;

namespace {

cli::EnvLookup fake_env(std::map<std::string, std::string> vars) {
  return [vars](const char* name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

} // namespace

TEST_CASE("defaults without flags or environment") {
  const cli::Config c = cli::resolve_config({}, fake_env({}));
  CHECK(c.cache_dir.empty());
  CHECK(c.threads == 1);
}

TEST_CASE("environment fills in missing flags") {
  const cli::Config c = cli::resolve_config({}, fake_env({{"ZSLAB_CACHE_DIR", "/tmp/x"}, {"ZSLAB_THREADS", "4"}}));
  CHECK(c.cache_dir == "/tmp/x");
  CHECK(c.threads == 4);
}

TEST_CASE("flags win over the environment") {
  const auto env = fake_env({{"ZSLAB_CACHE_DIR", "/tmp/env"}, {"ZSLAB_THREADS", "8"}});
  const cli::Config c = cli::resolve_config({std::string("/tmp/flag"), 2}, env);
  CHECK(c.cache_dir == "/tmp/flag");
  CHECK(c.threads == 2);
  // a bad environment value is ignored when the flag is given
  CHECK(cli::resolve_config({std::nullopt, 3}, fake_env({{"ZSLAB_THREADS", "lots"}})).threads == 3);
}

TEST_CASE("bad thread counts are usage errors") {
  CHECK_THROWS_AS(cli::resolve_config({}, fake_env({{"ZSLAB_THREADS", "lots"}})), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve_config({}, fake_env({{"ZSLAB_THREADS", "3x"}})), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve_config({}, fake_env({{"ZSLAB_THREADS", "0"}})), InvalidArgument);
  CHECK_THROWS_AS(cli::resolve_config({std::nullopt, 0}, fake_env({})), InvalidArgument);
  CHECK(cli::resolve_config({}, fake_env({{"ZSLAB_THREADS", ""}})).threads == 1);
}

TEST_CASE("tier names") {
  CHECK(parse_tier("quick") == Tier::Quick);
  CHECK(parse_tier("full") == Tier::Full);
  CHECK(tier_name(Tier::Full) == "full");
  CHECK_THROWS_AS(parse_tier("Full"), InvalidArgument);
  CHECK_THROWS_AS(parse_tier(""), InvalidArgument);
}

TEST_CASE("criterion results") {
  CriterionResult r;
  r.id = 1;
  r.title = "t";
  r.limit_seconds = 10;
  r.seconds = 1;
  r.checks.push_back({"a", "1", "1", true});
  CHECK(r.pass());
  CHECK(format_result(r).rfind("PASS", 0) == 0);
  CHECK_FALSE(r.to_json(false).contains("seconds"));
  CHECK(r.to_json(true).contains("seconds"));
  r.checks.push_back({"b", "2", "3", false});
  CHECK_FALSE(r.pass());
  CHECK(format_result(r).find("b: expected 2, observed 3") != std::string::npos);
  r.checks.pop_back();
  r.seconds = 11;
  CHECK_FALSE(r.pass());
  r.seconds = 1;
  r.error = "boom";
  CHECK_FALSE(r.pass());
}

TEST_CASE("selected criteria run alone") {
  VerifyOptions opts;
  opts.only = {1, 2};
  const auto results = verify_paper(opts);
  REQUIRE(results.size() == 2);
  CHECK(results[0].id == 1);
  CHECK(results[1].id == 2);
  CHECK(results[0].pass());
  CHECK(results[1].pass());
}
