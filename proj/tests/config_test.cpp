#include <string>

#include "doctest.h"

#include "blz/config.hpp"

using namespace blz;

TEST_CASE("parse overrides defaults section by section") {
  const std::string text = R"ini(
# run card
[grid]
n_points = 32
half_width = 6.0

[cross_section]
gamma = -0.5
s = 0.5
theta_min = 1e-3

[time]
dt = 0.02
t_end = 0.5
scheme = rk2
checkpoints = 4

[initial]
type = bkw
k_shape = 0.7

[schedule]
N = 1.0
a = -2.0
delta_set = 1.0, 0.1, 0.01

[run]
seed = 99
deterministic = true
output_dir = scratch
)ini";
  const auto cfg = parse_config_text(text, "inline");
  CHECK(cfg.grid.n_points == 32);
  CHECK(cfg.grid.half_width == doctest::Approx(6.0));
  CHECK(cfg.cross_section.gamma == doctest::Approx(-0.5));
  CHECK(cfg.cross_section.s == doctest::Approx(0.5));
  CHECK(cfg.cross_section.theta_min == doctest::Approx(1e-3));
  CHECK(cfg.time.scheme == "rk2");
  CHECK(cfg.time.checkpoints == 4);
  CHECK(cfg.initial.type == "bkw");
  CHECK(cfg.initial.k_shape == doctest::Approx(0.7));
  CHECK(cfg.schedule.a == doctest::Approx(-2.0));
  REQUIRE(cfg.schedule.delta_set.size() == 3);
  CHECK(cfg.schedule.delta_set[1] == doctest::Approx(0.1));
  CHECK(cfg.run.seed == 99);
  CHECK(cfg.run.output_dir == "scratch");
  CHECK(cfg.regime == "moderately-soft");  // gamma = -1/2 > -1
}

TEST_CASE("regime tags follow the kinetic exponent") {
  CHECK(regime_tag(0.5, 0.25) == "hard");
  CHECK(regime_tag(0.0, 0.25) == "moderately-soft");
  CHECK(regime_tag(-0.4, 0.25) == "moderately-soft");
  CHECK(regime_tag(-1.0, 0.6) == "very-soft");
  CHECK(regime_tag(-1.5, 0.9) == "very-soft");
  CHECK(regime_tag(-1.2, 0.25) == "outside-regimes");
}

TEST_CASE("validation rejects out-of-range parameters") {
  RunConfig cfg;
  cfg.cross_section.gamma = -3.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  RunConfig cfg2;
  cfg2.grid.n_points = 0;
  CHECK_THROWS_AS(cfg2.validate(), ConfigError);

  RunConfig cfg3;
  cfg3.time.dt = -0.1;
  CHECK_THROWS_AS(cfg3.validate(), ConfigError);

  RunConfig cfg4;
  cfg4.initial.type = "bkw";
  cfg4.initial.k_shape = 0.5;  // profile goes negative below 3/5
  CHECK_THROWS_AS(cfg4.validate(), ConfigError);
}

TEST_CASE("unknown keys and malformed lines are configuration errors") {
  CHECK_THROWS_AS(parse_config_text("[grid]\nn_pionts = 8\n", "inline"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nn_points\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nonsense]\nx = 1\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nn_points = eight\n", "inline"),
                  ConfigError);
}

TEST_CASE("serialization round-trips and hashes stably") {
  const std::string text =
      "[grid]\nn_points = 24\nhalf_width = 5.5\n[cross_section]\ngamma = 0.5\n"
      "[time]\ndt = 0.015\n[run]\nseed = 4321\n";
  const auto cfg = parse_config_text(text, "inline");
  const auto rendered = serialize_config(cfg);
  const auto back = parse_config_text(rendered, "round-trip");
  CHECK(serialize_config(back) == rendered);
  CHECK(config_hash(back) == config_hash(cfg));

  auto other = cfg;
  other.run.seed = 4322;
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("fnv1a matches its reference values") {
  // Published reference vectors for 64-bit FNV-1a.
  CHECK(fnv1a("", 0) == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a", 1) == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar", 6) == 0x85944171f73967e8ull);
}
