#include <catch2/catch_amalgamated.hpp>

#include "qtm/env.hpp"
#include "qtm/verify.hpp"

using namespace qtm;

namespace {

EnvConfig two_level_cfg() {
  EnvConfig c;
  c.model.kind = ModelKind::TwoLevel;
  c.model.E0 = 2.5;
  c.baths.hot = {1.0, 1.0, 0, 0, 0};
  c.baths.cold = {2.0, 1.0, 0, 0, 0};
  c.u_min = 0.3;
  c.u_max = 1.0;
  c.dt = 0.5;
  return c;
}

EnvConfig fridge_cfg() {
  EnvConfig c;
  c.model.kind = ModelKind::Fridge;
  c.model.E0 = 1.0;
  c.model.delta = 0.12;
  c.baths.hot = {10.0 / 3.0, 0, 1.0, 30.0, 1.0283968105745953};
  c.baths.cold = {20.0 / 3.0, 0, 1.0, 30.0, 0.24};
  c.u_min = 0.0;
  c.u_max = 0.75;
  c.dt = 0.98;
  return c;
}

EnvConfig oscillator_cfg() {
  EnvConfig c;
  c.model.kind = ModelKind::Oscillator;
  c.model.omega0 = 2.0;
  c.model.mass = 1.0;
  c.model.fock_cutoff = 60;
  c.baths.hot = {0.2, 0.6, 0, 0, 0};
  c.baths.cold = {2.0, 0.6, 0, 0, 0};
  c.u_min = 0.5;
  c.u_max = 1.0;
  c.dt = 0.2;
  return c;
}

}  // namespace

TEST_CASE("reset places each system in the cold thermal state at the mid control") {
  SECTION("two-level") {
    TwoLevelEnv env(two_level_cfg());
    RVec o = env.reset();
    double u0 = 0.65;
    REQUIRE(o(1) == u0);
    REQUIRE(o(0) == Catch::Approx(1.0 / (1.0 + std::exp(2.0 * u0 * 2.5))).epsilon(1e-14));
  }
  SECTION("two-level, infinite-temperature limit") {
    EnvConfig c = two_level_cfg();
    c.baths.hot.beta = 1e-13;
    c.baths.cold.beta = 2e-13;
    TwoLevelEnv env(c);
    REQUIRE(env.reset()(0) == Catch::Approx(0.5).margin(1e-10));
  }
  SECTION("fridge starts diagonal in the instantaneous eigenbasis") {
    FridgeEnv env(fridge_cfg());
    RVec o = env.reset();
    double gap = 2.0 * std::sqrt(0.12 * 0.12 + 0.375 * 0.375);
    REQUIRE(o(0) == Catch::Approx(1.0 / (1.0 + std::exp(20.0 / 3.0 * gap))).epsilon(1e-12));
    REQUIRE(o(1) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(o(2) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(o(3) == 0.75 / 2);
  }
  SECTION("oscillator thermal moments") {
    OscillatorEnv env(oscillator_cfg());
    env.reset();
    double w = 0.75 * 2.0;
    REQUIRE(env.H == Catch::Approx(0.5 * w / std::tanh(0.5 * 2.0 * w)).epsilon(1e-14));
    REQUIRE(env.L == 0.0);
    REQUIRE(env.D == 0.0);
  }
  SECTION("oscillator zero-temperature limit is the ground state") {
    EnvConfig c = oscillator_cfg();
    c.baths.cold.beta = 1e4;
    OscillatorEnv env(c);
    env.reset();
    REQUIRE(env.H == Catch::Approx(0.75).margin(1e-12));
  }
}

TEST_CASE("observations encode the documented layouts") {
  SECTION("two-level is the identity encoding (p, u)") {
    TwoLevelEnv env(two_level_cfg());
    env.p = 0.3;
    env.u = 0.7;
    RVec o = env.observe();
    REQUIRE(o(0) == 0.3);
    REQUIRE(o(1) == 0.7);
  }
  SECTION("oscillator log-compression with sign channels, sign(0) = 0") {
    OscillatorEnv env(oscillator_cfg());
    env.H = 1.0;
    env.L = 0.0;
    env.D = -0.5;
    env.u = 0.6;
    RVec o = env.observe();
    REQUIRE(o(0) == Catch::Approx(std::log(1.0 + 1e-20)).margin(1e-18));
    REQUIRE(o(1) == Catch::Approx(-46.0517018598809).epsilon(1e-12));  // log(1e-20)
    REQUIRE(o(2) == Catch::Approx(std::log(0.5 + 1e-20)).epsilon(1e-14));
    REQUIRE(o(3) == 0.0);
    REQUIRE(o(4) == -1.0);
    REQUIRE(o(5) == 0.6);
  }
}

TEST_CASE("a step with unchanged control and no bath is a free step") {
  SECTION("two-level") {
    TwoLevelEnv env(two_level_cfg());
    RVec o0 = env.reset();
    auto r = env.step({kNone, o0(1)});
    REQUIRE(r.reward == 0.0);
    REQUIRE(r.work_in == 0.0);
    REQUIRE(r.obs(0) == o0(0));
  }
  SECTION("oscillator: energy exactly conserved, quadratures rotate") {
    OscillatorEnv env(oscillator_cfg());
    env.reset();
    env.L = 0.1;
    env.D = -0.05;
    double H0 = env.H, w = env.u * 2.0;
    double mag0 = env.L * env.L + 0.25 * w * w * env.D * env.D;
    auto r = env.step({kNone, env.u});
    REQUIRE(r.reward == 0.0);
    REQUIRE(env.H == H0);
    double mag1 = env.L * env.L + 0.25 * w * w * env.D * env.D;
    REQUIRE(mag1 == Catch::Approx(mag0).epsilon(1e-12));
  }
}

TEST_CASE("two-level relaxation saturates at the Fermi population of the coupled bath") {
  TwoLevelEnv env(two_level_cfg());
  env.reset();
  for (int i = 0; i < 60; ++i) env.step({kHot, 1.0});
  REQUIRE(env.p == Catch::Approx(0.07585818002124355).margin(1e-12));
}

TEST_CASE("oscillator frequency jump remixes H and L") {
  OscillatorEnv env(oscillator_cfg());
  env.reset();
  env.H = 2.0;
  env.L = 0.0;
  env.D = 0.0;
  env.u = 0.5;
  auto r = env.step({kNone, 1.0});  // ratio (1/0.5)^2 = 4
  REQUIRE(r.work_in == Catch::Approx(1.5 * 2.0).epsilon(1e-14));
  REQUIRE(env.H == Catch::Approx(2.5 * 2.0).epsilon(1e-14));
  double w = 2.0;
  double mag = std::sqrt(env.L * env.L + 0.25 * w * w * env.D * env.D);
  REQUIRE(mag == Catch::Approx(1.5 * 2.0).epsilon(1e-12));  // |L'| preserved by rotation
}

TEST_CASE("per-step first law holds on random trajectories") {
  auto tl = verify::conservation_env(two_level_cfg(), "two_level", 200, 91);
  INFO(tl.detail);
  REQUIRE(tl.pass);
  auto fr = verify::conservation_env(fridge_cfg(), "fridge", 100, 92);
  REQUIRE(fr.pass);
  auto os = verify::conservation_env(oscillator_cfg(), "oscillator", 200, 93);
  REQUIRE(os.pass);
}

TEST_CASE("over a closed cycle, extracted work equals net heat") {
  TwoLevelEnv env(two_level_cfg());
  env.reset();
  std::vector<HybridAction> cycle = {{kHot, 0.9}, {kHot, 0.9}, {kCold, 0.55}, {kNone, 0.4}};
  for (int k = 0; k < 400; ++k) env.step(cycle[k % 4]);  // settle on the periodic orbit
  double heat = 0, work = 0;
  for (const auto& a : cycle) {
    auto r = env.step(a);
    heat += (r.heat_hot + r.heat_cold);
    work += r.work_in;
  }
  REQUIRE(heat == Catch::Approx(-work).margin(1e-7 * std::abs(heat)));
}

TEST_CASE("identical action sequences give bit-identical trajectories") {
  EnvConfig c = oscillator_cfg();
  OscillatorEnv a(c), b(c);
  a.reset();
  b.reset();
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    HybridAction act = verify::random_action(a, rng);
    a.step(act);
    b.step(act);
  }
  REQUIRE(a.H == b.H);
  REQUIRE(a.L == b.L);
  REQUIRE(a.D == b.D);
}

TEST_CASE("actions are validated") {
  TwoLevelEnv env(two_level_cfg());
  env.reset();
  REQUIRE_THROWS_AS(env.step({kHot, 0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(env.step({7, 0.5}), std::invalid_argument);
  FridgeEnv fr(fridge_cfg());
  REQUIRE_THROWS_AS(fr.step({1, 0.3}), std::invalid_argument);
}

TEST_CASE("configuration constraints are enforced at construction") {
  EnvConfig c = two_level_cfg();
  c.baths.cold.beta = 0.5;  // colder bath must be colder
  REQUIRE_THROWS_AS(TwoLevelEnv(c), std::invalid_argument);
  EnvConfig c2 = two_level_cfg();
  c2.u_min = 1.2;
  REQUIRE_THROWS_AS(TwoLevelEnv(c2), std::invalid_argument);
  REQUIRE_THROWS_AS(FridgeEnv(two_level_cfg()), std::invalid_argument);
}

TEST_CASE("action labels round-trip") {
  auto env = make_environment(two_level_cfg());
  for (int d = 0; d < env->n_actions(); ++d)
    REQUIRE(env->parse_action_label(env->action_label(d)) == d);
  auto fr = make_environment(fridge_cfg());
  REQUIRE(fr->parse_action_label("Both") == 0);
  REQUIRE_THROWS_AS(fr->parse_action_label("Hot"), std::invalid_argument);
}

TEST_CASE("fast environments match the dense oracle on random protocols") {
  auto tl = verify::oracle_two_level(two_level_cfg(), 6, 30, 1000);
  INFO(tl.value);
  REQUIRE(tl.pass);

  auto fr = verify::oracle_fridge(fridge_cfg(), 6, 30, 2000);
  INFO(fr.value);
  REQUIRE(fr.pass);

  auto os = verify::oracle_oscillator(oscillator_cfg(), 3, 30, 3000);
  INFO(os.value << " " << os.detail);
  REQUIRE(os.pass);
}
