#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "gbq/error.hpp"
#include "gbq/evolution.hpp"
#include "gbq/ground_state.hpp"

using namespace gbq;

namespace {

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_diff(const FieldPair& a, const FieldPair& b) {
  return std::max(sup_diff(a.first, b.first), sup_diff(a.second, b.second));
}

FieldPair bumpy_state(const Grid& g) {
  const Field u = sample(g, [](double x) { return 0.8 * std::exp(-0.5 * x * x) * (1.0 + 0.3 * std::sin(x)); });
  const Field v = sample(g, [](double x) { return 0.4 * std::exp(-0.3 * (x - 1) * (x - 1)); });
  return FieldPair(u, v);
}

FieldPair run(const FieldPair& s0, double p, double dt, double t_end) {
  EvolutionConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = 1000000;
  return evolve(s0, p, 0.0, cfg).final_state;
}

}  // namespace

TEST_CASE("linear mode propagator is a rotation") {
  for (double k : {0.0, 0.3, 2.5, 40.0}) {
    const Mat2 m = linear_mode_propagator(k, 0.01);
    CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m[0][0] == doctest::Approx(m[1][1]));
    CHECK(m[0][1] == doctest::Approx(-m[1][0]));
    CHECK(m[0][0] == doctest::Approx(std::cos(k * std::sqrt(1 + k * k) * 0.01)));
  }
}

TEST_CASE("small-amplitude mode follows the linear propagator") {
  const double L = 10.0;
  const Grid g = make_grid(L, 64);
  const double k = 3.0 * std::numbers::pi / L;
  const double A = 1e-6;
  const FieldPair s0(sample(g, [&](double x) { return A * std::cos(k * x); }), Field(g));
  const double dt = 0.01, T = 0.5;
  const FieldPair s = run(s0, 2.0, dt, T);
  const Mat2 m = linear_mode_propagator(k, T);
  const double s_k = std::sqrt(1 + k * k);
  // (q, r) = (s_k A / 2, 0) rotates into u = A m00 cos(kx), v = s_k A m10 sin(kx).
  const Field u = sample(g, [&](double x) { return A * m[0][0] * std::cos(k * x); });
  const Field v = sample(g, [&](double x) { return s_k * A * m[1][0] * std::sin(k * x); });
  CHECK(sup_diff(s.first, u) < 1e-14);
  CHECK(sup_diff(s.second, v) < 1e-14);
}

TEST_CASE("soliton translates at speed omega") {
  const double p = 2.0, w = 0.5;
  const Grid g = make_grid(40, 512);
  const SolitonFamily fam = soliton_profile({p, w}, g);
  const double T = 10.0;
  const FieldPair s = run(fam.pair, p, 5e-3, T);
  const FieldPair exact(translate(fam.pair.first, -w * T), translate(fam.pair.second, -w * T));
  CHECK(sup_diff(s, exact) < 1e-6);
}

TEST_CASE("energy and momentum are conserved") {
  const double p = 2.0;
  const Grid g = make_grid(30, 512);
  const FieldPair s0 = bumpy_state(g);
  EvolutionConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_end = 5.0;
  cfg.record_every = 100;
  const Trajectory tr = evolve(s0, p, 0.5, cfg);
  REQUIRE(tr.termination == Termination::Completed);
  const double e0 = tr.samples.front().conserved.energy;
  const double q0 = tr.samples.front().conserved.momentum;
  double de = 0.0, dq = 0.0;
  for (const auto& smp : tr.samples) {
    de = std::max(de, std::abs(smp.conserved.energy - e0));
    dq = std::max(dq, std::abs(smp.conserved.momentum - q0));
  }
  CHECK(de < 1e-8);
  CHECK(dq < 1e-8);
}

TEST_CASE("fourth-order convergence in dt") {
  const double p = 2.0;
  const Grid g = make_grid(30, 256);
  const FieldPair s0 = bumpy_state(g);
  const double T = 1.0;
  const FieldPair ref = run(s0, p, 0.0025, T);
  const double e1 = sup_diff(run(s0, p, 0.1, T), ref);
  const double e2 = sup_diff(run(s0, p, 0.05, T), ref);
  const double order = std::log2(e1 / e2);
  MESSAGE("observed order " << order);
  CHECK(order > 3.5);
  CHECK(order < 4.6);
}

TEST_CASE("time reversal returns to the initial state") {
  const double p = 3.0;
  const Grid g = make_grid(30, 256);
  FieldPair s = bumpy_state(g);
  const FieldPair s0 = s;
  s = run(s, p, 5e-3, 2.0);
  s.second *= -1.0;
  s = run(s, p, 5e-3, 2.0);
  s.second *= -1.0;
  CHECK(sup_diff(s, s0) < 1e-8);
}

TEST_CASE("blowup guard") {
  const Grid g = make_grid(20, 128);
  FieldPair s = bumpy_state(g);
  SUBCASE("NaN state is reported as blowup") {
    s.first[10] = std::numeric_limits<double>::quiet_NaN();
    const Integrator integ(g, 2.0, 1e-3);
    CHECK_THROWS_AS(integ.step(s, 1e3, 0.0), BlowupError);
  }
  SUBCASE("threshold crossing terminates the run") {
    // A large compressive pulse with negative energy grows without bound.
    const FieldPair big(sample(g, [](double x) { return 4.0 * std::exp(-x * x); }), Field(g));
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5.0;
    cfg.blowup_threshold = 50.0;
    const Trajectory tr = evolve(big, 3.0, 0.0, cfg);
    CHECK(tr.termination == Termination::Blowup);
    CHECK(tr.final_time < cfg.t_end);
    CHECK(!tr.message.empty());
  }
  SUBCASE("threshold below the initial amplitude is rejected") {
    EvolutionConfig cfg;
    cfg.blowup_threshold = 0.1;
    CHECK_THROWS_AS(evolve(s, 2.0, 0.0, cfg), ConfigError);
  }
}

TEST_CASE("record times are exact multiples of dt") {
  const Grid g = make_grid(20, 128);
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.record_every = 7;
  int calls = 0;
  const Trajectory tr = evolve(bumpy_state(g), 2.0, 0.0, cfg, [&](double, const FieldPair&) {
    ++calls;
    return true;
  });
  CHECK(calls == static_cast<int>(tr.samples.size()));
  CHECK(tr.samples.front().t == 0.0);
  CHECK(tr.samples.back().t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tr.samples[1].t == doctest::Approx(0.07).epsilon(1e-15));
}

TEST_CASE("hook can stop the run") {
  const Grid g = make_grid(20, 128);
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.record_every = 10;
  const Trajectory tr = evolve(bumpy_state(g), 2.0, 0.0, cfg, [](double t, const FieldPair&) { return t < 0.3; });
  CHECK(tr.termination == Termination::Stopped);
  CHECK(tr.final_time == doctest::Approx(0.3));
}

TEST_CASE("checkpoint round trip is exact") {
  const Grid g = make_grid(12.5, 64);
  const FieldPair s = bumpy_state(g);
  const std::string path = "test_evolution_checkpoint.csv";
  write_checkpoint(path, 1.25, 2.5, s);
  const Checkpoint cp = read_checkpoint(path);
  CHECK(cp.t == 1.25);
  CHECK(cp.p == 2.5);
  CHECK(cp.state.grid().half_length() == 12.5);
  CHECK(sup_diff(cp.state, s) == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_checkpoint("does_not_exist.csv"), IoError);
}
