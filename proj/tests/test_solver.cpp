#include <cmath>

#include "doctest.h"
#include "sbpsat/solver.hpp"
#include "support.hpp"

using namespace sbpsat;
using namespace sbpsat::solver;
using assembly::SemiDiscreteSystem;
using linalg::Matrix;
using operators::Variant;

namespace {

SemiDiscreteSystem decay(double rate) {
  SemiDiscreteSystem s;
  s.L = Matrix{{rate}};
  s.Hbar = {1.0};
  s.grid = {0.0};
  s.rhs = [](double) { return Vector{0.0}; };
  return s;
}

TimeIntegratorConfig config(Scheme scheme, double dt, double t_end) {
  TimeIntegratorConfig c;
  c.scheme = scheme;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

double rk4_error(double dt) {
  const auto tr = integrate(decay(1.0), config(Scheme::rk4_classic, dt, 1.0), Vector{1.0});
  return std::abs(tr.final_state[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("RK4 on u' = -u reaches exp(-1) with fourth-order error") {
  const double e1 = rk4_error(0.1), e2 = rk4_error(0.05);
  CHECK(e1 <= 1e-5);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("one implicit Euler step of size 1 halves the state") {
  const auto tr = integrate(decay(1.0), config(Scheme::implicit_euler, 1.0, 1.0), Vector{1.0});
  CHECK(tr.steps == 1);
  CHECK(tr.final_state[0] == doctest::Approx(0.5));
}

TEST_CASE("step count rounds so the final time is exact") {
  auto c = config(Scheme::rk4_classic, 0.3, 1.0);
  c.keep_states = true;
  const auto tr = integrate(decay(1.0), c, Vector{1.0});
  CHECK(tr.steps == 4);
  CHECK(tr.final_time == doctest::Approx(1.0));
  CHECK(tr.states.size() == tr.times.size());
}

TEST_CASE("growth past the threshold raises BlowUp") {
  try {
    integrate(decay(-100.0), config(Scheme::rk4_classic, 0.01, 10.0), Vector{1.0});
    FAIL("expected BlowUp");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BlowUp);
  }
}

TEST_CASE("invalid time settings") {
  CHECK_THROWS_AS(config(Scheme::rk4_classic, 0.0, 1.0).validate(), Error);
  CHECK_THROWS_AS(config(Scheme::rk4_classic, 0.5, 0.1).validate(), Error);
  CHECK_THROWS_AS(parse_scheme("leapfrog"), Error);
  CHECK(parse_scheme("rk4") == Scheme::rk4_classic);
  CHECK(parse_scheme(to_string(Scheme::implicit_euler)) == Scheme::implicit_euler);
  CHECK_THROWS_AS(integrate(decay(1.0), config(Scheme::rk4_classic, 0.1, 1.0), Vector{1.0, 2.0}), Error);
}

TEST_CASE("property: homogeneous heat energy does not grow under implicit Euler") {
  for (int order : {2, 4, 6})
    for (auto v : {Variant::wide, Variant::narrow}) {
      testing::Scalar s;
      s.eps = 0.01;
      const auto zero = [](double, double) { return 0.0; };
      auto spec = testing::scalar_problem(s, zero, zero, zero, zero);
      spec.initial = [](double x, double) { return Vector{std::cos(30 * x) + x}; };
      const auto ops = testing::unit_interval(order, v, 32);
      const auto sys = assembly::assemble_parabolic(spec, ops, testing::scalar_theorem2(s, s.eps * ops.q, ops.q));
      double prev = h_norm(sys.sample(spec.initial, 0.0), sys.Hbar);
      bool monotone = true;
      auto c = config(Scheme::implicit_euler, 0.01, 1.0);
      c.observer = [&](double, const Vector& U) {
        const double e = h_norm(U, sys.Hbar);
        monotone = monotone && e <= prev * (1 + 1e-13);
        prev = e;
      };
      integrate(sys, c, sys.sample(spec.initial, 0.0));
      CHECK(monotone);
    }
}

TEST_CASE("steady solution equals the long-time limit") {
  testing::Scalar s;
  s.a = 0.5;
  const auto spec = testing::scalar_problem(
      s, [](double x, double) { return std::sin(2 * x); }, [](double, double) { return 0.0; },
      [](double x, double) { return 2 * std::cos(2 * x); }, [](double x, double) { return -4 * std::sin(2 * x); });
  const auto ops = testing::unit_interval(4, Variant::narrow, 24);
  const auto sys = assembly::assemble_parabolic(spec, ops, testing::scalar_theorem2(s, 1.0, ops.q));
  const Vector steady = solve_steady(sys);
  const auto tr = integrate(sys, config(Scheme::implicit_euler, 0.5, 60.0), Vector(sys.size(), 0.0));
  CHECK(testing::max_diff(tr.final_state, steady) <= 1e-10);
}

TEST_CASE("h_norm uses the diagonal weights") {
  CHECK(h_norm(Vector{1.0, 2.0}, Vector{4.0, 0.25}) == doctest::Approx(std::sqrt(5.0)));
}
