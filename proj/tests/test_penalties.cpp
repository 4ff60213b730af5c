#include <random>

#include "doctest.h"
#include "sbpsat/assembly.hpp"
#include "sbpsat/penalties.hpp"
#include "support.hpp"

using namespace sbpsat;
using namespace sbpsat::penalties;
using factorization::extract_rotation;
using factorization::factor_symmetric;
using factorization::scalar_family;
using linalg::norm_fro;

TEST_CASE("scalar Dirichlet closed form") {
  const double a = 1.0, eps = 0.1, w = 2.0, q = 10.0;
  const auto p = scalar_penalties(a, eps, 1, 0, 1, 0, w, q);
  CHECK(p.mu0(0, 0) == doctest::Approx(-(a + w) / 2 - q * eps));
  CHECK(p.nu0(0, 0) == doctest::Approx(-eps));
  CHECK(p.muN(0, 0) == doctest::Approx((a - w) / 2 - q * eps));
  CHECK(p.nuN(0, 0) == doctest::Approx(eps));
}

TEST_CASE("infinite omega limit") {
  const auto p = scalar_penalties(0.0, 0.01, 0, 1, 0, 1, kInfiniteOmega, 50);
  CHECK(p.mu0(0, 0) == doctest::Approx(0.01));
  CHECK(p.muN(0, 0) == doctest::Approx(-0.01));
  CHECK(p.nu0(0, 0) == 0.0);
  try {
    scalar_penalties(0.0, 0.01, 1, 0, 1, 0, kInfiniteOmega, 50);
    FAIL("expected SingularPenaltyDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularPenaltyDenominator);
  }
}

TEST_CASE("property: closed forms match the general construction for any scalar factorization") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.2, 3.0);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    const double a = 2 * u(rng), eps = 0.05 * pos(rng), w = pos(rng), q = 5 * pos(rng);
    const double aL = u(rng), bL = u(rng) * eps, aR = u(rng), bR = u(rng) * eps;
    const double s1 = pos(rng), s2 = pos(rng);
    ParabolicPenalties closed;
    try {
      closed = scalar_penalties(a, eps, aL, bL, aR, bR, w, q);
    } catch (const Error&) {
      continue;
    }
    const auto f = scalar_family(a, eps, w, s1, s2);
    const Matrix BL{{aL, bL}}, BR{{aR, bR}};
    factorization::BoundaryRotation rot;
    try {
      rot = extract_rotation(BL, BR, f);
    } catch (const Error&) {
      continue;
    }
    const auto gen = parabolic_theorem2(f, rot, Matrix{{bL / eps}}, Matrix{{bR / eps}}, q);
    const double tol = 1e-9 * (1 + std::abs(closed.mu0(0, 0)) + std::abs(closed.muN(0, 0)));
    CHECK(std::abs(gen.mu0(0, 0) - closed.mu0(0, 0)) <= tol);
    CHECK(std::abs(gen.nu0(0, 0) - closed.nu0(0, 0)) <= tol);
    CHECK(std::abs(gen.muN(0, 0) - closed.muN(0, 0)) <= tol);
    CHECK(std::abs(gen.nuN(0, 0) - closed.nuN(0, 0)) <= tol);
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("omega modes") {
  const double a = -2.0, eps = 0.5, q = 10.0;
  CHECK(resolve_omega(parse_omega_mode("eigen"), a, eps, q) == doctest::Approx(std::sqrt(5.0)));
  CHECK(resolve_omega(parse_omega_mode("q_eps"), a, eps, q) == doctest::Approx(5.0));
  CHECK(resolve_omega(parse_omega_mode("abs_a"), a, eps, q) == doctest::Approx(2.0));
  CHECK(resolve_omega(parse_omega_mode("abs_a_plus_q_eps"), a, eps, q) == doctest::Approx(7.0));
  CHECK(std::isinf(resolve_omega(parse_omega_mode("inf"), a, eps, q)));
  CHECK(resolve_omega(parse_omega_mode("value:3.5"), a, eps, q) == doctest::Approx(3.5));
  CHECK(to_string(parse_omega_mode("q_eps")) == "q_eps");
  try {
    parse_omega_mode("sideways");
    FAIL("expected InvalidOmega");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidOmega);
    CHECK(std::string(e.what()).find("q_eps") != std::string::npos);
  }
  CHECK_THROWS_AS(resolve_omega(parse_omega_mode("abs_a"), 0.0, eps, q), Error);
}

TEST_CASE("flavor names round-trip") {
  for (auto f : {Flavor::theorem2, Flavor::method1, Flavor::method2, Flavor::ns_alternative})
    CHECK(parse_flavor(to_string(f)) == f);
  CHECK_THROWS_AS(parse_flavor("best"), Error);
}

namespace {

struct Hyperbolic {
  Matrix A{{1.0, 0.5}, {0.5, -1.0}};
  factorization::SignedFactorization f = factor_symmetric(A);
  Matrix BL{{1.0, 0.3}}, BR{{0.2, 1.0}};
};

}  // namespace

TEST_CASE("hyperbolic Gamma = 0 penalties satisfy duality") {
  Hyperbolic h;
  const auto rot = extract_rotation(h.BL, h.BR, h.f);
  const auto p = hyperbolic_dual_penalties(h.f, rot, hyperbolic_theorem1(h.f, rot));
  const auto r = hyperbolic_duality_residuals(h.A, h.BL, h.BR, h.f, rot, p);
  CHECK(r.left <= 1e-12 * r.scale);
  CHECK(r.right <= 1e-12 * r.scale);
}

TEST_CASE("property: any Gamma gives dual-consistent hyperbolic penalties") {
  Hyperbolic h;
  const auto rot = extract_rotation(h.BL, h.BR, h.f);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix g0 = sbpsat::testing::random_matrix(rng, 1, 1), gN = sbpsat::testing::random_matrix(rng, 1, 1);
    const auto p = hyperbolic_dual_penalties(h.f, rot, hyperbolic_penalties(h.f, rot, g0, gN));
    const auto r = hyperbolic_duality_residuals(h.A, h.BL, h.BR, h.f, rot, p);
    CHECK(r.left <= 1e-12 * r.scale);
    CHECK(r.right <= 1e-12 * r.scale);
  }
}

TEST_CASE("tampered Pi is reported as a duality violation") {
  Hyperbolic h;
  const auto rot = extract_rotation(h.BL, h.BR, h.f);
  auto p = hyperbolic_theorem1(h.f, rot);
  p.Pi0(0, 0) += 0.5;
  try {
    hyperbolic_dual_penalties(h.f, rot, p);
    FAIL("expected DualityViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DualityViolated);
  }
}

TEST_CASE("an ill-posed boundary condition is rejected") {
  // Prescribing the outgoing characteristic at the left with large weight on the incoming one.
  const Matrix A{{1.0, 0.0}, {0.0, -1.0}};
  const auto f = factor_symmetric(A);
  const auto rot = extract_rotation(Matrix{{1.0, 5.0}}, Matrix{{0.0, 1.0}}, f);
  try {
    hyperbolic_theorem1(f, rot);
    FAIL("expected NotWellPosed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotWellPosed);
  }
}

TEST_CASE("comparison penalties have the expected shapes") {
  CHECK(method1_penalties(1.0, 0.1, 10).mu0(0, 0) == doctest::Approx(-0.5 - 0.25));
  CHECK(method2_penalties(1.0, 0.1).nu0(0, 0) == doctest::Approx(0.1));
  const auto ns = ns_alternative_penalties(NsParameters{});
  CHECK(ns.mu0.rows() == 3);
  CHECK(ns.muN.rows() == 3);
}
