#include "sbpsat/penalties.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sbpsat::penalties {

using factorization::checked_inverse;
using linalg::norm_fro;

namespace {

Matrix diag_inverse(const Matrix& d) {
  Matrix m(d.rows(), d.cols());
  for (std::size_t i = 0; i < d.rows(); ++i) m(i, i) = 1.0 / d(i, i);
  return m;
}

double delta_scale(const SignedFactorization& f) {
  double s = 0.0;
  for (double d : f.delta) s = std::max(s, std::abs(d));
  return s > 0 ? s : 1.0;
}

}  // namespace

HyperbolicPenalties hyperbolic_penalties(const SignedFactorization& f, const BoundaryRotation& rot,
                                         const Matrix& Gamma0, const Matrix& GammaN) {
  const auto [mp, m0, mm] = f.inertia;
  if (Gamma0.rows() != mm || Gamma0.cols() != mp || GammaN.rows() != mp || GammaN.cols() != mm)
    throw Error(ErrorKind::ShapeMismatch, "Gamma_0 must be m- x m+ and Gamma_N m+ x m-");
  const Matrix Zp = f.Z_plus(), Zm = f.Z_minus();
  const Matrix Dp = f.Delta_plus(), Dm = f.Delta_minus();
  HyperbolicPenalties p;
  p.Gamma0 = Gamma0;
  p.GammaN = GammaN;
  p.Pi0 = -Dp - Dp * rot.R_L * diag_inverse(Dm) * Gamma0;
  p.PiN = Dm - Dm * rot.R_R * diag_inverse(Dp) * GammaN;
  const Matrix PLi = checked_inverse(rot.P_L, 1e-10, ErrorKind::SingularP, "P_L is singular");
  const Matrix PRi = checked_inverse(rot.P_R, 1e-10, ErrorKind::SingularP, "P_R is singular");
  p.Sigma0 = (Zp * p.Pi0 + Zm * Gamma0) * PLi;
  p.SigmaN = (Zp * GammaN + Zm * p.PiN) * PRi;
  return p;
}

HyperbolicPenalties hyperbolic_theorem1(const SignedFactorization& f, const BoundaryRotation& rot) {
  const auto wp = factorization::check_wellposedness(f, rot);
  if (!wp.well_posed) throw Error(ErrorKind::NotWellPosed, "boundary conditions do not bound the energy");
  const auto [mp, m0, mm] = f.inertia;
  return hyperbolic_dual_penalties(f, rot, hyperbolic_penalties(f, rot, Matrix(mm, mp), Matrix(mp, mm)));
}

HyperbolicPenalties hyperbolic_dual_penalties(const SignedFactorization& f, const BoundaryRotation& rot,
                                              HyperbolicPenalties p) {
  const Matrix Dp = f.Delta_plus(), Dm = f.Delta_minus();
  const double scale = delta_scale(f);
  const Matrix want0 = -Dp - Dp * rot.R_L * diag_inverse(Dm) * p.Gamma0;
  const Matrix wantN = Dm - Dm * rot.R_R * diag_inverse(Dp) * p.GammaN;
  if (norm_fro(p.Pi0 - want0) > 1e-10 * scale || norm_fro(p.PiN - wantN) > 1e-10 * scale)
    throw Error(ErrorKind::DualityViolated, "Pi blocks do not satisfy the duality demand");
  p.Gamma0_dual = p.Gamma0.transpose();
  p.Pi0_dual = Dm - Dm * rot.R_L_dual * diag_inverse(Dp) * p.Gamma0_dual;
  p.GammaN_dual = p.GammaN.transpose();
  p.PiN_dual = -Dp - Dp * rot.R_R_dual * diag_inverse(Dm) * p.GammaN_dual;
  p.Sigma0_dual = f.Z_plus() * p.Gamma0_dual + f.Z_minus() * p.Pi0_dual;
  p.SigmaN_dual = f.Z_plus() * p.PiN_dual + f.Z_minus() * p.GammaN_dual;
  return p;
}

HyperbolicDualityResiduals hyperbolic_duality_residuals(const Matrix& A, const Matrix& B_L, const Matrix& B_R,
                                                        const SignedFactorization& f, const BoundaryRotation& rot,
                                                        const HyperbolicPenalties& p) {
  HyperbolicDualityResiduals r;
  const Matrix BtL = factorization::dual_boundary_left(f, rot);
  const Matrix BtR = factorization::dual_boundary_right(f, rot);
  r.left = norm_fro(B_L.transpose() * p.Sigma0.transpose() + A - p.Sigma0_dual * BtL);
  r.right = norm_fro(B_R.transpose() * p.SigmaN.transpose() - A - p.SigmaN_dual * BtR);
  r.scale = std::max(norm_fro(A), 1e-300);
  return r;
}

Flavor parse_flavor(const std::string& s) {
  if (s == "theorem2") return Flavor::theorem2;
  if (s == "method1") return Flavor::method1;
  if (s == "method2") return Flavor::method2;
  if (s == "ns_alternative") return Flavor::ns_alternative;
  throw Error(ErrorKind::InvalidArgument,
              "unknown penalty flavor '" + s + "' (allowed: theorem2, method1, method2, ns_alternative)");
}

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::theorem2: return "theorem2";
    case Flavor::method1: return "method1";
    case Flavor::method2: return "method2";
    case Flavor::ns_alternative: return "ns_alternative";
    case Flavor::custom: return "custom";
  }
  return "?";
}

double BoundaryConditionSpec::scaling_residual(const Matrix& E) const {
  auto one = [&](const Matrix& G, const Matrix& K) {
    if (G.empty()) return 0.0;
    const double s = std::max({norm_fro(G), norm_fro(E), 1e-300});
    return norm_fro(G - K * E) / s;
  };
  return std::max(one(G_L, K_L), one(G_R, K_R));
}

ParabolicPenalties parabolic_theorem2(const SignedFactorization& fbar, const BoundaryRotation& rot,
                                      const Matrix& K_L, const Matrix& K_R, double q) {
  if (!(q > 0.0)) throw Error(ErrorKind::InvalidArgument, "q must be positive");
  const std::size_t m = fbar.size();
  if (m % 2 != 0) throw Error(ErrorKind::ShapeMismatch, "first-order factorization must have even size");
  const std::size_t n = m / 2;
  const auto [mp, m0, mm] = fbar.inertia;
  if (K_L.rows() != mp || K_L.cols() != n || K_R.rows() != mm || K_R.cols() != n)
    throw Error(ErrorKind::ShapeMismatch, "K_L must be m+ x n and K_R m- x n");
  const Matrix Zp = fbar.Z_plus(), Zm = fbar.Z_minus();
  const Matrix Z1 = Zp.block(0, 0, n, mp), Z2 = Zp.block(n, 0, n, mp);
  const Matrix Z3 = Zm.block(0, 0, n, mm), Z4 = Zm.block(n, 0, n, mm);
  const Matrix Dp = fbar.Delta_plus(), Dm = fbar.Delta_minus();

  const Matrix denL = rot.P_L + q * (K_L * Z2 * Dp);
  const Matrix denR = rot.P_R - q * (K_R * Z4 * Dm);
  const Matrix iL = checked_inverse(denL, 1e-12, ErrorKind::SingularPenaltyDenominator, "left penalty denominator");
  const Matrix iR = checked_inverse(denR, 1e-12, ErrorKind::SingularPenaltyDenominator, "right penalty denominator");

  ParabolicPenalties p;
  p.flavor = Flavor::theorem2;
  p.q_used = q;
  p.mu0 = (-Z1 + q * Z2) * Dp * iL;
  p.nu0 = Z2 * Dp * iL;
  p.muN = (Z3 + q * Z4) * Dm * iR;
  p.nuN = -(Z4 * Dm * iR);
  return p;
}

ParabolicPenalties scalar_penalties(double a, double eps, double alphaL, double betaL, double alphaR, double betaR,
                                    double omega, double q) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidOmega, "omega must be > 0");
  ParabolicPenalties p;
  p.flavor = Flavor::theorem2;
  p.q_used = q;
  double mu0, nu0, muN, nuN;
  if (std::isinf(omega)) {
    // numerator and denominator both grow like omega
    if (betaL == 0.0 || betaR == 0.0)
      throw Error(ErrorKind::SingularPenaltyDenominator, "omega = inf needs a derivative term at both ends");
    mu0 = eps / betaL;
    nu0 = 0.0;
    muN = -eps / betaR;
    nuN = 0.0;
  } else {
    const double dL = alphaL + betaL * (a - omega) / (2 * eps) - q * betaL;
    const double dR = alphaR + betaR * (a + omega) / (2 * eps) + q * betaR;
    const double sL = std::abs(alphaL) + std::abs(betaL) * (std::abs(a) + omega + 2 * q * eps) / (2 * eps);
    const double sR = std::abs(alphaR) + std::abs(betaR) * (std::abs(a) + omega + 2 * q * eps) / (2 * eps);
    if (std::abs(dL) <= 1e-12 * sL || std::abs(dR) <= 1e-12 * sR)
      throw Error(ErrorKind::SingularPenaltyDenominator, "boundary condition and omega are incompatible");
    mu0 = (-(a + omega) / 2 - q * eps) / dL;
    nu0 = -eps / dL;
    muN = ((a - omega) / 2 - q * eps) / dR;
    nuN = eps / dR;
  }
  p.mu0 = Matrix{{mu0}};
  p.nu0 = Matrix{{nu0}};
  p.muN = Matrix{{muN}};
  p.nuN = Matrix{{nuN}};
  return p;
}

ParabolicPenalties method1_penalties(double a, double eps, double q) {
  ParabolicPenalties p;
  p.flavor = Flavor::method1;
  p.q_used = q;
  p.mu0 = Matrix{{-a / 2 - eps * q / 4}};
  p.nu0 = Matrix{{0.0}};
  p.muN = Matrix{{a / 2 - eps * q / 4}};
  p.nuN = Matrix{{0.0}};
  return p;
}

ParabolicPenalties method2_penalties(double a, double eps) {
  ParabolicPenalties p;
  p.flavor = Flavor::method2;
  p.mu0 = Matrix{{-a / 2}};
  p.nu0 = Matrix{{eps}};
  p.muN = Matrix{{a / 2}};
  p.nuN = Matrix{{-eps}};
  return p;
}

ParabolicPenalties ns_alternative_penalties(const NsParameters& c) {
  ParabolicPenalties p;
  p.flavor = Flavor::ns_alternative;
  p.mu0 = Matrix{{-c.a, 0}, {0, 0}, {-c.b, c.eps * c.psi}};
  p.nu0 = Matrix{{0, 0}, {c.eps * c.phi, 0}, {0, 0}};
  p.muN = Matrix{{c.ubar, c.a, 0}, {0, c.ubar, 0}, {0, c.b, c.ubar}};
  p.nuN = Matrix{{0, 0, 0}, {0, -c.eps * c.phi, 0}, {0, 0, -c.eps * c.psi}};
  return p;
}

OmegaMode parse_omega_mode(const std::string& s) {
  OmegaMode m;
  if (s == "eigen") m.kind = OmegaMode::eigen;
  else if (s == "q_eps") m.kind = OmegaMode::q_eps;
  else if (s == "abs_a") m.kind = OmegaMode::abs_a;
  else if (s == "abs_a_plus_q_eps") m.kind = OmegaMode::abs_a_plus_q_eps;
  else if (s == "inf") m.kind = OmegaMode::inf;
  else if (s.rfind("value:", 0) == 0) {
    m.kind = OmegaMode::value;
    char* end = nullptr;
    const std::string num = s.substr(6);
    m.value_ = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0') throw Error(ErrorKind::InvalidOmega, "cannot parse '" + s + "'");
  } else {
    throw Error(ErrorKind::InvalidOmega,
                "unknown omega mode '" + s + "' (allowed: eigen, q_eps, abs_a, abs_a_plus_q_eps, inf, value:<x>)");
  }
  return m;
}

std::string to_string(const OmegaMode& m) {
  switch (m.kind) {
    case OmegaMode::eigen: return "eigen";
    case OmegaMode::q_eps: return "q_eps";
    case OmegaMode::abs_a: return "abs_a";
    case OmegaMode::abs_a_plus_q_eps: return "abs_a_plus_q_eps";
    case OmegaMode::inf: return "inf";
    case OmegaMode::value: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "value:%.17g", m.value_);
      return buf;
    }
  }
  return "?";
}

double resolve_omega(const OmegaMode& m, double a, double eps, double q) {
  double w = 0.0;
  switch (m.kind) {
    case OmegaMode::eigen: w = factorization::eigen_omega(a, eps); break;
    case OmegaMode::q_eps: w = q * eps; break;
    case OmegaMode::abs_a: w = std::abs(a); break;
    case OmegaMode::abs_a_plus_q_eps: w = std::abs(a) + q * eps; break;
    case OmegaMode::inf: return kInfiniteOmega;
    case OmegaMode::value: w = m.value_; break;
  }
  if (!(w > 0.0)) throw Error(ErrorKind::InvalidOmega, "omega mode " + to_string(m) + " gives omega <= 0");
  return w;
}

}  // namespace sbpsat::penalties
