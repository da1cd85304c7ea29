#include "ncrpg/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncrpg/errors.hpp"

namespace ncrpg {

namespace {

// u*coth(u), stable at u = 0 (series 1 + u^2/3 - u^4/45 for small u).
double u_coth_u(double u) {
  if (u < 1e-4) {
    double u2 = u * u;
    return 1.0 + u2 / 3.0 - u2 * u2 / 45.0;
  }
  return u / std::tanh(u);
}

// u*cot(u) for u in [0, pi), stable at u = 0 (series 1 - u^2/3 - u^4/45).
double u_cot_u(double u) {
  if (u < 1e-4) {
    double u2 = u * u;
    return 1.0 - u2 / 3.0 - u2 * u2 / 45.0;
  }
  return u * std::cos(u) / std::sin(u);
}

}  // namespace

double zeta1(double kappa, double s) {
  if (s < 0.0) throw DomainError("zeta1: s must be nonnegative");
  if (kappa >= 0.0) return 1.0;
  if (std::isinf(s) || std::isinf(kappa)) return kInf;
  return u_coth_u(std::sqrt(-kappa) * s);
}

double zeta2(double kappa, double s) {
  if (s < 0.0) throw DomainError("zeta2: s must be nonnegative");
  if (kappa <= 0.0) return 1.0;
  double u = std::sqrt(kappa) * s;
  if (u >= M_PI) {
    std::ostringstream msg;
    msg << "zeta2: s = " << s << " is outside [0, pi_kappa) for kappa = "
        << kappa;
    throw DomainError(msg.str());
  }
  return u_cot_u(u);
}

double sigma_interval(double kappa_min, double kappa_max, double s) {
  return std::max(zeta1(kappa_min, s), std::abs(zeta2(kappa_max, s)));
}

double pi_kappa(double kappa) {
  if (kappa <= 0.0) return kInf;
  return M_PI / std::sqrt(kappa);
}

double lambda_delta(double delta, const LevelSetBounds& bounds,
                    double kappa_max) {
  if (delta <= 0.0) throw DomainError("lambda_delta: delta must be positive");
  if (kappa_max <= 0.0) return kInf;
  double dh = bounds.h_hi - bounds.h_lo;
  if (dh < 0.0) throw InvalidConfig("lambda_delta: h_hi < h_lo");
  double pik = pi_kappa(kappa_max);
  double G = bounds.G_bar;
  if (G == 0.0) {
    if (dh == 0.0) return kInf;
    // Degenerate quadratic: 2*lambda*dh = (pik/(2*(2+delta)))^2.
    double c = pik / (2.0 * (2.0 + delta));
    return c * c / (2.0 * dh);
  }
  double q = pik * G / (2.0 + delta);
  return (std::sqrt(4.0 * dh * dh + q * q) - 2.0 * dh) / (2.0 * G * G);
}

double zeta_delta(double delta, double kappa_max) {
  if (delta <= 0.0) throw DomainError("zeta_delta: delta must be positive");
  if (kappa_max <= 0.0) return 1.0;
  return zeta2(kappa_max, pi_kappa(kappa_max) / (2.0 + delta));
}

double decrease_constant_constant_step(double lambda_bar, double lambda_del,
                                       double zeta_del, double L_g) {
  double hi = std::min(lambda_del, zeta_del / L_g);
  if (!(lambda_bar > 0.0) || !(lambda_bar < hi)) {
    std::ostringstream msg;
    msg << "constant stepsize " << lambda_bar
        << " outside the admissible interval (0, " << hi << ")";
    throw InvalidConfig(msg.str());
  }
  return (lambda_bar * zeta_del - lambda_bar * lambda_bar * L_g) / 2.0;
}

double decrease_constant_backtracking(double s, double beta, double eta,
                                      double lambda_del, double zeta_del,
                                      double L_g) {
  if (!(s > 0.0)) throw InvalidConfig("backtracking: initial guess s <= 0");
  if (!(beta > 0.0) || !(beta < zeta_del / 2.0))
    throw InvalidConfig("backtracking: beta outside (0, zeta_delta/2)");
  if (!(eta > 0.0) || !(eta < 1.0))
    throw InvalidConfig("backtracking: eta outside (0, 1)");
  double m = std::min(s, eta * lambda_del);
  m = std::min(m, eta * (zeta_del - 2.0 * beta) / L_g);
  return beta * m;
}

double sigma_kmax(double kappa_min, double kappa_max, double delta, double t,
                  const LevelSetBounds& bounds) {
  if (kappa_max > 0.0) {
    double s = 2.0 * pi_kappa(kappa_max) / (2.0 + delta);
    return sigma_interval(kappa_min, kappa_max, s);
  }
  return sigma_interval(kappa_min, kappa_max, t * bounds.G_bar + bounds.diam);
}

double complexity_iterations(double epsilon, double M, double sigma,
                             double L_g, double f0, double f_opt, double t) {
  if (!(epsilon > 0.0)) throw DomainError("complexity: epsilon must be > 0");
  if (!(M > 0.0)) throw DomainError("complexity: M must be > 0");
  double c = L_g + sigma;
  double k = c * c * (f0 - f_opt) * t * t / (epsilon * epsilon * M) - 1.0;
  return std::max(0.0, std::ceil(k));
}

}  // namespace ncrpg
