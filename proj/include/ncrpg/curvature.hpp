#pragma once

#include <limits>

namespace ncrpg {

// Sectional curvature bounds kappa_min <= sec <= kappa_max. Infinite values
// mean "no bound available" (extended reals propagate through the formulas).
struct CurvatureBounds {
  double kappa_min = 0.0;
  double kappa_max = 0.0;
};

// Bounds on the initial sublevel set of f = g + h:
//   h_lo <= h <= h_hi, ||grad g|| <= G_bar, diameter <= diam, g is L_g-smooth.
struct LevelSetBounds {
  double h_lo = 0.0;
  double h_hi = std::numeric_limits<double>::infinity();
  double G_bar = std::numeric_limits<double>::infinity();
  double diam = std::numeric_limits<double>::infinity();
  double L_g = std::numeric_limits<double>::infinity();
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Comparison-theorem Hessian bounds for 0.5*dist(., q)^2 along a geodesic of
// length s: the eigenvalues lie in [zeta2(kappa_max, s), zeta1(kappa_min, s)].

// zeta1(kappa, s) = 1 for kappa >= 0, else sqrt(-kappa)*s*coth(sqrt(-kappa)*s).
// Nondecreasing in s, >= 1, continuous (series expansion near s = 0).
double zeta1(double kappa, double s);

// zeta2(kappa, s) = 1 for kappa <= 0, else sqrt(kappa)*s*cot(sqrt(kappa)*s).
// Defined for s < pi_kappa when kappa > 0; throws DomainError at or beyond.
double zeta2(double kappa, double s);

// sigma(s) = max{zeta1(kappa_min, s), |zeta2(kappa_max, s)|}.
double sigma_interval(double kappa_min, double kappa_max, double s);

// Injectivity-scale constant: +inf for kappa <= 0, else pi/sqrt(kappa).
double pi_kappa(double kappa);

// Largest stepsize keeping the iteration inside the comparison regime:
//   lambda_delta solves 2*lambda*(h_hi - h_lo) + lambda^2*G_bar^2
//                      = (pi_kappa/(2*(2+delta)))^2.
// +inf when kappa_max <= 0 or G_bar = 0 (with h_hi = h_lo).
double lambda_delta(double delta, const LevelSetBounds& bounds,
                    double kappa_max);

// zeta_delta = zeta2(kappa_max, pi_kappa/(2+delta)); 1 for kappa_max <= 0.
double zeta_delta(double delta, double kappa_max);

// Per-step decrease constant M for the constant-stepsize rule:
//   M = (lambda_bar*zeta_delta - lambda_bar^2*L_g)/2,
// valid for lambda_bar in (0, min{lambda_delta, zeta_delta/L_g}).
// Throws InvalidConfig outside the admissible interval.
double decrease_constant_constant_step(double lambda_bar, double lambda_del,
                                       double zeta_del, double L_g);

// Per-step decrease constant for backtracking with initial guess s,
// acceptance slope beta in (0, zeta_delta/2) and shrink factor eta in (0,1):
//   M = beta * min{s, eta*lambda_delta, eta*(zeta_delta - 2*beta)/L_g}.
double decrease_constant_backtracking(double s, double beta, double eta,
                                      double lambda_del, double zeta_del,
                                      double L_g);

// sigma evaluated at the worst-case step length:
//   kappa_max > 0: s = 2*pi_kappa/(2+delta)   (inside the domain of zeta2)
//   kappa_max <= 0: s = t*G_bar + diam.
double sigma_kmax(double kappa_min, double kappa_max, double delta, double t,
                  const LevelSetBounds& bounds);

// Iteration count k guaranteeing min_{n<=k} ||G|| <= epsilon:
//   k = (L_g + sigma)^2 * (f0 - f_opt) * t^2 / (epsilon^2 * M) - 1,
// rounded up and floored at 0.
double complexity_iterations(double epsilon, double M, double sigma,
                             double L_g, double f0, double f_opt, double t);

}  // namespace ncrpg
