#pragma once

#include <utility>

#include <bellman/params.hpp>

namespace bellman {

/// One-dimensional kernels on [1, c]:
///
///   phi(t)    = 2 - 1/t - ln(t)/(2c)        increasing, 1 <= phi <= 2
///   psi(t)    = 1 / (t phi(t))              satisfies psi <= 1/t
///   psihat(t) = t psi(t) = 1 / phi(t)
///
/// and their first two derivatives in closed form:
///
///   phi'(t)    = (2c - t) / (2c t^2)         >= 0
///   phi''(t)   = -(4c - t) / (2c t^3)        <= 0
///   psihat'(t)  = -phi'/phi^2
///   psihat''(t) = (2 phi'^2 - phi phi'') / phi^3
struct KernelValue {
  double t;
  double phi;
  double phi_d1;
  double phi_d2;
  double psi;
  double psi_hat;
  double psi_hat_d1;
  double psi_hat_d2;
};

/// Arguments within 1e-12*c outside [1, c] are clamped onto the closed
/// interval (grid scans land on the endpoints); anything further out throws
/// std::domain_error.
double clamp_to_domain(double t, const DomainParams& params);

double eval_phi(double t, const DomainParams& params);

/// phi(t) - 1, free of cancellation near t = 1 where it vanishes.
double eval_phi_minus_one(double t, const DomainParams& params);

/// (phi'(t), phi''(t)).
std::pair<double, double> eval_phi_derivatives(double t, const DomainParams& params);

KernelValue eval_psi_family(double t, const DomainParams& params);

}  // namespace bellman
