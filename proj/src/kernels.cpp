#include <bellman/kernels.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellman {

double clamp_to_domain(double t, const DomainParams& params) {
  if (t >= 1.0 && t <= params.c) {
    return t;
  }
  const double slack = 1e-12 * params.c;
  if (t < 1.0 && t >= 1.0 - slack) {
    return 1.0;
  }
  if (t > params.c && t <= params.c + slack) {
    return params.c;
  }
  throw std::domain_error("kernel argument t = " + std::to_string(t) +
                          " outside [1, c], c = " + std::to_string(params.c));
}

double eval_phi_minus_one(double t, const DomainParams& params) {
  t = clamp_to_domain(t, params);
  const double u = t - 1.0;
  return u / t - std::log1p(u) / (2.0 * params.c);
}

double eval_phi(double t, const DomainParams& params) {
  return 1.0 + eval_phi_minus_one(t, params);
}

std::pair<double, double> eval_phi_derivatives(double t, const DomainParams& params) {
  t = clamp_to_domain(t, params);
  const double c = params.c;
  const double d1 = (2.0 * c - t) / (2.0 * c * t * t);
  const double d2 = -(4.0 * c - t) / (2.0 * c * t * t * t);
  return {d1, d2};
}

KernelValue eval_psi_family(double t, const DomainParams& params) {
  t = clamp_to_domain(t, params);
  KernelValue k{};
  k.t = t;
  k.phi = eval_phi(t, params);
  const auto [d1, d2] = eval_phi_derivatives(t, params);
  k.phi_d1 = d1;
  k.phi_d2 = d2;
  k.psi_hat = 1.0 / k.phi;
  k.psi_hat_d1 = -d1 / (k.phi * k.phi);
  k.psi_hat_d2 = (2.0 * d1 * d1 - k.phi * d2) / (k.phi * k.phi * k.phi);
  k.psi = k.psi_hat / t;
  return k;
}

}  // namespace bellman
