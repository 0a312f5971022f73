#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <bellman/kernels.hpp>

#include "oracle.hpp"

using namespace bellman;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("phi closed-form values") {
  const DomainParams c2(2.0);
  CHECK(eval_phi(1.0, c2) == 1.0);  // 2 - 1 - 0, exact

  // Frozen from the 50-digit oracle.
  CHECK(rel_err(eval_phi(2.0, c2), 1.3267132048600136726) < 1e-15);
  CHECK(rel_err(eval_phi(1.5, c2), 1.2319670563062922378) < 1e-15);
  const DomainParams c10(10.0);
  CHECK(rel_err(eval_phi(7.3, c10), 1.7636199812224197140) < 1e-15);

  // Same values straight from the oracle, not the frozen literal.
  CHECK(rel_err(eval_phi(2.0, c2), oracle::to_double(oracle::phi(2, 2))) < 1e-15);
  CHECK(rel_err(eval_phi(1.3, c2), oracle::to_double(oracle::phi(oracle::Real(13) / 10, 2))) <
        1e-15);
}

TEST_CASE("phi derivatives: closed forms and endpoint values") {
  const DomainParams c2(2.0);
  const auto [d1, d2] = eval_phi_derivatives(1.0, c2);
  CHECK(d1 == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(d2 == doctest::Approx(-1.75).epsilon(1e-15));

  // phi'(c) = 1/(2c^2)
  for (const double c : {1.1, 2.0, 10.0, 100.0}) {
    const DomainParams params(c);
    const auto derivs = eval_phi_derivatives(c, params);
    CHECK(rel_err(derivs.first, 1.0 / (2.0 * c * c)) < 1e-14);
  }
}

TEST_CASE("kernel identities on dense grids") {
  for (const double c : {1.1, 2.0, 10.0, 100.0}) {
    const DomainParams params(c);
    for (int i = 0; i <= 2000; ++i) {
      const double t = 1.0 + (c - 1.0) * i / 2000.0;
      const auto [d1, d2] = eval_phi_derivatives(t, params);
      const double phi = eval_phi(t, params);

      // 2 phi' + t phi'' = -1/(2ct)
      CHECK(std::abs(2.0 * d1 + t * d2 + 1.0 / (2.0 * c * t)) <=
            1e-12 * std::abs(1.0 / (2.0 * c * t)));
      // phi + t phi' = 2 - ln(t)/(2c) - 1/(2c) <= 2
      const double lhs = phi + t * d1;
      const double rhs = 2.0 - std::log(t) / (2.0 * c) - 1.0 / (2.0 * c);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
      CHECK(lhs <= 2.0);
      // -phi phi'' / phi' <= 8/t
      CHECK(-phi * d2 / d1 <= 8.0 / t * (1.0 + 1e-12));

      CHECK(phi >= 1.0 - 1e-15);
      CHECK(phi <= 2.0);
      CHECK(d1 >= 0.0);
      CHECK(d2 <= 0.0);
    }
  }
}

TEST_CASE("psi family") {
  const DomainParams c2(2.0);
  const KernelValue k1 = eval_psi_family(1.0, c2);
  CHECK(k1.psi == 1.0);
  CHECK(k1.psi_hat == 1.0);
  CHECK(k1.psi_hat_d1 == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(k1.psi_hat_d2 == doctest::Approx(2.875).epsilon(1e-15));

  const KernelValue k2 = eval_psi_family(2.0, c2);
  CHECK(rel_err(k2.psi, 0.37687120183050926627) < 1e-15);
  CHECK(rel_err(k2.psi_hat, 0.75374240366101853253) < 1e-15);
  CHECK(rel_err(k2.psi_hat_d1, -0.071015951384586225464) < 1e-14);
  CHECK(rel_err(k2.psi_hat_d2, 0.11990586055060235287) < 1e-14);

  std::mt19937_64 rng(7);
  for (const double c : {1.5, 2.0, 4.0, 10.0}) {
    const DomainParams params(c);
    for (int i = 0; i < 300; ++i) {
      const double t = 1.0 + (c - 1.0) * std::uniform_real_distribution<>(0, 1)(rng);
      const KernelValue k = eval_psi_family(t, params);
      CHECK(std::abs(k.psi_hat * k.phi - 1.0) <= 1e-12);
      CHECK(k.psi <= 1.0 / t * (1.0 + 1e-15));
      // psihat psihat'' - 2 psihat'^2 = -phi''/phi^3 >= 0
      const double lhs = k.psi_hat * k.psi_hat_d2 - 2.0 * k.psi_hat_d1 * k.psi_hat_d1;
      const double rhs = -k.phi_d2 / (k.phi * k.phi * k.phi);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      CHECK(rhs >= 0.0);
    }
  }
}

TEST_CASE("finite differences reproduce the closed-form derivatives") {
  // phi' at step 1e-5 t. phi'' needs the balanced step 5e-4 t: its relative
  // truncation is h^2/t^2 exactly, while at 1e-5 t the second difference sits
  // on a rounding floor of eps*phi/h^2 ~ 1e-6, which drowns |phi''| ~ c^-3 at
  // large c.
  std::mt19937_64 rng(11);
  for (const double c : {1.5, 2.0, 10.0, 100.0}) {
    const DomainParams params(c);
    for (int i = 0; i < 200; ++i) {
      const double margin = 0.01 * (c - 1.0);
      const double t = 1.0 + margin +
                       (c - 1.0 - 2.0 * margin) * std::uniform_real_distribution<>(0, 1)(rng);
      const auto [d1, d2] = eval_phi_derivatives(t, params);

      const double h1 = 1e-5 * t;
      const double fd1 = (eval_phi(t + h1, params) - eval_phi(t - h1, params)) / (2.0 * h1);
      CHECK(std::abs(fd1 - d1) / std::abs(d1) < 1e-6);

      const double h2 = 5e-4 * t;
      const double fd2 = (eval_phi(t + h2, params) - 2.0 * eval_phi(t, params) +
                          eval_phi(t - h2, params)) /
                         (h2 * h2);
      CHECK(std::abs(fd2 - d2) / std::abs(d2) < 1e-6);
    }
  }
}

TEST_CASE("domain handling") {
  const DomainParams c2(2.0);
  CHECK_THROWS_AS(eval_phi(0.5, c2), std::domain_error);
  CHECK_THROWS_AS(eval_phi(2.5, c2), std::domain_error);
  CHECK_THROWS_AS(DomainParams(1.0), std::invalid_argument);
  CHECK_THROWS_AS(DomainParams(0.5), std::invalid_argument);

  // Rounding slop just outside the interval clamps onto it.
  CHECK(eval_phi(1.0 - 1e-13, c2) == 1.0);
  CHECK(eval_phi(2.0 + 1e-13, c2) == eval_phi(2.0, c2));

  // phi - 1 stays fully accurate near t = 1 (compare at the rounded double t).
  const double t = 1.0 + 1e-12;
  const double expected = oracle::to_double(oracle::phi(oracle::Real(t), 2) - 1);
  CHECK(std::abs(eval_phi_minus_one(t, c2) - expected) < 1e-26);
}
