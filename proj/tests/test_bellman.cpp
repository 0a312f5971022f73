#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <bellman/bellman.hpp>

#include "oracle.hpp"

using namespace bellman;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

struct PointGen {
  std::mt19937_64 rng;

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<>(lo, hi)(rng);
  }

  // Random point strictly inside region 1..3 for the given c.
  BellmanPoint in_region(int region, const DomainParams& params) {
    const double t = 1.0 + (params.c - 1.0) * uniform(0.02, 0.98);
    const double w = uniform(0.5, 2.0);
    const double thr = 20.0 * params.c * std::pow(params.c / t, 0.25);
    double x, y;
    if (region == 1) {
      const double sigma = uniform(0.0, 0.88) / thr;  // |x|/|y|
      y = 1.0 / std::hypot(1.0, sigma);
      x = sigma * y;
    } else if (region == 2) {
      const double rho = 10.0 + (thr - 10.0) * uniform(0.05, 0.95);
      x = 1.0 / std::hypot(1.0, rho);
      y = rho * x;
    } else {
      const double rho = uniform(0.0, 9.5);
      x = 1.0 / std::hypot(1.0, rho);
      y = rho * x;
    }
    if (rng() & 1u) x = -x;
    if (rng() & 1u) y = -y;
    return {x, y, w, t / w};
  }
};

double oracle_B(const BellmanPoint& p, double c) {
  using oracle::Real;
  const Real x(p.x), y(p.y), w(p.w), v(p.v), cc(c);
  const Real t = w * v;
  const Real thr = 20 * cc * abs(x) * pow(cc / t, Real(1) / 4);
  int piece = 3;
  if (abs(y) >= thr) {
    piece = 1;
  } else if (abs(y) > 10 * abs(x)) {
    piece = 2;
  }
  return oracle::to_double(oracle::piece(piece, x, y, w, v, cc));
}

}  // namespace

TEST_CASE("region classification") {
  const DomainParams c2(2.0);
  CHECK(classify_region({0.0, 1.0, 1.0, 1.0}, c2) == Region::D1);
  CHECK(classify_region({1.0, 1.0, 1.0, 1.0}, c2) == Region::D3);
  CHECK(classify_region({1.0, 10.0, 1.0, 1.0}, c2) == Region::Boundary23);
  CHECK(classify_region({1.0, 0.0, 1.0, 1.0}, c2) == Region::D3);
  CHECK(classify_region({0.0, 0.0, 1.0, 1.0}, c2) == Region::Origin);
  CHECK(classify_region({-1.0, -1.0, 1.0, 1.0}, c2) == Region::D3);

  // Exact equality with the D1/D2 threshold tags Boundary12.
  const double t = 1.3;
  const double x = 0.25;
  const double y = boundary12_threshold(x, t, c2);
  CHECK(classify_region({x, y, 1.0, t}, c2) == Region::Boundary12);
  CHECK(classify_region({x, std::nextafter(y, 1e9), 1.0, t}, c2) == Region::D1);
  CHECK(classify_region({x, std::nextafter(y, 0.0), 1.0, t}, c2) == Region::D2);

  CHECK_THROWS_AS(classify_region({1.0, 1.0, 3.0, 3.0}, c2), std::domain_error);
  CHECK_THROWS_AS(classify_region({1.0, 1.0, 0.5, 0.5}, c2), std::domain_error);
}

TEST_CASE("building blocks") {
  const DomainParams c2(2.0);
  const BellmanPoint p0{1.0, 0.0, 1.0, 1.0};
  CHECK(eval_b(1, p0, c2) == 0.0);
  CHECK(eval_b(6, p0, c2) == 4.0);  // c^2 x^2 w psi(1), psi(1) = 1
  CHECK(rel_err(eval_b(4, {1.0, 1.0, 1.0, 1.0}, c2), std::pow(2.0, 0.75)) < 1e-15);

  CHECK_THROWS_AS(eval_b(0, p0, c2), std::out_of_range);
  CHECK_THROWS_AS(eval_b(7, p0, c2), std::out_of_range);

  // Random cross-check of every block against the 50-digit oracle.
  PointGen gen{std::mt19937_64(3)};
  for (const double c : {1.5, 2.0, 10.0}) {
    const DomainParams params(c);
    for (int k = 0; k < 200; ++k) {
      const BellmanPoint p = gen.in_region(1 + k % 3, params);
      for (int i = 1; i <= 6; ++i) {
        const double want = oracle::to_double(
            oracle::b(i, oracle::Real(p.x), oracle::Real(p.y), oracle::Real(p.w),
                      oracle::Real(p.v), oracle::Real(c)));
        CHECK(rel_err(eval_b(i, p, params), want) < 1e-13);
      }
    }
  }
}

TEST_CASE("U values") {
  const DomainParams c2(2.0);
  CHECK(eval_U({0.0, 0.0, 1.0, 1.0}, c2) == 0.0);
  CHECK(eval_U({1.0, 0.0, 1.0, 1.0}, c2) == -2457600.0);
  CHECK(eval_U({0.0, 1.0, 1.0, 1.0}, c2) == 0.5);
  // Frozen oracle anchor at a generic interior point.
  CHECK(rel_err(eval_U({0.7, 1.9, 1.2, 1.3}, c2), -838174.44923698531105) < 1e-13);
}

TEST_CASE("B values, regions and flags") {
  const DomainParams c2(2.0);

  BellmanEval e = eval_B({1.0, 0.0, 1.0, 1.0}, c2);
  CHECK(e.value == -2457600.0);
  CHECK(e.region == Region::D3);

  e = eval_B({0.0, 1.0, 1.0, 1.0}, c2);
  CHECK(e.value == 0.5);
  CHECK(e.region == Region::D1);

  // Frozen oracle anchors: one per piece.
  CHECK(rel_err(eval_B({0.7, 1.9, 1.2, 1.3}, c2).value, -838007.42962352137726) < 1e-13);
  CHECK(rel_err(eval_B({0.1, 1.9, 1.2, 1.3}, c2).value, -17013.760904491450874) < 1e-13);
  CHECK(rel_err(eval_B({0.01, 1.0, 1.2, 1.3}, c2).value, -167.97485097948881838) < 1e-13);

  // Origin: zero value and gradient, degenerate Hessian flag.
  e = eval_B({0.0, 0.0, 1.0, 1.0}, c2);
  CHECK(e.value == 0.0);
  CHECK(e.gradient.cwiseAbs().maxCoeff() == 0.0);
  CHECK(e.region == Region::Origin);
  CHECK(e.degenerate_hessian);

  // Boundary evaluation uses the lower-index piece and flags it.
  const double y12 = boundary12_threshold(0.25, 1.3, c2);
  e = eval_B({0.25, y12, 1.0, 1.3}, c2);
  CHECK(e.region == Region::Boundary12);
  CHECK(e.on_piece_boundary);

  CHECK_THROWS_AS(eval_B({1.0, 1.0, 3.0, 3.0}, c2), std::domain_error);
}

TEST_CASE("B matches the oracle across regions and c") {
  PointGen gen{std::mt19937_64(5)};
  for (const double c : {1.5, 2.0, 4.0, 10.0}) {
    const DomainParams params(c);
    for (int k = 0; k < 300; ++k) {
      const BellmanPoint p = gen.in_region(1 + k % 3, params);
      CHECK(rel_err(eval_B(p, params).value, oracle_B(p, c)) < 1e-12);
    }
  }
}

TEST_CASE("symmetry and homogeneity") {
  PointGen gen{std::mt19937_64(17)};
  const DomainParams params(4.0);
  for (int k = 0; k < 500; ++k) {
    const BellmanPoint p = gen.in_region(1 + k % 3, params);
    const double B = eval_B(p, params).value;
    const double scale = (1.0 + p.x * p.x + p.y * p.y) * p.w;

    // even in x and in y
    CHECK(eval_B({-p.x, p.y, p.w, p.v}, params).value == B);
    CHECK(eval_B({p.x, -p.y, p.w, p.v}, params).value == B);

    // joint quadratic homogeneity in (x, y)
    const double lam = gen.uniform(0.2, 5.0);
    const double Bl = eval_B({lam * p.x, lam * p.y, p.w, p.v}, params).value;
    CHECK(std::abs(Bl - lam * lam * B) <=
          1e-9 * std::max(std::abs(Bl), lam * lam * scale));

    // weight homogeneity B(x, y, mu w, v/mu) = mu B, same t and region
    const double mu = gen.uniform(0.2, 5.0);
    const BellmanEval em = eval_B({p.x, p.y, mu * p.w, p.v / mu}, params);
    CHECK(em.region == eval_B(p, params).region);
    CHECK(std::abs(em.value - mu * B) <= 1e-9 * mu * std::max(std::abs(B), scale));
  }
}

TEST_CASE("majorant and majorization gap") {
  const DomainParams c2(2.0);
  CHECK(eval_G({0.0, 1.0, 1.0, 1.0}, c2) == 0.5);
  CHECK(eval_G({1.0, 0.0, 1.0, 1.0}, c2) == -2457600.0);
  CHECK(eval_G({0.0, 0.0, 1.0, 1.0}, c2) == 0.0);

  // The stable gap equals the raw difference where the latter is computable.
  PointGen gen{std::mt19937_64(23)};
  for (int k = 0; k < 400; ++k) {
    const BellmanPoint p = gen.in_region(1 + k % 3, c2);
    const double gap = majorization_gap(p, c2);
    const double raw = eval_B(p, c2).value - eval_G(p, c2);
    CHECK(std::abs(gap - raw) <= 1e-9 * (1.0 + std::abs(eval_G(p, c2))));
    CHECK(gap >= 0.0);
  }
  // And it stays nonnegative at large c, where the raw difference would
  // drown in cancellation.
  const DomainParams c100(100.0);
  for (int k = 0; k < 400; ++k) {
    const BellmanPoint p = gen.in_region(1 + k % 3, c100);
    CHECK(majorization_gap(p, c100) >= 0.0);
  }
}

TEST_CASE("ordering gaps: factored form, signs, boundary zeros") {
  PointGen gen{std::mt19937_64(29)};
  for (const double c : {1.5, 4.0}) {
    const DomainParams params(c);
    for (int k = 0; k < 300; ++k) {
      const int region = 1 + k % 3;
      const BellmanPoint p = gen.in_region(region, params);
      const double g12 = ordering_gap12(p, params);
      const double g23 = ordering_gap23(p, params);

      // Factored gaps equal the raw piece differences.
      const double b1v = eval_combo(piece_terms(1), p, params).value;
      const double b2v = eval_combo(piece_terms(2), p, params).value;
      const double b3v = eval_combo(piece_terms(3), p, params).value;
      const double slack = (1.0 + std::abs(b1v) + std::abs(b2v)) * 1e-11;
      CHECK(std::abs(g12 - (b2v - b1v)) <= slack);
      CHECK(std::abs(g23 - (b3v - b2v)) <= slack);

      if (region == 1) CHECK(g12 >= 0.0);
      if (region == 2) {
        CHECK(g12 <= 0.0);
        CHECK(g23 >= 0.0);
      }
      if (region == 3) CHECK(g23 <= 0.0);
    }
  }
  // Exact zero on the boundaries they define.
  const DomainParams c2(2.0);
  const double y12 = boundary12_threshold(0.25, 1.3, c2);
  CHECK(ordering_gap12({0.25, y12, 1.0, 1.3}, c2) == 0.0);
  CHECK(ordering_gap23({0.1, 1.0, 1.0, 1.3}, c2) == 0.0);
}

TEST_CASE("directional second derivatives") {
  const DomainParams c2(2.0);

  // b2 block alone at (y=1, v=1): form along (e=1) is (1/v)(e - y s/v)^2 = 1.
  const BellmanPoint p{0.5, 1.0, 1.0, 1.0};
  const BTerm b2 = eval_b_term(2, p, c2);
  Eigen::Vector4d dir(0.0, 1.0, 0.0, 0.0);
  CHECK(dir.dot(b2.hess * dir) == doctest::Approx(1.0).epsilon(1e-14));

  // b3 block: (2c^2/v)(d - x s/v)^2 vanishes at d = x s / v.
  const BTerm b3 = eval_b_term(3, {1.0, 0.0, 1.0, 1.0}, c2);
  dir = Eigen::Vector4d(1.0, 0.0, 0.0, 1.0);
  CHECK(std::abs(dir.dot(b3.hess * dir)) < 1e-12);

  // zero direction
  CHECK(directional_second_derivative(p, {0, 0, 0, 0}, c2) == 0.0);

  // consistency with the eval_B Hessian
  PointGen gen{std::mt19937_64(31)};
  for (int k = 0; k < 100; ++k) {
    const BellmanPoint q = gen.in_region(1 + k % 3, c2);
    const Direction d{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1),
                      gen.uniform(-1, 1)};
    const Eigen::Vector4d u(d.d, d.e, d.r, d.s);
    const BellmanEval e = eval_B(q, c2);
    CHECK(rel_err(directional_second_derivative(q, d, c2), u.dot(e.hessian * u)) < 1e-14);
    // Hessian symmetry is structural.
    CHECK((e.hessian - e.hessian.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("maximal extension") {
  const DomainParams c2(2.0);
  CHECK(eval_B_maximal({1.0, 0.0, 0.0, 1.0, 1.0}, c2) == -2457600.0);
  CHECK(rel_err(eval_B_maximal({0.7, 0.5, 1.1, 1.2, 1.3}, c2), -838161.40997278409190) <
        1e-13);
  // z = y reduces to B(x, 0, w, v).
  CHECK(eval_B_maximal({0.7, 0.4, 0.4, 1.2, 1.3}, c2) ==
        eval_B({0.7, 0.0, 1.2, 1.3}, c2).value);
  CHECK_THROWS_AS(eval_B_maximal({0.0, 1.0, 0.5, 1.0, 1.0}, c2), std::invalid_argument);

  // d/dz at z = y vanishes: B_y(x, 0, w, v) = 0 by evenness in y.
  CHECK(eval_B({0.7, 0.0, 1.2, 1.3}, c2).gradient(1) == 0.0);
  const double f0 = eval_B_maximal({0.7, 0.4, 0.4, 1.2, 1.3}, c2);
  const double h = 1e-6;
  const double f1 = eval_B_maximal({0.7, 0.4, 0.4 + h, 1.2, 1.3}, c2);
  CHECK(std::abs((f1 - f0) / h) < 1e-3);  // one-sided slope is O(h)
}

TEST_CASE("finite-difference cross-check of gradients and Hessians") {
  PointGen gen{std::mt19937_64(37)};
  for (const double c : {1.5, 2.0, 4.0, 10.0}) {
    const DomainParams params(c);
    for (int region = 1; region <= 3; ++region) {
      for (int k = 0; k < 50; ++k) {
        const BellmanPoint p = gen.in_region(region, params);
        const FdReport rep = fd_check(p, params, 1e-4);
        CHECK(rep.worst() < 1e-6);
      }
    }
  }

  // Benign interior point at the spec step size.
  const DomainParams c2(2.0);
  CHECK(fd_check({1.0, 0.5, 1.0, 1.3}, c2, 1e-5).worst() < 1e-6);

  // b3 is quadratic in x: the xx entry is exactly 2 c^2 / v.
  CHECK(eval_b_term(3, {0.4, 0.1, 1.0, 1.25}, c2).hess(0, 0) == 2.0 * 4.0 / 1.25);

  // Truncation scales ~ h^2 once it dominates rounding.
  const BellmanPoint p{0.3, 1.2, 1.0, 1.4};
  const double e1 = fd_check(p, c2, 4e-3).hess_discrepancy;
  const double e2 = fd_check(p, c2, 2e-3).hess_discrepancy;
  CHECK(e1 / e2 > 2.0);
  CHECK(e1 / e2 < 8.0);

  // Near-boundary points are rejected.
  CHECK_THROWS_AS(fd_check({1.0, 10.0 * (1.0 - 1e-9), 1.0, 1.0}, c2, 1e-4),
                  std::invalid_argument);
}
