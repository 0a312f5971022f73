#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include <bellman/kernels.hpp>

namespace bellman {

/// State of the four-variable Burkholder function: martingale values (x, y)
/// and weight pair (w, v) with 1 <= w*v <= c.
struct BellmanPoint {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double v = 1.0;

  double t() const noexcept { return w * v; }
};

/// A perturbation of the state. Consumers impose the differential
/// subordination constraint |e| <= |d| where required.
struct Direction {
  double d = 0.0;
  double e = 0.0;
  double r = 0.0;
  double s = 0.0;

  bool subordinate(double slack = 0.0) const noexcept {
    return std::abs(e) <= std::abs(d) + slack;
  }
};

/// Angular region of a state point. With t = w*v and thresholds
/// thr12 = 20 c (c/t)^{1/4} and thr23 = 10:
///   D1: |y| > thr12 |x|,  D3: |y| < 10 |x|,  D2 strictly between,
/// boundary tags on exact equality, Origin when x = y = 0.
enum class Region { D1, D2, D3, Boundary12, Boundary23, Origin };

const char* to_string(Region r) noexcept;

/// Value, gradient and Hessian of the piece of B in force at a point.
/// On Boundary12 the D1 piece is used, on Boundary23 the D2 piece; the value
/// is continuous across both boundaries but the derivatives are one-sided,
/// which `on_piece_boundary` flags. At the origin all pieces vanish with zero
/// gradient; `degenerate_hessian` marks that B is not twice differentiable
/// there (the reported Hessian is the D3 piece limit).
struct BellmanEval {
  double value = 0.0;
  Eigen::Vector4d gradient = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hessian = Eigen::Matrix4d::Zero();
  Region region = Region::Origin;
  bool on_piece_boundary = false;
  bool degenerate_hessian = false;
};

/// State for the one-sided maximal extension: z is the running maximum of y,
/// so y <= z.
struct MaxPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 1.0;
  double v = 1.0;
};

/// A building block (or linear combination of blocks) with its derivatives.
struct BTerm {
  double value = 0.0;
  Eigen::Vector4d grad = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
};

/// Throws std::domain_error unless w, v > 0 and w*v lies in [1, c] (up to the
/// kernel clamping slack).
void require_in_domain(const BellmanPoint& p, const DomainParams& params);

Region classify_region(const BellmanPoint& p, const DomainParams& params);

/// The threshold 20 c (c/t)^{1/4} |x| separating D1 from D2; shared with the
/// ordering gap so that boundary-constructed points compare bit-exactly.
double boundary12_threshold(double abs_x, double t, const DomainParams& params);

/// Building blocks, i in 1..6:
///   b1 = y^2 w phi(t)            b2 = y^2 / (2v)          b3 = c^2 x^2 / v
///   b4 = c^b |x||y| w^{1-b} v^{-b}   b5 = c^b y^2 w^{1-b} v^{-b}
///   b6 = c^2 x^2 w psi(t)        with b = 3/4, t = w v.
double eval_b(int i, const BellmanPoint& p, const DomainParams& params);
BTerm eval_b_term(int i, const BellmanPoint& p, const DomainParams& params);

/// Linear combination sum(coeff_i * b_i) with all derivatives; the kernel
/// values are evaluated once per call.
BTerm eval_combo(std::span<const std::pair<int, double>> terms, const BellmanPoint& p,
                 const DomainParams& params);

/// U = b1 - b2 - 320000 b3 - 294400 b6.
double eval_U(const BellmanPoint& p, const DomainParams& params);

/// The piecewise Burkholder function:
///   B1 = U + 6400 c^2 x^2 / v   on D1,
///   B2 = U + 320 b4             on D2,
///   B3 = U + 32 b5              on D3.
BellmanEval eval_B(const BellmanPoint& p, const DomainParams& params);

/// Majorant G = kappa (y^2 w - C^2 c^2 x^2 / v), kappa = 1/2, C^2 = 1228800.
double eval_G(const BellmanPoint& p, const DomainParams& params);

/// Quadratic form <D^2 B_piece(p) dir, dir> of the piece in force at p.
double directional_second_derivative(const BellmanPoint& p, const Direction& dir,
                                     const DomainParams& params);

/// Maximal extension BB(x, y, z, w, v) = B(x, y - z, w, v); requires y <= z.
double eval_B_maximal(const MaxPoint& p, const DomainParams& params);

/// Piece index (1..3) evaluated for a region tag.
int piece_at(Region r) noexcept;
std::span<const std::pair<int, double>> piece_terms(int piece);

/// B - G evaluated in a regrouped, cancellation-free form:
///   B - G = y^2 w [phi - 1/(2t) - 1/2] + 294400 c^2 x^2 v^{-1} (phi-1)/phi + extra
/// where each bracket is nonnegative on [1, c] and `extra` is the region's
/// nonnegative extra block. The raw difference eval_B - eval_G loses ~11
/// digits to cancellation at large c; this form loses none.
double majorization_gap(const BellmanPoint& p, const DomainParams& params);

/// B2 - B1 = 320 c^b w^{1-b} v^{-b} |x| (|y| - 20 c (c/t)^{1/4} |x|).
/// The sign is decided by the same expression that classifies the region, so
/// the gap vanishes identically on Boundary12.
double ordering_gap12(const BellmanPoint& p, const DomainParams& params);

/// B3 - B2 = 32 c^b w^{1-b} v^{-b} |y| (|y| - 10 |x|); vanishes on Boundary23.
double ordering_gap23(const BellmanPoint& p, const DomainParams& params);

/// Central finite-difference cross-check of the closed-form gradient and
/// Hessian of the piece at p. Discrepancies are normalized by
/// max(1, ||grad||_inf) resp. max(1, max |H_ij|). Steps are relative to the
/// coordinate magnitudes; the point must be strictly interior to its region
/// and to the weight domain (10 steps in every coordinate).
struct FdReport {
  double grad_discrepancy = 0.0;
  double hess_discrepancy = 0.0;

  double worst() const noexcept { return std::max(grad_discrepancy, hess_discrepancy); }
};

FdReport fd_check(const BellmanPoint& p, const DomainParams& params, double h);

}  // namespace bellman
