#include <bellman/bellman.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bellman {

namespace {

constexpr std::pair<int, double> kPiece1[] = {{1, 1.0}, {2, -1.0}, {3, -313600.0}, {6, -294400.0}};
constexpr std::pair<int, double> kPiece2[] = {
    {1, 1.0}, {2, -1.0}, {3, -320000.0}, {4, 320.0}, {6, -294400.0}};
constexpr std::pair<int, double> kPiece3[] = {
    {1, 1.0}, {2, -1.0}, {3, -320000.0}, {5, 32.0}, {6, -294400.0}};
constexpr std::pair<int, double> kUTerms[] = {{1, 1.0}, {2, -1.0}, {3, -320000.0}, {6, -294400.0}};

double sign_of(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// c^b w^{1-b} v^{-b}; evaluated through exp/log since w, v > 0.
double mixed_power(double w, double v, const DomainParams& params) {
  constexpr double b = DomainParams::kBeta;
  return std::pow(params.c, b) * std::exp((1.0 - b) * std::log(w) - b * std::log(v));
}

// Adds coeff * b_i (value, gradient, upper-triangular Hessian) to out.
void accumulate(int i, double coeff, const KernelValue& k, const BellmanPoint& p,
                const DomainParams& params, BTerm& out) {
  const double x = p.x, y = p.y, w = p.w, v = p.v;
  const double t = k.t;
  const double cc = params.c * params.c;
  constexpr double b = DomainParams::kBeta;
  auto& g = out.grad;
  auto& H = out.hess;

  switch (i) {
    case 1: {
      const double phi = k.phi, p1 = k.phi_d1, p2 = k.phi_d2;
      out.value += coeff * y * y * w * phi;
      g(1) += coeff * 2.0 * y * w * phi;
      g(2) += coeff * y * y * (phi + t * p1);
      g(3) += coeff * y * y * w * w * p1;
      H(1, 1) += coeff * 2.0 * w * phi;
      H(1, 2) += coeff * 2.0 * y * (phi + t * p1);
      H(1, 3) += coeff * 2.0 * y * w * w * p1;
      H(2, 2) += coeff * y * y * v * (2.0 * p1 + t * p2);
      H(2, 3) += coeff * y * y * w * (2.0 * p1 + t * p2);
      H(3, 3) += coeff * y * y * w * w * w * p2;
      break;
    }
    case 2: {
      out.value += coeff * y * y / (2.0 * v);
      g(1) += coeff * y / v;
      g(3) += coeff * -y * y / (2.0 * v * v);
      H(1, 1) += coeff / v;
      H(1, 3) += coeff * -y / (v * v);
      H(3, 3) += coeff * y * y / (v * v * v);
      break;
    }
    case 3: {
      out.value += coeff * cc * x * x / v;
      g(0) += coeff * 2.0 * cc * x / v;
      g(3) += coeff * -cc * x * x / (v * v);
      H(0, 0) += coeff * 2.0 * cc / v;
      H(0, 3) += coeff * -2.0 * cc * x / (v * v);
      H(3, 3) += coeff * 2.0 * cc * x * x / (v * v * v);
      break;
    }
    case 4: {
      const double K = mixed_power(w, v, params);
      const double ax = std::abs(x), ay = std::abs(y);
      const double sx = sign_of(x), sy = sign_of(y);
      const double val = K * ax * ay;
      out.value += coeff * val;
      g(0) += coeff * K * sx * ay;
      g(1) += coeff * K * sy * ax;
      g(2) += coeff * (1.0 - b) * val / w;
      g(3) += coeff * -b * val / v;
      H(0, 1) += coeff * K * sx * sy;
      H(0, 2) += coeff * (1.0 - b) * K * sx * ay / w;
      H(0, 3) += coeff * -b * K * sx * ay / v;
      H(1, 2) += coeff * (1.0 - b) * K * sy * ax / w;
      H(1, 3) += coeff * -b * K * sy * ax / v;
      H(2, 2) += coeff * -b * (1.0 - b) * val / (w * w);
      H(2, 3) += coeff * -b * (1.0 - b) * val / (w * v);
      H(3, 3) += coeff * b * (b + 1.0) * val / (v * v);
      break;
    }
    case 5: {
      const double K = mixed_power(w, v, params);
      const double val = K * y * y;
      out.value += coeff * val;
      g(1) += coeff * 2.0 * K * y;
      g(2) += coeff * (1.0 - b) * val / w;
      g(3) += coeff * -b * val / v;
      H(1, 1) += coeff * 2.0 * K;
      H(1, 2) += coeff * 2.0 * (1.0 - b) * K * y / w;
      H(1, 3) += coeff * -2.0 * b * K * y / v;
      H(2, 2) += coeff * -b * (1.0 - b) * val / (w * w);
      H(2, 3) += coeff * -b * (1.0 - b) * val / (w * v);
      H(3, 3) += coeff * b * (b + 1.0) * val / (v * v);
      break;
    }
    case 6: {
      const double ph = k.psi_hat, ph1 = k.psi_hat_d1, ph2 = k.psi_hat_d2;
      const double psi1 = ph1 / t - ph / (t * t);
      const double psi2 = ph2 / t - 2.0 * ph1 / (t * t) + 2.0 * ph / (t * t * t);
      out.value += coeff * cc * x * x * w * k.psi;
      g(0) += coeff * 2.0 * cc * x * w * k.psi;
      g(2) += coeff * cc * x * x * ph1;  // psi + t psi' = psihat'
      g(3) += coeff * cc * x * x * w * w * psi1;
      H(0, 0) += coeff * 2.0 * cc * ph / v;
      H(0, 2) += coeff * 2.0 * cc * x * ph1;
      H(0, 3) += coeff * 2.0 * cc * x * (ph1 * w / v - ph / (v * v));
      H(2, 2) += coeff * cc * x * x * v * ph2;  // 2 psi' + t psi'' = psihat''
      H(2, 3) += coeff * cc * x * x * w * ph2;
      H(3, 3) += coeff * cc * x * x * w * w * w * psi2;
      break;
    }
    default:
      throw std::out_of_range("building block index must be in 1..6, got " + std::to_string(i));
  }
}

BellmanEval eval_piece(int piece, Region region, const BellmanPoint& p,
                       const DomainParams& params) {
  const BTerm term = eval_combo(piece_terms(piece), p, params);
  BellmanEval out;
  out.value = term.value;
  out.gradient = term.grad;
  out.hessian = term.hess;
  out.region = region;
  out.on_piece_boundary = (region == Region::Boundary12 || region == Region::Boundary23);
  out.degenerate_hessian = (region == Region::Origin);
  return out;
}

}  // namespace

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::D3: return "D3";
    case Region::Boundary12: return "Boundary12";
    case Region::Boundary23: return "Boundary23";
    case Region::Origin: return "Origin";
  }
  return "?";
}

void require_in_domain(const BellmanPoint& p, const DomainParams& params) {
  if (!(p.w > 0.0) || !(p.v > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y) ||
      !std::isfinite(p.w) || !std::isfinite(p.v)) {
    throw std::domain_error("point must have finite coordinates and w, v > 0");
  }
  clamp_to_domain(p.t(), params);  // throws outside [1, c] + slack
}

double boundary12_threshold(double abs_x, double t, const DomainParams& params) {
  return 20.0 * params.c * abs_x * std::pow(params.c / t, 0.25);
}

Region classify_region(const BellmanPoint& p, const DomainParams& params) {
  require_in_domain(p, params);
  if (p.x == 0.0 && p.y == 0.0) {
    return Region::Origin;
  }
  const double ax = std::abs(p.x), ay = std::abs(p.y);
  const double t = clamp_to_domain(p.t(), params);
  const double thr12 = boundary12_threshold(ax, t, params);
  if (ay > thr12) return Region::D1;
  if (ay == thr12) return Region::Boundary12;
  const double thr23 = 10.0 * ax;
  if (ay < thr23) return Region::D3;
  if (ay == thr23) return Region::Boundary23;
  return Region::D2;
}

double eval_b(int i, const BellmanPoint& p, const DomainParams& params) {
  const std::pair<int, double> one[] = {{i, 1.0}};
  return eval_combo(one, p, params).value;
}

BTerm eval_b_term(int i, const BellmanPoint& p, const DomainParams& params) {
  const std::pair<int, double> one[] = {{i, 1.0}};
  return eval_combo(one, p, params);
}

BTerm eval_combo(std::span<const std::pair<int, double>> terms, const BellmanPoint& p,
                 const DomainParams& params) {
  require_in_domain(p, params);
  const KernelValue k = eval_psi_family(p.t(), params);
  BTerm out;
  for (const auto& [i, coeff] : terms) {
    accumulate(i, coeff, k, p, params, out);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      out.hess(i, j) = out.hess(j, i);
    }
  }
  return out;
}

double eval_U(const BellmanPoint& p, const DomainParams& params) {
  return eval_combo(kUTerms, p, params).value;
}

int piece_at(Region r) noexcept {
  switch (r) {
    case Region::D1:
    case Region::Boundary12:
      return 1;
    case Region::D2:
    case Region::Boundary23:
      return 2;
    default:
      return 3;
  }
}

std::span<const std::pair<int, double>> piece_terms(int piece) {
  switch (piece) {
    case 1: return kPiece1;
    case 2: return kPiece2;
    case 3: return kPiece3;
    default: throw std::out_of_range("piece index must be 1..3");
  }
}

BellmanEval eval_B(const BellmanPoint& p, const DomainParams& params) {
  const Region region = classify_region(p, params);
  return eval_piece(piece_at(region), region, p, params);
}

double eval_G(const BellmanPoint& p, const DomainParams& params) {
  require_in_domain(p, params);
  const double cc = params.c * params.c;
  return DomainParams::kKappa *
         (p.y * p.y * p.w - DomainParams::kMajorantCSquared * cc * p.x * p.x / p.v);
}

double directional_second_derivative(const BellmanPoint& p, const Direction& dir,
                                     const DomainParams& params) {
  const BellmanEval eval = eval_B(p, params);
  const Eigen::Vector4d u(dir.d, dir.e, dir.r, dir.s);
  return u.dot(eval.hessian * u);
}

double eval_B_maximal(const MaxPoint& p, const DomainParams& params) {
  if (!(p.y <= p.z)) {
    throw std::invalid_argument("maximal extension requires y <= z");
  }
  return eval_B({p.x, p.y - p.z, p.w, p.v}, params).value;
}

double majorization_gap(const BellmanPoint& p, const DomainParams& params) {
  require_in_domain(p, params);
  const double t = clamp_to_domain(p.t(), params);
  const double u = t - 1.0;
  // phi - 1/(2t) - 1/2 = (3/2)(t-1)/t - ln(t)/(2c), nonnegative on [1, c].
  const double g1 = 1.5 * u / t - std::log1p(u) / (2.0 * params.c);
  const double phi_m1 = eval_phi_minus_one(t, params);
  const double cc = params.c * params.c;
  double gap = p.y * p.y * p.w * g1 +
               294400.0 * cc * p.x * p.x / p.v * (phi_m1 / (1.0 + phi_m1));
  switch (piece_at(classify_region(p, params))) {
    case 1:
      gap += 6400.0 * cc * p.x * p.x / p.v;
      break;
    case 2:
      gap += 320.0 * mixed_power(p.w, p.v, params) * std::abs(p.x) * std::abs(p.y);
      break;
    default:
      gap += 32.0 * mixed_power(p.w, p.v, params) * p.y * p.y;
      break;
  }
  return gap;
}

double ordering_gap12(const BellmanPoint& p, const DomainParams& params) {
  require_in_domain(p, params);
  const double ax = std::abs(p.x), ay = std::abs(p.y);
  const double t = clamp_to_domain(p.t(), params);
  return 320.0 * mixed_power(p.w, p.v, params) * ax *
         (ay - boundary12_threshold(ax, t, params));
}

double ordering_gap23(const BellmanPoint& p, const DomainParams& params) {
  require_in_domain(p, params);
  const double ax = std::abs(p.x), ay = std::abs(p.y);
  return 32.0 * mixed_power(p.w, p.v, params) * ay * (ay - 10.0 * ax);
}

FdReport fd_check(const BellmanPoint& p, const DomainParams& params, double h) {
  if (!(h > 0.0) || !(h < 0.01)) {
    throw std::invalid_argument("fd_check: step h must lie in (0, 0.01)");
  }
  const Region region = classify_region(p, params);
  if (region != Region::D1 && region != Region::D2 && region != Region::D3) {
    throw std::invalid_argument("fd_check: point must be strictly interior to a region");
  }
  const int piece = piece_at(region);
  const auto terms = piece_terms(piece);

  // Steps relative to the coordinate sizes. For the pieces without the
  // |x||y| block (1 and 3), x and y are floored at a quarter of the radius:
  // every block is at most quadratic in x and in y, so the larger step adds
  // no truncation error while keeping the divided differences clear of
  // rounding noise (the noise floor matters where one coordinate is tiny and
  // the Hessian scale is set by the other one). Piece 2 keeps fully relative
  // steps; its dominant Hessian entries carry the 3.2e5 c^2 coefficient, so
  // relative steps are already noise-safe, and the floor would push tiny-|x|
  // stencils across the region.
  const double radius = std::hypot(p.x, p.y);
  const double floor_xy = (piece == 2) ? 0.0 : 0.25 * radius;
  const std::array<double, 4> step = {h * std::max(std::abs(p.x), floor_xy),
                                      h * std::max(std::abs(p.y), floor_xy),
                                      h * p.w, h * p.v};

  auto coord = [](BellmanPoint& q, int axis) -> double& {
    switch (axis) {
      case 0: return q.x;
      case 1: return q.y;
      case 2: return q.w;
      default: return q.v;
    }
  };
  auto shifted = [&](int axis, double amount) {
    BellmanPoint q = p;
    coord(q, axis) += amount;
    return q;
  };
  // Interior precondition: 10 steps in every coordinate stay in the region.
  for (int axis = 0; axis < 4; ++axis) {
    for (double sgn : {-1.0, 1.0}) {
      const BellmanPoint q = shifted(axis, sgn * 10.0 * step[axis]);
      try {
        if (classify_region(q, params) != region) {
          throw std::invalid_argument("");
        }
      } catch (const std::exception&) {
        throw std::invalid_argument("fd_check: point closer than 10h to a boundary");
      }
    }
  }

  auto f = [&](const BellmanPoint& q) { return eval_combo(terms, q, params).value; };
  const BTerm ref = eval_combo(terms, p, params);
  const double f0 = ref.value;

  Eigen::Vector4d grad_fd;
  Eigen::Matrix4d hess_fd;
  for (int i = 0; i < 4; ++i) {
    const double hi = step[i];
    grad_fd(i) = (f(shifted(i, hi)) - f(shifted(i, -hi))) / (2.0 * hi);
    hess_fd(i, i) = (f(shifted(i, hi)) - 2.0 * f0 + f(shifted(i, -hi))) / (hi * hi);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double hi = step[i], hj = step[j];
      auto ff = [&](double si, double sj) {
        BellmanPoint q = p;
        coord(q, i) += si * hi;
        coord(q, j) += sj * hj;
        return f(q);
      };
      hess_fd(i, j) = (ff(1, 1) - ff(1, -1) - ff(-1, 1) + ff(-1, -1)) / (4.0 * hi * hj);
      hess_fd(j, i) = hess_fd(i, j);
    }
  }

  FdReport report;
  const double gden = std::max(1.0, ref.grad.cwiseAbs().maxCoeff());
  const double hden = std::max(1.0, ref.hess.cwiseAbs().maxCoeff());
  report.grad_discrepancy = (grad_fd - ref.grad).cwiseAbs().maxCoeff() / gden;
  report.hess_discrepancy = (hess_fd - ref.hess).cwiseAbs().maxCoeff() / hden;
  return report;
}

}  // namespace bellman
