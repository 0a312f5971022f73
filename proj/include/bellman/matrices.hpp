#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace bellman {

/// Dense symmetric matrix of order 2..4; only the upper triangle is stored.
class SymMat {
 public:
  explicit SymMat(int order);

  int order() const noexcept { return n_; }
  double operator()(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, double value) { a_[idx(i, j)] = value; }

  Eigen::MatrixXd dense() const;
  Eigen::VectorXd eigenvalues() const;  // ascending
  double max_abs() const;

 private:
  int idx(int i, int j) const;

  int n_;
  std::array<double, 10> a_{};
};

/// Leading principal minors det(M[0..k][0..k]), k = 0..order-1, via closed
/// cofactor expansion (deterministic, no pivoting).
std::vector<double> sylvester_signs(const SymMat& m);

enum class Definiteness { kNegativeSemi, kPositiveSemi };

/// Outcome of the two-method semidefiniteness decision. The eigenvalue test
/// is primary; Sylvester minors are the secondary route, deferring to the
/// eigenvalues when a minor sits within `zero_tol` (relative to the leading
/// block scale) of zero, where its sign carries no information. A check
/// passes only when both routes agree.
struct DefinitenessReport {
  bool eig_ok = false;
  bool sylvester_ok = false;
  bool used_eig_fallback = false;
  double extreme_eig = 0.0;  // max eigenvalue (NSD) or -min eigenvalue (PSD)

  bool pass() const noexcept { return eig_ok && sylvester_ok; }
};

DefinitenessReport check_semidefinite(const SymMat& m, Definiteness kind, double eig_tol,
                                      double zero_tol = 1e-9);

// ---------------------------------------------------------------------------
// Exact rational certificates
// ---------------------------------------------------------------------------

using Rational = boost::rational<long long>;
using RationalMatrix = std::vector<std::vector<Rational>>;

std::string to_string(const Rational& r);

Rational rational_det(const RationalMatrix& m);

/// Bit-reproducible negative-semidefiniteness certificate. Uses the leading
/// principal minors when they are all nonzero (strict sign alternation); a
/// zero leading minor triggers the full principal-minor criterion, which is
/// also exact.
struct ExactCertificate {
  std::string matrix_name;
  std::vector<Rational> leading_minors;
  bool negative_semidefinite = false;

  std::string summary() const;
};

ExactCertificate certify_negative_semidefinite(std::string name, const RationalMatrix& m);

/// The 3x3 reduction matrix for the middle angular domain at e = lambda*d,
/// cross term sign eps in {-1, +1}:
///   [ 2l - 100 + 1/20   (1+l)/4 + eps/40   -(3/4)(1+l) + 100 ]
///   [        .               -3/16               -3/16       ]
///   [        .                 .               21/16 - 100   ]
RationalMatrix d2_lambda_matrix(const Rational& lambda, int eps);
Eigen::Matrix3d d2_lambda_matrix_num(double lambda, int eps);

/// Log-Hessian of the block y^2 w^{1/4} v^{-3/4} in relative coordinates
/// (E, R, S) = (e/y, r/w, s/v).
RationalMatrix a5_matrix();

/// A5 - (1/16) [[192, 2*eps, 0], [2*eps, 0, 0], [0, 0, 46]]; negative
/// semidefinite for both signs.
RationalMatrix d3_difference_matrix(int eps);

}  // namespace bellman
