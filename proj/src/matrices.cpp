#include <bellman/matrices.hpp>

#include <cmath>
#include <stdexcept>

namespace bellman {

namespace {

double det2(const Eigen::MatrixXd& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

double det3(const Eigen::MatrixXd& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double leading_det(const Eigen::MatrixXd& m, int k) {
  switch (k) {
    case 1: return m(0, 0);
    case 2: return det2(m.topLeftCorner(2, 2));
    case 3: return det3(m.topLeftCorner(3, 3));
    default: {
      // 4x4 by cofactor expansion along the first row.
      double det = 0.0;
      double sign = 1.0;
      for (int j = 0; j < 4; ++j) {
        Eigen::MatrixXd minor(3, 3);
        for (int r = 1; r < 4; ++r) {
          int cc = 0;
          for (int c = 0; c < 4; ++c) {
            if (c == j) continue;
            minor(r - 1, cc++) = m(r, c);
          }
        }
        det += sign * m(0, j) * det3(minor);
        sign = -sign;
      }
      return det;
    }
  }
}

Rational rational_minor(const RationalMatrix& m, const std::vector<int>& rows) {
  RationalMatrix sub(rows.size(), std::vector<Rational>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows.size(); ++j) {
      sub[i][j] = m[rows[i]][rows[j]];
    }
  }
  return rational_det(sub);
}

}  // namespace

SymMat::SymMat(int order) : n_(order) {
  if (order < 2 || order > 4) {
    throw std::invalid_argument("SymMat order must be 2, 3 or 4");
  }
}

int SymMat::idx(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_) throw std::out_of_range("SymMat index");
  return j * (j + 1) / 2 + i;
}

Eigen::MatrixXd SymMat::dense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      m(i, j) = (*this)(i, j);
    }
  }
  return m;
}

Eigen::VectorXd SymMat::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double SymMat::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      m = std::max(m, std::abs((*this)(i, j)));
    }
  }
  return m;
}

std::vector<double> sylvester_signs(const SymMat& m) {
  const Eigen::MatrixXd d = m.dense();
  std::vector<double> minors(m.order());
  for (int k = 1; k <= m.order(); ++k) {
    minors[k - 1] = leading_det(d, k);
  }
  return minors;
}

DefinitenessReport check_semidefinite(const SymMat& m, Definiteness kind, double eig_tol,
                                      double zero_tol) {
  DefinitenessReport report;
  const Eigen::VectorXd eigs = m.eigenvalues();
  report.extreme_eig =
      (kind == Definiteness::kNegativeSemi) ? eigs(m.order() - 1) : -eigs(0);
  report.eig_ok = report.extreme_eig <= eig_tol;

  const std::vector<double> minors = sylvester_signs(m);
  const Eigen::MatrixXd d = m.dense();
  bool signs_ok = true;
  double block_scale = 1.0;
  for (int k = 1; k <= m.order(); ++k) {
    // Row scale of the k-th leading block; minors grow like products of rows.
    double row = 0.0;
    for (int j = 0; j < k; ++j) row = std::max(row, std::abs(d(k - 1, j)));
    block_scale *= std::max(row, 1e-30);
    const double mk = minors[k - 1];
    if (std::abs(mk) <= zero_tol * block_scale) {
      report.used_eig_fallback = true;  // sign of a vanishing minor is noise
      break;
    }
    const bool want_negative =
        (kind == Definiteness::kNegativeSemi) ? (k % 2 == 1) : false;
    if (want_negative ? (mk > 0.0) : (mk < 0.0)) {
      signs_ok = false;
      break;
    }
  }
  report.sylvester_ok = report.used_eig_fallback ? report.eig_ok : signs_ok;
  return report;
}

std::string to_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    s += "/" + std::to_string(r.denominator());
  }
  return s;
}

Rational rational_det(const RationalMatrix& m) {
  const size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Rational det(0);
  int sign = 1;
  for (size_t j = 0; j < n; ++j) {
    RationalMatrix sub(n - 1, std::vector<Rational>(n - 1));
    for (size_t r = 1; r < n; ++r) {
      size_t cc = 0;
      for (size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        sub[r - 1][cc++] = m[r][c];
      }
    }
    det += Rational(sign) * m[0][j] * rational_det(sub);
    sign = -sign;
  }
  return det;
}

ExactCertificate certify_negative_semidefinite(std::string name, const RationalMatrix& m) {
  const int n = static_cast<int>(m.size());
  ExactCertificate cert;
  cert.matrix_name = std::move(name);

  bool any_zero = false;
  bool alternating = true;
  for (int k = 1; k <= n; ++k) {
    RationalMatrix sub(k, std::vector<Rational>(k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) sub[i][j] = m[i][j];
    }
    const Rational mk = rational_det(sub);
    cert.leading_minors.push_back(mk);
    if (mk == Rational(0)) {
      any_zero = true;
    } else if ((k % 2 == 1) ? (mk > Rational(0)) : (mk < Rational(0))) {
      alternating = false;
    }
  }

  if (!any_zero) {
    cert.negative_semidefinite = alternating;
    return cert;
  }
  // Zero leading minor: decide with all principal minors of -M, which must be
  // nonnegative for -M positive semidefinite.
  bool ok = true;
  for (int mask = 1; mask < (1 << n) && ok; ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) rows.push_back(i);
    }
    Rational minor = rational_minor(m, rows);
    if (rows.size() % 2 == 1) minor = -minor;  // principal minor of -M
    ok = minor >= Rational(0);
  }
  cert.negative_semidefinite = ok;
  return cert;
}

RationalMatrix d2_lambda_matrix(const Rational& lambda, int eps) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +-1");
  const Rational one(1);
  const Rational a11 = Rational(2) * lambda - Rational(100) + Rational(1, 20);
  const Rational a12 = (one + lambda) / Rational(4) + Rational(eps, 40);
  const Rational a13 = Rational(-3, 4) * (one + lambda) + Rational(100);
  const Rational a22(-3, 16);
  const Rational a23(-3, 16);
  const Rational a33 = Rational(21, 16) - Rational(100);
  return {{a11, a12, a13}, {a12, a22, a23}, {a13, a23, a33}};
}

Eigen::Matrix3d d2_lambda_matrix_num(double lambda, int eps) {
  Eigen::Matrix3d m;
  const double a12 = (1.0 + lambda) / 4.0 + eps / 40.0;
  const double a13 = -0.75 * (1.0 + lambda) + 100.0;
  m << 2.0 * lambda - 100.0 + 0.05, a12, a13,
       a12, -3.0 / 16.0, -3.0 / 16.0,
       a13, -3.0 / 16.0, 21.0 / 16.0 - 100.0;
  return m;
}

RationalMatrix a5_matrix() {
  const Rational b(3, 4);
  const Rational bb1 = b * (b - Rational(1));   // -3/16
  const Rational bp1 = b * (b + Rational(1));   // 21/16
  const Rational off = Rational(2) * (Rational(1) - b);  // 1/2
  return {{Rational(2), off, Rational(-2) * b},
          {off, bb1, bb1},
          {Rational(-2) * b, bb1, bp1}};
}

RationalMatrix d3_difference_matrix(int eps) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +-1");
  RationalMatrix m = a5_matrix();
  m[0][0] -= Rational(192, 16);
  m[0][1] -= Rational(2 * eps, 16);
  m[1][0] -= Rational(2 * eps, 16);
  m[2][2] -= Rational(46, 16);
  return m;
}

std::string ExactCertificate::summary() const {
  std::string s = matrix_name + ": minors [";
  for (size_t i = 0; i < leading_minors.size(); ++i) {
    if (i) s += ", ";
    s += to_string(leading_minors[i]);
  }
  s += negative_semidefinite ? "] nonpositive-definite" : "] NOT nonpositive-definite";
  return s;
}

}  // namespace bellman
